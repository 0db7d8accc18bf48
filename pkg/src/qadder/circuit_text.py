"""Plain-text circuit files (``.qc``).

::

    # basis adder
    QUBITS 3
    CNOT 1 2
    CH 2 3
    CCNOT 2 !3 1
    U3(pi, -pi/2, pi/2) 1

``QUBITS <n>`` comes first. Operands are one-based unless an ``INDEXING 0``
line follows the header. Controls are listed before targets and a ``!``
prefix marks a negated control. Angles are decimal radians or multiples of
``pi`` such as ``pi``, ``-pi/2`` and ``3*pi/8``.
"""

from __future__ import annotations

import math
import re
from pathlib import Path

from .gates import GATE_SPECS, Circuit, Gate
from .sim import MAX_QUBITS

_ALIASES = {"CX": "CNOT", "TOFFOLI": "CCNOT", "ID": "I"}
_NUMBER = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?"
_ANGLE = re.compile(
    rf"^(?P<sign>[-+]?)\s*(?:(?P<coef>{_NUMBER})\s*\*?\s*)?(?P<pi>pi)?\s*(?:/\s*(?P<den>\d+))?$",
    re.IGNORECASE,
)
_STATEMENT = re.compile(r"^(?P<name>[A-Za-z][A-Za-z0-9_]*)(?:\s*\((?P<params>[^()]*)\))?(?P<rest>.*)$")


class CircuitSyntaxError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line, self.column, self.message = line, column, message
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class SerializationError(ValueError):
    pass


def parse_angle(text: str) -> float:
    """Decimal radians or a ``pi`` multiple; raises ``ValueError`` otherwise."""
    m = _ANGLE.match(text.strip())
    if not m or not (m["coef"] or m["pi"]):
        raise ValueError(f"bad angle {text!r}")
    if m["den"] and not m["pi"] and not m["coef"]:
        raise ValueError(f"bad angle {text!r}")
    value = float(m["coef"]) if m["coef"] else 1.0
    if m["pi"]:
        value *= math.pi
    if m["den"]:
        den = int(m["den"])
        if den == 0:
            raise ValueError("division by zero in angle")
        value /= den
    if not math.isfinite(value):
        raise ValueError(f"angle {text!r} is not finite")
    return -value if m["sign"] == "-" else value


def parse(text: str | bytes) -> Circuit:
    """Parse a circuit file. Every failure is a :class:`CircuitSyntaxError`."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise CircuitSyntaxError(f"not UTF-8: {e.reason}") from None
    n_qubits = None
    base = 1
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.replace("\r\n", "\n").replace("\r", "\n").split("\n"), 1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.lstrip()
        if not stripped:
            continue
        col = len(line) - len(stripped) + 1
        words = stripped.split()
        head = words[0].upper()
        if head == "QUBITS":
            if n_qubits is not None:
                raise CircuitSyntaxError("duplicate QUBITS header", lineno, col)
            if len(words) != 2 or not (words[1].isascii() and words[1].isdigit()):
                raise CircuitSyntaxError("expected 'QUBITS <n>'", lineno, col)
            n_qubits = int(words[1])
            if not 1 <= n_qubits <= MAX_QUBITS:
                raise CircuitSyntaxError(f"qubit count must be in [1, {MAX_QUBITS}]", lineno, col)
            continue
        if n_qubits is None:
            raise CircuitSyntaxError("file must start with 'QUBITS <n>'", lineno, col)
        if head == "INDEXING":
            if gates:
                raise CircuitSyntaxError("INDEXING must precede all gates", lineno, col)
            if len(words) != 2 or words[1] not in ("0", "1"):
                raise CircuitSyntaxError("expected 'INDEXING 0' or 'INDEXING 1'", lineno, col)
            base = int(words[1])
            continue
        gates.append(_parse_statement(stripped, lineno, col, n_qubits, base))
    if n_qubits is None:
        raise CircuitSyntaxError("missing 'QUBITS <n>' header")
    return Circuit(n_qubits, gates)


def _parse_statement(stmt: str, lineno: int, col: int, n: int, base: int) -> Gate:
    m = _STATEMENT.match(stmt)
    if not m:
        raise CircuitSyntaxError(f"cannot parse statement {stmt!r}", lineno, col)
    name = m["name"].upper()
    name = _ALIASES.get(name, name)
    spec = GATE_SPECS.get(name)
    if spec is None:
        raise CircuitSyntaxError(f"unknown gate {m['name']!r}", lineno, col)
    params = []
    if m["params"] is not None:
        pcol = col + stmt.index("(") + 1
        for piece in m["params"].split(","):
            try:
                params.append(parse_angle(piece))
            except ValueError as e:
                raise CircuitSyntaxError(str(e), lineno, pcol) from None
            pcol += len(piece) + 1
    if len(params) != spec.n_params:
        raise CircuitSyntaxError(f"{name} takes {spec.n_params} angle(s), got {len(params)}",
                                 lineno, col)
    rest = m["rest"]
    if rest and not rest[0].isspace():
        raise CircuitSyntaxError(f"unexpected {rest[0]!r} after gate name", lineno,
                                 col + len(stmt) - len(rest))
    tokens = [(t.start(), t.group()) for t in re.finditer(r"\S+", rest)]
    arity = spec.n_controls + spec.n_targets
    if len(tokens) != arity:
        raise CircuitSyntaxError(f"{name} takes {arity} operand(s), got {len(tokens)}", lineno, col)
    qubits, negated = [], []
    offset = col + len(stmt) - len(rest)
    for i, (pos, tok) in enumerate(tokens):
        tcol = offset + pos
        neg = tok.startswith("!")
        digits = tok[1:] if neg else tok
        if not digits.isdigit() or not digits.isascii():
            raise CircuitSyntaxError(f"bad operand {tok!r}", lineno, tcol)
        if neg and i >= spec.n_controls:
            raise CircuitSyntaxError("only controls may be negated", lineno, tcol)
        q = int(digits) - base
        if not 0 <= q < n:
            raise CircuitSyntaxError(f"qubit {digits} outside the declared {n} qubit(s)", lineno, tcol)
        if q in qubits:
            raise CircuitSyntaxError(f"duplicate operand {digits}", lineno, tcol)
        qubits.append(q)
        negated.append(neg)
    k = spec.n_controls
    return Gate(name, tuple(qubits[k:]), tuple(qubits[:k]), tuple(params), tuple(negated[:k]))


def _fmt_angle(x: float) -> str:
    return format(x, ".12g")


def serialize(c: Circuit, comments: list[str] | None = None) -> str:
    """Canonical text: one-based operands, angles to 12 significant digits.

    ``comments`` become leading ``#`` lines.
    """
    lines = [f"# {line}" if line else "#" for line in (comments or [])]
    lines.append(f"QUBITS {c.n_qubits}")
    for g in c.gates:
        if g.name not in GATE_SPECS:
            raise SerializationError(f"gate {g.name!r} has no text form")
        head = g.name
        if g.params:
            head += "(" + ", ".join(_fmt_angle(p) for p in g.params) + ")"
        ops = [("!" if neg else "") + str(q + 1) for q, neg in zip(g.controls, g.negated)]
        ops += [str(q + 1) for q in g.targets]
        lines.append(" ".join([head] + ops))
    return "\n".join(lines) + "\n"


def structurally_equal(a: Circuit, b: Circuit, atol: float = 1e-10) -> bool:
    """Same qubit count, gate names, operands and polarities; angles within ``atol``."""
    if a.n_qubits != b.n_qubits or len(a.gates) != len(b.gates):
        return False
    for g, h in zip(a.gates, b.gates):
        if (g.name, g.targets, g.controls, g.negated) != (h.name, h.targets, h.controls, h.negated):
            return False
        if len(g.params) != len(h.params):
            return False
        if any(abs(x - y) > atol * max(1.0, abs(x)) for x, y in zip(g.params, h.params)):
            return False
    return True


def load(path: str | Path) -> Circuit:
    return parse(Path(path).read_bytes())
