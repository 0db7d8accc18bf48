"""Gate matrices, gate applications and circuits.

Qubit indices are zero-based in the Python API. Qubit 0 is the most
significant bit of a basis index, so ``|b0 b1 b2>`` is index ``4*b0 + 2*b1 + b2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

UNITARY_ATOL = 1e-10

_SQ2 = 1 / np.sqrt(2)


class UnitarityError(ValueError):
    """A matrix that should be unitary is not."""


class UnknownGateError(ValueError):
    pass


def is_unitary(u: np.ndarray, atol: float = UNITARY_ATOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=atol, rtol=0))


def u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (lam + phi)) * c],
        ],
        dtype=complex,
    )


def u1(theta: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * theta)]).astype(complex)


def rotation(axis: str, theta: float) -> np.ndarray:
    """Rotation expressed through U3/U1.

    ``rotation("z", t)`` is ``u1(t)``, which differs from the textbook
    ``exp(-i t Z / 2)`` by the global phase ``exp(i t / 2)``.
    """
    axis = axis.lower()
    if axis == "x":
        return u3(theta, -np.pi / 2, np.pi / 2)
    if axis == "y":
        return u3(theta, 0.0, 0.0)
    if axis == "z":
        return u1(theta)
    raise ValueError(f"unknown rotation axis {axis!r}")


def controlled(u: np.ndarray, negated: bool = False) -> np.ndarray:
    """Two-qubit controlled-``u``, control on the first (most significant) qubit.

    A negated control fires on ``|0>``: the result is ``u (+) I`` instead of
    ``I (+) u``.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise UnitarityError("controlled() needs a unitary matrix")
    return multi_controlled(u, (negated,))


def multi_controlled(u: np.ndarray, negated: Sequence[bool]) -> np.ndarray:
    """Embed ``u`` under ``len(negated)`` controls placed before its qubits."""
    u = np.asarray(u, dtype=complex)
    k = len(negated)
    d = u.shape[0]
    out = np.eye(d << k, dtype=complex)
    # the active block is where every control matches its polarity
    block = 0
    for bit in negated:
        block = (block << 1) | (0 if bit else 1)
    out[block * d:(block + 1) * d, block * d:(block + 1) * d] = u
    return out


_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.diag([1, -1]).astype(complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) * _SQ2
_S = np.diag([1, 1j]).astype(complex)
_T = np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex)
_I = np.eye(2, dtype=complex)
_SWAP = np.eye(4, dtype=complex)[[0, 2, 1, 3]]

_NAMED = {
    "I": _I,
    "X": _X,
    "Y": _Y,
    "Z": _Z,
    "H": _H,
    "S": _S,
    "SDG": _S.conj().T,
    "T": _T,
    "TDG": _T.conj().T,
    "CNOT": multi_controlled(_X, (False,)),
    "CZ": multi_controlled(_Z, (False,)),
    "CH": multi_controlled(_H, (False,)),
    "CCNOT": multi_controlled(_X, (False, False)),
    "SWAP": _SWAP,
}
_ALIASES = {"CX": "CNOT", "TOFFOLI": "CCNOT", "S†": "SDG", "T†": "TDG", "ID": "I"}


def named_gate(name: str) -> np.ndarray:
    key = name.upper()
    key = _ALIASES.get(key, key)
    try:
        return _NAMED[key].copy()
    except KeyError:
        raise UnknownGateError(f"unknown gate {name!r}") from None


@dataclass(frozen=True)
class GateSpec:
    n_controls: int
    n_targets: int
    n_params: int


# Base (uncontrolled) action is looked up by ``base_matrix``.
GATE_SPECS: dict[str, GateSpec] = {
    "I": GateSpec(0, 1, 0),
    "X": GateSpec(0, 1, 0),
    "Y": GateSpec(0, 1, 0),
    "Z": GateSpec(0, 1, 0),
    "H": GateSpec(0, 1, 0),
    "S": GateSpec(0, 1, 0),
    "SDG": GateSpec(0, 1, 0),
    "T": GateSpec(0, 1, 0),
    "TDG": GateSpec(0, 1, 0),
    "RX": GateSpec(0, 1, 1),
    "RY": GateSpec(0, 1, 1),
    "RZ": GateSpec(0, 1, 1),
    "U1": GateSpec(0, 1, 1),
    "U3": GateSpec(0, 1, 3),
    "CNOT": GateSpec(1, 1, 0),
    "CZ": GateSpec(1, 1, 0),
    "CH": GateSpec(1, 1, 0),
    "CU1": GateSpec(1, 1, 1),
    "CCNOT": GateSpec(2, 1, 0),
    "SWAP": GateSpec(0, 2, 0),
}

_ADJOINT_NAMES = {"S": "SDG", "SDG": "S", "T": "TDG", "TDG": "T"}


def base_matrix(name: str, params: Sequence[float] = ()) -> np.ndarray:
    """Matrix acting on the target qubits once all controls are satisfied."""
    if name in ("RX", "RY", "RZ"):
        return rotation(name[1], params[0])
    if name in ("U1", "CU1"):
        return u1(params[0])
    if name == "U3":
        return u3(*params)
    if name in ("CNOT", "CCNOT"):
        return _X
    if name == "CZ":
        return _Z
    if name == "CH":
        return _H
    if name in _NAMED:
        return _NAMED[name]
    raise UnknownGateError(f"unknown gate {name!r}")


@dataclass(frozen=True)
class Gate:
    """One gate application.

    ``negated`` flags run parallel to ``controls``; a negated control fires on
    ``|0>``. Gates named ``MATRIX`` carry an explicit unitary in ``matrix``
    and are not serializable.
    """

    name: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    params: tuple[float, ...] = ()
    negated: tuple[bool, ...] = ()
    matrix: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        name = self.name.upper()
        name = _ALIASES.get(name, name)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))
        object.__setattr__(self, "controls", tuple(int(q) for q in self.controls))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        neg = tuple(bool(b) for b in self.negated) or (False,) * len(self.controls)
        object.__setattr__(self, "negated", neg)
        if len(neg) != len(self.controls):
            raise ValueError("negated flags must match controls")
        qubits = self.qubits
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"{name}: duplicate operand in {qubits}")
        if any(q < 0 for q in qubits):
            raise IndexError(f"{name}: negative qubit index")
        if name == "MATRIX":
            if self.matrix is None:
                raise ValueError("MATRIX gate needs a matrix")
            m = np.asarray(self.matrix, dtype=complex)
            if m.shape != (2 ** len(self.targets),) * 2:
                raise ValueError("MATRIX gate dimension does not match targets")
            if not is_unitary(m):
                raise UnitarityError("MATRIX gate is not unitary")
            m.setflags(write=False)
            object.__setattr__(self, "matrix", m)
            return
        spec = GATE_SPECS.get(name)
        if spec is None:
            raise UnknownGateError(f"unknown gate {self.name!r}")
        if len(self.controls) != spec.n_controls or len(self.targets) != spec.n_targets:
            raise ValueError(
                f"{name} takes {spec.n_controls} control(s) and {spec.n_targets} target(s)"
            )
        if len(self.params) != spec.n_params:
            raise ValueError(f"{name} takes {spec.n_params} parameter(s)")

    def __eq__(self, other):
        if not isinstance(other, Gate):
            return NotImplemented
        same = (self.name, self.targets, self.controls, self.params, self.negated) == (
            other.name, other.targets, other.controls, other.params, other.negated)
        if same and self.name == "MATRIX":
            return bool(np.array_equal(self.matrix, other.matrix))
        return same

    def __hash__(self):
        return hash((self.name, self.targets, self.controls, self.params, self.negated))

    @property
    def qubits(self) -> tuple[int, ...]:
        """Controls followed by targets; the order used by :meth:`to_matrix`."""
        return self.controls + self.targets

    def to_matrix(self) -> np.ndarray:
        if self.name == "MATRIX":
            return np.array(self.matrix)
        u = base_matrix(self.name, self.params)
        if not self.controls:
            return u.copy()
        return multi_controlled(u, self.negated)

    def adjoint(self) -> Gate:
        n = self.name
        if n == "MATRIX":
            return Gate("MATRIX", self.targets, matrix=self.matrix.conj().T)
        if n in _ADJOINT_NAMES:
            return Gate(_ADJOINT_NAMES[n], self.targets, self.controls, (), self.negated)
        if n in ("RX", "RY", "RZ", "U1", "CU1"):
            return Gate(n, self.targets, self.controls, (-self.params[0],), self.negated)
        if n == "U3":
            theta, phi, lam = self.params
            return Gate(n, self.targets, (), (-theta, -lam, -phi))
        return self


@dataclass(frozen=True)
class Circuit:
    """Gates in execution order: ``gates[0]`` acts first."""

    n_qubits: int
    gates: tuple[Gate, ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("a circuit needs at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.qubits) >= self.n_qubits:
                raise IndexError(f"{g.name} on {g.qubits} exceeds {self.n_qubits} qubits")

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def then(self, other: Circuit | Sequence[Gate], name: str | None = None) -> Circuit:
        """This circuit followed by ``other``."""
        extra = other.gates if isinstance(other, Circuit) else tuple(other)
        return Circuit(self.n_qubits, self.gates + extra, self.name if name is None else name)


def dagger_circuit(c: Circuit) -> Circuit:
    """Reverse the gate order and take each gate's adjoint."""
    return Circuit(c.n_qubits, tuple(g.adjoint() for g in reversed(c.gates)), c.name)
