"""Decompositions, lowering to the {U1, U3, CNOT} basis, and CNOT counting."""

from __future__ import annotations

import numpy as np

from .gates import Circuit, Gate, UnknownGateError
from .sim import SizeError, apply_gates

PHASE_ATOL = 1e-8
MAX_UNITARY_QUBITS = 8

# CNOTs each gate is charged under the tally used in the published tables:
# a Toffoli costs 6 and the controlled-Hadamard is free.
PUBLISHED_CNOT_COST = {"CNOT": 1, "CCNOT": 6, "CZ": 2, "CU1": 2, "SWAP": 3, "CH": 0}


def decompose_toffoli(c1: int = 0, c2: int = 1, target: int = 2, n_qubits: int = 3) -> Circuit:
    """Six-CNOT Toffoli network over {H, T, T^dagger, CNOT}; exact, no global phase."""
    a, b, t = c1, c2, target
    gates = [
        Gate("H", (t,)),
        Gate("CNOT", (t,), (b,)),
        Gate("TDG", (t,)),
        Gate("CNOT", (t,), (a,)),
        Gate("T", (t,)),
        Gate("CNOT", (t,), (b,)),
        Gate("TDG", (t,)),
        Gate("CNOT", (t,), (a,)),
        Gate("T", (b,)),
        Gate("T", (t,)),
        Gate("H", (t,)),
        Gate("CNOT", (b,), (a,)),
        Gate("T", (a,)),
        Gate("TDG", (b,)),
        Gate("CNOT", (b,), (a,)),
    ]
    return Circuit(n_qubits, gates, "toffoli")


def decompose_ch(control: int = 0, target: int = 1, n_qubits: int = 2) -> Circuit:
    # H = RY(-pi/4) X RY(pi/4), so conjugating a CNOT gives CH exactly
    gates = [
        Gate("RY", (target,), params=(np.pi / 4,)),
        Gate("CNOT", (target,), (control,)),
        Gate("RY", (target,), params=(-np.pi / 4,)),
    ]
    return Circuit(n_qubits, gates, "ch")


def decompose_cu1(theta: float, control: int = 0, target: int = 1, n_qubits: int = 2) -> Circuit:
    gates = [
        Gate("U1", (control,), params=(theta / 2,)),
        Gate("CNOT", (target,), (control,)),
        Gate("U1", (target,), params=(-theta / 2,)),
        Gate("CNOT", (target,), (control,)),
        Gate("U1", (target,), params=(theta / 2,)),
    ]
    return Circuit(n_qubits, gates, "cu1")


def _u3_params(m: np.ndarray) -> tuple[float, float, float]:
    """U3 angles reproducing a 2x2 unitary up to global phase."""
    m = np.asarray(m, dtype=complex)
    m = m / np.sqrt(np.linalg.det(m))
    theta = 2 * np.arctan2(abs(m[1, 0]), abs(m[0, 0]))
    a00 = np.angle(m[0, 0]) if abs(m[0, 0]) > 1e-12 else 0.0
    if abs(m[1, 0]) > 1e-12:
        phi = np.angle(m[1, 0]) - a00
        lam = np.angle(-m[0, 1]) - a00
    else:
        phi = 0.0
        lam = np.angle(m[1, 1]) - a00
    return float(theta), float(phi), float(lam)


_SINGLE = {
    "X": lambda q, p: [Gate("U3", (q,), params=(np.pi, 0.0, np.pi))],
    "Y": lambda q, p: [Gate("U3", (q,), params=(np.pi, np.pi / 2, np.pi / 2))],
    "H": lambda q, p: [Gate("U3", (q,), params=(np.pi / 2, 0.0, np.pi))],
    "Z": lambda q, p: [Gate("U1", (q,), params=(np.pi,))],
    "S": lambda q, p: [Gate("U1", (q,), params=(np.pi / 2,))],
    "SDG": lambda q, p: [Gate("U1", (q,), params=(-np.pi / 2,))],
    "T": lambda q, p: [Gate("U1", (q,), params=(np.pi / 4,))],
    "TDG": lambda q, p: [Gate("U1", (q,), params=(-np.pi / 4,))],
    "RX": lambda q, p: [Gate("U3", (q,), params=(p[0], -np.pi / 2, np.pi / 2))],
    "RY": lambda q, p: [Gate("U3", (q,), params=(p[0], 0.0, 0.0))],
    "RZ": lambda q, p: [Gate("U1", (q,), params=(p[0],))],
    "U1": lambda q, p: [Gate("U1", (q,), params=p)],
    "U3": lambda q, p: [Gate("U3", (q,), params=p)],
    "I": lambda q, p: [],
}


def _lower_positive(g: Gate, n: int) -> list[Gate]:
    """Lower a gate whose controls all have normal polarity."""
    name = g.name
    if name in _SINGLE:
        return _SINGLE[name](g.targets[0], g.params)
    if name == "MATRIX":
        if len(g.targets) != 1:
            raise UnknownGateError("only single-qubit MATRIX gates can be transpiled")
        return [Gate("U3", g.targets, params=_u3_params(g.matrix))]
    if name == "CNOT":
        return [g]
    if name == "SWAP":
        a, b = g.targets
        return [Gate("CNOT", (b,), (a,)), Gate("CNOT", (a,), (b,)), Gate("CNOT", (b,), (a,))]
    if name == "CZ":
        sub = decompose_cu1(np.pi, g.controls[0], g.targets[0], n)
    elif name == "CU1":
        sub = decompose_cu1(g.params[0], g.controls[0], g.targets[0], n)
    elif name == "CH":
        sub = decompose_ch(g.controls[0], g.targets[0], n)
    elif name == "CCNOT":
        sub = decompose_toffoli(g.controls[0], g.controls[1], g.targets[0], n)
    else:
        raise UnknownGateError(f"cannot transpile gate {name!r}")
    out = []
    for s in sub.gates:
        out.extend(_lower_positive(s, n))
    return out


def lower_gate(g: Gate, n: int) -> list[Gate]:
    """One gate as a {U1, U3, CNOT} sequence; negated controls become X conjugations."""
    flips = [Gate("U3", (q,), params=(np.pi, 0.0, np.pi))
             for q, neg in zip(g.controls, g.negated) if neg]
    if flips:
        g = Gate(g.name, g.targets, g.controls, g.params)
    return flips + _lower_positive(g, n) + flips


def transpile(c: Circuit) -> Circuit:
    """Rewrite ``c`` over U1, U3 and CNOT with normal-polarity controls only.

    The result equals ``c`` up to a global phase.
    """
    out: list[Gate] = []
    for g in c.gates:
        out.extend(lower_gate(g, c.n_qubits))
    return Circuit(c.n_qubits, out, c.name)


def circuit_unitary(c: Circuit) -> np.ndarray:
    if c.n_qubits > MAX_UNITARY_QUBITS:
        raise SizeError(f"unitary materialization limited to {MAX_UNITARY_QUBITS} qubits")
    dim = 1 << c.n_qubits
    # columns are the images of basis states
    return apply_gates(np.eye(dim, dtype=complex), c.gates, c.n_qubits)


def cnot_count(c: Circuit, convention: str = "published") -> int:
    """CNOTs in ``c`` under ``convention``.

    ``"published"`` charges composite gates per :data:`PUBLISHED_CNOT_COST` (Toffoli 6,
    controlled-Hadamard 0); ``"transpiled"`` counts CNOTs after :func:`transpile`.
    """
    if convention == "published":
        return sum(PUBLISHED_CNOT_COST.get(g.name, 0) for g in c.gates)
    if convention == "transpiled":
        return sum(g.name == "CNOT" for g in transpile(c).gates)
    raise ValueError(f"unknown convention {convention!r}")


def phase_aligned_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Max entrywise gap after rotating ``b`` onto ``a`` at ``a``'s largest entry."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return float("inf")
    idx = np.unravel_index(np.argmax(np.abs(a)), a.shape)
    if abs(b[idx]) < 1e-12:
        return float(np.max(np.abs(a - b)) + 1.0)
    phase = a[idx] / b[idx]
    phase /= abs(phase)
    return float(np.max(np.abs(a - phase * b)))


def equivalent_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float = PHASE_ATOL) -> bool:
    return phase_aligned_distance(a, b) < atol
