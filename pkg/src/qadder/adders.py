"""The basis adder, the encode/decode autoencoder and two-qubit gate encoding.

Qubits 0 and 1 hold the addends; qubit 2 is the ancilla that carries the sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fidelity import classical_fidelity, quantum_fidelity
from .gates import Circuit, Gate, dagger_circuit, is_unitary, named_gate
from .noise import NoiseModel, apply_readout_error, noisy_run, readout_damping
from .sim import (
    Distribution,
    apply_gate,
    basis_state,
    evolve_density,
    measurement_distribution,
    partial_trace,
    product_state,
    run_circuit,
    sample_shots,
    to_density,
)

ANCILLA = 2
DATA = (0, 1)


class DegenerateSumError(ValueError):
    """The two addends cancel, so the ideal sum is undefined."""


@dataclass(frozen=True)
class AdderSpec:
    circuit: Circuit
    label: str = ""

    def __post_init__(self):
        if self.circuit.n_qubits != 3:
            raise ValueError("an adder acts on exactly three qubits")


def as_adder(adder: AdderSpec | Circuit) -> AdderSpec:
    return adder if isinstance(adder, AdderSpec) else AdderSpec(adder, adder.name)


def basis_adder() -> AdderSpec:
    """Adds computational basis states exactly and superpositions approximately."""
    gates = [
        Gate("CNOT", (1,), (0,)),
        Gate("CH", (2,), (1,)),
        Gate("CNOT", (1,), (0,)),
        Gate("CNOT", (1,), (0,), negated=(True,)),
        Gate("CNOT", (2,), (0,), negated=(True,)),
        Gate("CCNOT", (0,), (1, 2), negated=(False, True)),
        Gate("CNOT", (2,), (0,), negated=(True,)),
        Gate("CNOT", (1,), (0,), negated=(True,)),
    ]
    return AdderSpec(Circuit(3, gates, "basis_adder"), "basis adder")


def ideal_sum(psi1: np.ndarray, psi2: np.ndarray) -> np.ndarray:
    s = np.asarray(psi1, dtype=complex) + np.asarray(psi2, dtype=complex)
    norm = np.linalg.norm(s)
    if norm < 1e-12:
        raise DegenerateSumError("the addends cancel; their sum has zero norm")
    return s / norm


def single(theta: float) -> np.ndarray:
    return np.array([np.cos(theta), np.sin(theta)], dtype=complex)


def _run_density(circuit: Circuit, rho: np.ndarray, noise: NoiseModel | None) -> np.ndarray:
    if noise is None:
        return evolve_density(circuit, rho)
    return noisy_run(circuit, noise, rho)


def adder_fidelity(adder: AdderSpec | Circuit, theta1: float, theta2: float,
                   noise: NoiseModel | None = None) -> float:
    """Overlap of the ancilla's reduced state with the normalized sum of the addends."""
    adder = as_adder(adder)
    target = ideal_sum(single(theta1), single(theta2))
    rho = to_density(product_state([theta1, theta2, 0.0]))
    rho = _run_density(adder.circuit, rho, noise)
    if noise is not None:
        rho = readout_damping(rho, noise, (ANCILLA,))
    return quantum_fidelity(partial_trace(rho, (ANCILLA,)), target)


def _middle_gate(middle) -> Gate | None:
    if middle is None or isinstance(middle, Gate):
        return middle
    if isinstance(middle, str):
        return Gate(middle, (ANCILLA,))
    return Gate("MATRIX", (ANCILLA,), matrix=np.asarray(middle, dtype=complex))


def autoencoder_circuit(adder: AdderSpec | Circuit, middle=None,
                        decoder: Circuit | None = None) -> Circuit:
    """Encode, optional ancilla gate, decode (the adder's dagger unless given)."""
    adder = as_adder(adder)
    enc = adder.circuit
    dec = dagger_circuit(enc) if decoder is None else decoder
    mid = _middle_gate(middle)
    return enc.then([mid] if mid is not None else []).then(dec, name="autoencoder")


def autoencode_roundtrip(adder: AdderSpec | Circuit, state: np.ndarray, middle=None,
                         noise: NoiseModel | None = None,
                         target: np.ndarray | None = None) -> tuple[np.ndarray, float]:
    """Run encode -> middle -> decode on a two-qubit input with the ancilla at ``|0>``.

    Returns the three-qubit output density matrix and the overlap of its
    data-qubit reduction with ``target``. The default target is the input
    itself, or controlled-``middle`` applied to it when a middle gate is given.
    """
    state = np.asarray(state, dtype=complex)
    if state.shape != (4,):
        raise ValueError("roundtrip input must be a two-qubit state vector")
    mid = _middle_gate(middle)
    if target is None:
        target = state
        if mid is not None:
            target = apply_gate(state, _controlled_block(mid.to_matrix()), DATA)
    circ = autoencoder_circuit(adder, mid)
    rho = to_density(np.kron(state, np.array([1, 0], dtype=complex)))
    rho = _run_density(circ, rho, noise)
    if noise is not None:
        rho = readout_damping(rho, noise, DATA)
    return rho, quantum_fidelity(partial_trace(rho, DATA), target)


@dataclass(frozen=True)
class GateEncodingResult:
    solvable: bool
    u_tilde: np.ndarray | None = None
    phase: complex | None = None


def _controlled_block(u: np.ndarray) -> np.ndarray:
    cu = np.eye(4, dtype=complex)
    cu[2:, 2:] = u
    return cu


def _embedded(u: np.ndarray) -> Gate:
    return Gate("MATRIX", (ANCILLA,), matrix=u)


def _check_encoding(cu: np.ndarray, u_tilde: np.ndarray, adder: AdderSpec) -> bool:
    """The four identities relating a controlled gate to its ancilla encoding."""
    enc = adder.circuit
    dec = dagger_circuit(enc)
    mid = Circuit(3, [_embedded(u_tilde)])
    for bits in ("000", "110"):
        psi = basis_state(bits)
        lhs1 = apply_gate(run_circuit(enc, psi), cu, DATA)
        rhs1 = run_circuit(enc, run_circuit(mid, psi))
        lhs2 = apply_gate(psi, cu, DATA)
        rhs2 = run_circuit(dec.then(mid).then(enc), psi)
        if not (np.allclose(lhs1, rhs1, atol=1e-9) and np.allclose(lhs2, rhs2, atol=1e-9)):
            return False
    return True


def encode_gate(u: np.ndarray, adder: AdderSpec | None = None) -> GateEncodingResult:
    """Try to replace controlled-``u`` on the data qubits by one ancilla gate.

    ``u`` is the 2x2 controlled block, or a full 4x4 two-qubit gate, which
    must have the form ``I (+) U`` to count as a controlled gate at all.
    Encoding succeeds exactly when the block is diagonal; the ancilla gate
    is then ``diag(1, a)`` with ``a = u[1, 1]``.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise ValueError("encode_gate needs a unitary matrix")
    if u.shape == (4, 4):
        if not (np.allclose(u[:2, :2], np.eye(2), atol=1e-10)
                and np.allclose(u[:2, 2:], 0, atol=1e-10)
                and np.allclose(u[2:, :2], 0, atol=1e-10)):
            return GateEncodingResult(False)
        u = u[2:, 2:]
    elif u.shape != (2, 2):
        raise ValueError("encode_gate takes a 2x2 block or a 4x4 two-qubit gate")
    if abs(u[0, 1]) > 1e-10 or abs(u[1, 0]) > 1e-10:
        return GateEncodingResult(False)
    a = complex(u[1, 1])
    u_tilde = np.diag([1.0, a])
    if not _check_encoding(_controlled_block(u), u_tilde, adder or basis_adder()):
        return GateEncodingResult(False)
    return GateEncodingResult(True, u_tilde, a)


# basis-change gates applied before a computational-basis readout
_BASIS_CHANGE = {"Z": [], "X": ["H"], "Y": ["SDG", "H"]}


def _basis_gates(basis_pair: str) -> list[Gate]:
    if len(basis_pair) != 2 or any(b not in _BASIS_CHANGE for b in basis_pair.upper()):
        raise ValueError(f"basis pair must be two of X, Y, Z; got {basis_pair!r}")
    out = []
    for q, b in zip(DATA, basis_pair.upper()):
        out.extend(Gate(name, (q,)) for name in _BASIS_CHANGE[b])
    return out


def _input_vector(inp) -> np.ndarray:
    if isinstance(inp, str):
        return basis_state(inp)
    inp = np.asarray(inp, dtype=complex)
    if inp.shape != (4,):
        raise ValueError("two-qubit input expected")
    return inp


def encoding_circuit(adder: AdderSpec | Circuit, mode: str,
                     decoder: Circuit | None = None) -> Circuit:
    """Encode, then CZ on the data qubits (``direct``) or Z on the ancilla (``encoded``), then decode."""
    if mode == "direct":
        mid = Gate("CZ", (1,), (0,))
    elif mode == "encoded":
        mid = Gate("Z", (ANCILLA,))
    else:
        raise ValueError(f"mode must be 'direct' or 'encoded', got {mode!r}")
    return autoencoder_circuit(adder, mid, decoder)


def ideal_cz_distribution(inp, basis_pair: str) -> Distribution:
    psi = apply_gate(_input_vector(inp), named_gate("CZ"), DATA)
    psi = np.kron(psi, np.array([1, 0], dtype=complex))
    for g in _basis_gates(basis_pair):
        psi = apply_gate(psi, g.to_matrix(), g.qubits)
    return measurement_distribution(psi, DATA)


def encoding_distribution(adder: AdderSpec | Circuit, mode: str, inp, basis_pair: str,
                          noise: NoiseModel | None = None, readout_flip: bool = False,
                          decoder: Circuit | None = None) -> Distribution:
    circ = encoding_circuit(adder, mode, decoder).then(_basis_gates(basis_pair))
    psi = np.kron(_input_vector(inp), np.array([1, 0], dtype=complex))
    rho = _run_density(circ, to_density(psi), noise)
    if noise is not None:
        rho = readout_damping(rho, noise, DATA)
    dist = measurement_distribution(rho, DATA)
    if noise is not None and readout_flip:
        dist = apply_readout_error(dist, noise)
    return dist


def gate_encoding_experiment(adder: AdderSpec | Circuit, mode: str, inp="11",
                             basis_pair: str = "ZZ", noise: NoiseModel | None = None,
                             shots: int | None = None, seed=None, readout_flip: bool = False,
                             decoder: Circuit | None = None) -> float:
    """Classical fidelity of the measured data register against the ideal ``CZ|inp>``.

    With ``shots`` the measured distribution is replaced by a sampled estimate.
    """
    p = ideal_cz_distribution(inp, basis_pair)
    q = encoding_distribution(adder, mode, inp, basis_pair, noise, readout_flip, decoder)
    if shots is not None:
        hist = sample_shots(q, shots, seed)
        q = {k: c / shots for k, c in hist.items()}
    return classical_fidelity(p, q)


def table_inputs() -> list[tuple[float, float]]:
    """The six addend-angle pairs used throughout the published tables."""
    h, q, e = np.pi / 2, np.pi / 4, np.pi / 8
    return [(0.0, 0.0), (h, h), (h, 0.0), (0.0, h), (q, q), (e, e)]


def pairwise_inputs(angles: Sequence[float]) -> list[tuple[float, float]]:
    return [(a, b) for a in angles for b in angles]
