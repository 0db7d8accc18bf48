"""Dense state-vector and density-matrix simulation.

States are plain complex numpy arrays: a state vector has length ``2**n``
and a density matrix has shape ``(2**n, 2**n)``. Distributions are dicts
from bitstring labels to probabilities; shot histograms are dicts from
labels to integer counts.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from .gates import Circuit, Gate, UnitarityError, is_unitary

MAX_QUBITS = 12
NORM_ATOL = 1e-10

Distribution = dict[str, float]
ShotHistogram = dict[str, int]


class SizeError(ValueError):
    """Qubit count, register size or dimension is out of range."""


class CompletenessError(ValueError):
    """Kraus operators do not sum to the identity."""


def n_qubits_of(state: np.ndarray) -> int:
    dim = state.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise SizeError(f"dimension {dim} is not a power of two")
    return n


def zero_state(n_qubits: int) -> np.ndarray:
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise SizeError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
    psi = np.zeros(1 << n_qubits, dtype=complex)
    psi[0] = 1.0
    return psi


def basis_state(bits: str | Sequence[int]) -> np.ndarray:
    """Computational basis state from a bitstring such as ``"110"``."""
    bits = [int(b) for b in bits]
    psi = zero_state(len(bits))
    psi[0] = 0.0
    psi[int("".join(map(str, bits)), 2)] = 1.0
    return psi


def product_state(angles: Sequence[float]) -> np.ndarray:
    """Tensor product of ``(cos t, sin t)`` single-qubit states, first angle on qubit 0."""
    if len(angles) == 0:
        raise SizeError("product_state needs at least one angle")
    if len(angles) > MAX_QUBITS:
        raise SizeError(f"at most {MAX_QUBITS} qubits")
    psi = np.ones(1, dtype=complex)
    for t in angles:
        psi = np.kron(psi, np.array([np.cos(t), np.sin(t)], dtype=complex))
    return psi


def _check_targets(targets: Sequence[int], n: int) -> tuple[int, ...]:
    targets = tuple(int(t) for t in targets)
    if len(set(targets)) != len(targets):
        raise IndexError(f"duplicate target qubits {targets}")
    if any(t < 0 or t >= n for t in targets):
        raise IndexError(f"targets {targets} out of range for {n} qubits")
    return targets


def _apply(state: np.ndarray, u: np.ndarray, targets: Sequence[int], n: int) -> np.ndarray:
    # state may carry trailing batch axes beyond the first n
    k = len(targets)
    extra = state.ndim - 1
    psi = state.reshape((2,) * n + state.shape[1:])
    ut = u.reshape((2,) * (2 * k))
    psi = np.tensordot(ut, psi, axes=(list(range(k, 2 * k)), list(targets)))
    psi = np.moveaxis(psi, list(range(k)), list(targets))
    return psi.reshape((1 << n,) + state.shape[1:]) if extra else psi.reshape(-1)


def apply_gate(state: np.ndarray, unitary: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """Apply ``unitary`` to ``targets``; the first target is the most significant."""
    state = np.asarray(state, dtype=complex)
    n = n_qubits_of(state)
    targets = _check_targets(targets, n)
    unitary = np.asarray(unitary, dtype=complex)
    if unitary.shape != (1 << len(targets),) * 2:
        raise SizeError(f"unitary shape {unitary.shape} does not fit {len(targets)} target(s)")
    if not is_unitary(unitary):
        raise UnitarityError("apply_gate needs a unitary matrix")
    return _apply(state, unitary, targets, n)


def apply_gates(state: np.ndarray, gates: Iterable[Gate], n: int) -> np.ndarray:
    """Apply library gates without re-validating them.

    ``state`` may be a batch of shape ``(2**n, m)``.
    """
    for g in gates:
        state = _apply(state, g.to_matrix(), g.qubits, n)
    return state


def run_circuit(circuit: Circuit, state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if n_qubits_of(state) != circuit.n_qubits:
        raise SizeError(
            f"circuit has {circuit.n_qubits} qubits, state has {n_qubits_of(state)}")
    return apply_gates(state, circuit.gates, circuit.n_qubits)


def to_density(state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    return np.outer(state, state.conj())


def apply_unitary_density(rho: np.ndarray, u: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """``U rho U^dagger`` with ``U`` embedded on ``targets``."""
    n = n_qubits_of(rho)
    # rows transform like a batch of kets, columns like bras
    out = _apply(rho, u, targets, n)
    out = _apply(out.conj().T, u, targets, n).conj().T
    return out


def evolve_density(circuit: Circuit, rho: np.ndarray) -> np.ndarray:
    """Noiseless density-matrix evolution through ``circuit``."""
    rho = np.asarray(rho, dtype=complex)
    if n_qubits_of(rho) != circuit.n_qubits:
        raise SizeError("circuit and density matrix sizes differ")
    for g in circuit.gates:
        rho = apply_unitary_density(rho, g.to_matrix(), g.qubits)
    return rho


def check_completeness(operators: Sequence[np.ndarray], atol: float = NORM_ATOL) -> None:
    ops = [np.asarray(k, dtype=complex) for k in operators]
    if not ops:
        raise CompletenessError("empty Kraus set")
    total = sum(k.conj().T @ k for k in ops)
    if not np.allclose(total, np.eye(ops[0].shape[0]), atol=atol, rtol=0):
        raise CompletenessError("Kraus operators do not satisfy sum K^dag K = I")


def apply_channel(rho: np.ndarray, channel, targets: Sequence[int]) -> np.ndarray:
    """``sum_k K_k rho K_k^dagger`` with the Kraus operators embedded on ``targets``.

    ``channel`` is a :class:`qadder.noise.KrausChannel` or any sequence of
    Kraus matrices.
    """
    ops = getattr(channel, "operators", channel)
    check_completeness(ops)
    rho = np.asarray(rho, dtype=complex)
    n = n_qubits_of(rho)
    targets = _check_targets(targets, n)
    out = np.zeros_like(rho)
    for k in ops:
        out += apply_unitary_density(rho, np.asarray(k, dtype=complex), targets)
    return out


def partial_trace(rho: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix on ``keep``, in the listed qubit order."""
    rho = np.asarray(rho, dtype=complex)
    n = n_qubits_of(rho)
    if len(keep) == 0:
        raise SizeError("keep must name at least one qubit")
    keep = _check_targets(keep, n)
    traced = [q for q in range(n) if q not in keep]
    t = rho.reshape((2,) * (2 * n))
    perm = list(keep) + traced + [n + q for q in keep] + [n + q for q in traced]
    t = t.transpose(perm)
    dk, dt = 1 << len(keep), 1 << len(traced)
    t = t.reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def _label(i: int, width: int) -> str:
    return format(i, f"0{width}b")


def measurement_distribution(state: np.ndarray, qubits: Sequence[int]) -> Distribution:
    """Marginal computational-basis probabilities of ``qubits``.

    Accepts a state vector or a density matrix. Labels list bits in the
    order of ``qubits``.
    """
    state = np.asarray(state, dtype=complex)
    n = n_qubits_of(state)
    qubits = _check_targets(qubits, n)
    if state.ndim == 1:
        probs = np.abs(state) ** 2
    else:
        probs = np.real(np.diag(state)).clip(min=0.0)
    probs = probs.reshape((2,) * n)
    others = tuple(q for q in range(n) if q not in qubits)
    marg = probs.sum(axis=others) if others else probs
    # sum keeps the remaining axes in increasing qubit order
    order = sorted(qubits)
    marg = np.transpose(marg, [order.index(q) for q in qubits]).reshape(-1)
    marg = marg / marg.sum()
    return {_label(i, len(qubits)): float(p) for i, p in enumerate(marg)}


def sample_shots(dist: Mapping[str, float], shots: int,
                 seed: int | np.random.Generator | None = None) -> ShotHistogram:
    """Multinomial sample of ``shots`` outcomes. Deterministic for a fixed seed."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    labels = list(dist)
    p = np.array([dist[k] for k in labels], dtype=float)
    p = p.clip(min=0.0)
    p = p / p.sum()
    counts = rng.multinomial(shots, p)
    return {k: int(c) for k, c in zip(labels, counts)}
