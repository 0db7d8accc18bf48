"""Shared oracles and hypothesis settings.

The helpers here deliberately avoid the package's own simulator code: they
build full matrices with Kronecker products and index loops so that they can
serve as independent references.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
I2 = np.eye(2, dtype=complex)


def embed(u: np.ndarray, targets, n: int) -> np.ndarray:
    """Full 2**n matrix of ``u`` on ``targets`` by explicit index bookkeeping.

    Qubit 0 is the most significant bit; the first target is the most
    significant bit of ``u``.
    """
    k = len(targets)
    dim = 1 << n
    full = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
        sub_in = 0
        for t in targets:
            sub_in = (sub_in << 1) | bits[t]
        for sub_out in range(1 << k):
            amp = u[sub_out, sub_in]
            if amp == 0:
                continue
            out = list(bits)
            for j, t in enumerate(targets):
                out[t] = (sub_out >> (k - 1 - j)) & 1
            row = int("".join(map(str, out)), 2)
            full[row, col] += amp
    return full


def partial_trace_loops(rho: np.ndarray, keep, n: int) -> np.ndarray:
    """Reduced density matrix by summing over traced-out bit assignments."""
    traced = [q for q in range(n) if q not in keep]
    dk = 1 << len(keep)
    out = np.zeros((dk, dk), dtype=complex)

    def index(kbits, tbits):
        bits = [0] * n
        for q, b in zip(keep, kbits):
            bits[q] = b
        for q, b in zip(traced, tbits):
            bits[q] = b
        return int("".join(map(str, bits)), 2)

    for a, b in itertools.product(range(dk), repeat=2):
        abits = [(a >> (len(keep) - 1 - j)) & 1 for j in range(len(keep))]
        bbits = [(b >> (len(keep) - 1 - j)) & 1 for j in range(len(keep))]
        for tbits in itertools.product((0, 1), repeat=len(traced)):
            out[a, b] += rho[index(abits, tbits), index(bbits, tbits)]
    return out


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_state(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def circuit_matrix_oracle(circuit) -> np.ndarray:
    """Circuit unitary assembled from ``embed`` (independent of the simulator)."""
    n = circuit.n_qubits
    m = np.eye(1 << n, dtype=complex)
    for g in circuit.gates:
        m = embed(g.to_matrix(), g.qubits, n) @ m
    return m


def align_phase(a: np.ndarray, b: np.ndarray) -> float:
    """Max entry deviation after aligning global phase on ``a``'s largest entry."""
    i = np.unravel_index(np.argmax(np.abs(a)), a.shape)
    phase = b[i] / a[i]
    phase /= abs(phase)
    return float(np.max(np.abs(a * phase - b)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
