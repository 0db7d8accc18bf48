import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import H, I2, X, Z, circuit_matrix_oracle, random_state
from strategies import angles, circuits, gates
from qadder.gates import (
    GATE_SPECS,
    Circuit,
    Gate,
    UnknownGateError,
    controlled,
    dagger_circuit,
    is_unitary,
    named_gate,
    rotation,
    u1,
    u3,
)


def test_u3_identity_and_phase_family():
    assert np.allclose(u3(0, 0, 0), np.eye(2))
    t = 0.37
    assert np.allclose(u3(0, 0, t), np.diag([1, np.exp(1j * t)]))


def test_u3_rx_pi_substitution():
    # c = cos(pi/2) = 0, s = 1: [[0, -e^{i pi/2}], [e^{-i pi/2}, 0]]
    expected = np.array([[0, -1j], [-1j, 0]])
    assert np.allclose(u3(math.pi, -math.pi / 2, math.pi / 2), expected, atol=1e-15)
    assert np.allclose(rotation("x", math.pi), -1j * X)


def test_u1_named_phases():
    assert np.allclose(u1(math.pi), Z)
    assert np.allclose(u1(math.pi / 2), named_gate("S"))
    t = u1(math.pi / 4)
    assert np.allclose(t, named_gate("T"))
    assert np.allclose(t @ t, named_gate("S"))


def test_rotations():
    assert np.allclose(rotation("y", math.pi), [[0, -1], [1, 0]], atol=1e-15)
    assert np.allclose(rotation("z", 0.8) @ rotation("z", -0.8), np.eye(2))
    assert np.allclose(rotation("x", 0), np.eye(2))
    with pytest.raises(ValueError):
        rotation("w", 0.1)


def test_named_two_qubit_gates():
    assert np.allclose(named_gate("CZ"), np.diag([1, 1, 1, -1]))
    cnot = named_gate("CNOT")
    swap_from_cnots = cnot @ (np.kron(H, H) @ cnot @ np.kron(H, H)) @ cnot
    # CNOT(2,1) written as H-conjugated CNOT(1,2)
    assert np.allclose(swap_from_cnots, named_gate("SWAP"))
    assert np.allclose(named_gate("H") @ named_gate("H"), np.eye(2))
    assert np.allclose(named_gate("cx"), cnot)
    with pytest.raises(UnknownGateError):
        named_gate("FOO")


def test_controlled_constructions():
    assert np.allclose(controlled(X), named_gate("CNOT"))
    assert np.allclose(controlled(u1(math.pi)), named_gate("CZ"))
    xi = np.kron(X, I2)
    assert np.allclose(controlled(X, negated=True), xi @ named_gate("CNOT") @ xi)


def test_toffoli_matrix():
    m = named_gate("CCNOT")
    perm = np.eye(8)[[0, 1, 2, 3, 4, 5, 7, 6]]
    assert np.allclose(m, perm)


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("CNOT", (1,), (1,))
    with pytest.raises(ValueError):
        Gate("RX", (0,))
    with pytest.raises(UnknownGateError):
        Gate("FOO", (0,))
    with pytest.raises(ValueError):
        Gate("MATRIX", (0,), matrix=np.ones((2, 2)))
    with pytest.raises(IndexError):
        Circuit(2, [Gate("X", (2,))])


def test_dagger_examples():
    h = Circuit(1, [Gate("H", (0,))])
    assert dagger_circuit(h).gates == h.gates
    c = Circuit(1, [Gate("U1", (0,), params=(math.pi / 4,))])
    assert dagger_circuit(c).gates == (Gate("U1", (0,), params=(-math.pi / 4,)),)


def test_dagger_identity_on_random_states(rng):
    c = Circuit(3, [Gate("H", (0,)), Gate("CH", (2,), (0,)), Gate("T", (1,)),
                    Gate("CCNOT", (0,), (1, 2), negated=(True, False)),
                    Gate("U3", (2,), params=(0.3, 1.1, -0.4))])
    m = circuit_matrix_oracle(c.then(dagger_circuit(c)))
    for _ in range(100):
        psi = random_state(rng, 3)
        assert abs(np.vdot(psi, m @ psi)) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=500)
@given(gates(3))
def test_every_gate_is_unitary(g):
    assert is_unitary(g.to_matrix(), atol=1e-10)


@settings(max_examples=500)
@given(angles, angles, angles)
def test_u3_unitary_and_adjoint(theta, phi, lam):
    m = u3(theta, phi, lam)
    assert is_unitary(m, atol=1e-10)
    adj = Gate("U3", (0,), params=(theta, phi, lam)).adjoint().to_matrix()
    assert np.allclose(adj, m.conj().T, atol=1e-12)


@settings(max_examples=500)
@given(circuits(max_gates=8, max_qubits=4))
def test_circuit_then_dagger_is_identity(c):
    m = circuit_matrix_oracle(c.then(dagger_circuit(c)))
    assert np.allclose(m, np.eye(1 << c.n_qubits), atol=1e-9)


@given(st.sampled_from(sorted(GATE_SPECS)))
def test_gate_spec_arity_consistent(name):
    spec = GATE_SPECS[name]
    g = Gate(name, tuple(range(spec.n_controls, spec.n_controls + spec.n_targets)),
             tuple(range(spec.n_controls)), (0.1,) * spec.n_params)
    assert g.to_matrix().shape == (1 << len(g.qubits),) * 2
