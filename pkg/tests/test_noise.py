import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import embed, random_state
from strategies import circuits
from qadder.adders import basis_adder
from qadder.gates import Circuit, Gate
from qadder.noise import (
    KrausChannel,
    NoiseModel,
    advanced_fidelity,
    amplitude_damping,
    apply_readout_error,
    dephasing,
    format_noise_config,
    noisy_run,
    parse_noise_config,
    physical_gates,
    readout_damping,
)
from qadder.sim import CompletenessError, apply_channel, evolve_density, to_density

ONE = np.diag([0.0, 1.0]).astype(complex)
PLUS = np.full((2, 2), 0.5, dtype=complex)


def test_damping_examples():
    assert np.allclose(amplitude_damping(0)(ONE, 0), ONE)
    assert np.allclose(amplitude_damping(1)(ONE, 0), np.diag([1, 0]))
    # K2 rho K2^dag moves p of |1><1| to |0><0|
    assert np.allclose(amplitude_damping(0.003)(ONE, 0), np.diag([0.003, 0.997]))


def test_dephasing_examples():
    assert np.allclose(dephasing(0)(PLUS, 0), PLUS)
    assert np.allclose(dephasing(0.5)(PLUS, 0), np.eye(2) / 2)
    out = dephasing(0.003)(PLUS, 0)
    assert out[0, 1] == pytest.approx((1 - 2 * 0.003) / 2)
    assert out[0, 1] == pytest.approx(0.497)
    assert np.allclose(dephasing(0.2)(np.eye(2) / 2, 0), np.eye(2) / 2)


def test_channel_validation():
    with pytest.raises(ValueError):
        amplitude_damping(1.5)
    with pytest.raises(CompletenessError):
        KrausChannel((np.eye(2), np.eye(2)))


@settings(max_examples=500)
@given(st.floats(0, 1), st.sampled_from([amplitude_damping, dephasing]))
def test_kraus_completeness(p, make):
    ops = make(p).operators
    total = sum(k.conj().T @ k for k in ops)
    assert np.allclose(total, np.eye(2), atol=1e-10)


def _kraus_oracle(rho, ops, q, n):
    return sum(embed(k, [q], n) @ rho @ embed(k, [q], n).conj().T for k in ops)


@settings(max_examples=200)
@given(st.floats(0, 1), st.floats(0, 0.5), st.integers(0, 2**32 - 1), st.integers(0, 2))
def test_channels_match_brute_force(p, r, seed, q):
    rho = to_density(random_state(np.random.default_rng(seed), 3))
    damp = amplitude_damping(p)
    assert np.allclose(damp(rho, q), _kraus_oracle(rho, damp.operators, q, 3), atol=1e-12)
    deph = dephasing(r)
    assert np.allclose(apply_channel(rho, deph, [q]), _kraus_oracle(rho, deph.operators, q, 3),
                       atol=1e-12)


def test_zero_noise_matches_noiseless(rng):
    c = basis_adder().circuit
    rho = to_density(random_state(rng, 3))
    model = NoiseModel(0.0, 0.0, 1.0, 1.0, False)
    assert np.allclose(noisy_run(c, model, rho), evolve_density(c, rho), atol=1e-10)
    assert np.allclose(noisy_run(c, NoiseModel.ideal(), rho), evolve_density(c, rho), atol=1e-10)


def test_single_flip_then_damping():
    c = Circuit(1, [Gate("X", (0,))])
    out = noisy_run(c, NoiseModel(p_damp=0.003, p_dephase=0.003), np.diag([1.0, 0.0]))
    assert np.allclose(out, np.diag([0.003, 0.997]))


def test_noisy_run_matches_hand_built_sequence(rng):
    # oracle: full-matrix unitary then Kraus maps on each touched qubit
    model = NoiseModel(p_damp=0.01, p_dephase=0.02)
    c = Circuit(3, [Gate("H", (0,)), Gate("CNOT", (2,), (0,), negated=(True,)),
                    Gate("CCNOT", (1,), (0, 2), negated=(False, True)), Gate("CH", (2,), (1,))])
    rho = to_density(random_state(rng, 3))
    expected = rho
    damp, deph = amplitude_damping(0.01).operators, dephasing(0.02).operators
    for g in c.gates:
        for low in physical_gates(g, 3):
            u = embed(low.to_matrix(), low.qubits, 3)
            expected = u @ expected @ u.conj().T
            for q in low.qubits:
                expected = _kraus_oracle(expected, damp, q, 3)
                expected = _kraus_oracle(expected, deph, q, 3)
    assert np.allclose(noisy_run(c, model, rho), expected, atol=1e-12)


def test_physical_gates_lowering():
    assert physical_gates(Gate("CNOT", (1,), (0,)), 2) == [Gate("CNOT", (1,), (0,))]
    tof = physical_gates(Gate("CCNOT", (2,), (0, 1), negated=(True, False)), 3)
    assert tof[0] == Gate("X", (0,)) and tof[-1] == Gate("X", (0,))
    assert sum(g.name == "CNOT" for g in tof) == 6
    assert [g.name for g in physical_gates(Gate("CH", (1,), (0,)), 2)] == ["RY", "CNOT", "RY"]


@settings(max_examples=100)
@given(circuits(n_qubits=3, max_gates=5), st.floats(0, 0.2), st.floats(0, 0.2),
       st.integers(0, 2**32 - 1))
def test_noisy_run_is_trace_preserving(c, pd, pp, seed):
    rho = to_density(random_state(np.random.default_rng(seed), 3))
    out = noisy_run(c, NoiseModel(p_damp=pd, p_dephase=pp), rho)
    assert np.trace(out).real == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(out, out.conj().T, atol=1e-12)
    assert np.linalg.eigvalsh(out).min() > -1e-10


def test_readout_damping_hook():
    rho = np.diag([0.0, 1.0]).astype(complex)
    model = NoiseModel()
    assert np.allclose(readout_damping(rho, model, [0]), np.diag([0.003, 0.997]))
    off = NoiseModel(t1_readout=False)
    assert np.allclose(readout_damping(rho, off, [0]), rho)


def test_readout_error():
    dist = {"0": 0.0, "1": 1.0}
    assert apply_readout_error(dist, NoiseModel(f_flip=1.0)) == pytest.approx(dist)
    assert apply_readout_error(dist, NoiseModel()) == pytest.approx({"0": 0.01, "1": 0.99})
    uniform = {k: 0.25 for k in ("00", "01", "10", "11")}
    assert apply_readout_error(uniform, NoiseModel(f_flip=0.8)) == pytest.approx(uniform)


def test_readout_error_two_bits_oracle():
    f = 0.9
    dist = {"00": 0.1, "01": 0.2, "10": 0.3, "11": 0.4}
    m = np.array([[f, 1 - f], [1 - f, f]])
    expected = np.kron(m, m) @ np.array([0.1, 0.2, 0.3, 0.4])
    got = apply_readout_error(dist, NoiseModel(f_flip=f))
    assert [got[k] for k in ("00", "01", "10", "11")] == pytest.approx(list(expected))


def test_advanced_fidelity():
    assert advanced_fidelity(1.0, 0.99, 12, 0.99) == pytest.approx(0.8775, abs=1e-4)
    assert advanced_fidelity(1.0, 0.99, 24, 0.99) == pytest.approx(0.99 ** 25, abs=1e-12)
    assert advanced_fidelity(0.42, 1.0, 0, 1.0) == 0.42
    assert advanced_fidelity(1.0, 0.99, 24, 0.99, n_measured=2) == pytest.approx(0.7700, abs=1e-4)
    with pytest.raises(ValueError):
        advanced_fidelity(1.0, 0.99, -1, 0.99)


def test_noise_config_round_trip():
    model = NoiseModel(p_damp=0.01, p_dephase=0.002, f_cnot=0.98, f_flip=0.97, t1_readout=False)
    assert parse_noise_config(format_noise_config(model)) == model
    assert parse_noise_config("# nothing\n") == NoiseModel()
    with pytest.raises(ValueError, match="line 1"):
        parse_noise_config("p_bogus = 1")
    with pytest.raises(ValueError):
        parse_noise_config("p_damp = 2")
    with pytest.raises(ValueError, match="line 2"):
        parse_noise_config("f_cnot = 0.9\nf_flip = high")


def test_forecast_ratio_structure():
    from qadder.adders import adder_fidelity

    model = NoiseModel()
    adder = basis_adder()
    base = advanced_fidelity(adder_fidelity(adder, 0, 0, model), 0.99, 12, 0.99)
    low = advanced_fidelity(adder_fidelity(adder, math.pi / 8, math.pi / 8, model), 0.99, 12, 0.99)
    assert low / base == pytest.approx(0.8134 / 0.8775, abs=0.02)
