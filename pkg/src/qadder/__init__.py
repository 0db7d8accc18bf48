"""Quantum autoencoders built from approximate quantum adders."""

from .adders import (
    AdderSpec,
    adder_fidelity,
    autoencode_roundtrip,
    basis_adder,
    encode_gate,
    gate_encoding_experiment,
    ideal_sum,
)
from .gates import Circuit, Gate, controlled, dagger_circuit, named_gate, rotation, u1, u3
from .noise import NoiseModel, advanced_fidelity, amplitude_damping, dephasing, noisy_run
from .sim import (
    measurement_distribution,
    partial_trace,
    product_state,
    run_circuit,
    sample_shots,
    to_density,
    zero_state,
)
from .transpile import circuit_unitary, cnot_count, transpile

__version__ = "0.1.0"
