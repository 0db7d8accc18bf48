"""
Searching for a gate-limited adder
==================================

A genetic algorithm looks for three-qubit circuits with at most 20 gates
and 2 CNOTs that maximize the mean adder fidelity over a 5x5 grid of
addend angles. Seed 42 with the default settings takes roughly 20 s.
"""

import numpy as np

from qadder.adders import encoding_circuit, gate_encoding_experiment
from qadder.circuit_text import serialize
from qadder.ga import GaConfig, evolve, ga_autoencoder
from qadder.transpile import cnot_count

result = evolve(GaConfig(seed=42))
print(serialize(result.circuit, [f"average {result.average_fidelity:.4f}"]))
print("best fitness every 50 generations:", np.round(result.history[::50], 4))
print(f"minimum {result.minimum_fidelity:.4f} at {np.round(result.minimum_input, 4)}")

adder, decoder = ga_autoencoder(result)
print("encode+decode CNOTs:", cnot_count(adder.circuit.then(decoder)))
print("encoded-Z circuit CNOTs:", cnot_count(encoding_circuit(adder, "encoded")))
print("encoded Z, ZZ basis:", gate_encoding_experiment(adder, "encoded", "11", "ZZ"))
