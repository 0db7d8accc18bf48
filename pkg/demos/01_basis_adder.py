"""
The basis adder
===============

Three qubits: two addends and an ancilla that receives their (normalized)
sum. The circuit adds computational basis states exactly and general
superpositions only approximately.
"""

import numpy as np

from qadder import adder_fidelity, basis_adder, run_circuit
from qadder.adders import table_inputs
from qadder.circuit_text import serialize
from qadder.sim import basis_state, measurement_distribution, product_state

adder = basis_adder()
print(serialize(adder.circuit))

# basis states in, basis or |+>/|-> states out
for bits in ("000", "010", "100", "110"):
    out = run_circuit(adder.circuit, basis_state(bits))
    print(bits, "->", np.round(out.real, 4))

# superpositions: the ancilla fidelity against the ideal sum
for a, b in table_inputs():
    print(f"theta = ({a:.4f}, {b:.4f})  F = {adder_fidelity(adder, a, b):.4f}")

# the worst listed case has a closed form
c, s = np.cos(np.pi / 8), np.sin(np.pi / 8)
print("closed form at pi/8:", (c**3 + s**3) ** 2 + 2 * c**2 * s**2 * c**2)

out = run_circuit(adder.circuit, product_state([np.pi / 8, np.pi / 8, 0.0]))
print("ancilla marginal:", measurement_distribution(out, [2]))
