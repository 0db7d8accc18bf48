"""
Encode, compress, decode
========================

The adder maps two qubits onto the ancilla; its dagger maps them back. With
no noise the round trip is the identity for every input.
"""

import numpy as np

from qadder import autoencode_roundtrip, basis_adder
from qadder.adders import autoencoder_circuit, single, table_inputs
from qadder.transpile import cnot_count

adder = basis_adder()
pipeline = autoencoder_circuit(adder)
print("gates:", len(pipeline), " CNOTs (table tally):", cnot_count(pipeline, "published"),
      " CNOTs (after lowering):", cnot_count(pipeline, "transpiled"))

for a, b in table_inputs():
    _, f = autoencode_roundtrip(adder, np.kron(single(a), single(b)))
    print(f"({a:.3f}, {b:.3f})  round trip F = {f:.10f}")

rng = np.random.default_rng(1)
psi = rng.normal(size=4) + 1j * rng.normal(size=4)
psi /= np.linalg.norm(psi)
print("entangled random input:", autoencode_roundtrip(adder, psi)[1])
