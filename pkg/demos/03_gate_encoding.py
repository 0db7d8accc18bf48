"""
Two-qubit gates as one-qubit gates
==================================

A controlled-U on the addend qubits can be replaced by a single gate on the
ancilla between encoder and decoder exactly when U is diagonal. CZ becomes
Z, CT becomes T, and so on; CNOT, CH and SWAP have no such encoding.
"""

import numpy as np

from qadder import basis_adder, encode_gate, named_gate
from qadder.adders import gate_encoding_experiment
from qadder.gates import controlled

for name in ("Z", "S", "SDG", "T", "TDG", "X", "H"):
    res = encode_gate(controlled(named_gate(name)))
    shown = np.round(np.diag(res.u_tilde), 4) if res.solvable else "-"
    print(f"C{name:<4} solvable={res.solvable!s:<5} diag(U~) = {shown}")

print("SWAP solvable:", encode_gate(named_gate("SWAP")).solvable)

# measured check: CZ directly vs Z on the ancilla, input |11>, nine Pauli bases
adder = basis_adder()
for basis in [a + b for a in "XYZ" for b in "XYZ"]:
    direct = gate_encoding_experiment(adder, "direct", "11", basis)
    encoded = gate_encoding_experiment(adder, "encoded", "11", basis, shots=4096, seed=0)
    print(f"{basis}: direct {direct:.4f}  encoded (4096 shots) {encoded:.4f}")
