"""
Forecasting an advanced processor
=================================

Amplitude damping and dephasing with p = 0.003 follow every physical
operation. The result, f~, is multiplied by 0.99 per CNOT and per measured
qubit. The pure product 0.99**13 = 0.8775 matches the published forecast
for the basis adder. f~ itself comes out well below 1, so the full
forecast sits some points lower.
"""

from qadder.noise import NoiseModel, advanced_fidelity
from qadder.tables import compute_table

print("0.99**13 =", round(advanced_fidelity(1.0, 0.99, 12, 0.99), 4))

for table in (1, 3):
    print(f"\nTable {table}")
    for row in compute_table(table, "advanced", noise=NoiseModel()):
        print(f"  {row.label:<11} f~ = {row.f_tilde:.4f}  forecast {row.computed:.4f}"
              f"  published {row.reference:.4f}")

# how small would the per-operation noise have to be?
for p in (3e-3, 1e-3, 3e-4, 1e-4):
    row = compute_table(1, "advanced", noise=NoiseModel(p_damp=p, p_dephase=p))[0]
    print(f"p = {p:.0e}: (0,0) forecast {row.computed:.4f}")
