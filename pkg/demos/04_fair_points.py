"""
Fair operating angles
=====================

Alice's edge shrinks with theta while Bob's grows. Where they cross,
neither side has the upper hand.
"""
# %%
from coinflip import fair_table, sweep_curves
from coinflip.fair import sweep_csv

for fp in fair_table(6):
    print(f"N={fp.n}  theta*={fp.theta_deg:.3f} deg  P_F={fp.p_fair:.5f}  ({fp.seconds:.2f} s)")

# %%
# Curve data for a plot
# ---------------------
import numpy as np

rows = sweep_curves(2, np.radians(np.linspace(10, 50, 9)))
print(sweep_csv(rows))
