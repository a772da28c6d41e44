"""
Two qubits in closed form
=========================

On the PSD boundary of the two-qubit dual, chi depends rationally on
xi, and stationarity lands on a quartic. Only one root survives.
"""
# %%
import math

import numpy as np

from coinflip import conjectured_primal_n2, solve_dual, two_qubit_analytic
from coinflip.two_qubit import root_candidates, root_transition

for deg in (15, 26.92, 45, 70):
    t = math.radians(deg)
    print(deg, round(two_qubit_analytic(t).valid_root_value, 9), round(solve_dual(2, t).value, 9))

# %%
# Which roots get thrown out, and why
# -----------------------------------
for c in root_candidates(math.radians(26.92)):
    v = None if c.value is None else round(c.value, 5)
    print(np.round(c.root, 5), v, c.admissible)

print("real pair turns complex at", round(root_transition(), 5), "rad")

# %%
# The rank-one primal guess
# -------------------------
# A one-parameter family of states closes the duality gap at the fair angle.
f_star, value = conjectured_primal_n2(math.radians(26.92))
print(round(f_star, 5), round(value, 7))
