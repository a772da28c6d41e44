"""
Cheating Bob as a two-variable dual
===================================

Bob's best measurement is a small SDP. Its dual collapses to a scalar
concave search over one multiplier.
"""
# %%
# The caught operator
# -------------------
# The product formula agrees with the literal five-fold sum and has a
# theta-independent spectrum.
import math

import numpy as np

from coinflip import build_lambda_bruteforce, build_lambda_fast, lambda_spectrum, solve_dual

theta = math.radians(26.92)
print(np.max(np.abs(build_lambda_fast(2, theta) - build_lambda_bruteforce(2, theta))))
print(np.linalg.eigvalsh(build_lambda_fast(3, theta)).round(6), lambda_spectrum(3))

# %%
# The dual search
# ---------------
# lambda_min(Lam + x * Z^n) is concave in x; its peak gives Bob's bias.
from coinflip.linalg import parity_z

lam = build_lambda_fast(2, theta)
xs = np.linspace(-2, 2, 9)
print([round(float(np.linalg.eigvalsh(lam + x * parity_z(2))[0]), 4) for x in xs])

d = solve_dual(2, theta)
print(f"value={d.value:.6f} xi={d.xi:.4f} chi={d.chi:.4f}")

# %%
# One qubit: Bob just measures sigma_x
# ------------------------------------
from coinflip import recover_primal

m = recover_primal(solve_dual(1, 0.5)).generator
print(np.round(2 * m.real, 6))
