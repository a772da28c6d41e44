"""
How far can a dishonest Alice push the coin?
============================================

Alice wins if the parity Bob reads off her qubits matches the bit she
reveals. Her best shot is the top eigenvector of Bob's parity operator.
"""
# %%
# The parity operator, built the long way
# ---------------------------------------
# Enumerating every basis choice and sign tuple gives a matrix that is
# diagonal in the computational basis, with just two distinct eigenvalues.
import math

import numpy as np

from coinflip import alice_bias_closed, alice_bias_spectral, build_pi_n

theta = math.radians(30)
pi2 = build_pi_n(2, theta)
print(np.round(pi2.real, 4))
print(np.linalg.eigvalsh(pi2))

# %%
# Spectral answer against the closed form
# ---------------------------------------
for n in range(1, 7):
    res = alice_bias_spectral(n, theta)
    print(n, round(res.p_star, 6), round(alice_bias_closed(n, theta), 6), res.eigenspace.shape[1])

# %%
# More qubits, or a wider angle, both take control away from Alice.
grid = np.radians([5, 20, 40, 60, 80])
for n in (1, 2, 4):
    print(n, [round(alice_bias_closed(n, t), 4) for t in grid])
