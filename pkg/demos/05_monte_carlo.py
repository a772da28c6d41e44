"""
Playing the protocol out
========================

Seeded simulations: the honest coin is fair whatever the loss rate, and
each optimal cheater wins about as often as the optimizers predict.
"""
# %%
import math

from coinflip import (
    ProtocolParams,
    alice_bias_spectral,
    find_fair_theta,
    recover_primal,
    run_cheating_alice,
    run_cheating_bob,
    simulate_honest,
    solve_dual,
)

fp = find_fair_theta(2)
params = ProtocolParams(2, fp.theta_star)
for p_loss in (0.0, 0.2, 0.5, 0.8):
    s = simulate_honest(params, p_loss, 100_000, seed=11)
    print(p_loss, round(s.outcome0_frac, 4), round(s.mean_restarts, 3), round(1 / (1 - p_loss) ** 2 - 1, 3))

# %%
# Cheaters at the fair angle
# --------------------------
a = run_cheating_alice(params, alice_bias_spectral(2, fp.theta_star).optimal_state, 0, 12, 100_000)
b = run_cheating_bob(params, recover_primal(solve_dual(2, fp.theta_star)), 0, 13, 100_000, p_loss=0.5)
print(round(fp.p_fair, 5), a.success_rate, b.success_rate, round(a.success_stderr, 5))
