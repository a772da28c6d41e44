"""Bias analysis for a loss-tolerant quantum coin flip built on N-qubit
messages in two tilted bases.

Qubit 1 is always the leftmost tensor factor. Angles are radians
internally; the CLI accepts degrees too.
"""

from .alice import alice_bias_closed, alice_bias_spectral, build_pi_n, pi_n_closed
from .bob import (
    DualSolution,
    bob_bias,
    build_lambda_bruteforce,
    build_lambda_fast,
    build_lambda_pairs,
    duality_gap,
    lambda_spectrum,
    recover_primal,
    solve_dual,
)
from .config import TOL, Tolerances
from .fair import FairPoint, bias_report, fair_table, find_fair_theta, sweep_curves
from .protocol import PreparationLabel, ProtocolParams, RunRecord, prep_state
from .simulation import run_cheating_alice, run_cheating_bob, run_honest, simulate_honest
from .strategy import CheatStrategy, symmetrize_strategy, verify_symmetric_reduction
from .two_qubit import conjectured_primal_n2, root_transition, two_qubit_analytic

__version__ = "0.1.0"

__all__ = [
    "TOL",
    "Tolerances",
    "ProtocolParams",
    "PreparationLabel",
    "RunRecord",
    "prep_state",
    "build_pi_n",
    "pi_n_closed",
    "alice_bias_closed",
    "alice_bias_spectral",
    "build_lambda_bruteforce",
    "build_lambda_pairs",
    "build_lambda_fast",
    "lambda_spectrum",
    "DualSolution",
    "solve_dual",
    "recover_primal",
    "duality_gap",
    "bob_bias",
    "CheatStrategy",
    "symmetrize_strategy",
    "verify_symmetric_reduction",
    "two_qubit_analytic",
    "root_transition",
    "conjectured_primal_n2",
    "FairPoint",
    "find_fair_theta",
    "fair_table",
    "bias_report",
    "sweep_curves",
    "simulate_honest",
    "run_honest",
    "run_cheating_alice",
    "run_cheating_bob",
]
