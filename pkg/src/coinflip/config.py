"""Numeric tolerances and sizing limits shared by every module.

All comparisons in the package read their thresholds from :data:`TOL`.
The register cap can be lowered (never raised past 10) with the
``COINFLIP_MAX_N`` environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

HARD_MAX_N = 10


def _env_max_n() -> int:
    raw = os.environ.get("COINFLIP_MAX_N")
    if raw is None:
        return HARD_MAX_N
    try:
        value = int(raw)
    except ValueError:
        return HARD_MAX_N
    return max(1, min(value, HARD_MAX_N))


@dataclass(frozen=True)
class Tolerances:
    hermitian_atol: float = 1e-12
    unit_norm: float = 1e-12
    eig_residual: float = 1e-9
    jacobi_offdiag: float = 1e-12
    jacobi_max_sweeps: int = 100
    psd: float = 1e-9
    null_space: float = 1e-8
    golden_width: float = 1e-12
    real_root_imag: float = 1e-9
    spectral_match: float = 1e-10
    spectral_error: float = 1e-8
    trace: float = 1e-9
    povm: float = 1e-9
    duality_gap: float = 1e-6
    fair_delta: float = 1e-4
    fair_gtol: float = 1e-9
    fair_xtol: float = 1e-10
    restart_cap: int = 10**6
    max_n: int = HARD_MAX_N


TOL = Tolerances(max_n=_env_max_n())
