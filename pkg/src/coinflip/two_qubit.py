"""Closed-form route for Bob's two-qubit bias and the conjectured primal.

With ``xi = lam1 - lam2`` and ``chi = lam1 + lam2`` the two-qubit dual
minimizes ``1 - (xi + chi) / 4`` subject to

    Lam_2 - xi * P_even - chi * P_odd >= 0,

where ``P_even`` / ``P_odd`` project onto even / odd parity basis states.
On the boundary (zero determinant) ``chi`` is a rational function of
``xi``, and stationarity of the objective along that curve gives a quartic
in ``xi``. A root is admissible when its constraint matrix is PSD and its
value is at least the single-qubit bias, which Bob can always reach.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .bob import bob_bias_n1_closed, build_lambda_fast
from .config import TOL
from .errors import AnalyticPathError
from .optimize import grid_then_golden

log = logging.getLogger(__name__)

P_EVEN = np.diag([1.0, 0.0, 0.0, 1.0])
P_ODD = np.diag([0.0, 1.0, 1.0, 0.0])


def chi_of_xi(xi: float, theta: float) -> float:
    c2 = math.cos(2 * theta)
    num = (c2 + 7) * xi**2 - 3 * (c2 + 3) * xi
    den = 8 * xi**2 + (c2 - 13) * xi - 3 * (c2 - 1)
    return num / den


def quartic_coefficients(theta: float) -> np.ndarray:
    """Coefficients of the stationarity quartic in ``xi``, highest power first."""
    c2, c4 = math.cos(2 * theta), math.cos(4 * theta)
    return np.array(
        [
            64.0,
            16.0 * (c2 - 13),
            c4 - 56.0 * c2 + 199.0,
            -6.0 * (c4 - 8.0 * c2 + 7.0),
            9.0 * (c4 - 1.0),
        ]
    )


def quartic_roots(theta: float) -> np.ndarray:
    # companion-matrix eigenvalues
    return np.roots(quartic_coefficients(theta))


def constraint_matrix(xi: float, chi: float, theta: float, lam: np.ndarray | None = None) -> np.ndarray:
    lam = build_lambda_fast(2, theta) if lam is None else lam
    return lam - xi * P_EVEN - chi * P_ODD


@dataclass(frozen=True)
class RootCandidate:
    root: complex
    is_real: bool
    chi: float | None
    value: float | None
    min_eig: float | None
    admissible: bool


@dataclass(frozen=True)
class TwoQubitAnalytic:
    theta: float
    xi: float
    chi: float
    valid_root_value: float
    quartic_roots: tuple
    candidates: tuple


def root_candidates(theta: float) -> list[RootCandidate]:
    lam = build_lambda_fast(2, theta)
    floor = bob_bias_n1_closed(theta)
    out = []
    for z in quartic_roots(theta):
        if abs(z.imag) >= TOL.real_root_imag:
            out.append(RootCandidate(complex(z), False, None, None, None, False))
            continue
        xi = float(z.real)
        chi = chi_of_xi(xi, theta)
        value = 1.0 - (xi + chi) / 4.0
        mu = float(np.linalg.eigvalsh(constraint_matrix(xi, chi, theta, lam))[0])
        ok = mu >= -TOL.psd and value >= floor - TOL.psd
        out.append(RootCandidate(complex(z), True, chi, value, mu, ok))
    return out


def two_qubit_analytic(theta: float) -> TwoQubitAnalytic:
    if not 0.0 < theta < math.pi / 2:
        raise ValueError(f"theta must lie in (0, pi/2), got {theta!r}")
    cands = root_candidates(theta)
    good = [c for c in cands if c.admissible]
    if not good:
        raise AnalyticPathError(f"no admissible quartic root at theta={theta!r}")
    if len(good) > 1:
        log.warning("%d admissible quartic roots at theta=%r; taking the smallest value", len(good), theta)
    best = min(good, key=lambda c: c.value)
    return TwoQubitAnalytic(
        theta,
        best.root.real,
        best.chi,
        best.value,
        tuple(c.root for c in cands),
        tuple(cands),
    )


def real_root_count(theta: float) -> int:
    return int(sum(abs(z.imag) < TOL.real_root_imag for z in quartic_roots(theta)))


def root_transition(lo: float = 0.78, hi: float = 0.9, tol: float = 1e-10) -> float:
    """Angle past which two quartic roots turn complex (four real roots
    below, two above), located by bisection on the real-root count."""
    if real_root_count(lo) != 4 or real_root_count(hi) != 2:
        raise ValueError("bracket does not straddle the 4 -> 2 real-root transition")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if real_root_count(mid) == 4:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def conjectured_state(f: float) -> np.ndarray:
    r = 1.0 / math.sqrt(2.0)
    return np.array([r * math.cos(f), 0.5, 0.5, r * math.sin(f)], dtype=complex)


def conjectured_value(f: float, theta: float) -> float:
    """Bob's success probability for the rank-one generator built on
    :func:`conjectured_state`, as an explicit trigonometric polynomial."""
    r2 = math.sqrt(2.0)
    st, ct = math.sin(theta), math.cos(theta)
    s2t = math.sin(2 * theta)
    return (
        12 * math.cos(2 * f) * ct
        + 2 * math.sin(2 * f) * st**2
        + math.cos(f) * (12 * r2 * st + 2 * r2 * s2t)
        + math.sin(f) * (12 * r2 * st - 2 * r2 * s2t)
        - math.cos(2 * theta)
        + 37
    ) / 64


def conjectured_value_direct(f: float, theta: float, lam: np.ndarray | None = None) -> float:
    lam = build_lambda_fast(2, theta) if lam is None else lam
    v = conjectured_state(f)
    return 1.0 - 0.5 * float(np.vdot(v, lam @ v).real)


def conjectured_primal_n2(theta: float) -> tuple[float, float]:
    """Maximize :func:`conjectured_value` over ``f``; returns ``(f*, value)``
    with ``f*`` reduced to ``[0, 2 pi)``."""
    f_star, value = grid_then_golden(
        lambda f: conjectured_value(f, theta), 0.0, 2 * math.pi, 721, 1e-12
    )
    return f_star % (2 * math.pi), value
