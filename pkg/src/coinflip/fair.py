"""Fair operating angles, bias reports and theta sweeps."""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import brentq

from .alice import alice_bias_closed
from .bob import bob_bias, bob_bias_n1_closed, build_lambda_fast, recover_primal, solve_dual
from .config import TOL
from .errors import FairPointNotFound
from .linalg import check_register
from .two_qubit import root_candidates

log = logging.getLogger(__name__)

CSV_COLUMNS = ("theta_rad", "theta_deg", "alice", "bob_dual", "bob_primal", "gap")


@dataclass(frozen=True)
class FairPoint:
    n: int
    theta_star: float
    p_fair: float
    alice_at_star: float
    bob_at_star: float
    residual: float
    seconds: float = 0.0

    @property
    def theta_deg(self) -> float:
        return math.degrees(self.theta_star)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "theta_rad": self.theta_star,
            "theta_deg": self.theta_deg,
            "p_fair": self.p_fair,
            "alice_at_star": self.alice_at_star,
            "bob_at_star": self.bob_at_star,
            "residual": self.residual,
        }


def fairness_gap(n: int, theta: float) -> float:
    return bob_bias(n, theta) - alice_bias_closed(n, theta)


def find_fair_theta(n: int, scan_points: int = 33) -> FairPoint:
    """Angle where Bob's and Alice's optimal biases coincide.

    A sign scan over ``(delta, pi/2 - delta)`` first checks that the gap
    changes sign exactly once; a bracketed root solve then refines it.
    """
    check_register(n)
    start = time.perf_counter()
    delta = TOL.fair_delta
    grid = np.linspace(delta, math.pi / 2 - delta, scan_points)
    g = np.array([fairness_gap(n, t) for t in grid])
    changes = np.nonzero(np.sign(g[:-1]) != np.sign(g[1:]))[0]
    if len(changes) == 0:
        raise FairPointNotFound(
            f"no sign change of bob - alice for n={n}", g_low=float(g[0]), g_high=float(g[-1])
        )
    if len(changes) > 1:
        log.warning("bias curves cross %d times for n=%d; using the first", len(changes), n)
    i = int(changes[0])
    theta = brentq(lambda t: fairness_gap(n, t), grid[i], grid[i + 1], xtol=TOL.fair_xtol)
    alice = alice_bias_closed(n, theta)
    bob = bob_bias(n, theta)
    return FairPoint(
        n, theta, alice, alice, bob, abs(alice - bob), time.perf_counter() - start
    )


def fair_table(n_max: int, n_min: int = 1) -> list[FairPoint]:
    rows = []
    for n in range(n_min, n_max + 1):
        fp = find_fair_theta(n)
        log.info("n=%d theta*=%.4f deg P_F=%.6f (%.2fs)", n, fp.theta_deg, fp.p_fair, fp.seconds)
        rows.append(fp)
    return rows


@dataclass(frozen=True)
class BiasReport:
    n: int
    theta: float
    alice: float
    bob_primal: float
    bob_dual: float
    gap: float
    fairness_residual: float
    lambda1: float
    lambda2: float

    def to_dict(self) -> dict:
        d = asdict(self)
        theta = d.pop("theta")
        return {"n": d.pop("n"), "theta_rad": theta, "theta_deg": math.degrees(theta), **d}


def bias_report(n: int, theta: float) -> BiasReport:
    lam = build_lambda_fast(n, theta)
    dual = solve_dual(n, theta, lam)
    primal = recover_primal(dual, lam).value(lam)
    alice = alice_bias_closed(n, theta)
    return BiasReport(
        n,
        theta,
        alice,
        primal,
        dual.value,
        dual.value - primal,
        abs(alice - dual.value),
        dual.lambda1,
        dual.lambda2,
    )


@dataclass(frozen=True)
class SweepRow:
    theta: float
    alice: float
    bob_dual: float
    bob_primal: float
    n1_reference: float
    quartic_values: tuple = ()

    @property
    def gap(self) -> float:
        return self.bob_dual - self.bob_primal


def sweep_curves(n: int, theta_grid) -> list[SweepRow]:
    """Both parties' optimal biases on a grid, sorted by theta.

    For ``n == 2`` each row also carries the objective value at every
    quartic root (NaN where the root is complex)."""
    rows = []
    for theta in sorted(float(t) for t in theta_grid):
        rep = bias_report(n, theta)
        quartic = ()
        if n == 2:
            quartic = tuple(
                c.value if c.is_real else float("nan") for c in root_candidates(theta)
            )
        rows.append(
            SweepRow(theta, rep.alice, rep.bob_dual, rep.bob_primal, bob_bias_n1_closed(theta), quartic)
        )
    return rows


def _fmt(x: float) -> str:
    return format(x, ".12g")


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(
            [_fmt(v) for v in (r.theta, math.degrees(r.theta), r.alice, r.bob_dual, r.bob_primal, r.gap)]
        )
    return buf.getvalue()


def sweep_records(rows) -> list[dict]:
    return [
        {
            "theta_rad": r.theta,
            "theta_deg": math.degrees(r.theta),
            "alice": r.alice,
            "bob_dual": r.bob_dual,
            "bob_primal": r.bob_primal,
            "gap": r.gap,
        }
        for r in rows
    ]


def parse_grid(spec: str) -> np.ndarray:
    """``"start:stop:count"`` to an inclusive linspace."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must look like start:stop:count, got {spec!r}")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError("grid count must be positive")
    return np.linspace(start, stop, count)
