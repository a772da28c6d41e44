"""Cheating Bob: the caught operator, the two-multiplier dual, and primal recovery.

For a symmetric strategy with generator ``M`` Bob is caught with
probability ``Tr(M Lam)``. He maximizes ``1 - Tr(M Lam)`` subject to

    2**(n-1) Tr M = 1,   Tr(M Z^n) = 0,   M >= 0.

The dual has two real multipliers. For fixed ``lam2`` the best ``lam1`` is
the smallest eigenvalue of ``Lam + lam2 Z^n``, which is concave in
``lam2``, so the dual reduces to a one-dimensional concave maximization:

    value = 1 - 2**(1-n) * max_{lam2} lambda_min(Lam + lam2 Z^n).
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .config import TOL
from .errors import PrimalRecoveryWarning, SizingError
from .linalg import check_register, parity_z, parity_z_diagonal, projector
from .optimize import golden_section_max, grid_then_golden
from .protocol import all_product_states, bit_tuples, parity, product_state, qubit_state, step
from .strategy import CheatStrategy

log = logging.getLogger(__name__)

BRUTEFORCE_MAX_N = 3
PAIRS_MAX_N = 6


def lambda_trace(n: int) -> float:
    return (4**n - 3**n) / 2


def caught_pairs(n: int):
    """``(x, y)`` tuples with some qubit where ``x_j = 0`` and ``y_j = 1``."""
    tuples = bit_tuples(n)
    return [
        (x, y)
        for x in tuples
        for y in tuples
        if any(xj == 0 and yj == 1 for xj, yj in zip(x, y))
    ]


def build_lambda_bruteforce(n: int, theta: float) -> np.ndarray:
    """The caught operator as the literal sum over ``c, a, s, b`` and ``r``
    with ``parity(r) == c``. Cost ``2**(4n)``; limited to ``n <= 3``."""
    check_register(n)
    if n > BRUTEFORCE_MAX_N:
        raise SizingError(
            f"brute-force construction is limited to n <= {BRUTEFORCE_MAX_N}; use build_lambda_fast"
        )
    dim = 1 << n
    tuples = bit_tuples(n)
    acc = np.zeros((dim, dim), dtype=complex)
    for c in (0, 1):
        for a in tuples:
            for s in tuples:
                for b in tuples:
                    for r in tuples:
                        if parity(r) != c:
                            continue
                        hits = sum(
                            int(bj == aj and rj == sj ^ 1) for aj, sj, bj, rj in zip(a, s, b, r)
                        )
                        if not step(hits, 0.0):
                            continue
                        x = [ai ^ bi for ai, bi in zip(a, b)]
                        y = [si ^ ri for si, ri in zip(s, r)]
                        acc += projector(product_state(theta, x, y))
    return acc / 2 ** (2 * n + 1)


def build_lambda_pairs(n: int, theta: float) -> np.ndarray:
    """Caught operator as one half of the projector sum over :func:`caught_pairs`.

    Each pair collects ``2**(2n)`` equal terms of the literal sum: ``a`` and
    ``s`` range freely and fix ``b``, ``r`` and ``c``.
    """
    check_register(n)
    if n > PAIRS_MAX_N:
        raise SizingError(f"pair enumeration is limited to n <= {PAIRS_MAX_N}")
    states = all_product_states(n, theta)
    dim = 1 << n
    acc = np.zeros((dim, dim), dtype=complex)
    codes = {t: i for i, t in enumerate(bit_tuples(n))}
    for x, y in caught_pairs(n):
        acc += projector(states[codes[x], codes[y]])
    return 0.5 * acc


def build_lambda_fast(n: int, theta: float) -> np.ndarray:
    """Caught operator from its product form.

    The complement of :func:`caught_pairs` is the product set where every
    qubit has ``(x_j, y_j)`` in ``{(0,0), (1,0), (1,1)}``, and the full pair
    sum is ``2**n`` times the identity, hence

        Lam = (2**n * 1 - kron_j (1 + |up_n><up_n|)) / 2.
    """
    check_register(n)
    dim = 1 << n
    factor = np.eye(2) + projector(qubit_state(theta, 0, 0))
    prod = np.array([[1.0 + 0j]])
    for _ in range(n):
        prod = np.kron(prod, factor)
    lam = 0.5 * (dim * np.eye(dim) - prod)
    return 0.5 * (lam + lam.conj().T)


def lambda_spectrum(n: int) -> np.ndarray:
    """Eigenvalues ``(2**n - 2**k) / 2`` with multiplicity ``C(n, k)``,
    ascending; independent of theta."""
    vals = []
    for k in range(n, -1, -1):
        vals += [(2**n - 2**k) / 2] * math.comb(n, k)
    return np.array(vals)


def bob_bias_n1_closed(theta: float) -> float:
    return (3.0 + math.sin(theta)) / 4.0


@dataclass(frozen=True)
class DualSolution:
    n: int
    theta: float
    lambda1: float
    lambda2: float
    value: float
    slack: np.ndarray
    slack_min_eig: float
    refined: bool = False

    @property
    def xi(self) -> float:
        return self.lambda1 - self.lambda2

    @property
    def chi(self) -> float:
        return self.lambda1 + self.lambda2

    @property
    def feasible(self) -> bool:
        return self.slack_min_eig >= -TOL.psd


def dual_objective(lam: np.ndarray, zdiag: np.ndarray):
    def f(lam2: float) -> float:
        return float(np.linalg.eigvalsh(lam + np.diag(lam2 * zdiag))[0])

    return f


def dual_slope(lam: np.ndarray, zdiag: np.ndarray):
    """Derivative of the dual objective: the parity expectation of the
    lowest eigenvector (a one-sided slope where eigenvalues cross)."""

    def g(lam2: float) -> float:
        _, vecs = np.linalg.eigh(lam + np.diag(lam2 * zdiag))
        v = vecs[:, 0]
        return float(np.sum(zdiag * np.abs(v) ** 2))

    return g


def _polish(f, g, x: float, fx: float, bound: float):
    # golden search stalls near sqrt(eps) on a smooth peak; the slope
    # changes sign exactly at the optimum, so a root solve pins it down
    h = max(1e-7 * bound, 1e-10)
    for _ in range(30):
        a, b = x - h, x + h
        ga, gb = g(a), g(b)
        if ga >= 0.0 >= gb:
            break
        h *= 4.0
    else:
        return x, fx
    if ga == 0.0 or gb == 0.0:
        root = a if ga == 0.0 else b
    else:
        root = brentq(g, a, b, xtol=1e-15 * max(1.0, bound), rtol=4 * np.finfo(float).eps)
    fr = f(root)
    if fr >= fx - 1e-15 * max(1.0, bound):
        return root, fr
    return x, fx


def solve_dual(n: int, theta: float, lam: np.ndarray | None = None) -> DualSolution:
    """Bob's optimal bias as the dual upper bound.

    Golden-section search over ``lam2`` in ``[-||Lam||, ||Lam||]``; a coarse
    grid scan guards against a non-unimodal objective and triggers
    local refinement when it finds a better point.
    """
    check_register(n)
    lam = build_lambda_fast(n, theta) if lam is None else lam
    zdiag = parity_z_diagonal(n)
    f = dual_objective(lam, zdiag)
    bound = float(np.linalg.eigvalsh(lam)[-1])
    bound = max(bound, 1e-12)
    lam2, lam1 = golden_section_max(f, -bound, bound, TOL.golden_width)
    lam2, lam1 = _polish(f, dual_slope(lam, zdiag), lam2, lam1, bound)

    refined = False
    grid = np.linspace(-bound, bound, 41)
    grid_best = max(f(x) for x in grid)
    if grid_best > lam1 + 1e-12 * max(1.0, bound):
        log.warning("dual objective not unimodal at n=%d theta=%r; refining on grid", n, theta)
        lam2, lam1 = grid_then_golden(f, -bound, bound, 257, TOL.golden_width)
        lam2, lam1 = _polish(f, dual_slope(lam, zdiag), lam2, lam1, bound)
        refined = True

    dim = 1 << n
    slack = lam - lam1 * np.eye(dim) + lam2 * parity_z(n)
    slack_min = float(np.linalg.eigvalsh(slack)[0])
    value = 1.0 - 2.0 ** (1 - n) * lam1
    return DualSolution(n, theta, lam1, lam2, value, slack, slack_min, refined)


def _mix_for_zero_parity(w: np.ndarray, z: np.ndarray, atol: float = 1e-12):
    """Density operator on span(w) with zero parity expectation, or None."""
    zc = w.conj().T @ z @ w
    zc = 0.5 * (zc + zc.conj().T)
    zvals, zvecs = np.linalg.eigh(zc)
    lo, hi = zvals[0], zvals[-1]
    if lo > atol or hi < -atol:
        return None
    if hi - lo <= atol:
        return projector(w @ zvecs[:, -1])
    p = -lo / (hi - lo)
    return p * projector(w @ zvecs[:, -1]) + (1 - p) * projector(w @ zvecs[:, 0])


def _cheapest_pairing(vals, vecs, k: int, z: np.ndarray):
    """Mix the kernel's parity-extreme vector with the outside eigenvector
    of opposite parity sign that adds the least slack."""
    w = vecs[:, :k]
    zc = w.conj().T @ z @ w
    zvals, zvecs = np.linalg.eigh(0.5 * (zc + zc.conj().T))
    idx = 0 if zvals[0] > 0 else -1
    v0, z0 = w @ zvecs[:, idx], zvals[idx]
    best = None
    for j in range(k, vecs.shape[0]):
        vj = vecs[:, j]
        zj = float(np.vdot(vj, z @ vj).real)
        if zj * z0 >= 0:
            continue
        p = zj / (zj - z0)
        cost = (1 - p) * max(vals[j], 0.0)
        if best is None or cost < best[0]:
            best = (cost, p * projector(v0) + (1 - p) * projector(vj))
    return None if best is None else best[1]


def recover_primal(dual: DualSolution, lam: np.ndarray | None = None) -> CheatStrategy:
    """Primal optimizer supported on the null space of the dual slack.

    Complementary slackness puts the optimal generator inside the slack's
    kernel. On that subspace a mixture of the extreme eigenvectors of the
    compressed parity operator meets ``Tr(M Z^n) = 0`` exactly, and the
    trace is then fixed by scaling. If the kernel admits no such mixture
    the kernel vector is paired with the cheapest eigenvector of opposite
    parity. The result is always feasible; a :class:`PrimalRecoveryWarning`
    is issued when the duality gap stays above tolerance.
    """
    n = dual.n
    lam = build_lambda_fast(n, dual.theta) if lam is None else lam
    vals, vecs = np.linalg.eigh(dual.slack)
    k = max(1, int(np.sum(vals <= TOL.null_space)))
    z = parity_z(n)
    rho = _mix_for_zero_parity(vecs[:, :k], z)
    if rho is None:
        rho = _cheapest_pairing(vals, vecs, k, z)
    if rho is None:
        rho = _mix_for_zero_parity(vecs, z)
    gen = rho / (2 ** (n - 1) * np.trace(rho).real)
    strategy = CheatStrategy(gen, n)
    gap = dual.value - strategy.value(lam)
    if gap > TOL.duality_gap:
        warnings.warn(
            f"primal value {strategy.value(lam):.10f} leaves gap {gap:.3e} at n={n}",
            PrimalRecoveryWarning,
            stacklevel=2,
        )
    return strategy


def duality_gap(dual: DualSolution, strategy: CheatStrategy, lam: np.ndarray | None = None) -> float:
    lam = build_lambda_fast(dual.n, dual.theta) if lam is None else lam
    return dual.value - strategy.value(lam)


def bob_bias(n: int, theta: float) -> float:
    """Bob's optimal bias: closed form for one qubit, the dual otherwise."""
    if n == 1:
        return bob_bias_n1_closed(theta)
    return solve_dual(n, theta).value

