"""Cheating Alice: the honest-Bob parity measurement and its top eigenvalue.

Alice fixes ``c = 0`` without loss of generality and wins when Bob's
outcomes have even parity. Her best success probability is the largest
eigenvalue of the even-parity operator built here.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .config import TOL
from .errors import ConsistencyError, SizingError
from .linalg import check_register, eig_hermitian, parity_z, projector
from .protocol import product_state, step

ENUMERATION_MAX_N = 6


@dataclass(frozen=True)
class AliceBiasResult:
    p_star: float
    optimal_state: np.ndarray
    pi_n: np.ndarray
    eigenspace: np.ndarray


def build_pi_n(n: int, theta: float, parity: int = 0) -> np.ndarray:
    """Honest Bob's parity-``parity`` measurement operator, by enumeration.

    Sums ``2**-n`` times the projector onto every product of axis-aligned
    "up" states ``|up_{s_i b_i}>`` over the ``2**n`` basis choices and the
    ``2**n`` sign tuples whose product is ``+1`` (``parity=0``) or ``-1``.
    Cost grows as ``4**n`` outer products, so ``n`` is capped at 6.
    """
    check_register(n)
    if n > ENUMERATION_MAX_N:
        raise SizingError(f"enumeration is limited to n <= {ENUMERATION_MAX_N}; use pi_n_closed")
    sign = 1.0 if parity == 0 else -1.0
    dim = 1 << n
    acc = np.zeros((dim, dim), dtype=complex)
    for basis in itertools.product((0, 1), repeat=n):
        for signs in itertools.product((1, -1), repeat=n):
            if step(sign * math.prod(signs), 0.0) == 0:
                continue
            # |up along -axis> is the "down" state of that axis
            outcome = [0 if s == 1 else 1 for s in signs]
            acc += projector(product_state(theta, basis, outcome))
    return acc / dim


def pi_n_closed(n: int, theta: float, parity: int = 0) -> np.ndarray:
    check_register(n)
    sign = 1.0 if parity == 0 else -1.0
    dim = 1 << n
    return 0.5 * (np.eye(dim) + sign * math.cos(theta) ** n * parity_z(n))


def alice_bias_closed(n: int, theta: float) -> float:
    return 0.5 * (1.0 + math.cos(theta) ** n)


def alice_bias_spectral(n: int, theta: float, parity: int = 0) -> AliceBiasResult:
    """Top eigenpair of the parity operator, cross-checked against the
    closed form. Raises :class:`ConsistencyError` on disagreement."""
    if n <= ENUMERATION_MAX_N:
        pi = build_pi_n(n, theta, parity)
    else:
        pi = pi_n_closed(n, theta, parity)
    vals, vecs = eig_hermitian(pi)
    p_star = float(vals[-1])
    closed = alice_bias_closed(n, theta)
    if abs(p_star - closed) > TOL.spectral_error:
        raise ConsistencyError(
            f"spectral bias {p_star!r} disagrees with closed form {closed!r}"
        )
    top = vals >= p_star - TOL.spectral_match
    return AliceBiasResult(p_star, vecs[:, -1].copy(), pi, vecs[:, top].copy())
