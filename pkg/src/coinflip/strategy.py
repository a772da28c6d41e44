"""Cheating-Bob measurement families and their symmetrization.

A family maps ``(c, r, b)`` (classical bit, announced outcomes, announced
bases; ``r`` and ``b`` as bit tuples with ``parity(r) == c``) to a PSD
operator. Bob always aims for coin outcome 0 here.

A symmetric family is generated by its ``c = 0, r = b = 0`` element ``M``:

    M_c^{r,b} = U M U^dagger,   U = X^r Z^(b xor r),   c = parity(r)

where ``X^u`` and ``Z^u`` act with sigma_x / sigma_z on the qubits
flagged in ``u``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import TOL
from .errors import StrategyError
from .linalg import (
    check_register,
    hermitian,
    min_eigenvalue,
    psd_sqrt,
    num_qubits,
    parity_z,
    pauli_mask,
)
from .protocol import all_product_states, bit_tuples, parity, step


def xor(u, v) -> tuple[int, ...]:
    return tuple(a ^ b for a, b in zip(u, v))


@lru_cache(maxsize=None)
def _xz(n: int, u: tuple, w: tuple) -> np.ndarray:
    return pauli_mask(n, "X", u) @ pauli_mask(n, "Z", w)


def family_keys(n: int, c: int):
    return [(c, r, b) for r in bit_tuples(n) if parity(r) == c for b in bit_tuples(n)]


@dataclass(frozen=True)
class CheatStrategy:
    """Symmetric strategy carried by its generator ``M_0^{0,0}``."""

    generator: np.ndarray
    n: int

    def __post_init__(self):
        m = hermitian(self.generator, atol=1e-10)
        check_register(self.n)
        if num_qubits(m) != self.n:
            raise ValueError(f"generator has dimension {m.shape[0]}, expected {1 << self.n}")
        object.__setattr__(self, "generator", m)

    def element(self, c: int, r, b) -> np.ndarray:
        r, b = tuple(r), tuple(b)
        if parity(r) != c:
            raise ValueError("announced outcomes must have parity c")
        u = _xz(self.n, r, xor(b, r))
        return u @ self.generator @ u.conj().T

    def family(self) -> dict:
        return {k: self.element(*k) for c in (0, 1) for k in family_keys(self.n, c)}

    def family_sum(self, c: int) -> np.ndarray:
        return sum(self.element(*k) for k in family_keys(self.n, c))

    def caught_probability(self, lam: np.ndarray) -> float:
        return float(np.trace(self.generator @ lam).real)

    def value(self, lam: np.ndarray) -> float:
        return 1.0 - self.caught_probability(lam)

    def constraint_residuals(self) -> dict:
        m = self.generator
        n = self.n
        sums = [self.family_sum(c) for c in (0, 1)]
        eye = np.eye(1 << n)
        return {
            "trace": abs(2 ** (n - 1) * np.trace(m).real - 1.0),
            "parity": abs(np.trace(m @ parity_z(n))),
            "completeness": max(float(np.max(np.abs(s - eye))) for s in sums),
            "psd": max(0.0, -min_eigenvalue(m)),
        }

    def validate(self, tol: float | None = None) -> "CheatStrategy":
        """Raise :class:`StrategyError` unless the family is a POVM."""
        tol = TOL.povm if tol is None else tol
        bad = {k: v for k, v in self.constraint_residuals().items() if v > tol}
        if bad:
            raise StrategyError(f"strategy violates POVM constraints: {bad}")
        return self

    def outcome_table(self, theta: float) -> np.ndarray:
        """``Q[x, y] = <psi_x^y| M |psi_x^y>`` for integer-coded tuples."""
        states = all_product_states(self.n, theta)
        return np.einsum("xyi,ij,xyj->xy", states.conj(), self.generator, states).real

    def to_json(self) -> str:
        m = self.generator
        return json.dumps(
            {"n": self.n, "generator_real": m.real.tolist(), "generator_imag": m.imag.tolist()}
        )

    @classmethod
    def from_json(cls, text: str) -> "CheatStrategy":
        data = json.loads(text)
        m = np.asarray(data["generator_real"], dtype=float)
        if "generator_imag" in data:
            m = m + 1j * np.asarray(data["generator_imag"], dtype=float)
        return cls(m, int(data["n"]))


def caught_probability_family(family: dict, n: int, theta: float) -> float:
    """Bob's probability of being caught, summed literally over Alice's
    preparations, the classical bit, and every family element.

    The keep/restart element is the common per-``c`` family sum; it
    enters only through the normalization of each preparation.
    """
    states = all_product_states(n, theta)
    tuples = bit_tuples(n)
    keep = sum(m for (c, _, _), m in family.items() if c == 0)
    total = 0.0
    for ai, a in enumerate(tuples):
        for si, s in enumerate(tuples):
            v = states[ai, si]
            norm = np.vdot(v, keep @ v).real
            for (c, r, b), m in family.items():
                hits = sum(int(bj == aj and rj == sj ^ 1) for aj, sj, bj, rj in zip(a, s, b, r))
                if step(hits, 0.0):
                    total += np.vdot(v, m @ v).real / norm
    return total / 2 ** (2 * n + 1)


def cheating_value_family(family: dict, n: int, theta: float) -> float:
    return 1.0 - caught_probability_family(family, n, theta)


def rotate_family_z(family: dict, n: int, u) -> dict:
    z = pauli_mask(n, "Z", u)
    return {(c, r, xor(b, u)): z @ m @ z for (c, r, b), m in family.items()}


def rotate_family_x(family: dict, n: int, u) -> dict:
    x = pauli_mask(n, "X", u)
    flip = parity(u)
    return {(c ^ flip, xor(r, u), xor(b, u)): x @ m @ x for (c, r, b), m in family.items()}


def _check_raw(raw: dict, n: int) -> None:
    for c in (0, 1):
        missing = set(family_keys(n, c)) - set(raw)
        if missing:
            raise StrategyError(f"family is missing {len(missing)} elements for c={c}")
    s0 = sum(raw[k] for k in family_keys(n, 0))
    s1 = sum(raw[k] for k in family_keys(n, 1))
    if np.max(np.abs(s0 - s1)) > TOL.povm:
        raise StrategyError("family sums differ between c=0 and c=1")


def symmetrized_element(raw: dict, n: int, c: int, r, b) -> np.ndarray:
    acc = 0
    for u in bit_tuples(n):
        for w in bit_tuples(n):
            a = _xz(n, u, w)
            src = (c ^ parity(u), xor(r, u), xor(xor(b, w), u))
            acc = acc + a @ raw[src] @ a.conj().T
    return acc / 4**n


def symmetrized_family(raw: dict, n: int) -> dict:
    """Average of ``raw`` over all ``4**n`` pi-rotation relabelings."""
    _check_raw(raw, n)
    return {k: symmetrized_element(raw, n, *k) for c in (0, 1) for k in family_keys(n, c)}


def symmetrize_strategy(raw: dict, n: int) -> CheatStrategy:
    _check_raw(raw, n)
    zero = tuple([0] * n)
    return CheatStrategy(symmetrized_element(raw, n, 0, zero, zero), n)


def random_raw_family(n: int, rng, keep: np.ndarray | None = None) -> dict:
    """Two independent random POVMs (one per ``c``), optionally compressed
    by ``sqrt(keep)`` so both sum to ``keep`` instead of the identity."""
    dim = 1 << n
    out = {}
    root = None
    if keep is not None:
        root = psd_sqrt(keep)
    for c in (0, 1):
        keys = family_keys(n, c)
        mats = []
        for _ in keys:
            g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            mats.append(g @ g.conj().T)
        total = sum(mats)
        vals, vecs = np.linalg.eigh(total)
        inv_root = (vecs / np.sqrt(vals)) @ vecs.conj().T
        for k, a in zip(keys, mats):
            m = inv_root @ a @ inv_root
            if root is not None:
                m = root @ m @ root
            out[k] = 0.5 * (m + m.conj().T)
    return out


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    residual: float


@dataclass(frozen=True)
class ReductionReport:
    checks: tuple
    alpha: tuple
    gamma: tuple

    @property
    def passed(self) -> bool:
        return all(ch.passed for ch in self.checks)

    def __getitem__(self, name: str) -> Check:
        for ch in self.checks:
            if ch.name == name:
                return ch
        raise KeyError(name)


def verify_symmetric_reduction(strategy: CheatStrategy, tol: float | None = None) -> ReductionReport:
    """Check that a symmetric family reduces to the cheating SDP.

    ``family_sum``: for each ``c`` the family sum decomposes as
    ``alpha * 1 + gamma * Z^n`` with no other Pauli components, the ``c``
    flip reverses the sign of ``gamma`` and, both sums being the same keep
    element, ``gamma = 0`` and ``alpha = 1``.
    ``trace``: ``2**(n-1) Tr(M) = 1``.  ``parity``: ``Tr(M Z^n) = 0``.
    """
    tol = TOL.povm if tol is None else tol
    n = strategy.n
    dim = 1 << n
    z = parity_z(n)
    eye = np.eye(dim)
    alphas, gammas, offs = [], [], []
    for c in (0, 1):
        s = strategy.family_sum(c)
        alpha = np.trace(s).real / dim
        gamma = np.trace(s @ z).real / dim
        alphas.append(alpha)
        gammas.append(gamma)
        offs.append(float(np.max(np.abs(s - alpha * eye - gamma * z))))
    family_resid = max(
        max(offs),
        abs(gammas[0] + gammas[1]),
        max(abs(g) for g in gammas),
        max(abs(a - 1.0) for a in alphas),
    )
    m = strategy.generator
    trace_resid = abs(2 ** (n - 1) * np.trace(m).real - 1.0)
    parity_resid = float(abs(np.trace(m @ z)))
    checks = (
        Check("family_sum", family_resid <= tol, family_resid),
        Check("trace", trace_resid <= tol, trace_resid),
        Check("parity", parity_resid <= tol, parity_resid),
    )
    return ReductionReport(checks, tuple(alphas), tuple(gammas))


def random_feasible_generator(n: int, rng) -> np.ndarray:
    """Random PSD ``M`` with ``2**(n-1) Tr M = 1`` and ``Tr(M Z^n) = 0``.

    Averaging with its qubit-1 sigma_x conjugate flips the sign of the
    parity expectation, which therefore vanishes."""
    dim = 1 << n
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    a = g @ g.conj().T
    x1 = pauli_mask(n, "X", [1] + [0] * (n - 1))
    m = a + x1 @ a @ x1
    return m / (2 ** (n - 1) * np.trace(m).real)


def strategy_from_vector(v, n: int) -> CheatStrategy:
    """Rank-one generator ``|v><v|`` rescaled to the trace constraint."""
    v = np.asarray(v, dtype=complex)
    m = np.outer(v, v.conj())
    return CheatStrategy(m / (2 ** (n - 1) * np.trace(m).real), n)


def fidelity_pure(m: np.ndarray, v) -> float:
    """``<v|M|v> / (Tr M <v|v>)``; equals 1 iff ``M`` is proportional to ``|v><v|``."""
    v = np.asarray(v, dtype=complex)
    return float(np.vdot(v, m @ v).real / (np.trace(m).real * np.vdot(v, v).real))

