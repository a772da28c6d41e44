"""Seeded Monte Carlo execution of the protocol over a lossy channel.

Each qubit is erased independently with probability ``p_loss``; Bob
restarts whenever any qubit is missing. Only the completed attempt
influences the coin, so batch runs draw, in this order: Alice's choices
for the completed attempt, per-attempt loss flags, Bob's bases, Born-rule
measurement outcomes, and finally the classical bit ``c``. Choices made in
discarded attempts are never observed and are not drawn.

Cheating parties are analysed per completed run: memory across restarts
is not modelled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import TOL
from .errors import RunawayError
from .protocol import ProtocolParams, RunRecord, all_product_states, qubit_states
from .strategy import CheatStrategy, family_keys


@dataclass(frozen=True)
class SimulationSummary:
    n: int
    theta_rad: float
    p_loss: float
    trials: int
    completed: int
    aborted: int
    outcome0_frac: float
    mean_restarts: float
    restarts_std: float
    cheat: str = "none"
    target: int | None = None
    success_rate: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def success_stderr(self) -> float | None:
        if self.success_rate is None:
            return None
        p = self.success_rate
        return math.sqrt(max(p * (1 - p), 1e-300) / self.trials)

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "theta_rad": self.theta_rad,
            "p_loss": self.p_loss,
            "trials": self.trials,
            "completed": self.completed,
            "aborted": self.aborted,
            "outcome0_frac": self.outcome0_frac,
            "mean_restarts": self.mean_restarts,
        }
        if self.success_rate is not None:
            d.update(
                cheat=self.cheat,
                target=self.target,
                success_rate=self.success_rate,
                success_stderr=self.success_stderr,
            )
        d.update(self.extra)
        return d


def _check_loss(p_loss: float) -> None:
    if not 0.0 <= p_loss < 1.0:
        raise ValueError(f"p_loss must lie in [0, 1), got {p_loss!r}")


def _bit_codes(bits: np.ndarray) -> np.ndarray:
    """Rows of bits to integers, first column most significant."""
    n = bits.shape[-1]
    return bits @ (1 << np.arange(n - 1, -1, -1))


def _code_bits(codes: np.ndarray, n: int) -> np.ndarray:
    return (codes[:, None] >> np.arange(n - 1, -1, -1)) & 1


def sample_restarts(rng, trials: int, n: int, p_loss: float, cap: int | None = None) -> np.ndarray:
    """Failed attempts before the first loss-free one, per trial."""
    cap = TOL.restart_cap if cap is None else cap
    restarts = np.zeros(trials, dtype=np.int64)
    active = np.arange(trials)
    if p_loss == 0.0:
        return restarts
    while active.size:
        lost = (rng.random((active.size, n)) < p_loss).any(axis=1)
        active = active[lost]
        restarts[active] += 1
        if active.size and restarts[active].max() > cap:
            raise RunawayError(f"restart cap {cap} exceeded")
    return restarts


def _honest_outcomes(rng, theta: float, a, s, beta) -> np.ndarray:
    single = qubit_states(theta)
    # p0[a, s, beta] = |<psi_beta^0 | psi_a^s>|^2
    p0 = np.abs(np.einsum("bi,asi->asb", single[:, 0].conj(), single)) ** 2
    u = rng.random(a.shape)
    return (u >= p0[a, s, beta]).astype(np.int64)


def simulate_honest(params: ProtocolParams, p_loss: float, trials: int, seed) -> SimulationSummary:
    _check_loss(p_loss)
    rng = np.random.default_rng(seed)
    n = params.n
    a = rng.integers(0, 2, (trials, n))
    s = rng.integers(0, 2, (trials, n))
    restarts = sample_restarts(rng, trials, n, p_loss)
    beta = rng.integers(0, 2, (trials, n))
    r = _honest_outcomes(rng, params.theta, a, s, beta)
    c = rng.integers(0, 2, trials)
    outcome = (c + r.sum(axis=1)) % 2
    aborted = ((beta == a) & (r != s)).any(axis=1)
    ok = ~aborted
    return SimulationSummary(
        n,
        params.theta,
        p_loss,
        trials,
        trials,
        int(aborted.sum()),
        float(np.mean(outcome[ok] == 0)) if ok.any() else float("nan"),
        float(restarts.mean()),
        float(restarts.std(ddof=1)) if trials > 1 else 0.0,
        extra={"outcome0_count": int(np.sum(outcome[ok] == 0))},
    )


def run_honest(params: ProtocolParams, p_loss: float, rng_seed) -> RunRecord:
    """A single honest execution, restarting on loss until one attempt completes."""
    _check_loss(p_loss)
    rng = np.random.default_rng(rng_seed)
    n = params.n
    restarts = 0
    while True:
        a = rng.integers(0, 2, n)
        s = rng.integers(0, 2, n)
        if (rng.random(n) < p_loss).any():
            restarts += 1
            if restarts > TOL.restart_cap:
                raise RunawayError(f"restart cap {TOL.restart_cap} exceeded")
            continue
        beta = rng.integers(0, 2, n)
        r = _honest_outcomes(rng, params.theta, a, s, beta)
        c = int(rng.integers(0, 2))
        aborted = bool(((beta == a) & (r != s)).any())
        o = (c + int(r.sum())) % 2
        return RunRecord(
            restarts,
            True,
            aborted,
            None if aborted else o,
            c,
            tuple(int(v) for v in beta),
            tuple(int(v) for v in r),
        )


def _sample_rows(rng, cdf: np.ndarray) -> np.ndarray:
    """Sample one index per row of a cumulative-probability table."""
    u = rng.random(cdf.shape[0])[:, None]
    idx = (u >= cdf).sum(axis=1)
    return np.minimum(idx, cdf.shape[1] - 1)


def run_cheating_alice(
    params: ProtocolParams,
    cheat_state,
    target: int,
    rng_seed,
    trials: int,
    p_loss: float = 0.0,
) -> SimulationSummary:
    """Alice sends ``cheat_state`` (tuned for even parity) and ``c = target``."""
    _check_loss(p_loss)
    n = params.n
    psi = np.asarray(cheat_state, dtype=complex).reshape(-1)
    if psi.shape[0] != 1 << n or abs(np.linalg.norm(psi) - 1) > 1e-9:
        raise ValueError("cheat_state must be a unit vector on the n-qubit register")
    rng = np.random.default_rng(rng_seed)
    restarts = sample_restarts(rng, trials, n, p_loss)
    states = all_product_states(n, params.theta)
    probs = np.abs(np.einsum("byi,i->by", states.conj(), psi)) ** 2
    cdf = np.cumsum(probs, axis=1)
    beta = rng.integers(0, 1 << n, trials)
    r_code = _sample_rows(rng, cdf[beta])
    r = _code_bits(r_code, n)
    c = np.full(trials, target, dtype=np.int64)
    outcome = (c + r.sum(axis=1)) % 2
    success = outcome == target
    return SimulationSummary(
        n,
        params.theta,
        p_loss,
        trials,
        trials,
        0,
        float(np.mean(outcome == 0)),
        float(restarts.mean()),
        float(restarts.std(ddof=1)) if trials > 1 else 0.0,
        cheat="alice",
        target=target,
        success_rate=float(success.mean()),
    )


def _bob_tables(strategy: CheatStrategy, theta: float):
    """For every effective ``c``: announced (b, r) codes and, for each
    Alice preparation (a, s), the outcome CDF."""
    n = strategy.n
    q = strategy.outcome_table(theta)
    dim = 1 << n
    a_codes = np.arange(dim)
    out = []
    for c in (0, 1):
        keys = family_keys(n, c)
        b_codes = np.array([_bit_codes(np.array(b)) for _, _, b in keys])
        r_codes = np.array([_bit_codes(np.array(r)) for _, r, _ in keys])
        # P[a, s, k] = Q[a xor b_k, s xor r_k]
        p = q[a_codes[:, None, None] ^ b_codes[None, None, :], a_codes[None, :, None] ^ r_codes[None, None, :]]
        out.append((b_codes, r_codes, np.cumsum(p, axis=2)))
    return out


def run_cheating_bob(
    params: ProtocolParams,
    strategy: CheatStrategy | None,
    target: int,
    rng_seed,
    trials: int,
    p_loss: float = 0.0,
) -> SimulationSummary:
    """Honest Alice against Bob measuring the strategy's POVM after ``c``.

    ``strategy=None`` runs an honest Bob. To aim for outcome ``target``
    Bob measures the family for ``c xor target``, so his announced
    outcomes always have the parity that yields ``target``. Success means
    the coin equals ``target`` and Alice does not abort.
    """
    _check_loss(p_loss)
    n = params.n
    rng = np.random.default_rng(rng_seed)
    a = rng.integers(0, 2, (trials, n))
    s = rng.integers(0, 2, (trials, n))
    restarts = sample_restarts(rng, trials, n, p_loss)
    if strategy is None:
        bases = rng.integers(0, 2, (trials, n))
        r = _honest_outcomes(rng, params.theta, a, s, bases)
        c = rng.integers(0, 2, trials)
    else:
        strategy.validate()
        if strategy.n != n:
            raise ValueError("strategy and protocol disagree on n")
        tables = _bob_tables(strategy, params.theta)
        c = rng.integers(0, 2, trials)
        eff = c ^ target
        ac, sc = _bit_codes(a), _bit_codes(s)
        bases = np.empty((trials, n), dtype=np.int64)
        r = np.empty((trials, n), dtype=np.int64)
        for e in (0, 1):
            sel = np.nonzero(eff == e)[0]
            b_codes, r_codes, cdf = tables[e]
            k = _sample_rows(rng, cdf[ac[sel], sc[sel]])
            bases[sel] = _code_bits(b_codes[k], n)
            r[sel] = _code_bits(r_codes[k], n)
    outcome = (c + r.sum(axis=1)) % 2
    aborted = ((bases == a) & (r != s)).any(axis=1)
    success = (outcome == target) & ~aborted
    ok = ~aborted
    return SimulationSummary(
        n,
        params.theta,
        p_loss,
        trials,
        trials,
        int(aborted.sum()),
        float(np.mean(outcome[ok] == 0)) if ok.any() else float("nan"),
        float(restarts.mean()),
        float(restarts.std(ddof=1)) if trials > 1 else 0.0,
        cheat="bob" if strategy is not None else "none",
        target=target,
        success_rate=float(success.mean()),
    )
