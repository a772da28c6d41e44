"""Protocol parameters, Alice's preparations, and run records.

Geometry: the two measurement axes lie in the xz-plane of the Bloch
sphere, ``n`` at polar angle ``+theta`` and ``m`` at ``-theta`` (towards -x).
Basis bit 0 selects ``n``, 1 selects ``m``; outcome bit 0 is "up" along the
axis, 1 is "down".
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .config import TOL
from .linalg import check_register


@dataclass(frozen=True)
class ProtocolParams:
    """One member of the protocol family: qubit count and axis half-angle.

    The endpoints ``theta = 0`` and ``theta = pi/2`` are rejected; the
    closed-form bias functions still accept them for plotting.
    """

    n: int
    theta: float

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool):
            raise TypeError("n must be an integer")
        check_register(int(self.n))
        if not 0.0 < self.theta < math.pi / 2:
            raise ValueError(f"theta must lie in (0, pi/2), got {self.theta!r}")

    @classmethod
    def from_degrees(cls, n: int, theta_deg: float) -> "ProtocolParams":
        return cls(n, math.radians(theta_deg))

    @property
    def theta_deg(self) -> float:
        return math.degrees(self.theta)


def _bits(values, n: int) -> tuple[int, ...]:
    out = tuple(int(v) for v in values)
    if len(out) != n or any(v not in (0, 1) for v in out):
        raise ValueError(f"expected {n} bits, got {values!r}")
    return out


@dataclass(frozen=True)
class PreparationLabel:
    basis: tuple[int, ...]
    outcome: tuple[int, ...]

    def __post_init__(self):
        n = len(self.basis)
        object.__setattr__(self, "basis", _bits(self.basis, n))
        object.__setattr__(self, "outcome", _bits(self.outcome, n))

    @property
    def n(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one protocol execution up to its first completed run."""

    restarts: int
    completed: bool
    aborted: bool
    outcome: int | None
    c: int | None = None
    announced_basis: tuple[int, ...] = field(default=())
    announced_outcome: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.aborted and not self.completed:
            raise ValueError("an aborted run must have completed")
        if (self.outcome is not None) != (self.completed and not self.aborted):
            raise ValueError("outcome is present exactly for completed, unaborted runs")


def step(x, at_zero: float):
    """Heaviside step with an explicit value at zero.

    Parity products of signs never hit zero (either convention works);
    the caught-condition counter needs ``at_zero=0``.
    """
    return np.heaviside(x, at_zero)


def qubit_state(theta: float, basis: int, outcome: int) -> np.ndarray:
    h = theta / 2
    c, s = math.cos(h), math.sin(h)
    if basis == 0:
        up, down = (c, s), (-s, c)
    elif basis == 1:
        up, down = (c, -s), (s, c)
    else:
        raise ValueError(f"basis bit must be 0 or 1, got {basis!r}")
    if outcome not in (0, 1):
        raise ValueError(f"outcome bit must be 0 or 1, got {outcome!r}")
    return np.array(down if outcome else up, dtype=complex)


def qubit_states(theta: float) -> np.ndarray:
    """All four single-qubit states indexed ``[basis, outcome, amplitude]``."""
    return np.array([[qubit_state(theta, b, r) for r in (0, 1)] for b in (0, 1)])


def product_state(theta: float, basis, outcome) -> np.ndarray:
    return reduce(np.kron, (qubit_state(theta, b, r) for b, r in zip(basis, outcome)))


def prep_state(params: ProtocolParams, label: PreparationLabel) -> np.ndarray:
    if label.n != params.n:
        raise ValueError(f"label has {label.n} qubits, protocol has {params.n}")
    return product_state(params.theta, label.basis, label.outcome)


def bit_tuples(n: int):
    return list(itertools.product((0, 1), repeat=n))


def parity(bits) -> int:
    return sum(bits) % 2


def all_product_states(n: int, theta: float) -> np.ndarray:
    """States indexed ``[x, y]`` with ``x``, ``y`` the integer codes of the
    basis and outcome tuples (qubit 1 most significant)."""
    single = qubit_states(theta)
    tuples = bit_tuples(n)
    out = np.empty((1 << n, 1 << n, 1 << n), dtype=complex)
    for xi, x in enumerate(tuples):
        for yi, y in enumerate(tuples):
            out[xi, yi] = reduce(np.kron, (single[b, r] for b, r in zip(x, y)))
    return out


def is_unit(v, tol: float | None = None) -> bool:
    tol = TOL.unit_norm if tol is None else tol
    return abs(np.linalg.norm(v) - 1.0) <= tol
