"""Dense Hermitian linear algebra for N-qubit registers.

Operators are plain complex ``numpy`` arrays of shape ``(2**n, 2**n)``.
Qubit 1 is always the leftmost (most significant) tensor factor, so the
computational basis index ``k`` has qubit ``i`` in bit ``n - i`` of ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .config import TOL
from .errors import ConvergenceError, SizingError

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

PAULIS = {"I": I2, "X": SX, "Y": SY, "Z": SZ}


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with orthonormal eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __iter__(self):
        yield self.eigenvalues
        yield self.eigenvectors


def hermitian(a, atol: float | None = None) -> np.ndarray:
    """Return ``a`` as a complex square array, checking it is Hermitian.

    Raises ``ValueError`` on wrong shape, non-finite entries, or an
    anti-Hermitian part larger than ``atol``.
    """
    atol = TOL.hermitian_atol if atol is None else atol
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(m))) if m.size else 1.0)
    if np.max(np.abs(m - m.conj().T), initial=0.0) > atol * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    return m


def num_qubits(a: np.ndarray) -> int:
    dim = a.shape[0]
    n = dim.bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise SizingError(f"dimension {dim} is not a power of two")
    return n


def check_register(n: int, limit: int | None = None) -> int:
    limit = TOL.max_n if limit is None else limit
    if n < 1:
        raise SizingError(f"need at least one qubit, got n={n}")
    if n > limit:
        raise SizingError(f"n={n} exceeds the register cap of {limit} qubits")
    return n


def kron(*ops) -> np.ndarray:
    """Kronecker product with the first operand as the slowest index."""
    if not ops:
        raise ValueError("kron needs at least one operand")
    out = reduce(np.kron, (np.asarray(o, dtype=complex) for o in ops))
    check_register(num_qubits(out))
    return out


def pauli_string(n: int, letters) -> np.ndarray:
    check_register(n)
    letters = list(letters)
    if len(letters) != n:
        raise ValueError(f"need {n} Pauli letters, got {len(letters)}")
    return reduce(np.kron, (PAULIS[str(c).upper()] for c in letters))


def parity_z(n: int) -> np.ndarray:
    """The n-fold tensor power of sigma_z, stored as a dense diagonal matrix."""
    return np.diag(parity_z_diagonal(n)).astype(complex)


def parity_z_diagonal(n: int) -> np.ndarray:
    check_register(n)
    k = np.arange(1 << n)
    pop = np.array([bin(int(v)).count("1") for v in k])
    return np.where(pop % 2 == 0, 1.0, -1.0)


def pauli_mask(n: int, letter: str, mask) -> np.ndarray:
    """Product of ``letter`` on every qubit ``i`` with ``mask[i] == 1``."""
    return pauli_string(n, [letter if m else "I" for m in mask])


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    apq = a[p, q]
    mag = abs(apq)
    if mag == 0.0:
        return
    phase = apq / mag
    tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # J = diag(1, conj(phase)) @ [[c, s], [-s, c]] zeroes a[p, q].
    j = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
    idx = [p, q]
    a[:, idx] = a[:, idx] @ j
    a[idx, :] = j.conj().T @ a[idx, :]
    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    v[:, idx] = v[:, idx] @ j


def jacobi_eigh(a, max_sweeps: int | None = None, offdiag_tol: float | None = None) -> Spectrum:
    """Cyclic Jacobi eigendecomposition of a complex Hermitian matrix.

    Sweeps the upper triangle row by row until the off-diagonal Frobenius
    norm drops below ``offdiag_tol`` times ``max(1, ||A||_F)``. The sweep
    order is fixed, so output is deterministic.
    """
    max_sweeps = TOL.jacobi_max_sweeps if max_sweeps is None else max_sweeps
    offdiag_tol = TOL.jacobi_offdiag if offdiag_tol is None else offdiag_tol
    work = hermitian(a).copy()
    n = work.shape[0]
    vecs = np.eye(n, dtype=complex)
    threshold = offdiag_tol * max(1.0, np.linalg.norm(work))

    def off(m):
        return np.sqrt(max(np.linalg.norm(m) ** 2 - np.sum(np.abs(np.diag(m)) ** 2), 0.0))

    for _ in range(max_sweeps):
        if off(work) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(work[p, q]) > 0.0:
                    _jacobi_rotate(work, vecs, p, q)
    else:
        if off(work) > threshold:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps", residual=off(work)
            )
    vals = np.diag(work).real
    order = np.argsort(vals, kind="stable")
    return Spectrum(vals[order], vecs[:, order])


def eig_hermitian(a, method: str = "lapack") -> Spectrum:
    """Full spectrum of a Hermitian matrix, ascending.

    ``method="lapack"`` uses ``numpy.linalg.eigh``; ``method="jacobi"``
    uses :func:`jacobi_eigh`. Both results are checked for the
    eigen-residual before returning.
    """
    m = hermitian(a)
    if method == "jacobi":
        spec = jacobi_eigh(m)
    elif method == "lapack":
        vals, vecs = np.linalg.eigh(m)
        spec = Spectrum(vals, vecs)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    scale = max(1.0, float(np.max(np.abs(spec.eigenvalues), initial=0.0)))
    resid = np.max(np.abs(m @ spec.eigenvectors - spec.eigenvectors * spec.eigenvalues), initial=0.0)
    if resid > TOL.eig_residual * scale:
        raise ConvergenceError(f"eigen-residual {resid:.3e} above tolerance", residual=resid)
    return spec


def min_eigenvalue(a) -> float:
    return float(np.linalg.eigvalsh(hermitian(a))[0])


def is_psd(a, tol: float | None = None) -> bool:
    tol = TOL.psd if tol is None else tol
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    return min_eigenvalue(a) >= -tol


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def psd_sqrt(a) -> np.ndarray:
    vals, vecs = np.linalg.eigh(hermitian(a))
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def psd_inv_sqrt(a) -> np.ndarray:
    vals, vecs = np.linalg.eigh(hermitian(a))
    if vals[0] <= 0:
        raise ValueError("matrix is not positive definite")
    return (vecs / np.sqrt(vals)) @ vecs.conj().T
