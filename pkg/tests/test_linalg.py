import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coinflip.alice import build_pi_n
from coinflip.bob import build_lambda_fast
from coinflip.errors import ConvergenceError, SizingError
from coinflip.linalg import (
    I2,
    SX,
    SZ,
    eig_hermitian,
    hermitian,
    is_psd,
    jacobi_eigh,
    kron,
    min_eigenvalue,
    parity_z,
    pauli_string,
)


def random_hermitian(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (g + g.conj().T)


def test_kron_examples():
    assert np.allclose(kron(SZ, I2), np.diag([1, 1, -1, -1]))
    assert np.allclose(kron(I2, I2), np.eye(4))
    assert np.allclose(kron(SZ, SZ), np.diag([1, -1, -1, 1]))


def test_kron_rejects_oversized_register():
    with pytest.raises(SizingError):
        kron(*([I2] * 11))


def test_pauli_strings():
    assert np.allclose(pauli_string(1, "Z"), np.diag([1, -1]))
    xi = pauli_string(2, "XI")
    assert np.allclose(xi @ xi, np.eye(4))
    zzz = np.diag(pauli_string(3, "ZZZ")).real
    expected = [(-1) ** bin(b).count("1") for b in range(8)]
    assert np.array_equal(zzz, expected)
    assert np.array_equal(parity_z(3), pauli_string(3, "ZZZ"))


def test_pauli_string_length_mismatch():
    with pytest.raises(ValueError):
        pauli_string(2, "Z")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_kron_associative_and_trace_multiplicative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (random_hermitian(rng, 2) for _ in range(3))
    assert np.allclose(kron(kron(a, b), c), kron(a, kron(b, c)))
    assert np.isclose(np.trace(kron(a, b)), np.trace(a) * np.trace(b))


def test_hermitian_validation():
    with pytest.raises(ValueError):
        hermitian([[0, 1], [0, 0]])
    with pytest.raises(ValueError):
        hermitian(np.ones((2, 3)))
    with pytest.raises(ValueError):
        hermitian([[np.nan, 0], [0, 1]])


def test_eig_small_examples():
    for method in ("lapack", "jacobi"):
        vals, _ = eig_hermitian(np.diag([3.0, 1.0, 2.0]), method=method)
        assert np.allclose(vals, [1, 2, 3])
        vals, vecs = eig_hermitian(SX, method=method)
        assert np.allclose(vals, [-1, 1])
        minus = np.array([1, -1]) / math.sqrt(2)
        assert abs(abs(np.vdot(minus, vecs[:, 0])) - 1) < 1e-12


def test_eig_pi2_at_30_degrees():
    vals, _ = eig_hermitian(build_pi_n(2, math.radians(30)), method="jacobi")
    assert np.allclose(vals, [0.125, 0.125, 0.875, 0.875], atol=1e-12)


@pytest.mark.parametrize("dim", [1, 2, 3, 8, 16, 64])
def test_jacobi_matches_lapack_and_reconstructs(dim):
    rng = np.random.default_rng(dim)
    a = random_hermitian(rng, dim)
    vals, vecs = jacobi_eigh(a)
    assert np.allclose(vals, np.linalg.eigvalsh(a), atol=1e-10)
    assert np.allclose(vecs @ np.diag(vals) @ vecs.conj().T, a, atol=1e-10)
    assert np.allclose(vecs.conj().T @ vecs, np.eye(dim), atol=1e-10)


def test_jacobi_iteration_cap_reports_residual():
    a = random_hermitian(np.random.default_rng(3), 8)
    with pytest.raises(ConvergenceError) as err:
        jacobi_eigh(a, max_sweeps=1)
    assert err.value.residual > 0


def test_jacobi_is_deterministic():
    a = random_hermitian(np.random.default_rng(5), 16)
    v1, w1 = jacobi_eigh(a)
    v2, w2 = jacobi_eigh(a)
    assert np.array_equal(v1, v2) and np.array_equal(w1, w2)


def test_min_eigenvalue_examples():
    assert min_eigenvalue(np.eye(4)) == pytest.approx(1.0)
    assert abs(min_eigenvalue(build_lambda_fast(1, math.radians(36.87)))) < 1e-12
    assert min_eigenvalue(np.diag([0.2, -0.3])) == pytest.approx(-0.3)


def test_is_psd_examples():
    assert is_psd(np.eye(3), 0)
    assert not is_psd(SZ, 1e-9)
    assert is_psd(build_lambda_fast(2, math.radians(26.92)), 1e-9)
    with pytest.raises(ValueError):
        is_psd(np.eye(2), -1.0)
