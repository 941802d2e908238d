import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohpower.fixtures import RHO0, U0, U0_AS_PRINTED
from cohpower.linalg import (
    PRINTED_TOL,
    adjoint,
    as_matrix,
    check_tol,
    hermitian_eigenvalues,
    is_hermitian,
    is_unitary,
    kron,
    mat_product,
    one_to_one_norm,
    unitarity_residual,
)
from cohpower.powers import dim_counterexample_unitary

from conftest import HADAMARD, random_unitaries

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])


def test_mat_product_examples():
    np.testing.assert_array_equal(mat_product(np.eye(2), X), X)
    np.testing.assert_array_equal(mat_product(X, X), np.eye(2))
    np.testing.assert_allclose(mat_product(HADAMARD, HADAMARD), np.eye(2), atol=1e-15)


def test_mat_product_shape_mismatch():
    with pytest.raises(ValueError, match="dimension mismatch"):
        mat_product(np.eye(2), np.eye(3))


def test_mat_product_associative(rng):
    for _ in range(20):
        a, b, c = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(3))
        np.testing.assert_allclose(mat_product(mat_product(a, b), c), mat_product(a, mat_product(b, c)), atol=1e-12)


def test_adjoint_examples():
    s = np.array([[1.0, 2.0], [2.0, 3.0]])
    np.testing.assert_array_equal(adjoint(s), s)
    np.testing.assert_array_equal(adjoint(Y), Y)
    np.testing.assert_array_equal(adjoint([[0, 1], [0, 0]]), [[0, 0], [1, 0]])


def test_adjoint_involution_exact(rng):
    a = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
    np.testing.assert_array_equal(adjoint(adjoint(a)), a)


def test_as_matrix_rejects_bad_input():
    with pytest.raises(ValueError, match="non-finite"):
        as_matrix([[1.0, np.nan], [0.0, 1.0]])
    with pytest.raises(ValueError, match="2-D"):
        as_matrix([1.0, 2.0])
    with pytest.raises(ValueError):
        as_matrix(np.zeros((0, 2)))


@pytest.mark.parametrize("bad", [0.0, 1.0, -1e-3, 2.0])
def test_tolerance_range(bad):
    with pytest.raises(ValueError):
        check_tol(bad)


def test_eigenvalue_examples():
    np.testing.assert_allclose(hermitian_eigenvalues(np.eye(3)), [1, 1, 1], atol=1e-14)
    np.testing.assert_allclose(hermitian_eigenvalues(X), [1, -1], atol=1e-14)
    np.testing.assert_allclose(hermitian_eigenvalues(Y), [1, -1], atol=1e-14)


def test_eigenvalues_printed_state():
    lam = hermitian_eigenvalues(RHO0)
    # roots of x^2 - x + det with det = 0.7063 * 0.2937 - |0.4338 - 0.136i|^2
    det = 0.7063 * 0.2937 - (0.4338**2 + 0.1360**2)
    disc = np.sqrt(1.0 - 4.0 * det)
    np.testing.assert_allclose(lam, [(1 + disc) / 2, (1 - disc) / 2], atol=1e-12)
    np.testing.assert_allclose(lam, [0.99924, 0.00076], atol=5e-6)


def test_eigenvalues_reject_non_hermitian():
    with pytest.raises(ValueError, match="Hermitian"):
        hermitian_eigenvalues(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        hermitian_eigenvalues(np.ones((2, 3)))


def test_eigenvalues_match_lapack(rng):
    # the authored Jacobi solver and LAPACK are independent routes
    for d in (2, 3, 5, 8, 16):
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        h = g + np.conj(g).T
        np.testing.assert_allclose(hermitian_eigenvalues(h), np.linalg.eigvalsh(h)[::-1], atol=1e-10)


def test_eigenvalues_degenerate_and_diagonal():
    h = np.diag([3.0, -1.0, 3.0, 0.0]).astype(complex)
    np.testing.assert_array_equal(hermitian_eigenvalues(h), [3.0, 3.0, 0.0, -1.0])
    u = random_unitaries(4, 1, 7)[0]
    np.testing.assert_allclose(hermitian_eigenvalues(u @ h @ np.conj(u).T), [3, 3, 0, -1], atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(d=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_eigenvalue_sum_is_trace_and_psd_nonnegative(d, seed):
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    psd = g @ np.conj(g).T
    lam = hermitian_eigenvalues(psd)
    assert abs(lam.sum() - np.trace(psd).real) <= 1e-8 * max(1.0, np.trace(psd).real)
    assert lam.min() >= -1e-10 * max(1.0, lam.max())
    assert np.all(np.diff(lam) <= 0)


def test_one_to_one_norm_examples():
    assert one_to_one_norm(np.eye(4)) == 1.0
    assert one_to_one_norm(HADAMARD) == pytest.approx(np.sqrt(2.0), abs=1e-15)
    for d in (3, 4, 7):
        assert one_to_one_norm(dim_counterexample_unitary(d)) == pytest.approx(np.sqrt(2.0), abs=1e-15)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_one_to_one_norm_at_least_one_for_unitaries(d):
    for u in random_unitaries(d, 100, d):
        assert one_to_one_norm(u) >= 1.0 - 1e-12


def test_is_unitary_examples():
    assert is_unitary(HADAMARD)
    assert not is_unitary(np.array([[1, 0], [0, 0.5]]))
    with pytest.raises(ValueError, match="square"):
        is_unitary(np.ones((2, 3)))
    assert is_unitary(U0, PRINTED_TOL)
    assert not is_unitary(U0)


def test_printed_unitary_sign():
    # the sign of Re U0[1, 1] decides whether the printed digits describe a unitary
    assert unitarity_residual(U0_AS_PRINTED) > 0.09
    assert unitarity_residual(U0) < 1e-4


def test_is_hermitian():
    assert is_hermitian(Y)
    assert not is_hermitian(np.array([[0, 1], [0, 0]]))


def test_kron_matches_numpy():
    np.testing.assert_array_equal(kron(X, HADAMARD, np.eye(2)), np.kron(np.kron(X, HADAMARD), np.eye(2)))
