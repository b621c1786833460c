"""Dense linear algebra helpers, checked against slow reference methods."""

import numpy as np
import pytest

from wsgd.errors import DegenerateProblemError, DimensionError
from wsgd.linalg import as_matrix, as_vector, dot, extremal_eigs, solve_least_squares


def _power_iteration_largest(m, iters=5000):
    v = np.ones(m.shape[0]) / np.sqrt(m.shape[0])
    for _ in range(iters):
        w = m @ v
        v = w / np.linalg.norm(w)
    return float(v @ m @ v)


def test_least_squares_satisfies_normal_equations():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = rng.normal(size=(30, 6))
        b = rng.normal(size=30)
        x = solve_least_squares(a, b)
        # normal equations A^T A x = A^T b characterize the minimizer
        assert np.allclose(a.T @ a @ x, a.T @ b, atol=1e-9)


def test_least_squares_exact_on_consistent_system():
    rng = np.random.default_rng(2)
    a = rng.normal(size=(25, 5))
    x_true = rng.normal(size=5)
    x = solve_least_squares(a, a @ x_true)
    assert np.allclose(x, x_true, atol=1e-10)


def test_least_squares_minimum_norm_on_rank_deficiency():
    # duplicate columns: solutions form a line; lstsq picks least norm
    rng = np.random.default_rng(3)
    col = rng.normal(size=12)
    a = np.column_stack([col, col])
    b = 3.0 * col
    x = solve_least_squares(a, b)
    assert np.allclose(x, [1.5, 1.5], atol=1e-10)


def test_extremal_eigs_against_power_iteration():
    rng = np.random.default_rng(4)
    q = np.linalg.qr(rng.normal(size=(6, 6)))[0]
    spectrum = np.array([9.0, 5.0, 3.0, 1.0, 0.5, 0.25])
    m = q @ np.diag(spectrum) @ q.T
    largest, smallest = extremal_eigs(m)
    assert largest == pytest.approx(_power_iteration_largest(m), rel=1e-9)
    assert smallest == pytest.approx(0.25, rel=1e-9)


def test_extremal_eigs_skips_zero_eigenvalues():
    rng = np.random.default_rng(5)
    q = np.linalg.qr(rng.normal(size=(5, 5)))[0]
    m = q @ np.diag([4.0, 2.0, 1.0, 0.0, 0.0]) @ q.T
    largest, smallest = extremal_eigs(m)
    assert largest == pytest.approx(4.0, rel=1e-9)
    # smallest NONZERO eigenvalue, not the null directions
    assert smallest == pytest.approx(1.0, rel=1e-9)


def test_extremal_eigs_rejects_zero_matrix():
    with pytest.raises(DegenerateProblemError):
        extremal_eigs(np.zeros((3, 3)))


def test_as_matrix_validation():
    with pytest.raises(DimensionError):
        as_matrix(np.zeros((0, 3)))
    with pytest.raises(DimensionError):
        as_matrix(np.array([1.0, 2.0]))
    with pytest.raises(DimensionError):
        as_matrix(np.array([[np.nan, 1.0]]))


def test_as_matrix_returns_c_contiguous_float64():
    m = as_matrix(np.asfortranarray([[1, 2], [3, 4]]))
    assert m.flags["C_CONTIGUOUS"]
    assert m.dtype == np.float64


def test_as_vector_length_check():
    v = as_vector([1, 2, 3], 3)
    assert v.dtype == np.float64
    with pytest.raises(DimensionError):
        as_vector([1, 2, 3], 4)
    with pytest.raises(DimensionError):
        as_vector([[1, 2]], 2)


def test_dot_matches_numpy_and_checks_length():
    rng = np.random.default_rng(6)
    u, v = rng.normal(size=7), rng.normal(size=7)
    assert dot(u, v) == pytest.approx(float(u @ v), rel=1e-15)
    with pytest.raises(DimensionError):
        dot(u, v[:-1])
