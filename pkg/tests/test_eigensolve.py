"""Tests for the generalized eigensolver."""

import numpy as np
import pytest

from stratawave.eigensolve import (
    EigenResult,
    cholesky_lower,
    condense_to_surface,
    default_tol_zero,
    solve_gen,
)
from stratawave.errors import NotPositiveDefiniteError


def _random_pencil(n, seed=0, complex_=False):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, n))
    if complex_:
        X = X + 1j * rng.standard_normal((n, n))
    A = X + X.conj().T
    Y = rng.standard_normal((n, n))
    B = Y @ Y.T + n * np.eye(n)
    return A, B


class TestSolveGen:
    """Test cases for solve_gen."""

    def test_diagonal(self):
        """Test sorted eigenvalues of a diagonal pencil."""
        result = solve_gen(np.diag([3.0, 1.0, 2.0]), np.eye(3))
        assert result.eigenvalues.tolist() == [1.0, 2.0, 3.0]
        assert len(result) == 3

    def test_matches_reference(self):
        """Test agreement with the eigenvalues of B^-1 A."""
        A, B = _random_pencil(12)
        result = solve_gen(A, B)
        expected = np.sort(np.linalg.eigvals(np.linalg.solve(B, A)).real)
        assert np.allclose(result.eigenvalues, expected)
        assert result.max_residual < 1e-10

    def test_b_orthonormal(self):
        """Test that eigenvectors are B-orthonormal."""
        A, B = _random_pencil(10, seed=1)
        X = solve_gen(A, B).eigenvectors
        assert np.allclose(X.T @ B @ X, np.eye(10), atol=1e-10)

    def test_hermitian(self):
        """Test a complex Hermitian pencil."""
        A, B = _random_pencil(8, seed=2, complex_=True)
        result = solve_gen(A, B)
        assert result.eigenvalues.dtype == float
        assert np.iscomplexobj(result.eigenvectors)
        assert result.max_residual < 1e-10

    def test_lowest_k(self):
        """Test that k selects the lowest pairs."""
        A, B = _random_pencil(10, seed=3)
        full = solve_gen(A, B)
        lowest = solve_gen(A, B, k=3)
        assert len(lowest) == 3
        assert np.allclose(lowest.eigenvalues, full.eigenvalues[:3])
        assert lowest.eigenvectors.shape == (10, 3)

    def test_k_clipped(self):
        """Test that k larger than n returns all pairs."""
        assert len(solve_gen(np.eye(4), np.eye(4), k=10)) == 4

    def test_sign_normalization(self):
        """Test that the largest component of each vector is positive."""
        A, B = _random_pencil(6, seed=4)
        X = solve_gen(A, B).eigenvectors
        pivots = X[np.argmax(np.abs(X), axis=0), np.arange(6)]
        assert np.all(pivots > 0)

    def test_default_tolerance(self):
        """Test tol_zero = 1e-6 ||A||_F / ||B||_F."""
        A, B = _random_pencil(5, seed=5)
        result = solve_gen(A, B)
        assert result.tol_zero == pytest.approx(1e-6 * np.linalg.norm(A) / np.linalg.norm(B))
        assert default_tol_zero(A, B, relative=1e-3) == pytest.approx(1e3 * result.tol_zero)

    def test_shape_mismatch(self):
        """Test that A and B must be square of equal size."""
        with pytest.raises(ValueError, match="must be square of equal size"):
            solve_gen(np.eye(3), np.eye(4))

    def test_indefinite_b(self):
        """Test that an indefinite B is rejected with its failing minor."""
        with pytest.raises(NotPositiveDefiniteError, match="leading minor 2"):
            solve_gen(np.eye(3), np.diag([1.0, -1.0, 1.0]))

    def test_cluster_ordering(self):
        """Test that degenerate vectors follow the reference basis."""
        A = np.diag([1.0, 1.0, 2.0])
        reference = np.eye(3)[:, [1, 0, 2]]
        result = solve_gen(A, np.eye(3), reference=reference)
        overlap = np.abs(result.eigenvectors[:, :2].T @ reference[:, :2])
        assert np.allclose(np.diag(overlap), 1.0)


class TestEigenResult:
    """Test cases for EigenResult."""

    def _result(self, values, tol):
        values = np.asarray(values, dtype=float)
        n = values.size
        return EigenResult(values, np.eye(n), np.zeros(n), tol_zero=tol)

    def test_negative_count(self):
        """Test that values within tol_zero are not counted."""
        result = self._result([-2.0, -1e-9, 0.5], 1e-6)
        assert result.negative_count == 1
        assert result.zero_flags.tolist() == [False, True, False]

    def test_count_stability(self):
        """Test that a value between tol/2 and tol makes the count unstable."""
        assert not self._result([-7e-7, 1.0], 1e-6).count_stable
        assert self._result([-1.0, 1.0], 1e-6).count_stable

    def test_to_dict(self):
        """Test the serialized fields."""
        data = self._result([-1.0, 2.0], 1e-6).to_dict(vectors=True)
        assert data["negative_count"] == 1
        assert data["zero_count"] == 0
        assert data["eigenvectors"] == [[1.0, 0.0], [0.0, 1.0]]


class TestCondensation:
    """Test cases for cholesky_lower and condense_to_surface."""

    def test_cholesky(self):
        """Test the lower factor."""
        A, B = _random_pencil(6, seed=6)
        L = cholesky_lower(B)
        assert np.allclose(np.tril(L), L)
        assert np.allclose(L @ L.T, B)

    def test_condensation_matches_schur(self):
        """Test condensation against an explicit Schur complement."""
        rng = np.random.default_rng(8)
        n = 9
        Y = rng.standard_normal((n, n))
        A = Y @ Y.T + n * np.eye(n)
        surface = np.zeros(n, dtype=bool)
        surface[-3:] = True
        M = np.zeros((n, n))
        M[np.ix_(surface, surface)] = np.eye(3)
        result = condense_to_surface(A, M, surface)
        I, S = ~surface, surface
        coupling = np.linalg.solve(A[np.ix_(I, I)], A[np.ix_(I, S)])
        schur = A[np.ix_(S, S)] - A[np.ix_(S, I)] @ coupling
        assert np.allclose(result.eigenvalues, np.linalg.eigvalsh(schur))
        x = result.eigenvectors
        assert x.shape == (n, 3)
        # interior rows solve A_II x_I + A_IS x_S = 0
        assert np.allclose(A[np.ix_(I, I)] @ x[I] + A[np.ix_(I, S)] @ x[S], 0.0, atol=1e-10)
