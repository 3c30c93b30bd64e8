"""Dense generalized symmetric and Hermitian eigensolver.

``A x = lambda B x`` with B positive definite is reduced by the Cholesky
factor ``B = L L^H`` to the standard problem ``L^-1 A L^-H y = lambda y``,
which LAPACK solves by tridiagonal reduction and implicit-shift iteration.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
from scipy.linalg import eigh, solve_triangular
from scipy.linalg.lapack import dpotrf, zpotrf

from stratawave.errors import NotPositiveDefiniteError

logger = logging.getLogger(__name__)

DEFAULT_RELATIVE_TOL = 1e-6


@dataclass(frozen=True)
class EigenResult:
    """Sorted eigenpairs of a generalized problem.

    Attributes:
        eigenvalues: Nondecreasing real eigenvalues.
        eigenvectors: B-orthonormal eigenvectors as columns.
        residuals: ||A x - lambda B x|| / ||x|| per pair.
        tol_zero: Absolute threshold separating zero from nonzero eigenvalues.
        a_norm: Frobenius norm of A.
    """

    eigenvalues: np.ndarray = field(repr=False, compare=False)
    eigenvectors: np.ndarray = field(repr=False, compare=False)
    residuals: np.ndarray = field(repr=False, compare=False)
    tol_zero: float = 0.0
    a_norm: float = 0.0

    def __len__(self) -> int:
        return self.eigenvalues.size

    @property
    def negative_count(self) -> int:
        """Number of eigenvalues below -tol_zero."""
        return int(np.count_nonzero(self.eigenvalues < -self.tol_zero))

    @property
    def zero_flags(self) -> np.ndarray:
        return np.abs(self.eigenvalues) <= self.tol_zero

    @property
    def count_stable(self) -> bool:
        """Whether the negative count survives halving tol_zero."""
        return self.negative_count == int(
            np.count_nonzero(self.eigenvalues < -0.5 * self.tol_zero)
        )

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals)) if self.residuals.size else 0.0

    def to_dict(self, vectors: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "eigenvalues": self.eigenvalues.tolist(),
            "negative_count": self.negative_count,
            "zero_count": int(np.count_nonzero(self.zero_flags)),
            "count_stable": self.count_stable,
            "tol_zero": self.tol_zero,
            "max_residual": self.max_residual,
        }
        if vectors:
            vecs = self.eigenvectors
            data["eigenvectors"] = (
                np.stack([vecs.real, vecs.imag], axis=-1).tolist()
                if np.iscomplexobj(vecs)
                else vecs.tolist()
            )
        return data


def cholesky_lower(B: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor of B.

    Raises:
        NotPositiveDefiniteError: Naming the first failing leading minor.
    """
    potrf = zpotrf if np.iscomplexobj(B) else dpotrf
    factor, info = potrf(B, lower=1, clean=1)
    if info > 0:
        raise NotPositiveDefiniteError(int(info))
    if info < 0:
        raise ValueError(f"potrf rejected argument {-info}")
    return factor


def default_tol_zero(A: np.ndarray, B: np.ndarray, relative: float = DEFAULT_RELATIVE_TOL) -> float:
    """Zero threshold ``relative * ||A||_F / ||B||_F``."""
    return float(relative * np.linalg.norm(A) / np.linalg.norm(B))


def solve_gen(
    A: np.ndarray,
    B: np.ndarray,
    k: Optional[int] = None,
    tol_zero: Optional[float] = None,
    reference: Optional[np.ndarray] = None,
) -> EigenResult:
    """Lowest eigenpairs of A x = lambda B x.

    Args:
        A: Symmetric or Hermitian matrix.
        B: Positive definite matrix of the same shape.
        k: Number of lowest pairs, all when None.
        tol_zero: Absolute zero threshold; defaults to 1e-6 ||A||_F / ||B||_F.
        reference: Previous basis; eigenvectors inside numerically degenerate
            clusters are ordered by B-overlap with it.

    Returns:
        Eigenpairs in nondecreasing order with sign-normalized vectors.

    Raises:
        NotPositiveDefiniteError: If B is not positive definite.

    Example:
        >>> res = solve_gen(np.diag([3.0, 1.0, 2.0]), np.eye(3))
        >>> res.eigenvalues.tolist()
        [1.0, 2.0, 3.0]
    """
    A = np.asarray(A)
    B = np.asarray(B)
    n = A.shape[0]
    if A.shape != (n, n) or B.shape != (n, n):
        raise ValueError(f"A and B must be square of equal size, got {A.shape} and {B.shape}")
    if np.iscomplexobj(A) or np.iscomplexobj(B):
        A = A.astype(complex)
        B = B.astype(complex)
    else:
        A = A.astype(float)
        B = B.astype(float)
    k = n if k is None else max(1, min(int(k), n))

    L = cholesky_lower(B)
    X = solve_triangular(L, A, lower=True)
    C = solve_triangular(L, X.conj().T, lower=True).conj().T
    C = 0.5 * (C + C.conj().T)
    w, Y = eigh(C, subset_by_index=[0, k - 1])
    vectors = solve_triangular(L, Y, lower=True, trans="C")
    vectors = _normalize_signs(vectors)
    if reference is not None:
        vectors = _order_clusters(w, vectors, np.asarray(reference), B)

    residuals = np.linalg.norm(A @ vectors - (B @ vectors) * w[None, :], axis=0) / np.linalg.norm(
        vectors, axis=0
    )
    if tol_zero is None:
        tol_zero = default_tol_zero(A, B)
    result = EigenResult(
        eigenvalues=np.asarray(w, dtype=float),
        eigenvectors=vectors,
        residuals=residuals,
        tol_zero=float(tol_zero),
        a_norm=float(np.linalg.norm(A)),
    )
    logger.debug(
        f"solve_gen n={n} k={k}: lowest {w[:min(3, k)]}, max residual {result.max_residual:.2e}"
    )
    return result


def _normalize_signs(vectors: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[idx, np.arange(vectors.shape[1])]
    scale = np.conj(pivots) / np.abs(pivots)
    if not np.iscomplexobj(vectors):
        scale = scale.real
    return vectors * scale[None, :]


def _order_clusters(
    w: np.ndarray, vectors: np.ndarray, reference: np.ndarray, B: np.ndarray, gap: float = 1e-8
) -> np.ndarray:
    """Reorder vectors inside degenerate clusters by overlap with ``reference``."""
    vectors = vectors.copy()
    start = 0
    n = w.size
    m = min(reference.shape[1], n)
    while start < n:
        stop = start + 1
        while stop < n and w[stop] - w[stop - 1] <= gap * max(1.0, abs(w[stop])):
            stop += 1
        if stop - start > 1 and start < m:
            block = vectors[:, start:stop]
            refs = reference[:, start : min(stop, m)]
            overlap = np.abs(refs.conj().T @ (B @ block))
            order = list(range(block.shape[1]))
            chosen = []
            for row in overlap:
                candidates = [c for c in order if c not in chosen]
                chosen.append(max(candidates, key=lambda c: row[c]))
            chosen += [c for c in order if c not in chosen]
            vectors[:, start:stop] = block[:, chosen]
        start = stop
    return vectors


def condense_to_surface(
    A: np.ndarray,
    M_surf: np.ndarray,
    surface: np.ndarray,
    k: Optional[int] = None,
    tol_zero: Optional[float] = None,
) -> EigenResult:
    """Steklov pencil ``A x = theta M_surf x`` by static condensation.

    With interior dofs I and surface dofs S the problem reduces to
    ``(A_SS - A_SI A_II^-1 A_IS) x_S = theta M_SS x_S``; the interior part is
    recovered as ``x_I = -A_II^-1 A_IS x_S``.

    Args:
        A: Stiffness form on all dofs.
        M_surf: Surface mass, positive definite on the surface block.
        surface: Boolean mask of surface dofs.
        k: Number of lowest pairs.
        tol_zero: Absolute zero threshold.

    Raises:
        NotPositiveDefiniteError: If A_II or M_SS is not positive definite.
    """
    surface = np.asarray(surface, dtype=bool)
    interior = ~surface
    A_II = A[np.ix_(interior, interior)]
    A_IS = A[np.ix_(interior, surface)]
    A_SS = A[np.ix_(surface, surface)]
    L = cholesky_lower(A_II)
    Z = solve_triangular(L, A_IS, lower=True)
    schur = A_SS - Z.conj().T @ Z
    schur = 0.5 * (schur + schur.conj().T)
    M_SS = M_surf[np.ix_(surface, surface)]
    reduced = solve_gen(schur, M_SS, k=k, tol_zero=tol_zero)

    x_S = reduced.eigenvectors
    x_I = -solve_triangular(L, Z @ x_S, lower=True, trans="C")
    full = np.zeros((A.shape[0], x_S.shape[1]), dtype=np.result_type(A, x_S))
    full[surface] = x_S
    full[interior] = x_I
    return EigenResult(
        eigenvalues=reduced.eigenvalues,
        eigenvectors=full,
        residuals=reduced.residuals,
        tol_zero=reduced.tol_zero,
        a_norm=reduced.a_norm,
    )
