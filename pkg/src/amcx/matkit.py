"""Small dense symmetric-matrix kit.

Determinants via LU (numpy/LAPACK), the three classical rank-one /
block-determinant lemmas, leading principal minors, and a margin-aware
positive-definiteness verdict.  Dimensions are capped at 64; everything
here targets matrices of order n <= 8.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SymMatrix",
    "MatrixError",
    "det",
    "schur_det",
    "det_rank1_update",
    "inv_rank1_update",
    "leading_minors",
    "minor_scales",
    "min_eigenvalue",
    "classify_definiteness",
]

MAX_DIM = 64
#: Default relative margin for positive-definiteness verdicts.
DEFAULT_MARGIN = 1e-12


class MatrixError(ValueError):
    pass


@dataclass(frozen=True)
class SymMatrix:
    """Dense symmetric matrix with exact entrywise symmetry enforced."""

    entries: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.entries, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise MatrixError(f"expected a square matrix, got shape {M.shape}")
        if M.shape[0] < 1 or M.shape[0] > MAX_DIM:
            raise MatrixError(f"dimension {M.shape[0]} outside [1, {MAX_DIM}]")
        if not np.isfinite(M).all():
            raise MatrixError("non-finite matrix entries")
        if not np.array_equal(M, M.T):
            raise MatrixError("matrix is not exactly symmetric")
        object.__setattr__(self, "entries", M)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def _mat(M) -> np.ndarray:
    if isinstance(M, SymMatrix):
        return M.entries
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise MatrixError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] > MAX_DIM:
        raise MatrixError(f"dimension {M.shape[0]} exceeds cap {MAX_DIM}")
    return M


def det(M) -> float:
    """Determinant by LU with partial pivoting."""
    return float(np.linalg.det(_mat(M)))


def schur_det(A, B, C, D) -> float:
    """Determinant of the block matrix [[A, B], [C, D]] via Schur's formula.

    Requires D invertible: det(M) = det(D) det(A - B D^{-1} C).
    """
    A, B, C, D = (np.atleast_2d(np.asarray(x, dtype=float)) for x in (A, B, C, D))
    dD = float(np.linalg.det(D))
    if abs(dD) < 1e-300:
        raise MatrixError("block D is numerically singular")
    return dD * float(np.linalg.det(A - B @ np.linalg.solve(D, C)))


def det_rank1_update(A, a, b) -> float:
    """det(A + a b^T) by the matrix determinant lemma."""
    A = _mat(A)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    dA = float(np.linalg.det(A))
    if abs(dA) < 1e-300:
        raise MatrixError("matrix A is numerically singular")
    return (1.0 + float(b @ np.linalg.solve(A, a))) * dA


def inv_rank1_update(A, a, b) -> np.ndarray:
    """Inverse of A + a b^T by the Sherman-Morrison formula."""
    A = _mat(A)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    Ainv = np.linalg.inv(A)
    denom = 1.0 + float(b @ Ainv @ a)
    if abs(denom) <= 1e-12:
        raise MatrixError("rank-one update is numerically singular (1 + b^T A^{-1} a ~ 0)")
    return Ainv - np.outer(Ainv @ a, b @ Ainv) / denom


def leading_minors(M) -> np.ndarray:
    """All leading principal minors, in order of increasing size."""
    M = _mat(M)
    n = M.shape[0]
    return np.array([float(np.linalg.det(M[: k + 1, : k + 1])) for k in range(n)])


def min_eigenvalue(M) -> float:
    """Smallest eigenvalue of a symmetric matrix."""
    return float(np.linalg.eigvalsh(_mat(M))[0])


def minor_scales(M) -> np.ndarray:
    """Per-minor verdict scales: max(1, inf-norm of each leading submatrix).

    Judging the k-th minor at the scale of its own submatrix keeps the
    verdict meaningful when eigenvalue magnitudes are wildly mixed (a tiny
    but genuinely positive 2x2 top-block determinant is not noise just
    because the full matrix has a huge diagonal entry elsewhere)."""
    M = _mat(M)
    n = M.shape[0]
    return np.array(
        [max(1.0, float(np.abs(M[: k + 1, : k + 1]).sum(axis=1).max())) for k in range(n)]
    )


def classify_definiteness(M, margin: float = DEFAULT_MARGIN) -> str:
    """Sylvester verdict with scale-aware margins.

    Returns ``"positive"`` only when the k-th leading minor exceeds
    ``margin * max(1, ||M_k||_inf)`` for every k; anything else (including
    exact zeros) is ``"indefinite-or-singular"``.
    """
    M = _mat(M)
    if np.all(leading_minors(M) > margin * minor_scales(M)):
        return "positive"
    return "indefinite-or-singular"
