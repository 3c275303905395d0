"""Assembly of the augmented Hessian W = D^2 z + sign * Dz (x) Dz and its
determinant by two independent routes.

The direct route builds the full n x n matrix from the closed-form
derivatives and runs LU.  The reduced route uses the rank-one reduction
identity

    det(W) = (u_3 / eta)^(n-3) * det3(u_ij + sign * u_i u_j)

for eta > 0, with the analytic ratio u_3/eta, and the exact block-diagonal
factorization at eta = 0.  Route agreement on random point sets is the
primary correctness certificate for the whole pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .family import EvalPoint, FamilyParams, Variant, _as_batch, _check_domain, eval_u, eval_z_batch, u3_over_eta
from .jets import Jet2
from .matkit import SymMatrix

__all__ = [
    "AugmentedEval",
    "assemble_W",
    "assemble_W_batch",
    "det_direct",
    "det_direct_batch",
    "det_reduced",
    "det_reduced_batch",
    "evaluate",
    "scaled_matrix",
    "scaled_matrix_batch",
    "scaled_identity_sides",
    "m_block_entries",
    "m_block_det_formula",
    "trailing_minor_formula",
]

ROUTE_GENERIC = "generic"
ROUTE_ETA_ZERO_BLOCK = "eta-zero-block"


def _det3(B: np.ndarray) -> np.ndarray:
    """Cofactor closed form for stacked 3x3 determinants (branch-free)."""
    return (
        B[..., 0, 0] * (B[..., 1, 1] * B[..., 2, 2] - B[..., 1, 2] * B[..., 2, 1])
        - B[..., 0, 1] * (B[..., 1, 0] * B[..., 2, 2] - B[..., 1, 2] * B[..., 2, 0])
        + B[..., 0, 2] * (B[..., 1, 0] * B[..., 2, 1] - B[..., 1, 1] * B[..., 2, 0])
    )


def assemble_W_batch(params: FamilyParams, X, allow_outside: bool = False) -> np.ndarray:
    """Augmented Hessians for a batch of points, shape (N, n, n)."""
    _, grad, hess = eval_z_batch(params, X, allow_outside)
    return hess + params.sign * grad[:, :, None] * grad[:, None, :]


def assemble_W(params: FamilyParams, p, allow_outside: bool = False) -> SymMatrix:
    """Augmented Hessian at a single point."""
    return SymMatrix(assemble_W_batch(params, p, allow_outside)[0])


def det_direct_batch(params: FamilyParams, X, allow_outside: bool = False) -> np.ndarray:
    return np.linalg.det(assemble_W_batch(params, X, allow_outside))


def det_direct(params: FamilyParams, p, allow_outside: bool = False) -> float:
    return float(det_direct_batch(params, p, allow_outside)[0])


def _reduced_u(params: FamilyParams, X: np.ndarray):
    m = params.smooth_dims
    eta = np.sqrt(np.sum(X[:, m:] ** 2, axis=1))
    return X[:, 0], X[:, 1], eta


def det_reduced_batch(params: FamilyParams, X, allow_outside: bool = False):
    """Reduced-route determinant values and per-point routes.

    Points whose trailing coordinates are all literal zeros take the exact
    eta = 0 block factorization; everything else takes the generic formula,
    which stays regular near eta = 0 because u_3/eta is analytic.
    """
    if params.variant is not Variant.FULL:
        raise ValueError("the determinant reduction applies to the full variant only")
    X = _as_batch(params, X)
    _check_domain(X, allow_outside)
    n = params.n
    x1, x2, eta = _reduced_u(params, X)
    zero = np.all(X[:, 2:] == 0.0, axis=1)

    u = eval_u(params, x1, x2, eta)
    B3 = u.hess + params.sign * u.grad[..., :, None] * u.grad[..., None, :]
    ratio = u3_over_eta(params, x1, x2, eta)
    values = ratio ** (n - 3) * _det3(B3)

    if np.any(zero):
        # Block route: 2x2 top determinant times the diagonal tail.
        A = B3[zero]
        det2 = A[:, 0, 0] * A[:, 1, 1] - A[:, 0, 1] * A[:, 1, 0]
        values[zero] = det2 * ratio[zero] ** (n - 2)
    routes = np.where(zero, ROUTE_ETA_ZERO_BLOCK, ROUTE_GENERIC)
    return values, routes


def det_reduced(params: FamilyParams, p, allow_outside: bool = False) -> float:
    values, _ = det_reduced_batch(params, p, allow_outside)
    return float(values[0])


@dataclass(frozen=True)
class AugmentedEval:
    """Both determinant routes at a point, with the assembled matrix."""

    W: SymMatrix
    det_direct: float
    det_reduced: float
    u_jet: Jet2
    route: str

    @property
    def residual(self) -> float:
        return abs(self.det_direct - self.det_reduced) / max(1.0, abs(self.det_direct))


def evaluate(params: FamilyParams, p, allow_outside: bool = False) -> AugmentedEval:
    X = _as_batch(params, p)
    W = assemble_W(params, X[0], allow_outside)
    dd = det_direct(params, X[0], allow_outside)
    values, routes = det_reduced_batch(params, X, allow_outside)
    x1, x2, eta = _reduced_u(params, X)
    u = eval_u(params, float(x1[0]), float(x2[0]), float(eta[0]))
    return AugmentedEval(W, dd, float(values[0]), u, str(routes[0]))


def scaled_matrix_batch(params: FamilyParams, X, allow_outside: bool = False) -> np.ndarray:
    """The 3x3 scaled matrix obtained by factoring r^alpha from rows 1-2,
    eta r^(alpha-2) from row 3, and eta/r^2 from column 3 of
    (u_ij + sign u_i u_j).  Requires eta > 0 (the (3,3) entry carries an
    explicit r^2/eta^2 term)."""
    if params.variant is not Variant.FULL:
        raise ValueError("the scaled matrix applies to the full variant only")
    X = _as_batch(params, X)
    _check_domain(X, allow_outside)
    a, s = params.alpha, params.sign
    x1, x2, eta = _reduced_u(params, X)
    if np.any(eta == 0.0):
        raise ValueError("the scaled matrix requires eta > 0")
    P1 = 1.0 + x1 * x1
    P2 = 1.0 + x2 * x2
    r2 = params.epsilon**2 + eta * eta
    ra = r2 ** (a / 2)

    m11 = 2.0 * P2 + s * 4.0 * x1 * x1 * P2 * P2 * ra
    m22 = 2.0 * P1 + s * 4.0 * x2 * x2 * P1 * P1 * ra
    m12 = 4.0 * x1 * x2 + s * 4.0 * x1 * x2 * P1 * P2 * ra
    m13 = 2.0 * a * x1 * P2 + s * 2.0 * a * x1 * P1 * P2 * P2 * ra
    m23 = 2.0 * a * x2 * P1 + s * 2.0 * a * x2 * P2 * P1 * P1 * ra
    m33 = (
        a * (a - 2.0) * P1 * P2
        + a * P1 * P2 * r2 / (eta * eta)
        + s * a * a * P1 * P1 * P2 * P2 * ra
    )
    M = np.empty((X.shape[0], 3, 3))
    M[:, 0, 0] = m11
    M[:, 1, 1] = m22
    M[:, 2, 2] = m33
    M[:, 0, 1] = M[:, 1, 0] = m12
    M[:, 0, 2] = M[:, 2, 0] = m13
    M[:, 1, 2] = M[:, 2, 1] = m23
    return M


def scaled_matrix(params: FamilyParams, p, allow_outside: bool = False) -> SymMatrix:
    return SymMatrix(scaled_matrix_batch(params, p, allow_outside)[0])


def scaled_identity_sides(params: FamilyParams, X, allow_outside: bool = False):
    """Both sides of the scaling identity, computed independently.

    Left: (u_3/eta)^(n-3) det3(u_ij + sign u_i u_j) from the reduced route.
    Right: [alpha (1+x1^2)(1+x2^2)]^(n-3) eta^2 r^(n alpha - 2n + 2) det M_scaled,
    with the exponent n*alpha - 2n + 2 kept symbolic (it vanishes for
    alpha = 2 - 2/n but is evaluated as written).
    """
    X = _as_batch(params, X)
    n, a = params.n, params.alpha
    x1, x2, eta = _reduced_u(params, X)
    lhs, _ = det_reduced_batch(params, X, allow_outside)
    M = scaled_matrix_batch(params, X, allow_outside)
    r2 = params.epsilon**2 + eta * eta
    P1 = 1.0 + x1 * x1
    P2 = 1.0 + x2 * x2
    smooth_pref = (a * P1 * P2) ** (n - 3)
    rhs = smooth_pref * eta * eta * r2 ** ((n * a - 2.0 * n + 2.0) / 2.0) * _det3(M)
    return lhs, rhs


def m_block_entries(params: FamilyParams, p, allow_outside: bool = False) -> np.ndarray:
    """The trailing (n-2) x (n-2) block of W from its closed-form layout:
    (u_3/eta) I + ((u_33 + sign u_3^2)/eta^2 - u_3/eta^3) x_i x_j.

    The scalar coefficients are evaluated analytically, so the formula is
    usable for any eta > 0."""
    X = _as_batch(params, p)
    x1, x2, eta = _reduced_u(params, X)
    if np.any(eta == 0.0):
        raise ValueError("the block layout requires eta > 0")
    ratio = u3_over_eta(params, x1, x2, eta)
    # (u_33 + s u_3^2)/eta^2 - u_3/eta^3 in analytic form
    a = params.alpha
    P = (1.0 + x1 * x1) * (1.0 + x2 * x2)
    r2 = params.epsilon**2 + eta * eta
    coef = a * (a - 2.0) * P * r2 ** (a / 2 - 2) + params.sign * ratio * ratio
    Xr = X[:, 2:]
    out = coef[:, None, None] * Xr[:, :, None] * Xr[:, None, :]
    idx = np.arange(params.n - 2)
    out[:, idx, idx] += ratio[:, None]
    return out


def m_block_det_formula(params: FamilyParams, p) -> np.ndarray:
    """det of the trailing block by the closed form (u_3/eta)^(n-3) (u_33 + sign u_3^2)."""
    X = _as_batch(params, p)
    x1, x2, eta = _reduced_u(params, X)
    u = eval_u(params, x1, x2, eta)
    ratio = u3_over_eta(params, x1, x2, eta)
    u33s = u.hess[..., 2, 2] + params.sign * u.grad[..., 2] ** 2
    return ratio ** (params.n - 3) * u33s


def trailing_minor_formula(params: FamilyParams, p) -> np.ndarray:
    """Closed form for det of the trailing (n-1) x (n-1) submatrix of W:
    [(u_22 + s u_2^2)(u_33 + s u_3^2) - (u_23 + s u_2 u_3)^2] (u_3/eta)^(n-3)."""
    X = _as_batch(params, p)
    s = params.sign
    x1, x2, eta = _reduced_u(params, X)
    u = eval_u(params, x1, x2, eta)
    g, H = u.grad, u.hess
    u22s = H[..., 1, 1] + s * g[..., 1] ** 2
    u33s = H[..., 2, 2] + s * g[..., 2] ** 2
    u23s = H[..., 1, 2] + s * g[..., 1] * g[..., 2]
    ratio = u3_over_eta(params, x1, x2, eta)
    return (u22s * u33s - u23s * u23s) * ratio ** (params.n - 3)
