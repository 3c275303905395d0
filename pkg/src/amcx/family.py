"""Closed-form evaluators for the counterexample family.

Two variants are supported:

* ``FULL``: z(x) = (1+x1^2)(1+x2^2)(eps^2 + eta^2)^(alpha/2) with
  eta^2 = x3^2 + ... + xn^2 and alpha = 2 - 2/n.  Smooth for eps > 0.
* ``REMARK1``: the simpler negative-control ansatz z(x) = (1+x1^2) eta^alpha
  with eta^2 = x2^2 + ... + xn^2, n = 3, alpha = 4/3, no eps.  Its augmented
  determinant provably fails to be C^2 at eta = 0, which the probes confirm.

Every first and second derivative is available both from the hand-derived
closed forms below (fully analytic, no division by eta) and from jet
arithmetic applied to the defining formula (the independent oracle).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .jets import Jet2, jet_const, jet_var

__all__ = [
    "Variant",
    "FamilyParams",
    "EvalPoint",
    "DomainError",
    "eval_z",
    "eval_z_batch",
    "eval_z_oracle",
    "eval_u",
    "eval_u_oracle",
    "u3_over_eta",
]

#: Evaluation is local to the origin; callers must opt in beyond this radius.
DOMAIN_RADIUS = 0.5


class DomainError(ValueError):
    """Point outside the supported evaluation domain."""


class Variant(enum.Enum):
    FULL = "full"
    REMARK1 = "remark1"


@dataclass(frozen=True)
class FamilyParams:
    """Dimension, regularization, equation sign, and ansatz variant.

    ``sign`` is the sign of the rank-one gradient term in the augmented
    Hessian D^2 z + sign * Dz (x) Dz.
    """

    n: int
    epsilon: float
    sign: int
    variant: Variant = Variant.FULL

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("dimension n must be >= 3")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.variant is Variant.FULL:
            if not self.epsilon > 0.0:
                raise ValueError("epsilon must be positive for the full variant")
        else:
            if self.n != 3:
                raise ValueError("the negative-control variant is defined for n = 3 only")
            if self.epsilon != 0.0:
                raise ValueError("the negative-control variant has no epsilon (use 0.0)")

    @property
    def alpha(self) -> float:
        if self.variant is Variant.FULL:
            return 2.0 - 2.0 / self.n
        return 4.0 / 3.0

    @property
    def smooth_dims(self) -> int:
        """Number of leading polynomial directions (the rest feed eta)."""
        return 2 if self.variant is Variant.FULL else 1


@dataclass(frozen=True)
class EvalPoint:
    """A point with cached reduced coordinates (x1, x2, eta, r)."""

    coords: tuple
    x1: float
    x2: float
    eta: float
    r: float

    @classmethod
    def make(cls, params: FamilyParams, coords) -> "EvalPoint":
        coords = tuple(float(c) for c in coords)
        if len(coords) != params.n:
            raise ValueError(f"expected {params.n} coordinates, got {len(coords)}")
        m = params.smooth_dims
        eta = math.sqrt(sum(c * c for c in coords[m:]))
        r = math.sqrt(eta * eta + params.epsilon**2)
        return cls(coords, coords[0], coords[1], eta, r)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coords)


def _check_domain(X: np.ndarray, allow_outside: bool):
    if not allow_outside and np.any(np.sum(X * X, axis=-1) > DOMAIN_RADIUS**2 * (1 + 1e-12)):
        raise DomainError(
            f"point outside |x| <= {DOMAIN_RADIUS}; pass allow_outside=True to override"
        )


def _as_batch(params: FamilyParams, p) -> np.ndarray:
    if isinstance(p, EvalPoint):
        return p.array[None, :]
    X = np.asarray(p, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[-1] != params.n:
        raise ValueError(f"expected {params.n} coordinates, got {X.shape[-1]}")
    return X


def eval_z_batch(params: FamilyParams, X, allow_outside: bool = False):
    """Hand-derived value, gradient, and Hessian of z on a batch of points.

    Returns arrays of shapes (N,), (N, n), (N, n, n).  All formulas are
    analytic in the coordinates (the apparent 1/eta factors cancel), so the
    full variant is valid down to eta = 0.  The negative-control variant
    requires eta > 0.
    """
    X = _as_batch(params, X)
    _check_domain(X, allow_outside)
    n, m, a = params.n, params.smooth_dims, params.alpha
    N = X.shape[0]
    Xr = X[:, m:]

    Q = params.epsilon**2 + np.sum(Xr * Xr, axis=1)
    if np.any(Q == 0.0):
        raise DomainError("eta = 0 is singular for the negative-control variant")
    A = Q ** (a / 2)
    B = Q ** (a / 2 - 1)
    C = Q ** (a / 2 - 2)

    Pi = [1.0 + X[:, i] ** 2 for i in range(m)]
    P = Pi[0] if m == 1 else Pi[0] * Pi[1]
    # product of the (1 + xi^2) factors other than i
    other = (lambda i: Pi[1 - i]) if m == 2 else (lambda i: np.ones(N))

    val = P * A
    grad = np.zeros((N, n))
    for i in range(m):
        grad[:, i] = 2.0 * X[:, i] * other(i) * A
    grad[:, m:] = (a * P * B)[:, None] * Xr

    hess = np.zeros((N, n, n))
    for i in range(m):
        hess[:, i, i] = 2.0 * other(i) * A
    if m == 2:
        h12 = 4.0 * X[:, 0] * X[:, 1] * A
        hess[:, 0, 1] = h12
        hess[:, 1, 0] = h12
    for i in range(m):
        row = (2.0 * a * X[:, i] * other(i) * B)[:, None] * Xr
        hess[:, i, m:] = row
        hess[:, m:, i] = row
    outer = Xr[:, :, None] * Xr[:, None, :]
    block = (a * (a - 2.0) * P * C)[:, None, None] * outer
    idx = np.arange(m, n)
    block[:, idx - m, idx - m] += (a * P * B)[:, None]
    hess[:, m:, m:] = block
    return val, grad, hess


def eval_z(params: FamilyParams, p, allow_outside: bool = False) -> Jet2:
    """Hand-derived jet of z at a single point (d = n active variables)."""
    val, grad, hess = eval_z_batch(params, p, allow_outside)
    return Jet2(val[0], grad[0], hess[0])


def _z_formula_jets(params: FamilyParams, xs):
    """z evaluated by jet arithmetic from its defining formula."""
    m, a = params.smooth_dims, params.alpha
    Q = None
    for x in xs[m:]:
        sq = x * x
        Q = sq if Q is None else Q + sq
    Q = Q + params.epsilon**2
    z = Q ** (a / 2)
    for i in range(m):
        z = (xs[i] * xs[i] + 1.0) * z
    return z


def eval_z_oracle(params: FamilyParams, X, allow_outside: bool = False) -> Jet2:
    """Jet-oracle evaluation of z: differentiates the defining formula."""
    X = _as_batch(params, X)
    _check_domain(X, allow_outside)
    n = params.n
    xs = [jet_var(i, X[:, i], n) for i in range(n)]
    return _z_formula_jets(params, xs)


def eval_u(params: FamilyParams, x1, x2, eta) -> Jet2:
    """Reduced 3-variable jet (u, u_i, u_ij) with variables (x1, x2, eta).

    Full variant only; all entries are the hand-derived closed forms.
    Accepts scalars or equal-shaped arrays.
    """
    if params.variant is not Variant.FULL:
        raise ValueError("the reduced 3-variable form exists for the full variant only")
    a = params.alpha
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if np.any(eta < 0.0):
        raise ValueError("eta must be non-negative")
    P1 = 1.0 + x1 * x1
    P2 = 1.0 + x2 * x2
    Q = params.epsilon**2 + eta * eta
    A = Q ** (a / 2)
    B = Q ** (a / 2 - 1)
    C = Q ** (a / 2 - 2)

    val = P1 * P2 * A
    grad = np.stack(
        [2.0 * x1 * P2 * A, 2.0 * x2 * P1 * A, a * P1 * P2 * eta * B], axis=-1
    )
    u11 = 2.0 * P2 * A
    u22 = 2.0 * P1 * A
    u12 = 4.0 * x1 * x2 * A
    u13 = 2.0 * a * x1 * P2 * eta * B
    u23 = 2.0 * a * x2 * P1 * eta * B
    u33 = a * (a - 2.0) * P1 * P2 * eta * eta * C + a * P1 * P2 * B
    hess = np.stack(
        [
            np.stack([u11, u12, u13], axis=-1),
            np.stack([u12, u22, u23], axis=-1),
            np.stack([u13, u23, u33], axis=-1),
        ],
        axis=-2,
    )
    return Jet2(val, grad, hess)


def eval_u_oracle(params: FamilyParams, x1, x2, eta) -> Jet2:
    """Jet-oracle evaluation of u(x1, x2, eta) from its defining formula."""
    if params.variant is not Variant.FULL:
        raise ValueError("the reduced 3-variable form exists for the full variant only")
    a = params.alpha
    j1 = jet_var(0, np.asarray(x1, dtype=float), 3)
    j2 = jet_var(1, np.asarray(x2, dtype=float), 3)
    j3 = jet_var(2, np.asarray(eta, dtype=float), 3)
    Q = j3 * j3 + params.epsilon**2
    return (j1 * j1 + 1.0) * (j2 * j2 + 1.0) * Q ** (a / 2)


def u3_over_eta(params: FamilyParams, x1, x2, eta):
    """The analytic ratio u_3 / eta = alpha (1+x1^2)(1+x2^2) r^(alpha-2).

    The explicit eta factor of u_3 is cancelled symbolically, so the result
    is finite and smooth down to eta = 0.
    """
    if params.variant is not Variant.FULL:
        raise ValueError("the reduced 3-variable form exists for the full variant only")
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    eta = np.asarray(eta, dtype=float)
    a = params.alpha
    Q = params.epsilon**2 + eta * eta
    return a * (1.0 + x1 * x1) * (1.0 + x2 * x2) * Q ** (a / 2 - 1)
