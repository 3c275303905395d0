"""Second-order forward-mode jet arithmetic.

A :class:`Jet2` carries the value, gradient, and symmetric Hessian of a
scalar field with respect to ``d`` active variables, and propagates all
three exactly through arithmetic and powers.  Values may be numpy batches:
``value`` has an arbitrary leading shape ``S``, ``grad`` has shape
``S + (d,)`` and ``hess`` has shape ``S + (d, d)``.

Jets serve as the independent differentiation oracle for every closed-form
derivative in this package: a formula evaluated in jet arithmetic yields
its exact first and second derivatives with no finite differencing.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

__all__ = ["Jet2", "JetError", "jet_var", "jet_const", "jet_arith", "jet_pow", "jet_det"]


class JetError(ValueError):
    """Invalid jet construction or operation."""


def _symmetrize(h: np.ndarray) -> np.ndarray:
    # Rebuild from the upper triangle so entries [i, j] and [j, i] are
    # bit-identical even if the input drifted.
    return np.triu(h) + np.swapaxes(np.triu(h, 1), -1, -2)


_SCALARS = (int, float, np.integer, np.floating)


@dataclass(frozen=True)
class Jet2:
    """Value, gradient, and symmetric Hessian of a scalar field at a point."""

    value: np.ndarray
    grad: np.ndarray
    hess: np.ndarray

    def __post_init__(self):
        value = np.asarray(self.value, dtype=float)
        grad = np.asarray(self.grad, dtype=float)
        hess = np.asarray(self.hess, dtype=float)
        d = grad.shape[-1]
        if grad.shape != value.shape + (d,) or hess.shape != value.shape + (d, d):
            raise JetError(
                f"inconsistent jet shapes: value {value.shape}, "
                f"grad {grad.shape}, hess {hess.shape}"
            )
        if not (np.isfinite(value).all() and np.isfinite(grad).all() and np.isfinite(hess).all()):
            raise JetError("non-finite entries in jet")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "grad", grad)
        object.__setattr__(self, "hess", _symmetrize(hess))

    @classmethod
    def _raw(cls, value, grad, hess) -> "Jet2":
        # Internal fast path for arithmetic results.  Every operation below
        # maps exactly-symmetric Hessians to exactly-symmetric Hessians
        # (outer-product cross terms are built symmetrically), so the
        # construction-time symmetrization and finiteness checks are
        # deferred to the next public construction.
        jet = object.__new__(cls)
        object.__setattr__(jet, "value", value)
        object.__setattr__(jet, "grad", grad)
        object.__setattr__(jet, "hess", hess)
        return jet

    def validated(self) -> "Jet2":
        """Re-run construction checks (finiteness, symmetry)."""
        return Jet2(self.value, self.grad, self.hess)

    @property
    def d(self) -> int:
        """Number of active variables."""
        return self.grad.shape[-1]

    def _check_compatible(self, other: "Jet2"):
        if self.d != other.d:
            raise JetError(f"jet dimension mismatch: {self.d} vs {other.d}")

    # -- arithmetic ---------------------------------------------------------


    def __add__(self, other):
        if isinstance(other, _SCALARS):
            return Jet2._raw(self.value + other, self.grad, self.hess)
        self._check_compatible(other)
        return Jet2._raw(
            self.value + other.value, self.grad + other.grad, self.hess + other.hess
        )

    __radd__ = __add__

    def __neg__(self):
        return Jet2._raw(-self.value, -self.grad, -self.hess)

    def __sub__(self, other):
        if isinstance(other, _SCALARS):
            return Jet2._raw(self.value - other, self.grad, self.hess)
        self._check_compatible(other)
        return Jet2._raw(
            self.value - other.value, self.grad - other.grad, self.hess - other.hess
        )

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            return Jet2._raw(self.value * other, self.grad * other, self.hess * other)
        self._check_compatible(other)
        av = self.value[..., None]
        bv = other.value[..., None]
        cross = self.grad[..., :, None] * other.grad[..., None, :]
        cross += np.swapaxes(cross, -1, -2).copy()  # symmetric before accumulating
        h = self.hess * bv[..., None]
        h += other.hess * av[..., None]
        h += cross
        return Jet2._raw(
            self.value * other.value,
            self.grad * bv + other.grad * av,
            h,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            return self * (1.0 / other)
        return self * other._reciprocal()

    def __rtruediv__(self, other):
        return self._reciprocal() * other

    def _reciprocal(self) -> "Jet2":
        if np.any(self.value == 0.0):
            raise JetError("jet division by zero value")
        inv = 1.0 / self.value
        inv2 = inv * inv
        g = -self.grad * inv2[..., None]
        cross = self.grad[..., :, None] * self.grad[..., None, :]
        h = -self.hess * inv2[..., None, None] + 2.0 * cross * (inv2 * inv)[..., None, None]
        return Jet2._raw(inv, g, h)

    def __pow__(self, p):
        return jet_pow(self, p)


def jet_var(index: int, value, d: int) -> Jet2:
    """Seed jet for the active variable ``index`` of ``d``."""
    if not 0 <= index < d:
        raise JetError(f"variable index {index} out of range for d={d}")
    value = np.asarray(value, dtype=float)
    grad = np.zeros(value.shape + (d,))
    grad[..., index] = 1.0
    return Jet2(value, grad, np.zeros(value.shape + (d, d)))


def jet_const(value, d: int) -> Jet2:
    """Constant jet (zero gradient and Hessian)."""
    value = np.asarray(value, dtype=float)
    return Jet2(value, np.zeros(value.shape + (d,)), np.zeros(value.shape + (d, d)))


def jet_arith(a: Jet2, b: Jet2, op: str) -> Jet2:
    """Binary jet arithmetic; ``op`` is one of add, sub, mul, div."""
    try:
        fn = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}[op]
    except KeyError:
        raise JetError(f"unknown jet operation {op!r}") from None
    return fn(b)


def jet_pow(a: Jet2, p: float) -> Jet2:
    """Real power of a jet via the chain rule.

    Non-integer exponents require a strictly positive base value.
    """
    p = float(p)
    if p == round(p):
        p = round(p)
    elif np.any(a.value <= 0.0):
        raise JetError(f"non-positive base for fractional exponent {p}")
    v = np.power(a.value, p)
    d1 = p * np.power(a.value, p - 1)
    d2 = p * (p - 1) * np.power(a.value, p - 2)
    cross = a.grad[..., :, None] * a.grad[..., None, :]
    return Jet2._raw(
        v,
        a.grad * d1[..., None],
        a.hess * d1[..., None, None] + cross * d2[..., None, None],
    )


def jet_det(entries) -> Jet2:
    """Determinant of a square matrix of jets.

    Expansion by minors with shared sub-minors over column subsets
    (O(n 2^n) jet multiplications); intended for small n.
    """
    n = len(entries)
    if any(len(row) != n for row in entries):
        raise JetError("jet_det requires a square matrix of jets")
    if n == 1:
        return entries[0][0]
    minors = {1 << j: entries[0][j] for j in range(n)}
    for k in range(1, n):
        level = {}
        for cols in combinations(range(n), k + 1):
            mask = 0
            for c in cols:
                mask |= 1 << c
            acc = None
            for pos, j in enumerate(cols):
                term = entries[k][j] * minors[mask ^ (1 << j)]
                if (k + pos) % 2:
                    term = -term
                acc = term if acc is None else acc + term
            level[mask] = acc
        minors = level
    return minors[(1 << n) - 1]
