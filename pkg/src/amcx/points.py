"""Scan point sets: lattices, seeded random ball samples, and the axis
segment along the first radial coordinate (where regularity is hardest).

The evaluated fields depend on the trailing coordinates only through
eta^2, so sup/min reductions over a full lattice equal the reductions over
a symmetry-reduced lattice:

* ``reduce="signs"`` keeps non-negative trailing coordinates (sign flips
  leave every sup/min and every leading minor bit-exactly unchanged);
* ``reduce="sorted"`` additionally keeps only sorted trailing coordinates
  (permutations change reductions only by summation-order roundoff, so this
  is used for sup-norm sweeps with percent-level tolerances, not for minor
  reports).
"""

from __future__ import annotations

from itertools import combinations_with_replacement, product

import numpy as np

__all__ = ["inscribed_lattice", "random_ball", "axis_segment", "scan_set"]


def inscribed_lattice(n: int, smooth_dims: int, rho: float, grid_res: int, reduce: str | None = "signs") -> np.ndarray:
    """Uniform lattice over the cube inscribed in the ball of radius rho."""
    if grid_res < 3 or grid_res % 2 == 0:
        raise ValueError("grid_res must be odd and >= 3 (the lattice must contain the origin)")
    h = rho / np.sqrt(n)
    full = np.linspace(-h, h, grid_res)
    full[grid_res // 2] = 0.0  # exact origin despite linspace rounding
    nonneg = full[grid_res // 2 :]
    m = smooth_dims
    k = n - m
    if reduce is None:
        trailing = list(product(full, repeat=k))
    elif reduce == "signs":
        trailing = list(product(nonneg, repeat=k))
    elif reduce == "sorted":
        trailing = [t[::-1] for t in combinations_with_replacement(nonneg, k)]
    else:
        raise ValueError(f"unknown reduction {reduce!r}")
    trailing = np.asarray(trailing)
    smooth = np.asarray(list(product(full, repeat=m)))
    out = np.empty((len(smooth) * len(trailing), n))
    out[:, :m] = np.repeat(smooth, len(trailing), axis=0)
    out[:, m:] = np.tile(trailing, (len(smooth), 1))
    return out


def random_ball(n: int, rho: float, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform sample from the ball of radius rho."""
    g = rng.standard_normal((count, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    radii = rho * rng.random(count) ** (1.0 / n)
    return g * radii[:, None]


def axis_segment(n: int, smooth_dims: int, rho: float, count: int = 50) -> np.ndarray:
    """Points (0, ..., 0, t, 0, ..., 0) with t on the first radial axis,
    including the origin."""
    out = np.zeros((count, n))
    out[:, smooth_dims] = np.linspace(0.0, rho, count)
    return out


def scan_set(
    n: int,
    smooth_dims: int,
    rho: float,
    grid_res: int,
    seed: int,
    random_count: int,
    axis_count: int = 50,
    reduce: str | None = "signs",
) -> np.ndarray:
    """Lattice + axis segment + seeded random points, concatenated."""
    rng = np.random.default_rng(seed)
    return np.concatenate(
        [
            inscribed_lattice(n, smooth_dims, rho, grid_res, reduce),
            axis_segment(n, smooth_dims, rho, axis_count),
            random_ball(n, rho, random_count, rng),
        ]
    )
