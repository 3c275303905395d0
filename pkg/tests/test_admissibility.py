"""Positive-definiteness scans and closed-form minor residuals."""

import numpy as np
import pytest

from amcx.admissibility import (
    batch_leading_minors,
    certify_rho,
    minor_formula_check,
    minor_slice,
    sylvester_scan,
)
from amcx.family import FamilyParams
from amcx.points import random_ball


def test_batch_leading_minors_matches_numpy():
    rng = np.random.default_rng(71)
    for n in (2, 3, 4, 5, 6):
        A = rng.standard_normal((20, n, n))
        A = A + np.swapaxes(A, 1, 2)
        minors = batch_leading_minors(A)
        expected = np.stack(
            [np.linalg.det(A[:, :k, :k]) for k in range(1, n + 1)], axis=1
        )
        assert np.allclose(minors, expected, rtol=1e-10, atol=1e-12)


def test_scan_certifies_both_signs():
    for sign in (1, -1):
        rep = sylvester_scan(FamilyParams(3, 1e-3, sign), 0.1, grid_res=9, random_count=100)
        assert rep.certified
        assert rep.verdict == "Certified"
        assert rep.block_agreement
        assert rep.min_eigenvalue > 0.0
        assert all(m > 0.0 for m in rep.min_minors)
        assert rep.min_det_scaled > 0.0
        assert rep.witness is None


def test_scan_small_epsilon_tiny_top_minors():
    # At eps = 1e-4 the 2x2 top minor is ~(2 eps^a)^2 while the tail diagonal
    # is ~a eps^(a-2); the per-submatrix margins must still certify.
    rep = sylvester_scan(FamilyParams(4, 1e-4, -1), 0.1, grid_res=9, random_count=100)
    assert rep.certified
    assert rep.min_minors[1] < 1e-9 < rep.min_eigenvalue * 1e3


def test_minor_formula_residuals():
    rng = np.random.default_rng(73)
    for n in (3, 4, 5):
        for sign in (1, -1):
            params = FamilyParams(n, 1e-2, sign)
            X = random_ball(n, 0.2, 300, rng)
            X = X[np.linalg.norm(X[:, 2:], axis=1) >= 1e-3]
            res = minor_formula_check(params, X)
            assert res["max_residual"] <= 1e-9


def test_minor_formula_requires_eta_positive():
    params = FamilyParams(3, 0.1, 1)
    with pytest.raises(ValueError):
        minor_formula_check(params, [0.1, 0.1, 0.0])


def test_certify_rho_ladder():
    res = certify_rho(
        3,
        rho_ladder=(0.05, 0.1),
        eps_list=(1e-1, 1e-2, 1e-3),
        grid_res=9,
        random_count=100,
    )
    assert res.rho_star_by_sign == {1: 0.1, -1: 0.1}
    assert res.rho_star == 0.1
    assert res.failures == []
    assert res.eps_min == 1e-3


def test_minor_slice_shape():
    data = minor_slice(FamilyParams(3, 1e-2, 1), 0.1, res=9)
    grid = np.asarray(data["min_minor"])
    assert grid.shape == (9, 9)
    assert np.all(grid > 0.0)
