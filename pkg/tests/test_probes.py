"""Regularity probes: exact jets of f, blow-up, sweeps, negative control."""

import numpy as np
import pytest

from amcx.augmented import det_direct_batch
from amcx.family import FamilyParams, Variant
from amcx.points import random_ball
from amcx.probes import (
    blowup_probe,
    f_jet,
    holder_probe,
    holder_quotients,
    remark1_probe,
    stabilized_index,
    uniform_c2_sweep,
)
from conftest import fd_grad, fd_hess


def test_f_jet_value_matches_direct_determinant():
    rng = np.random.default_rng(59)
    for n in (3, 4):
        for sign in (1, -1):
            params = FamilyParams(n, 0.01, sign)
            X = random_ball(n, 0.3, 200, rng)
            jet = f_jet(params, X)
            dd = det_direct_batch(params, X)
            assert np.abs(jet.value - dd).max() <= 1e-12 * max(1.0, np.abs(dd).max())


def test_f_jet_derivatives_match_finite_differences():
    # FD is only trustworthy well away from the eta axis, where f is smooth
    # on the FD stencil scale.
    params = FamilyParams(3, 0.1, 1)

    def f(x):
        return float(det_direct_batch(params, x)[0])

    rng = np.random.default_rng(61)
    for _ in range(5):
        x = rng.uniform(-0.2, 0.2, 3)
        x[2] = np.sign(x[2] or 1.0) * (0.05 + abs(x[2]))
        jet = f_jet(params, x)
        assert np.allclose(jet.grad[0], fd_grad(f, x), rtol=1e-5, atol=1e-8)
        assert np.allclose(jet.hess[0], fd_hess(f, x), rtol=1e-3, atol=1e-5)


def test_f_jet_chunking_is_seamless():
    params = FamilyParams(3, 0.1, 1)
    X = random_ball(3, 0.2, 50, np.random.default_rng(67))
    whole = f_jet(params, X)
    chunked = f_jet(params, X, chunk=7)
    assert np.array_equal(whole.value, chunked.value)
    assert np.array_equal(whole.hess, chunked.hess)


def test_f_origin_closed_form():
    # f(0) = det of diag(2 eps^a, 2 eps^a, a eps^(a-2) I) + sign * 0
    #      = 4 a^(n-2) eps^(2a + (a-2)(n-2)) and the exponent is exactly 2.
    for n in (3, 4, 5):
        a = 2.0 - 2.0 / n
        assert 2 * a + (a - 2.0) * (n - 2) == pytest.approx(2.0, abs=1e-15)
        for eps in (1e-1, 1e-3):
            params = FamilyParams(n, eps, 1)
            f0 = float(f_jet(params, np.zeros(n)).value[0])
            assert f0 == pytest.approx(4.0 * a ** (n - 2) * eps * eps, rel=1e-12)


def test_stabilized_index():
    assert stabilized_index([10.0, 5.0, 4.0, 4.001, 4.0]) == 2
    assert stabilized_index([3.0, 2.0, 1.0]) == 2
    assert stabilized_index([1.0, 1.0]) == 0


def test_blowup_probe():
    rep = blowup_probe(3, 1, (1e-1, 1e-2, 1e-3))
    assert rep.passed
    assert rep.max_rel_err <= 1e-12
    assert rep.slope == pytest.approx(-2.0 / 3.0, abs=1e-9)
    with pytest.raises(ValueError):
        blowup_probe(3, 1, (1e-2, 1e-1))


def test_uniform_c2_sweep_small():
    rep = uniform_c2_sweep(3, 1, rho=0.1, grid_res=9, eps_list=(1e-1, 1e-2, 1e-3, 1e-4), random_count=50)
    assert rep.c2_pass
    sups = [r.sup_d2f for r in rep.records]
    assert max(sups) <= 1.05 * rep.c2_bound
    for r in rep.records:
        assert r.f_origin == pytest.approx(r.f_origin_expected, rel=1e-10)
    with pytest.raises(ValueError):
        uniform_c2_sweep(3, 1, rho=0.3)
    with pytest.raises(ValueError):
        uniform_c2_sweep(3, 1, grid_res=10)


def test_holder_quotients_helper():
    X = np.array([[0.0, 0.0], [1.0, 0.0]])
    Y = np.array([[0.0, 0.0], [0.0, 0.0]])
    q = holder_quotients(lambda P: P * 2.0, X, Y, 0.5)
    # Coincident pairs are dropped; |2x - 2y| / |x - y|^0.5 = 2 at distance 1.
    assert q.shape == (1,)
    assert q[0] == pytest.approx(2.0)


def test_holder_probe_small():
    rep = holder_probe(3, 1, pair_count=1000, eps_list=(1e-1, 1e-2, 1e-3, 1e-4))
    assert rep.exponent == pytest.approx(1.0 / 3.0)
    assert rep.passed
    # Quotients grow toward the limit profile and then level off.
    assert rep.max_quotients[-1] >= rep.max_quotients[0]
    with pytest.raises(ValueError):
        holder_probe(3, 1, pair_count=10)


def test_remark1_probe_detects_failure():
    rep = remark1_probe()
    assert rep.passed
    assert rep.growth_passed and all(r >= 3.0 for r in rep.growth_ratios)
    assert rep.slope == pytest.approx(-2.0 / 3.0, abs=0.05)
    assert rep.control_passed
    # The blow-up is monotone along eta -> 0.
    assert rep.d2f[0] < rep.d2f[1] < rep.d2f[2]


def test_remark1_f_has_c2_failing_term():
    # |D^2 f| in the eta directions grows like eta^(-2/3) for the simpler
    # ansatz: two decades of eta multiply it by ~10^(4/3) each.
    params = FamilyParams(3, 0.0, 1, Variant.REMARK1)
    P = np.array([[0.2, 1e-2, 0.0], [0.2, 1e-4, 0.0]])
    h = f_jet(params, P).hess
    ratio = np.abs(h[1, 1:, 1:]).max() / np.abs(h[0, 1:, 1:]).max()
    assert ratio == pytest.approx(10 ** (4.0 / 3.0), rel=0.05)
