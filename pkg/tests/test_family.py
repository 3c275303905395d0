"""Closed-form family derivatives against the jet-arithmetic oracle."""

import numpy as np
import pytest

from amcx.family import (
    DomainError,
    EvalPoint,
    FamilyParams,
    Variant,
    eval_u,
    eval_u_oracle,
    eval_z,
    eval_z_batch,
    eval_z_oracle,
    u3_over_eta,
)


def _random_points(rng, n, count, rho=0.4):
    g = rng.standard_normal((count, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * (rho * rng.random((count, 1)) ** (1.0 / n))


def test_params_validation():
    with pytest.raises(ValueError):
        FamilyParams(2, 0.1, 1)
    with pytest.raises(ValueError):
        FamilyParams(3, 0.1, 2)
    with pytest.raises(ValueError):
        FamilyParams(3, 0.0, 1)
    with pytest.raises(ValueError):
        FamilyParams(4, 0.0, 1, Variant.REMARK1)
    with pytest.raises(ValueError):
        FamilyParams(3, 0.1, 1, Variant.REMARK1)
    assert FamilyParams(5, 0.01, -1).alpha == pytest.approx(2.0 - 2.0 / 5)
    assert FamilyParams(3, 0.0, 1, Variant.REMARK1).alpha == pytest.approx(4.0 / 3.0)


def test_eval_point_reduced_coordinates():
    params = FamilyParams(4, 0.1, 1)
    p = EvalPoint.make(params, [0.1, 0.2, 0.3, 0.4])
    assert p.eta == pytest.approx(np.hypot(0.3, 0.4))
    assert p.r == pytest.approx(np.sqrt(p.eta**2 + 0.01))
    with pytest.raises(ValueError):
        EvalPoint.make(params, [0.1, 0.2, 0.3])


def test_hand_derivatives_match_jet_oracle():
    rng = np.random.default_rng(23)
    for n in (3, 4, 5):
        for eps in (0.1, 1e-3):
            params = FamilyParams(n, eps, 1)
            X = _random_points(rng, n, 200)
            val, grad, hess = eval_z_batch(params, X)
            oracle = eval_z_oracle(params, X)
            assert np.allclose(val, oracle.value, rtol=1e-13)
            assert np.allclose(grad, oracle.grad, rtol=1e-12, atol=1e-15)
            assert np.allclose(hess, oracle.hess, rtol=1e-12, atol=1e-13 * np.abs(oracle.hess).max())


def test_remark1_hand_derivatives_match_jet_oracle():
    rng = np.random.default_rng(29)
    params = FamilyParams(3, 0.0, 1, Variant.REMARK1)
    X = _random_points(rng, 3, 200)
    X = X[np.hypot(X[:, 1], X[:, 2]) > 1e-3]
    val, grad, hess = eval_z_batch(params, X)
    oracle = eval_z_oracle(params, X)
    assert np.allclose(val, oracle.value, rtol=1e-13)
    assert np.allclose(grad, oracle.grad, rtol=1e-11, atol=1e-14)
    assert np.allclose(hess, oracle.hess, rtol=1e-10, atol=1e-12 * np.abs(oracle.hess).max())


def test_remark1_rejects_eta_zero():
    params = FamilyParams(3, 0.0, 1, Variant.REMARK1)
    with pytest.raises(DomainError):
        eval_z_batch(params, [0.2, 0.0, 0.0])


def test_origin_values():
    for n in (3, 4, 5):
        eps = 0.1
        params = FamilyParams(n, eps, 1)
        jet = eval_z(params, np.zeros(n))
        a = params.alpha
        assert jet.value == pytest.approx(eps**a, rel=1e-15)
        assert not jet.grad.any()
        assert jet.hess[0, 0] == pytest.approx(2.0 * eps**a, rel=1e-15)
        assert jet.hess[1, 1] == pytest.approx(2.0 * eps**a, rel=1e-15)
        # The radial second derivative carries the blow-up rate eps^(alpha-2).
        for k in range(2, n):
            assert jet.hess[k, k] == pytest.approx(a * eps ** (a - 2.0), rel=1e-15)


def test_domain_guard():
    params = FamilyParams(3, 0.1, 1)
    with pytest.raises(DomainError):
        eval_z_batch(params, [0.6, 0.0, 0.0])
    eval_z_batch(params, [0.6, 0.0, 0.0], allow_outside=True)


def test_reduced_u_matches_oracle_and_full():
    rng = np.random.default_rng(31)
    params = FamilyParams(4, 0.01, -1)
    x1, x2, eta = rng.uniform(-0.3, 0.3, (3, 100))
    eta = np.abs(eta)
    u = eval_u(params, x1, x2, eta)
    o = eval_u_oracle(params, x1, x2, eta)
    assert np.allclose(u.value, o.value, rtol=1e-13)
    assert np.allclose(u.grad, o.grad, rtol=1e-12, atol=1e-15)
    assert np.allclose(u.hess, o.hess, rtol=1e-11, atol=1e-12 * np.abs(o.hess).max())
    # Consistency with the full-coordinate Hessian on the eta axis.
    X = np.stack([x1, x2, eta, np.zeros(100)], axis=1)
    _, grad, hess = eval_z_batch(params, X)
    assert np.allclose(grad[:, 2], u.grad[:, 2], rtol=1e-13, atol=1e-16)
    assert np.allclose(hess[:, 2, 2], u.hess[:, 2, 2], rtol=1e-12, atol=1e-14)


def test_u3_over_eta_is_analytic_at_zero():
    params = FamilyParams(3, 0.01, 1)
    at_zero = float(u3_over_eta(params, 0.1, 0.2, 0.0))
    a = params.alpha
    expected = a * 1.01 * 1.04 * (0.01**2) ** (a / 2 - 1)
    assert at_zero == pytest.approx(expected, rel=1e-15)
    # Matches the finite ratio u_3 / eta for small eta.
    eta = 1e-8
    u = eval_u(params, 0.1, 0.2, eta)
    assert float(u.grad[2]) / eta == pytest.approx(at_zero, rel=1e-7)
