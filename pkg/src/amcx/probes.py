"""Numerical probes for the four regularity claims and the negative control.

``f_jet`` runs the entire assemble-and-determinant pipeline in second-order
jet arithmetic, so the gradient and Hessian of f(x) = det(W(x)) are exact
to rounding; no finite differences touch the sensitive region.  The sweep
probes then reduce sup-norms over scan sets across a decreasing epsilon
list and test the empirical uniformity criterion: the sweep maximum may
exceed the first epsilon-stabilized level (successor change < 1%) by at
most 5%.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .family import FamilyParams, Variant, _as_batch, _check_domain, eval_z_batch
from .jets import Jet2, jet_det, jet_var
from .points import axis_segment, random_ball, scan_set

__all__ = [
    "f_jet",
    "blowup_probe",
    "uniform_c2_sweep",
    "holder_probe",
    "holder_quotients",
    "remark1_probe",
    "stabilized_index",
    "BlowupReport",
    "SweepReport",
    "HolderReport",
    "Remark1Report",
]

DEFAULT_EPS_LIST = (1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4)
DEFAULT_RHO = 0.1
DEFAULT_GRID_RES = 33
DEFAULT_SEED = 42

#: Uniformity criterion: stabilization threshold and allowed excess.
STABILIZE_TOL = 0.01
UNIFORM_SLACK = 1.05


def _entry_jets(params: FamilyParams, X: np.ndarray):
    """Jets of the gradient components and Hessian entries of z (d = n)."""
    n, m, a, eps = params.n, params.smooth_dims, params.alpha, params.epsilon
    xs = [jet_var(i, X[:, i], n) for i in range(n)]
    Q = None
    for x in xs[m:]:
        sq = x * x
        Q = sq if Q is None else Q + sq
    Q = Q + eps * eps
    A = Q ** (a / 2)
    B = Q ** (a / 2 - 1)
    C = Q ** (a / 2 - 2)
    Pi = [xs[i] * xs[i] + 1.0 for i in range(m)]
    P = Pi[0] if m == 1 else Pi[0] * Pi[1]
    other = (lambda i: Pi[1 - i]) if m == 2 else (lambda i: 1.0)

    aPB = a * (P * B)
    D = (a * (a - 2.0)) * (P * C)

    g = [None] * n
    for i in range(m):
        g[i] = 2.0 * (xs[i] * (other(i) * A)) if m == 2 else 2.0 * (xs[i] * A)
    for k in range(m, n):
        g[k] = aPB * xs[k]

    H = [[None] * n for _ in range(n)]
    for i in range(m):
        H[i][i] = 2.0 * (other(i) * A) if m == 2 else 2.0 * A
    if m == 2:
        H[0][1] = H[1][0] = 4.0 * ((xs[0] * xs[1]) * A)
    for i in range(m):
        t = (2.0 * a) * (xs[i] * (other(i) * B)) if m == 2 else (2.0 * a) * (xs[i] * B)
        for k in range(m, n):
            H[i][k] = H[k][i] = t * xs[k]
    for k in range(m, n):
        H[k][k] = aPB + D * (xs[k] * xs[k])
        for l in range(k + 1, n):
            H[k][l] = H[l][k] = D * (xs[k] * xs[l])
    return g, H


def f_jet(params: FamilyParams, X, allow_outside: bool = False, chunk: int = 20000) -> Jet2:
    """Exact jet of f(x) = det(D^2 z + sign Dz (x) Dz) on a batch of points."""
    X = _as_batch(params, X)
    _check_domain(X, allow_outside)
    n, s = params.n, params.sign
    vals, grads, hesss = [], [], []
    for start in range(0, X.shape[0], chunk):
        g, H = _entry_jets(params, X[start : start + chunk])
        W = [[H[i][j] + s * (g[i] * g[j]) for j in range(n)] for i in range(n)]
        d = jet_det(W)
        vals.append(d.value)
        grads.append(d.grad)
        hesss.append(d.hess)
    return Jet2(np.concatenate(vals), np.concatenate(grads), np.concatenate(hesss))


def stabilized_index(values, tol: float = STABILIZE_TOL) -> int:
    """Index of the largest-epsilon level whose successor changes by < tol."""
    values = list(values)
    for i in range(len(values) - 1):
        if abs(values[i + 1] - values[i]) <= tol * abs(values[i]):
            return i
    return len(values) - 1


def _uniform_pass(values) -> tuple[bool, int]:
    i = stabilized_index(values)
    return bool(max(values) <= UNIFORM_SLACK * values[i]), i


# -- blow-up ---------------------------------------------------------------


@dataclass
class BlowupReport:
    n: int
    sign: int
    eps_list: list
    z33: list
    predicted: list
    max_rel_err: float
    slope: float
    slope_target: float
    passed: bool


def blowup_probe(n: int, sign: int, eps_list) -> BlowupReport:
    """z_33(0) against the closed form alpha * eps^(alpha-2), with the
    log-log blow-up rate across the epsilon list."""
    eps_list = [float(e) for e in eps_list]
    if any(e <= 0 for e in eps_list) or any(b <= a for a, b in zip(eps_list[1:], eps_list)):
        raise ValueError("eps_list must be positive and strictly decreasing")
    z33, predicted = [], []
    for eps in eps_list:
        params = FamilyParams(n, eps, sign)
        _, _, hess = eval_z_batch(params, np.zeros(n))
        z33.append(float(hess[0, 2, 2]))
        predicted.append(params.alpha * eps ** (params.alpha - 2.0))
    rel = max(abs(a - b) / abs(b) for a, b in zip(z33, predicted))
    slope = float(np.polyfit(np.log(eps_list), np.log(z33), 1)[0])
    target = -2.0 / n
    passed = rel <= 1e-12 and abs(slope - target) <= 1e-6
    return BlowupReport(n, sign, eps_list, z33, predicted, rel, slope, target, passed)


# -- uniform C^2 sweep -----------------------------------------------------


@dataclass
class EpsRecord:
    epsilon: float
    sup_f: float
    sup_df: float
    sup_d2f: float
    f_origin: float
    f_origin_expected: float
    z33_origin: float
    holder_q: float | None = None


@dataclass
class SweepReport:
    n: int
    sign: int
    rho: float
    grid_res: int
    seed: int
    eps_list: list
    random_count: int
    axis_count: int
    records: list = field(default_factory=list)
    c2_pass: bool = False
    c2_stabilized_eps: float = float("nan")
    c2_bound: float = float("nan")
    holder_pass: bool | None = None
    holder_stabilized_eps: float | None = None
    pair_count: int | None = None


def uniform_c2_sweep(
    n: int,
    sign: int,
    rho: float = DEFAULT_RHO,
    grid_res: int = DEFAULT_GRID_RES,
    eps_list=DEFAULT_EPS_LIST,
    seed: int = DEFAULT_SEED,
    random_count: int = 200,
    axis_count: int = 50,
) -> SweepReport:
    """Sup of |f|, |Df|, |D^2 f| over the scan set for each epsilon.

    The lattice is permutation/sign reduced in the trailing coordinates;
    sup-norms over the reduced set match the full lattice (the fields are
    invariant up to summation-order roundoff).
    """
    if rho > 0.25:
        raise ValueError("rho must be <= 0.25")
    if grid_res < 9 or grid_res % 2 == 0:
        raise ValueError("grid_res must be odd and >= 9")
    eps_list = [float(e) for e in eps_list]
    X = scan_set(n, 2, rho, grid_res, seed, random_count, axis_count, reduce="sorted")
    report = SweepReport(n, sign, rho, grid_res, seed, eps_list, random_count, axis_count)
    alpha = 2.0 - 2.0 / n
    for eps in eps_list:
        params = FamilyParams(n, eps, sign)
        jet = f_jet(params, X)
        origin = f_jet(params, np.zeros(n))
        _, _, zh = eval_z_batch(params, np.zeros(n))
        report.records.append(
            EpsRecord(
                epsilon=eps,
                sup_f=float(np.abs(jet.value).max()),
                sup_df=float(np.abs(jet.grad).max()),
                sup_d2f=float(np.abs(jet.hess).max()),
                f_origin=float(origin.value[0]),
                f_origin_expected=4.0 * alpha ** (n - 2) * eps * eps,
                z33_origin=float(zh[0, 2, 2]),
            )
        )
    sups = [r.sup_d2f for r in report.records]
    report.c2_pass, idx = _uniform_pass(sups)
    report.c2_stabilized_eps = eps_list[idx]
    report.c2_bound = sups[idx]
    return report


# -- Hoelder probe ---------------------------------------------------------


@dataclass
class HolderReport:
    n: int
    sign: int
    rho: float
    pair_count: int
    seed: int
    exponent: float
    eps_list: list
    max_quotients: list
    passed: bool
    stabilized_eps: float


def _holder_pairs(n: int, rho: float, pair_count: int, seed: int):
    """70% of pairs hug the eta = 0 hyperplane (where the seminorm is
    realized); 30% are uniform; plus deterministic axis pairs straddling
    the origin (the worst-case family)."""
    rng = np.random.default_rng(seed)
    near = int(0.7 * pair_count)
    xs, ys = [], []
    for count, squeeze in ((near, True), (pair_count - near, False)):
        x = random_ball(n, rho, count, rng)
        y = random_ball(n, rho, count, rng)
        if squeeze:
            x[:, 2:] *= 0.1
            y[:, 2:] *= 0.1
        xs.append(x)
        ys.append(y)
    t = np.geomspace(1e-4 * rho, rho, 50)
    ax = np.zeros((50, n))
    ax[:, 2] = t
    xs.append(ax)
    ys.append(-ax)
    return np.concatenate(xs), np.concatenate(ys)


def holder_quotients(grad_fn, X, Y, exponent: float) -> np.ndarray:
    """||grad(x) - grad(y)|| / ||x - y||^exponent for paired point sets."""
    num = np.linalg.norm(grad_fn(X) - grad_fn(Y), axis=1)
    den = np.linalg.norm(X - Y, axis=1) ** exponent
    keep = den > 0
    return num[keep] / den[keep]


def holder_probe(
    n: int,
    sign: int,
    rho: float = DEFAULT_RHO,
    pair_count: int = 5000,
    seed: int = DEFAULT_SEED,
    eps_list=DEFAULT_EPS_LIST,
) -> HolderReport:
    """Max sampled C^(1, 1-2/n) quotient of Dz per epsilon; the same pair
    set is reused across the sweep."""
    if pair_count < 1000:
        raise ValueError("pair_count must be >= 1000")
    eps_list = [float(e) for e in eps_list]
    exponent = 1.0 - 2.0 / n
    X, Y = _holder_pairs(n, rho, pair_count, seed)
    maxima = []
    for eps in eps_list:
        params = FamilyParams(n, eps, sign)
        grad_fn = lambda P: eval_z_batch(params, P)[1]
        maxima.append(float(holder_quotients(grad_fn, X, Y, exponent).max()))
    passed, idx = _uniform_pass(maxima)
    return HolderReport(
        n, sign, rho, pair_count, seed, exponent, eps_list, maxima, passed, eps_list[idx]
    )


# -- negative control ------------------------------------------------------


@dataclass
class Remark1Report:
    x1: float
    eta_list: list
    d2f: list
    growth_ratios: list
    slope: float
    slope_target: float
    control_eps_list: list
    control_max_by_eps: list
    control_passed: bool
    growth_passed: bool
    slope_passed: bool

    @property
    def passed(self) -> bool:
        return self.growth_passed and self.slope_passed and self.control_passed


def remark1_probe(
    eta_list=(1e-2, 1e-3, 1e-4),
    x1: float = 0.2,
    control_eps_list=DEFAULT_EPS_LIST,
    control_sign: int = 1,
) -> Remark1Report:
    """Blow-up of |D^2 f| for the simpler ansatz along eta -> 0, against the
    full construction evaluated on the same geometry (which must stay flat).
    """
    eta_list = [float(e) for e in eta_list]
    if any(e <= 0 for e in eta_list) or any(b <= a for a, b in zip(eta_list[1:], eta_list)):
        raise ValueError("eta_list must be positive and strictly decreasing")
    params = FamilyParams(3, 0.0, 1, Variant.REMARK1)
    P = np.zeros((len(eta_list), 3))
    P[:, 0] = x1
    P[:, 1] = eta_list
    jet = f_jet(params, P)
    d2f = np.abs(jet.hess[:, 1:, 1:]).max(axis=(1, 2))  # eta-direction entries
    decades = np.log10(np.asarray(eta_list[:-1])) - np.log10(np.asarray(eta_list[1:]))
    ratios = (d2f[1:] / d2f[:-1]) ** (1.0 / decades)
    slope = float(np.polyfit(np.log(eta_list), np.log(d2f), 1)[0])

    # Full-variant control at the matching points (x1, 0, eta).
    control_eps_list = [float(e) for e in control_eps_list]
    C = np.zeros((len(eta_list), 3))
    C[:, 0] = x1
    C[:, 2] = eta_list
    control_max, control_at_largest = [], []
    for eps in control_eps_list:
        full = FamilyParams(3, eps, control_sign)
        h = f_jet(full, C).hess
        vals = np.abs(h[:, 2:, 2:]).max(axis=(1, 2))
        control_max.append(float(vals.max()))
        control_at_largest.append(float(vals[0]))
    control_passed = max(control_max) <= UNIFORM_SLACK * max(control_at_largest) + 1e-9

    return Remark1Report(
        x1=x1,
        eta_list=eta_list,
        d2f=[float(v) for v in d2f],
        growth_ratios=[float(v) for v in ratios],
        slope=slope,
        slope_target=-2.0 / 3.0,
        control_eps_list=control_eps_list,
        control_max_by_eps=control_max,
        control_passed=bool(control_passed),
        growth_passed=bool(np.all(ratios >= 3.0)),
        slope_passed=bool(abs(slope + 2.0 / 3.0) <= 0.05),
    )
