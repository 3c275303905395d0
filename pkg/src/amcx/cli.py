"""Batch verification front end.

Subcommands run the verification suites, serialize a deterministic report
(JSON or CSV), optionally emit static SVG figures, and exit 0 only when
every pass flag in the report is true.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .admissibility import certify_rho, minor_formula_check, minor_slice, sylvester_scan
from .augmented import det_direct_batch, det_reduced_batch
from .family import FamilyParams
from .points import random_ball
from .probes import (
    DEFAULT_EPS_LIST,
    blowup_probe,
    holder_probe,
    remark1_probe,
    uniform_c2_sweep,
)
from .report import csv_lines, dumps, jsonify, svg_heatmap, svg_line_plot

IDENTITY_EPS = (1e-1, 1e-2, 1e-3)
IDENTITY_TOL = 1e-9
MINOR_TOL = 1e-9
RHO_LADDER = (0.05, 0.1, 0.15, 0.2, 0.25)
ETA_LIST = (1e-2, 1e-3, 1e-4)


def _signs(arg: str):
    return {"plus": [1], "minus": [-1], "both": [1, -1]}[arg]


def _eps_list(text: str):
    return [float(tok) for tok in text.split(",") if tok]


# -- suites ----------------------------------------------------------------


def suite_identity(n, signs, eps_list, samples, seed, tol=IDENTITY_TOL):
    rng = np.random.default_rng(seed)
    X = random_ball(n, 0.25, samples, rng)
    cases = []
    for sign in signs:
        for eps in eps_list:
            params = FamilyParams(n, eps, sign)
            dd = det_direct_batch(params, X)
            dr, _ = det_reduced_batch(params, X)
            residual = float(np.max(np.abs(dd - dr) / np.maximum(1.0, np.abs(dd))))
            cases.append(
                {
                    "sign": sign,
                    "epsilon": eps,
                    "samples": samples,
                    "max_rel_residual": residual,
                    "tolerance": tol,
                    "pass": residual <= tol,
                }
            )
    return {"name": "identity", "cases": cases, "pass": all(c["pass"] for c in cases)}


def suite_blowup(n, eps_list):
    rep = blowup_probe(n, 1, eps_list)
    case = jsonify(rep)
    case["pass"] = rep.passed
    return {"name": "blowup", "cases": [case], "pass": rep.passed}


def suite_sweep(n, signs, rho, grid_res, eps_list, pair_count, seed):
    cases = []
    for sign in signs:
        sweep = uniform_c2_sweep(n, sign, rho, grid_res, eps_list, seed)
        holder = holder_probe(n, sign, rho, pair_count, seed, eps_list)
        for rec, q in zip(sweep.records, holder.max_quotients):
            rec.holder_q = q
        sweep.holder_pass = holder.passed
        sweep.holder_stabilized_eps = holder.stabilized_eps
        sweep.pair_count = pair_count
        case = jsonify(sweep)
        case["pass"] = sweep.c2_pass and holder.passed
        cases.append(case)
    return {"name": "sweep", "cases": cases, "pass": all(c["pass"] for c in cases)}


def suite_remark1(eta_list, x1, eps_list):
    rep = remark1_probe(eta_list, x1, eps_list)
    case = jsonify(rep)
    case["pass"] = rep.passed
    return {"name": "remark1", "cases": [case], "pass": rep.passed}


def suite_admissible(n, signs, rho, rho_ladder, eps_list, grid_res, seed):
    cases = []
    result = certify_rho(n, signs, rho_ladder, eps_list, grid_res, seed)
    for sign in signs:
        rho_star = result.rho_star_by_sign[sign]
        detail = sylvester_scan(FamilyParams(n, min(eps_list), sign), rho, grid_res, seed)
        cases.append(
            {
                "sign": sign,
                "rho_star": rho_star,
                "eps_min": result.eps_min,
                "detail_scan": jsonify(detail),
                "pass": rho_star >= min(rho_ladder) and detail.certified,
            }
        )
    suite = {"name": "admissible", "cases": cases, "pass": all(c["pass"] for c in cases)}
    suite["failures"] = jsonify(result.failures)
    return suite


def suite_minors(n, signs, samples, seed, tol=MINOR_TOL):
    rng = np.random.default_rng(seed)
    X = random_ball(n, 0.2, samples, rng)
    eta = np.sqrt(np.sum(X[:, 2:] ** 2, axis=1))
    X = X[eta >= 1e-3]
    cases = []
    for sign in signs:
        for eps in (1e-1, 1e-2):
            params = FamilyParams(n, eps, sign)
            res = minor_formula_check(params, X)
            cases.append(
                {
                    "sign": sign,
                    "epsilon": eps,
                    "samples": int(len(X)),
                    "max_residual": res["max_residual"],
                    "tolerance": tol,
                    "pass": res["max_residual"] <= tol,
                }
            )
    return {"name": "minors", "cases": cases, "pass": all(c["pass"] for c in cases)}


# -- plotting --------------------------------------------------------------


def write_plots(report: dict, stem: Path, n: int):
    written = []
    by_name = {s["name"]: s for s in report["suites"]}
    if "blowup" in by_name:
        case = by_name["blowup"]["cases"][0]
        svg = svg_line_plot(
            {
                "computed": (case["eps_list"], case["z33"]),
                "predicted": (case["eps_list"], case["predicted"]),
            },
            f"second-derivative blow-up at the origin (n={n})",
            "epsilon",
            "z33(0)",
            logx=True,
            logy=True,
        )
        written.append(_write_text(stem.with_name(stem.name + "_blowup.svg"), svg))
    if "sweep" in by_name:
        series = {}
        for case in by_name["sweep"]["cases"]:
            eps = [r["epsilon"] for r in case["records"]]
            sup = [r["sup_d2f"] for r in case["records"]]
            series[f"sign={case['sign']:+d}"] = (eps, sup)
        svg = svg_line_plot(
            series,
            f"sup |D2 f| over the scan set (n={n})",
            "epsilon",
            "sup |D2 f|",
            logx=True,
        )
        written.append(_write_text(stem.with_name(stem.name + "_sup_d2f.svg"), svg))
    if "admissible" in by_name:
        params = FamilyParams(n, 1e-3, 1)
        data = minor_slice(params, 0.1)
        svg = svg_heatmap(
            data["x1"],
            data["x3"],
            np.asarray(data["min_minor"]),
            f"smallest leading minor on the (x1, x3) slice (n={n}, eps=1e-3)",
        )
        written.append(_write_text(stem.with_name(stem.name + "_minor_heatmap.svg"), svg))
    return written


def _write_text(path: Path, text: str) -> str:
    path.write_text(text)
    return str(path)


# -- argument parsing ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amcx",
        description="numerical verification of the augmented Monge-Ampere counterexample family",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--n", type=int, default=3)
        p.add_argument("--sign", choices=["plus", "minus", "both"], default="both")
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--plot", action="store_true")

    p = sub.add_parser("identity", help="determinant route-agreement suite")
    common(p)
    p.add_argument("--eps", type=str, default=",".join(str(e) for e in IDENTITY_EPS))
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--tol", type=float, default=IDENTITY_TOL)

    p = sub.add_parser("blowup", help="second-derivative blow-up probe")
    common(p)
    p.add_argument("--eps-list", type=str, default="1e-1,1e-2,1e-3,1e-4")

    p = sub.add_parser("sweep", help="uniform C2 + Hoelder sweep")
    common(p)
    p.add_argument("--rho", type=float, default=0.1)
    p.add_argument("--grid-res", type=int, default=33)
    p.add_argument("--eps-list", type=str, default=",".join(str(e) for e in DEFAULT_EPS_LIST))
    p.add_argument("--pairs", type=int, default=5000)

    p = sub.add_parser("remark1", help="negative-control probe")
    common(p)
    p.add_argument("--eta-list", type=str, default=",".join(str(e) for e in ETA_LIST))
    p.add_argument("--x1", type=float, default=0.2)
    p.add_argument("--eps-list", type=str, default=",".join(str(e) for e in DEFAULT_EPS_LIST))

    p = sub.add_parser("admissible", help="positive-definiteness scan and rho certification")
    common(p)
    p.add_argument("--rho", type=float, default=0.1)
    p.add_argument("--rho-ladder", type=str, default=",".join(str(r) for r in RHO_LADDER))
    p.add_argument("--grid-res", type=int, default=33)
    p.add_argument("--eps-list", type=str, default=",".join(str(e) for e in DEFAULT_EPS_LIST))

    p = sub.add_parser("minors", help="closed-form minor identity checks")
    common(p)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--tol", type=float, default=MINOR_TOL)

    p = sub.add_parser("all", help="run every suite")
    common(p)
    p.add_argument("--rho", type=float, default=0.1)
    p.add_argument("--grid-res", type=int, default=33)
    p.add_argument("--eps-list", type=str, default=",".join(str(e) for e in DEFAULT_EPS_LIST))
    p.add_argument("--pairs", type=int, default=5000)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--rho-ladder", type=str, default=",".join(str(r) for r in RHO_LADDER))
    return parser


def run(args: argparse.Namespace) -> tuple[dict, int]:
    signs = _signs(args.sign)
    config = {k: v for k, v in sorted(vars(args).items())}
    suites = []
    cmd = args.command
    if cmd in ("identity", "all"):
        eps = _eps_list(getattr(args, "eps", ",".join(str(e) for e in IDENTITY_EPS)))
        tol = getattr(args, "tol", IDENTITY_TOL)
        suites.append(suite_identity(args.n, signs, eps, args.samples, args.seed, tol))
    if cmd in ("blowup", "all"):
        eps = _eps_list(getattr(args, "eps_list", "1e-1,1e-2,1e-3,1e-4"))
        if cmd == "all":
            eps = [1e-1, 1e-2, 1e-3, 1e-4]
        suites.append(suite_blowup(args.n, eps))
    if cmd in ("sweep", "all"):
        eps = _eps_list(args.eps_list)
        suites.append(
            suite_sweep(args.n, signs, args.rho, args.grid_res, eps, args.pairs, args.seed)
        )
    if cmd in ("remark1", "all"):
        eta = _eps_list(getattr(args, "eta_list", ",".join(str(e) for e in ETA_LIST)))
        x1 = getattr(args, "x1", 0.2)
        eps = _eps_list(getattr(args, "eps_list", ",".join(str(e) for e in DEFAULT_EPS_LIST)))
        suites.append(suite_remark1(eta, x1, eps))
    if cmd in ("admissible", "all"):
        ladder = _eps_list(args.rho_ladder)
        eps = _eps_list(args.eps_list)
        suites.append(
            suite_admissible(args.n, signs, args.rho, ladder, eps, args.grid_res, args.seed)
        )
    if cmd in ("minors", "all"):
        tol = getattr(args, "tol", MINOR_TOL)
        suites.append(suite_minors(args.n, signs, args.samples, args.seed, tol))

    report = {
        "config": config,
        "suites": suites,
        "pass": all(s["pass"] for s in suites),
        "version": __version__,
    }
    return report, 0 if report["pass"] else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    report, status = run(args)
    text = dumps(report) if args.format == "json" else "\n".join(csv_lines(report)) + "\n"
    try:
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        if args.plot:
            stem = Path(args.out).with_suffix("") if args.out else Path("report")
            write_plots(report, stem, args.n)
    except OSError as exc:
        print(f"amcx: I/O error: {exc}", file=sys.stderr)
        return 3
    return status


if __name__ == "__main__":
    sys.exit(main())
