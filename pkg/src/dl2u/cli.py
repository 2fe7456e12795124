"""Command line front end.

Subcommands: simulate (path CSV + metadata sidecar), estimate (JSON),
table (CSV rows), hist (histogram JSON), verify (oracle report JSON).
Exit codes: 0 ok, 2 usage, 3 domain error, 4 numeric overflow,
5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict

import numpy as np

from . import montecarlo, oracles
from .dgp import RngSeed, SimulatedPath, simulate_path
from .errors import DomainError, NumericOverflowError, VerificationError
from .estimator import ols_rho, pivot_S, pivot_T, score_rho_error
from .sequences import ModelParams, Regime, SequenceSpec

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_OVERFLOW = 4
EXIT_VERIFY = 5

_FLOAT_FMT = "%.17g"


def _default_seed() -> int:
    return int(os.environ.get("DL2U_SEED", "0"))


def _add_model_args(p: argparse.ArgumentParser, explosive_default="stat"):
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--d", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--kn", default="pow:0.25", help="const:V | log | pow:A | lin")
    p.add_argument("--rn", default="log", help="const:V | log | pow:A | lin")
    p.add_argument("--regime", choices=["stat", "expl"], default=explosive_default)
    p.add_argument("--y0", type=float, default=0.0)
    p.add_argument("--z0", type=float, default=0.0)


def _params_from(args) -> ModelParams:
    return ModelParams(
        c=args.c,
        d=args.d,
        alpha=args.alpha,
        n=args.n,
        kn=SequenceSpec.parse(args.kn),
        rn=SequenceSpec.parse(args.rn),
        regime=Regime.NEAR_STATIONARY if args.regime == "stat" else Regime.MILDLY_EXPLOSIVE,
        y0=args.y0,
        z0=args.z0,
    )


def _params_meta(params: ModelParams) -> dict:
    return {
        "c": params.c,
        "d": params.d,
        "alpha": params.alpha,
        "n": params.n,
        "kn": params.kn.label(),
        "rn": params.rn.label(),
        "regime": params.regime.value,
        "y0": params.y0,
        "z0": params.z0,
    }


def _write_path_csv(path: SimulatedPath, out):
    out.write("t,y,sigma2,u\n")
    for t in range(len(path.y)):
        u = _FLOAT_FMT % path.u[t - 1] if t >= 1 else ""
        out.write(f"{t},{_FLOAT_FMT % path.y[t]},{_FLOAT_FMT % path.sigma2[t]},{u}\n")


def cmd_simulate(args) -> int:
    params = _params_from(args)
    seed = RngSeed(args.seed, args.rep)
    path = simulate_path(params, seed)
    meta = {
        "command": "simulate",
        "params": _params_meta(params),
        "seed": {"base": seed.base, "stream": seed.stream},
    }
    if args.out:
        with open(args.out, "w") as fh:
            _write_path_csv(path, fh)
        with open(args.out + ".meta.json", "w") as fh:
            json.dump(meta, fh, indent=2)
    else:
        _write_path_csv(path, sys.stdout)
    return EXIT_OK


def cmd_estimate(args) -> int:
    params = _params_from(args)
    data = np.genfromtxt(args.path, delimiter=",", names=True)
    y = np.atleast_1d(data["y"])
    u = np.atleast_1d(data["u"])[1:]  # u column is empty at t=0
    ols = ols_rho(y)
    rho_err = score_rho_error(SimulatedPath(y=y, sigma2=np.ones_like(y), u=u))
    if params.regime is Regime.NEAR_STATIONARY:
        piv = pivot_T(ols, params, rho_error=rho_err)
    else:
        piv = pivot_S(ols, params, rho_error=rho_err)
    report = {
        "rho_hat": ols.rho_hat,
        "pivot": {"kind": piv.kind, "value": piv.value},
        "target": piv.target.label(),
        "params": _params_meta(params),
    }
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def cmd_table(args) -> int:
    rows = montecarlo.run_table(
        args.id,
        n_nearstat=args.n_nearstat,
        n_explosive=args.n_explosive,
        replications=args.reps,
        paths_per_test=args.paths,
        seed=args.seed,
        threads=args.threads,
    )
    out = sys.stdout if not args.out else open(args.out, "w")
    try:
        out.write("kn,mean_ks,acceptance\n")
        for row in rows:
            out.write(f"{row.kn_label},{_FLOAT_FMT % row.mean_ks},{_FLOAT_FMT % row.acceptance}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_hist(args) -> int:
    if args.panel == "left":
        params = ModelParams(
            c=1.0, d=1.0, alpha=0.5, n=args.n or 1000,
            kn=SequenceSpec.parse(args.kn or "pow:0.25"),
            regime=Regime.NEAR_STATIONARY,
        )
    else:  # n capped at 300 by default to keep rho_n^n representable
        params = ModelParams(
            c=0.5, d=1.0, alpha=0.5, n=args.n or 300,
            kn=SequenceSpec.parse(args.kn or "pow:0.5"),
            regime=Regime.MILDLY_EXPLOSIVE,
        )
    spec = montecarlo.ExperimentSpec(
        params=params, paths_per_test=args.paths, replications=1, seed=args.seed
    )
    record = montecarlo.emit_histogram(spec, bins=args.bins)
    record["params"] = _params_meta(params)
    record["seed"] = args.seed
    json.dump(record, sys.stdout if not args.out else open(args.out, "w"), indent=2)
    if not args.out:
        sys.stdout.write("\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.draws < oracles.MIN_DRAWS:
        raise DomainError(f"--draws must be at least {oracles.MIN_DRAWS}")
    checks = oracles.run_moment_suite(draws=args.draws, seed=args.seed)
    reports = [c.as_dict() for c in checks]

    grid = [
        ModelParams(c=1.0, d=1.0, alpha=0.0, n=n,
                    kn=SequenceSpec.power_of_n(0.25), regime=Regime.NEAR_STATIONARY)
        for n in (1000, 10000)
    ]
    eq6 = oracles.check_eq6_convergence(grid, seed=args.seed + 1)
    wnvn = oracles.check_wnvn(
        ModelParams(c=0.5, d=1.0, alpha=0.5, n=300,
                    kn=SequenceSpec.power_of_n(0.5), regime=Regime.MILDLY_EXPLOSIVE),
        B=2000,
        seed=args.seed + 2,
    )
    all_passed = all(r["passed"] for r in reports) and eq6["passed"] and wnvn["passed"]
    report = {"moment_checks": reports, "eq6": eq6, "wn_vn": wnvn, "passed": all_passed}
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    if not all_passed:
        raise VerificationError("one or more oracle checks failed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dl2u",
        description="Simulation and inference for AR(1) with near-unit root and "
        "nearly nonstationary stochastic volatility.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate one path to CSV")
    _add_model_args(p)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--rep", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="estimate rho and the pivot from a path CSV")
    p.add_argument("path")
    _add_model_args(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("table", help="reproduce a KS acceptance table")
    p.add_argument("--id", required=True, choices=list(montecarlo.TABLE_IDS))
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--paths", type=int, default=500)
    p.add_argument("--n-nearstat", type=int, default=1000)
    p.add_argument("--n-explosive", type=int, default=300)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("hist", help="emit a pivot histogram with target overlay")
    p.add_argument("--panel", choices=["left", "right"], default="left")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--kn", default=None)
    p.add_argument("--paths", type=int, default=500)
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_hist)

    p = sub.add_parser("verify", help="run the oracle suite")
    p.add_argument("--draws", type=int, default=oracles.MIN_DRAWS)
    p.add_argument("--seed", type=int, default=707)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericOverflowError as exc:
        print(f"numeric overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
