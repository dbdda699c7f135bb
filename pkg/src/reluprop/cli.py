"""Command-line front end.

Subcommands: ``propagate``, ``validate``, ``converge``, ``gen-model``,
``selftest``. File outputs are byte-reproducible for identical flags and
seed. Exit codes: 0 success, 1 validation FAIL, 2 schema/shape/config
error, 3 numerical-consistency error, 4 convergence slopes outside the
acceptance window, 5 selftest failure.
"""

import argparse
import glob
import json
import math
import os
import sys

from .errors import (
    ConfigError,
    DomainError,
    NullEventError,
    NumericalConsistencyError,
    SchemaError,
    ShapeError,
)
from .mc import McConfig, convergence_study, mc_output_moments
from .model_io import (
    gen_model,
    load_case,
    load_dist,
    load_model,
    save_model_file,
    write_convergence_csv,
)
from .propagate import output_moments
from .selftest import run_selftest

_EXIT_OK = 0
_EXIT_FAIL = 1
_EXIT_SCHEMA = 2
_EXIT_NUMERIC = 3
_EXIT_SLOPE = 4
_EXIT_SELFTEST = 5


def _fail(category, message, code):
    print(f"error: {category}: {message}", file=sys.stderr)
    return code


def _json_dumps(data):
    return json.dumps(data, indent=2) + "\n"


def _emit(text, out_path):
    sys.stdout.write(text)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _cmd_propagate(args):
    model = load_model(args.model)
    dist = load_dist(args.dist)
    result = output_moments(dist, model)
    _emit(_json_dumps({"mean": result.mean, "variance": result.variance}), args.out)
    return _EXIT_OK


def _z_score(diff, se):
    if diff == 0.0:
        return 0.0
    if se == 0.0:
        return math.inf
    return diff / se


def _cmd_validate(args):
    model = load_model(args.model)
    dist = load_dist(args.dist)
    analytic = output_moments(dist, model)
    cfg = McConfig(
        n_samples=args.n, seed=args.seed, chunk_size=args.chunk_size, workers=args.workers
    )
    rep = mc_output_moments(dist, model, cfg)
    z_mean = _z_score(rep.emp_mean - analytic.mean, rep.se_mean)
    z_var = _z_score(rep.emp_variance - analytic.variance, rep.se_variance)
    status = "PASS" if max(abs(z_mean), abs(z_var)) <= args.z_threshold else "FAIL"
    report = {
        "analytic": {"mean": analytic.mean, "variance": analytic.variance},
        "mc": {
            "emp_mean": rep.emp_mean,
            "emp_variance": rep.emp_variance,
            "se_mean": rep.se_mean,
            "se_variance": rep.se_variance,
            "n": rep.n,
            "seed": rep.seed,
        },
        "diff": {
            "mean": rep.emp_mean - analytic.mean,
            "variance": rep.emp_variance - analytic.variance,
        },
        "z": {"mean": z_mean, "variance": z_var},
        "z_threshold": args.z_threshold,
        "status": status,
    }
    _emit(_json_dumps(report), args.out)
    return _EXIT_OK if status == "PASS" else _EXIT_FAIL


def _cmd_converge(args):
    paths = sorted(glob.glob(os.path.join(args.cases, "*.json")))
    if not paths:
        raise ConfigError(f"no case files (*.json) in {args.cases!r}")
    if len(paths) < 10:
        print(
            f"warning: only {len(paths)} case files; RMSE over fewer than 10 cases is noisy",
            file=sys.stderr,
        )
    try:
        grid = [int(tok) for tok in args.grid.split(",") if tok]
    except ValueError:
        raise ConfigError(f"grid {args.grid!r} is not a comma-separated integer list") from None
    if len(grid) < 3:
        print("warning: fewer than 3 grid points; slope fit quality is poor", file=sys.stderr)
    cases = [load_case(path) for path in paths]
    cfg = McConfig(n_samples=2, seed=args.seed, chunk_size=args.chunk_size, workers=args.workers)
    study = convergence_study(cases, grid, cfg)
    write_convergence_csv(study, args.out)
    print(f"slope_mean={study.slope_mean!r}")
    print(f"slope_variance={study.slope_variance!r}")
    in_window = (
        args.slope_min <= study.slope_mean <= args.slope_max
        and args.slope_min <= study.slope_variance <= args.slope_max
    )
    return _EXIT_OK if in_window else _EXIT_SLOPE


def _cmd_gen_model(args):
    save_model_file(gen_model(args.m, args.p, args.seed), args.out)
    return _EXIT_OK


def _cmd_selftest(args):
    results = run_selftest(phi2_perturbation=args.inject_phi2_error)
    width = max(len(name) for name, _, _ in results)
    for name, ok, detail in results:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {detail}")
    if all(ok for _, ok, _ in results):
        print("overall: PASS")
        return _EXIT_OK
    print("overall: FAIL")
    return _EXIT_SELFTEST


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="reluprop",
        description=(
            "Exact output mean/variance of a single-hidden-layer ReLU network "
            "under Gaussian input uncertainty, with Monte Carlo validation."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("propagate", help="analytical output moments for a model/distribution pair")
    p.add_argument("--model", required=True, help="model JSON path")
    p.add_argument("--dist", required=True, help="input distribution JSON path")
    p.add_argument("--out", help="also write the JSON result to this path")
    p.set_defaults(func=_cmd_propagate)

    p = sub.add_parser("validate", help="compare analytical moments against a seeded MC run")
    p.add_argument("--model", required=True)
    p.add_argument("--dist", required=True)
    p.add_argument("--n", type=int, required=True, help="number of MC samples")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--chunk-size", type=int, default=65536)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--z-threshold", type=float, default=4.0, help="|z| above this flags FAIL")
    p.add_argument("--out", help="also write the JSON report to this path")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("converge", help="RMSE-vs-n study over a directory of case files")
    p.add_argument("--cases", required=True, help="directory of case JSON files")
    p.add_argument("--grid", default="1000,10000,100000,1000000", help="comma-separated sample counts")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--chunk-size", type=int, default=65536)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--slope-min", type=float, default=-0.65)
    p.add_argument("--slope-max", type=float, default=-0.35)
    p.set_defaults(func=_cmd_converge)

    p = sub.add_parser("gen-model", help="write a reproducible random model fixture")
    p.add_argument("--m", type=int, required=True, help="input dimension")
    p.add_argument("--p", type=int, required=True, help="hidden units")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_model)

    p = sub.add_parser("selftest", help="run the embedded invariant suite")
    p.add_argument(
        "--inject-phi2-error",
        type=float,
        default=0.0,
        help="testing hook: perturb the bivariate cdf to prove failures are detected",
    )
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        return _fail("schema", exc, _EXIT_SCHEMA)
    except ShapeError as exc:
        return _fail("shape", exc, _EXIT_SCHEMA)
    except ConfigError as exc:
        return _fail("config", exc, _EXIT_SCHEMA)
    except (NumericalConsistencyError, NullEventError) as exc:
        return _fail("numeric", exc, _EXIT_NUMERIC)
    except DomainError as exc:
        return _fail("domain", exc, _EXIT_SCHEMA)
    except FileNotFoundError as exc:
        return _fail("schema", exc, _EXIT_SCHEMA)


if __name__ == "__main__":
    sys.exit(main())
