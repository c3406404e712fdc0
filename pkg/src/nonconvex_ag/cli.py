"""Command line entry point: ``nonconvex-ag {fit,path,simulate,bench,recover}``.

Exit status is 0 on success, 2 for bad arguments or inputs and 3 for
numerical failures. Every CSV written is accompanied by a ``.json``
sidecar with the full configuration and the library version.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from . import __version__
from .ag import CompositeProblem, SolverConfig
from .errors import NumericalError
from .harness import bench_preset, recovery_preset, run_benchmark, run_recovery, write_sidecar
from .model import load_csv
from .path import fit_solver, lambda_grid, lambda_max, path_solve, select_by_validation
from .penalty import PenaltySpec
from .simgen import SimConfig, simulate

DEFAULT_SHAPE = {"scad": 3.7, "mcp": 3.0}


def _floats(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


def _names(text):
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _seed(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _add_data_args(p):
    p.add_argument("--data", required=True, help="CSV with a header row")
    p.add_argument("--response", default="y", help="name of the outcome column")
    p.add_argument("--family", choices=["linear", "logistic"], required=True)
    p.add_argument("--penalty", choices=["scad", "mcp"], required=True)
    p.add_argument("--shape", type=float, default=None,
                   help="a for SCAD (default 3.7), gamma for MCP (default 3)")
    p.add_argument("--solver", choices=["ag", "ag-orig", "ista"], default="ag")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=_positive_int, default=2000)
    p.add_argument("--no-standardize", action="store_true",
                   help="use the covariates as given (an intercept column is still added)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nonconvex-ag",
        description="Accelerated gradient fits of SCAD/MCP penalized GLMs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit one penalized model")
    _add_data_args(p)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--trace", help="write the per-iteration trace to this CSV")
    p.add_argument("--out", help="coefficient CSV (default: stdout)")

    p = sub.add_parser("path", help="fit a lambda path")
    _add_data_args(p)
    p.add_argument("--grid-size", type=int, default=50)
    p.add_argument("--validation", help="CSV used to select lambda")
    p.add_argument("--cold", action="store_true", help="start every fit from the null model")
    p.add_argument("--out", required=True, help="long-format coefficient CSV")

    p = sub.add_parser("simulate", help="draw a synthetic dataset")
    p.add_argument("--preset", choices=["visual4", "blocks5x10"], required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--q", type=_positive_int, required=True)
    p.add_argument("--tau", type=float, default=0.5)
    p.add_argument("--snr", type=float, default=3.0)
    p.add_argument("--family", choices=["linear", "logistic"], default="linear")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--replicate", type=int, default=0)
    p.add_argument("--out", required=True)

    for name, helptext in (("bench", "convergence benchmark"),
                           ("recover", "signal recovery study")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--preset", choices=["desk", "paper"], default="desk")
        p.add_argument("--reps", type=_positive_int)
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--out", required=True, help="per-cell summary CSV")
        p.add_argument("--records", help="per-replicate CSV")
        p.add_argument("--workers", type=_positive_int, default=1)
        p.add_argument("--taus", type=_floats)
        p.add_argument("--families", type=_names)
        p.add_argument("--penalties", type=_names)
        p.add_argument("--max-iter", type=_positive_int)
        if name == "bench":
            p.add_argument("--ns", type=lambda s: tuple(int(v) for v in s.split(",")))
            p.add_argument("--q", type=_positive_int)
            p.add_argument("--lambda", dest="lam", type=float)
            p.add_argument("--logistic-lambda", type=float)
            p.add_argument("--linear-offset", type=float,
                           help="descent target above g* for linear runs (default e^3)")
            p.add_argument("--logistic-offset", type=float,
                           help="descent target above g* for logistic runs (default e^-3)")
        else:
            p.add_argument("--snrs", type=_floats)
            p.add_argument("--n", type=_positive_int)
            p.add_argument("--q", type=_positive_int)
            p.add_argument("--grid-size", type=int)
            p.add_argument("--cold", action="store_true",
                           help="start every path fit from the null model")
    return parser


def _load(args, path):
    return load_csv(path, args.response, args.family, not args.no_standardize)


def _shape(args):
    return DEFAULT_SHAPE[args.penalty] if args.shape is None else args.shape


def _write_rows(target, header, rows):
    w = csv.writer(target, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def _fmt(v):
    return repr(float(v))


def cmd_fit(args):
    data = _load(args, args.data)
    spec = PenaltySpec(args.penalty, args.lam, _shape(args))
    problem = CompositeProblem(data, spec)
    config = SolverConfig(max_iter=args.max_iter, tol=args.tol)
    fit = fit_solver(problem, args.solver, config, data.null_coefficients())
    raw = data.to_original_scale(fit.beta)
    names = ("(intercept)",) + data.names
    rows = [(j, nm, _fmt(b), _fmt(r)) for j, (nm, b, r) in enumerate(zip(names, fit.beta, raw))]
    header = ["j", "name", "beta", "beta_original"]
    summary = {"status": fit.status.value, "iterations": fit.iterations,
               "objective": float(fit.objective[-1]), "grad_norm": float(fit.grad_norm[-1]),
               "L_psi": problem.L_psi}
    config_doc = {k: v for k, v in vars(args).items() if k != "func"}
    if args.out:
        with open(args.out, "w", newline="") as fh:
            _write_rows(fh, header, rows)
        write_sidecar(args.out, "fit", config_doc, {"result": summary})
    else:
        buf = io.StringIO()
        _write_rows(buf, header, rows)
        sys.stdout.write(buf.getvalue())
    if args.trace:
        trace = [(k + 1, _fmt(f), _fmt(g))
                 for k, (f, g) in enumerate(zip(fit.objective, fit.grad_norm))]
        with open(args.trace, "w", newline="") as fh:
            _write_rows(fh, ["k", "objective", "grad_mapping_norm"], trace)
        write_sidecar(args.trace, "fit", config_doc, {"result": summary})
    print(f"{fit.method}: {fit.status.value} after {fit.iterations} iterations, "
          f"objective {fit.objective[-1]:.8g}", file=sys.stderr)
    return 0


def cmd_path(args):
    data = _load(args, args.data)
    grid = lambda_grid(lambda_max(data), args.grid_size)
    config = SolverConfig(max_iter=args.max_iter, tol=args.tol, record_trace=False)
    path = path_solve(data, args.penalty, _shape(args), grid, config,
                      warm_start=not args.cold, solver=args.solver)
    extra = {"lambda_max": float(grid[0]), "converged": [f.converged for f in path.fits],
             "ill_posed": path.ill_posed}
    if args.validation:
        valid = data.transform(*_raw_columns(args.validation, data, args.response))
        best = select_by_validation(path, valid)
        extra.update(selected_index=best, selected_lambda=float(grid[best]),
                     validation_loss=[float(v) for v in path.validation_loss])
    names = ("(intercept)",) + data.names
    with open(args.out, "w", newline="") as fh:
        rows = []
        for i, (lam, fit) in enumerate(zip(path.lambdas, path.fits)):
            sel = "true" if path.selected == i else "false"
            for j, (nm, b) in enumerate(zip(names, fit.beta)):
                rows.append((i, _fmt(lam), j, nm, _fmt(b), sel))
        _write_rows(fh, ["lambda_index", "lambda", "j", "name", "beta", "selected"], rows)
    write_sidecar(args.out, "path", {k: v for k, v in vars(args).items() if k != "func"}, extra)
    return 0


def _raw_columns(path, data, response):
    with open(path, newline="") as fh:
        header = [h.strip() for h in next(csv.reader(fh))]
    values = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    j = header.index(response)
    cols = [header.index(nm) for nm in data.names]
    return values[:, cols], values[:, j]


def cmd_simulate(args):
    config = SimConfig(args.n, args.q, args.tau, args.snr, args.family, args.preset, args.seed)
    draw = simulate(config, args.replicate)
    names = [f"x{j}" for j in range(1, args.q + 1)]
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names + ["y"])
        for row, yi in zip(draw.X, draw.y):
            w.writerow([_fmt(v) for v in row] + [_fmt(yi)])
    write_sidecar(args.out, "simulate", config,
                  {"replicate": args.replicate, "sigma": draw.sigma,
                   "beta_true": [float(b) for b in draw.truth.beta],
                   "support": sorted(draw.truth.support)})
    return 0


def _common_overrides(args):
    return dict(reps=args.reps, seed=args.seed, taus=args.taus, families=args.families,
                penalties=args.penalties, max_iter=args.max_iter)


def cmd_bench(args):
    config = bench_preset(args.preset, ns=args.ns, q=args.q, lam=args.lam,
                          logistic_lam=args.logistic_lambda,
                          linear_offset=args.linear_offset,
                          logistic_offset=args.logistic_offset, **_common_overrides(args))
    result = run_benchmark(config, workers=args.workers)
    result.write(args.out, args.records, command="bench")
    return 0


def cmd_recover(args):
    config = recovery_preset(args.preset, n=args.n, q=args.q, snrs=args.snrs,
                             grid_size=args.grid_size,
                             warm_start=False if args.cold else None,
                             **_common_overrides(args))
    result = run_recovery(config, workers=args.workers)
    result.write(args.out, args.records, command="recover")
    return 0


COMMANDS = {"fit": cmd_fit, "path": cmd_path, "simulate": cmd_simulate,
            "bench": cmd_bench, "recover": cmd_recover}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
