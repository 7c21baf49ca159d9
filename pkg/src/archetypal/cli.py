"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 solver failure.
"""

import argparse
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from archetypal.aa import FitOptions, fit_aa, rss_curve
from archetypal.ada import fit_ada
from archetypal.baselines import fit_kmeans, fit_pam, gower_binary, silhouette
from archetypal.core import InvalidInputError, SolverError
from archetypal.functional import (
    BasisRepresentation,
    bspline_knots,
    explained_variability,
    fit_fada,
    gram_bspline,
)
from archetypal.io import format_matrix, load_csv, write_csv_matrix, write_json, write_text
from archetypal.paa import fit_paa, paa_options
from archetypal.report import build_report, emit_report, model_record
from archetypal.simulation import METHODS, SimulationConfig, run_benchmark

EXIT_INPUT = 2
EXIT_SOLVER = 3

FIT_METHODS = ("aa", "ada", "paa", "pam", "kmeans")
EV_DEFINITION = "1 - rss / rss of the mean-curve (k = 1) reconstruction"


def _formats(value):
    return ("csv", "json") if value == "both" else (value,)


def _add_fit_options(p):
    p.add_argument("--k", type=int, required=True, help="number of archetypes/clusters")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--max-iterations", type=int, default=None)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--penalty", type=float, default=200.0, help="sum-to-one penalty weight")


def _add_data_options(p):
    p.add_argument("data", type=Path, help="CSV file, one observation per row")
    p.add_argument("--header", action="store_true", help="first line is a header")
    p.add_argument("--binary", action="store_true", help="require 0/1 entries")


def _fit_options(args, max_iterations=100):
    return FitOptions(
        tolerance=args.tolerance,
        max_iterations=args.max_iterations or max_iterations,
        restarts=args.restarts,
        seed=args.seed,
        penalty_weight=args.penalty,
    )


def _write_model(out, record, report, formats, extra=None):
    out.mkdir(parents=True, exist_ok=True)
    record = dict(record)
    if extra:
        record.update(extra)
    write_json(out / "model.json", record)
    if record.get("alpha") is not None:
        k = record["k"]
        write_csv_matrix(out / "alpha.csv", np.asarray(record["alpha"]),
                         header=[f"alpha{j}" for j in range(1, k + 1)])
    emit_report(report, out, formats)


def cmd_fit(args):
    binary = args.binary or args.method == "paa"
    X = load_csv(args.data, has_header=args.header, binary_mode=binary)
    opts = _fit_options(args)
    extra = {"seed": args.seed}
    if args.method == "aa":
        model = fit_aa(X, args.k, opts)
    elif args.method == "ada":
        model = fit_ada(X, args.k, opts)
    elif args.method == "paa":
        model = fit_paa(X, args.k, paa_options(opts) if args.max_iterations is None else opts)
    elif args.method == "pam":
        D = gower_binary(X) if binary else _euclidean(X)
        model = fit_pam(D, args.k)
        if 1 < args.k < X.shape[0]:
            extra["silhouette"] = silhouette(D, model.labels)[1]
    else:
        model = fit_kmeans(X, args.k, opts)
    record = model_record(model, X)
    report = build_report(record)
    _write_model(args.out, record, report, _formats(args.format), extra)
    print(f"{args.method} k={args.k}: {report.objective_name}={report.objective:.6g}; "
          f"group sizes {report.group_sizes}")
    return 0


def _euclidean(X):
    sq = np.einsum("ij,ij->i", X, X)
    D = np.sqrt(np.maximum(sq[:, None] + sq[None, :] - 2.0 * X @ X.T, 0.0))
    np.fill_diagonal(D, 0.0)
    return 0.5 * (D + D.T)


def cmd_scree(args):
    X = load_csv(args.data, has_header=args.header, binary_mode=args.binary)
    if args.k_min < 1 or args.k_max < args.k_min:
        raise InvalidInputError("need 1 <= --k-min <= --k-max")
    ks = list(range(args.k_min, args.k_max + 1))
    opts = _fit_options(args)
    if args.method == "aa":
        curve = rss_curve(X, ks, opts)
    else:
        curve = [(k, fit_ada(X, k, opts).rss) for k in ks]
    text = format_matrix(np.array(curve), header=["k", "rss"])
    if args.out:
        write_text(args.out, text)
    sys.stdout.write(text)
    return 0


def cmd_fada(args):
    B = load_csv(args.coefficients, has_header=args.header)
    m = B.shape[1]
    if args.gram is not None:
        W = load_csv(args.gram)
        basis = {"kind": "custom"}
    elif args.knots is not None or args.bspline_range is not None:
        if args.knots is not None:
            knots = np.array([float(v) for v in args.knots.split(",")])
        else:
            knots = bspline_knots(args.bspline_range[0], args.bspline_range[1], m,
                                  args.bspline_order)
        W = gram_bspline(args.bspline_order, knots)
        basis = {"kind": "bspline", "order": args.bspline_order, "knots": knots.tolist()}
    else:
        W = np.eye(m)
        basis = {"kind": "orthonormal"}
    rep = BasisRepresentation(B, W, basis)
    opts = _fit_options(args)
    model = fit_fada(rep, args.k, opts)
    record = model_record(model)
    record["method"] = "fada"
    ev = explained_variability(rep, model.rss)
    report = build_report(record)
    _write_model(args.out, record, report, _formats(args.format),
                 {"seed": args.seed, "basis": basis, "explained_variability": ev,
                  "explained_variability_definition": EV_DEFINITION})
    print(f"fada k={args.k}: archetypoids {[i + 1 for i in model.indices]}, "
          f"rss={model.rss:.6g}, explained variability {ev:.4f}")
    return 0


def cmd_simulate(args):
    cfg = SimulationConfig(**{f.name: getattr(args, f.name) for f in fields(SimulationConfig)})
    report = run_benchmark(cfg)
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    lines = ["replication,method,error"]
    for r in range(cfg.replications):
        for name in METHODS:
            e = report.errors[name][r]
            lines.append(f"{r + 1},{name},{'' if np.isnan(e) else int(e)}")
    write_text(out / "errors.csv", "\n".join(lines) + "\n")
    prof = ["replication,method,archetype," + ",".join(f"v{h}" for h in range(1, cfg.m + 1))]
    for r, profs in enumerate(report.profiles):
        for name in ("TRUE",) + METHODS:
            if name not in profs:
                continue
            for j, row in enumerate(profs[name]):
                prof.append(f"{r + 1},{name},{j + 1}," + ",".join(str(int(v)) for v in row))
    write_text(out / "profiles.csv", "\n".join(prof) + "\n")
    write_json(out / "summary.json", report.summary())
    for name in METHODS:
        print(f"{name}: mean {report.mean(name):.2f} (sd {report.sd(name):.2f})")
    return 0


def cmd_report(args):
    import json

    try:
        record = json.loads(args.model.read_text())
    except (OSError, ValueError) as exc:
        raise InvalidInputError(f"cannot read model file {args.model}: {exc}") from None
    for key in ("method", "k", "profiles", "objective"):
        if key not in record:
            raise InvalidInputError(f"model file lacks {key!r}")
    report = build_report(record)
    emit_report(report, args.out, _formats(args.format))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="archetypal",
        description="Archetypal analysis, archetypoids and baselines for binary and real data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit one method and write model + report")
    _add_data_options(p)
    p.add_argument("--method", choices=FIT_METHODS, default="ada")
    _add_fit_options(p)
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--format", choices=("csv", "json", "both"), default="both")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("scree", help="RSS for a range of k (elbow plot table)")
    _add_data_options(p)
    p.add_argument("--method", choices=("aa", "ada"), default="aa")
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--max-iterations", type=int, default=None)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--penalty", type=float, default=200.0)
    p.add_argument("--out", type=Path, default=None, help="CSV file (k,rss)")
    p.set_defaults(func=cmd_scree)

    p = sub.add_parser("fada", help="functional archetypoids on basis coefficients")
    p.add_argument("--coefficients", type=Path, required=True,
                   help="CSV, one curve per row, one basis coefficient per column")
    p.add_argument("--header", action="store_true")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--gram", type=Path, help="m x m Gram matrix CSV")
    g.add_argument("--knots", help="comma-separated full B-spline knot vector")
    g.add_argument("--bspline-range", type=float, nargs=2, metavar=("A", "B"),
                   help="clamped equally spaced knots on [A, B]")
    p.add_argument("--bspline-order", type=int, default=4)
    _add_fit_options(p)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--format", choices=("csv", "json", "both"), default="both")
    p.set_defaults(func=cmd_fada)

    p = sub.add_parser("simulate", help="binary archetype recovery benchmark")
    defaults = SimulationConfig()
    for f in fields(SimulationConfig):
        flag = "--" + f.name.replace("_", "-")
        default = getattr(defaults, f.name)
        if isinstance(default, bool):
            p.add_argument(flag, action="store_true", dest=f.name)
        else:
            p.add_argument(flag, type=type(default), default=default, dest=f.name)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", help="re-emit the report for a saved model.json")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--format", choices=("csv", "json", "both"), default="both")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
