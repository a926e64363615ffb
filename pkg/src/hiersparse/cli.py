"""Command-line surface: fit, predict, report.

Exit codes: 0 success, 1 usage/input error, 2 computation error.  Every run
is reproducible from (flags, seed, input file); outputs carry no wall-clock
state, so repeated invocations are byte-identical.
"""
from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dataio import (
    export_dataset_csv,
    ingest_csv,
    load_model,
    read_points_csv,
    save_model,
    sha256_of,
    write_csv,
)
from .errors import (
    CSVParseError,
    DegenerateDofError,
    FitError,
    IllConditionedScaleError,
)
from .hierarchy import SparseModel, fit
from .predict import predict_intervals, predict_mean
from .synth import FAMILY_DIMS, SynthSpec, sample


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors exit with code 1 (argparse defaults to 2; 2 is reserved
    # here for computation failures)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_T(text: str):
    if text == "auto":
        return "auto"
    try:
        value = float(text)
    except ValueError:
        raise UsageError(f"--T must be 'auto' or a positive number, got {text!r}")
    if not value > 0:
        raise UsageError("--T must be positive")
    return value


def _parse_bounds(text: str):
    pairs = []
    for part in text.split(","):
        bits = part.split(":")
        if len(bits) != 2:
            raise UsageError(f"--range entries look like lo:hi, got {part!r}")
        pairs.append((float(bits[0]), float(bits[1])))
    return tuple(pairs)


def _parse_grid(text: str) -> np.ndarray:
    axes = []
    for part in text.split(","):
        bits = part.split(":")
        if len(bits) != 3:
            raise UsageError(f"--grid entries look like lo:hi:count, got {part!r}")
        lo, hi, count = float(bits[0]), float(bits[1]), int(bits[2])
        if count < 1 or not lo < hi:
            raise UsageError(f"bad grid axis {part!r}")
        axes.append(np.linspace(lo, hi, count))
    if len(axes) == 1:
        return axes[0][:, None]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def _default_grid(model: SparseModel, per_dim: int = 200) -> np.ndarray:
    lo = model.X_t.min(axis=0)
    hi = model.X_t.max(axis=0)
    d = model.X_t.shape[1]
    if d == 1:
        return np.linspace(lo[0], hi[0], per_dim)[:, None]
    side = max(2, int(round(per_dim ** (1.0 / d))))
    axes = [np.linspace(lo[i], hi[i], side) for i in range(d)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def _synth_spec_from_args(args) -> SynthSpec:
    if args.n is None or args.noise is None:
        raise UsageError("--synth requires --n and --noise")
    bounds = _parse_bounds(args.range) if args.range else None
    return SynthSpec(
        family=args.synth, n=args.n, noise_sigma=args.noise, bounds=bounds, seed=args.seed
    )


def _load_training(args):
    """Dataset plus provenance from either --data or --synth flags."""
    if args.data and args.synth:
        raise UsageError("give either --data or --synth, not both")
    if args.data:
        dataset = ingest_csv(args.data, has_header=args.has_header)
        return dataset, {"input": str(args.data), "input_sha256": sha256_of(args.data)}
    if args.synth:
        spec = _synth_spec_from_args(args)
        dataset = sample(spec)
        descr = (
            f"synth:{spec.family}(n={spec.n},noise={spec.noise_sigma!r},"
            f"range={spec.bounds!r},seed={spec.seed})"
        )
        digest = hashlib.sha256(descr.encode()).hexdigest()
        return dataset, {"input": descr, "input_sha256": digest}
    raise UsageError("an input is required: --data FILE or --synth FAMILY")


def _report_rows(model: SparseModel):
    rows = []
    for rec in model.history:
        rows.append(
            [
                rec.s,
                rec.epsilon_s,
                rec.l_s,
                rec.comp_s,
                "inf" if not np.isfinite(rec.cost) else rec.cost,
                "" if rec.q is None else ";".join(str(q) for q in rec.q),
                "" if rec.lam is None else ";".join(repr(float(v)) for v in rec.lam),
                1 if rec.s == model.t else 0,
            ]
        )
    return rows


def cmd_fit(args) -> int:
    dataset, provenance = _load_training(args)
    T = _parse_T(args.T)
    model = fit(
        dataset,
        T=T,
        M=args.M,
        phi=args.phi,
        k_extra=args.k_extra,
        seed=args.seed,
        max_scales=args.max_scales,
    )
    parameters = {
        "T": "auto" if T == "auto" else T,
        "M": args.M,
        "phi": args.phi,
        "k_extra": args.k_extra,
        "seed": args.seed,
        "max_scales": args.max_scales,
    }
    save_model(args.out, model, parameters, provenance)
    if args.report:
        write_csv(
            args.report,
            ["s", "epsilon_s", "l_s", "comp_s", "cost", "q", "lambda", "convergent"],
            _report_rows(model),
        )
    if args.export_data:
        export_dataset_csv(args.export_data, dataset)
    print(f"fit: n={dataset.n} d={dataset.d} scales={len(model.history)}")
    for rec in model.history:
        marker = " <- convergence" if rec.s == model.t else ""
        cost = "inf" if not np.isfinite(rec.cost) else f"{rec.cost:.6g}"
        print(
            f"  s={rec.s:<3d} eps={rec.epsilon_s:<12.6g} l_s={rec.l_s:<6d} "
            f"comp={rec.comp_s:<8.4f} cost={cost}{marker}"
        )
    print(f"model written to {args.out}")
    return 0


def cmd_predict(args) -> int:
    model, _, _ = load_model(args.model)
    if args.query and args.grid:
        raise UsageError("give either --query or --grid, not both")
    if args.query:
        X_m = read_points_csv(args.query, has_header=args.has_header)
    elif args.grid:
        X_m = _parse_grid(args.grid)
    else:
        raise UsageError("query points are required: --query FILE or --grid SPEC")

    if args.ci is not None:
        if not args.data:
            raise UsageError(
                "--ci needs the training data (--data FILE): interval widths use "
                "the full-data basis and residuals, which the sparse model alone "
                "does not carry"
            )
        dataset = ingest_csv(args.data, has_header=args.has_header)
        pred = predict_intervals(model, dataset, X_m, alpha=args.ci)
        header = [f"x_{j + 1}" for j in range(X_m.shape[1])] + [
            "mean",
            "std",
            "lower",
            "upper",
        ]
        rows = [
            list(x) + [m, s, lo, hi]
            for x, m, s, lo, hi in zip(X_m, pred.mean, pred.std, pred.lower, pred.upper)
        ]
        meta = {"df_res": pred.df_res, "sigma2_hat": pred.sigma2_hat, "alpha": pred.alpha}
        write_csv(args.out, header, rows, meta=meta)
    else:
        mean = predict_mean(model, X_m)
        header = [f"x_{j + 1}" for j in range(X_m.shape[1])] + ["mean"]
        rows = [list(x) + [m] for x, m in zip(X_m, mean)]
        write_csv(args.out, header, rows)
    print(f"predictions for {X_m.shape[0]} points written to {args.out}")
    return 0


def cmd_report(args) -> int:
    model, _, _ = load_model(args.model)
    if not model.history:
        raise FitError("model file has no scale history to report")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    write_csv(
        out_dir / "cost_curve.csv",
        ["s", "epsilon_s", "l_s", "comp_s", "cost", "convergent"],
        [
            [
                rec.s,
                rec.epsilon_s,
                rec.l_s,
                rec.comp_s,
                "inf" if not np.isfinite(rec.cost) else rec.cost,
                1 if rec.s == model.t else 0,
            ]
            for rec in model.history
        ],
    )
    d = model.X_t.shape[1]
    coord_header = [f"x_{j + 1}" for j in range(d)]
    for rec in model.history:
        write_csv(
            out_dir / f"selected_points_s{rec.s}.csv",
            coord_header,
            [list(p) for p in rec.points],
        )

    if args.data:
        dataset = ingest_csv(args.data, has_header=args.has_header)
        X_m = _parse_grid(args.grid) if args.grid else _default_grid(model)
        pred = predict_intervals(model, dataset, X_m, alpha=args.alpha)
        write_csv(
            out_dir / "prediction_band.csv",
            coord_header + ["mean", "std", "lower", "upper"],
            [
                list(x) + [m, s, lo, hi]
                for x, m, s, lo, hi in zip(
                    X_m, pred.mean, pred.std, pred.lower, pred.upper
                )
            ],
            meta={
                "df_res": pred.df_res,
                "sigma2_hat": pred.sigma2_hat,
                "alpha": pred.alpha,
            },
        )
    else:
        print("note: prediction band skipped (needs --data for interval widths)")
    print(f"report files written to {out_dir}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="hiersparse", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common_fit(p):
        p.add_argument("--T", default="auto", help="base squared-distance scale or 'auto'")
        p.add_argument("--M", type=float, default=2.0, help="scale divisor (> 1)")
        p.add_argument("--phi", type=float, default=1e-10, help="rank precision in (0,1)")
        p.add_argument("--k-extra", dest="k_extra", type=int, default=8,
                       help="sketch oversampling rows")
        p.add_argument("--max-scales", dest="max_scales", type=int, default=25)

    p_fit = sub.add_parser("fit", help="fit a sparse model to data")
    p_fit.add_argument("--data", help="training CSV (features..., target)")
    p_fit.add_argument("--has-header", action="store_true")
    p_fit.add_argument("--synth", choices=sorted(FAMILY_DIMS),
                       help="generate a synthetic benchmark instead of reading a file")
    p_fit.add_argument("--n", type=int, help="synthetic sample size")
    p_fit.add_argument("--noise", type=float, help="synthetic noise standard deviation")
    p_fit.add_argument("--range", help="synthetic bounds lo:hi[,lo:hi]")
    p_fit.add_argument("--seed", type=int, default=0)
    add_common_fit(p_fit)
    p_fit.add_argument("--out", required=True, help="model JSON path")
    p_fit.add_argument("--report", help="per-scale report CSV path")
    p_fit.add_argument("--export-data", dest="export_data",
                       help="also write the training data as CSV (useful with --synth)")
    p_fit.set_defaults(func=cmd_fit)

    p_pred = sub.add_parser("predict", help="predict from a saved model")
    p_pred.add_argument("--model", required=True)
    p_pred.add_argument("--query", help="CSV of query points (coordinates only)")
    p_pred.add_argument("--grid", help="query grid lo:hi:count[,lo:hi:count]")
    p_pred.add_argument("--has-header", action="store_true")
    p_pred.add_argument("--ci", type=float, metavar="ALPHA",
                        help="emit std and (1-ALPHA) intervals; needs --data")
    p_pred.add_argument("--data", help="training CSV, required with --ci")
    p_pred.add_argument("--out", required=True)
    p_pred.set_defaults(func=cmd_predict)

    p_rep = sub.add_parser("report", help="emit plot-ready CSVs from a model file")
    p_rep.add_argument("--model", required=True)
    p_rep.add_argument("--out-dir", dest="out_dir", required=True)
    p_rep.add_argument("--data", help="training CSV; enables the prediction band")
    p_rep.add_argument("--grid", help="band grid lo:hi:count[,lo:hi:count]")
    p_rep.add_argument("--alpha", type=float, default=0.05)
    p_rep.add_argument("--has-header", action="store_true")
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CSVParseError, FileNotFoundError) as exc:
        print(f"hiersparse: error: {exc}", file=sys.stderr)
        return 1
    except (FitError, IllConditionedScaleError, DegenerateDofError, ValueError) as exc:
        print(f"hiersparse: computation failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
