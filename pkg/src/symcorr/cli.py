"""Command-line interface: ``symcorr sci|test|simulate|mc``.

Exit codes: 0 success, 2 input error, 3 precondition error, 4 internal error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dgp import DGP_NAMES, MODELS, DgpSpec, simulate
from .entropy import pattern_entropies
from .errors import SeriesParseError, SymcorrError
from .io import read_series, write_series
from .montecarlo import DEFAULT_SIZES, power_table, seed_manifest, size_table, emit_table, write_json
from .patterns import add_jitter, decode_pattern
from .sci import renyi2_from_sci, sci_u_statistic, uniformity_pvalue
from .testing import DENOMINATORS, METHODS, run_test
from .variance import KERNELS, long_run_variance, sci_limit_sd

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_INTERNAL = 0, 2, 3, 4
Z_975 = 1.959963984540054
NEAR_DEGENERATE_PVALUE = 0.01


class InputError(Exception):
    """Raised for unreadable or malformed inputs (exit code 2)."""


def _load(path, column, jitter, seed):
    try:
        series = read_series(path, column).values
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if jitter:
        series = add_jitter(series, jitter, seed)
    return series


def _emit(obj, args, text=None):
    out = json.dumps(obj, indent=2, allow_nan=False) + "\n"
    if getattr(args, "output", None):
        Path(args.output).write_text(out)
    if args.format == "text" and text is not None:
        sys.stdout.write(text)
    else:
        sys.stdout.write(out)


def sci_report(series, d=3, kernel="bartlett", bandwidth=None) -> dict:
    est = sci_u_statistic(series, d)
    lrv = long_run_variance(est.h1_series, est.s_value, kernel, bandwidth)
    half = Z_975 * sci_limit_sd(lrv) / math.sqrt(est.n)
    uni_p = uniformity_pvalue(est.pattern_counts)
    near = lrv.degenerate or (not math.isnan(uni_p) and uni_p > NEAR_DEGENERATE_PVALUE)
    warnings = []
    if lrv.degenerate:
        warnings.append("long-run variance is degenerate (zero); the normal limit collapses to a point mass")
    elif near:
        warnings.append("pattern distribution is close to uniform; the limit variance is near zero "
                        "and the normal approximation is unreliable")
    table = []
    for code, count in sorted(est.pattern_counts.counts.items()):
        table.append({"pattern": list(decode_pattern(code, d).ranks), "code": code,
                      "count": count, "frequency": count / est.n})
    return {
        "n_values": int(np.asarray(series).size),
        "n_windows": est.n,
        "d": d,
        "sci": est.s_value,
        "pe2": renyi2_from_sci(est.s_value) if est.s_value > 0 else None,
        "sigma2_hat": lrv.sigma2_hat,
        "sigma2_raw": lrv.raw_value,
        "bandwidth": lrv.bandwidth,
        "kernel": lrv.kernel,
        "degenerate": lrv.degenerate,
        "near_degenerate": bool(near),
        "uniformity_pvalue": None if math.isnan(uni_p) else uni_p,
        "ci95": [est.s_value - half, est.s_value + half],
        "entropies": pattern_entropies(est.pattern_counts),
        "patterns": table,
        "warnings": warnings,
    }


def cmd_sci(args) -> int:
    series = _load(args.input, args.column, args.jitter, args.seed)
    rep = sci_report(series, args.d, args.kernel, args.bandwidth)
    for w in rep["warnings"]:
        print(f"warning: {w}", file=sys.stderr)
    text = (f"N={rep['n_windows']}  d={rep['d']}\nS={rep['sci']:.6f}  PE2={rep['pe2']}\n"
            f"sigma2={rep['sigma2_hat']:.6g}  CI95=[{rep['ci95'][0]:.6f}, {rep['ci95'][1]:.6f}]\n")
    _emit(rep, args, text)
    return EXIT_OK


def cmd_test(args) -> int:
    x = _load(args.x, args.column, args.jitter, args.seed)
    y = _load(args.y, args.column, args.jitter, args.seed + 1 if args.jitter else args.seed)
    opts = {}
    if args.method == "sci":
        opts = {"kernel": args.kernel, "bandwidth": args.bandwidth, "denominator": args.denominator}
    elif args.method == "jp":
        opts = {"reps": args.reps, "seed": args.seed, "h": args.bandwidth}
    res = run_test(args.method, x, y, d=args.d, **opts)
    rep = res.to_dict()
    rep["alpha"] = args.alpha
    rep["reject"] = res.reject(args.alpha)
    rep["reject_at_0.05"] = res.reject(0.05)
    text = f"{res.method}: statistic={res.statistic:.6g}  p={res.p_value:.6g}  reject@{args.alpha}={rep['reject']}\n"
    _emit(rep, args, text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = DgpSpec(args.model, args.theta, args.n, args.seed, args.burn_in)
    write_series(args.output, simulate(spec))
    manifest = seed_manifest(args.seed, model=spec.model, theta=spec.theta, n=spec.n, burn_in=spec.burn_in)
    if args.manifest:
        write_json(args.manifest, manifest)
    sys.stdout.write(json.dumps(manifest, indent=2) + "\n")
    return EXIT_OK


def _mc_settings(args) -> dict:
    settings = {
        "kind": args.kind, "test": args.test, "sizes": args.sizes, "models": args.models,
        "reps": args.reps, "alpha": args.alpha, "d": args.d, "seed": args.seed,
    }
    if args.plan:
        try:
            plan = json.loads(Path(args.plan).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read plan file {args.plan}: {exc}") from exc
        unknown = set(plan) - set(settings)
        if unknown:
            raise SymcorrError(f"unknown plan keys: {sorted(unknown)}")
        settings.update(plan)
    return settings


def cmd_mc(args) -> int:
    s = _mc_settings(args)
    models = [DGP_NAMES[int(m)] if str(m).isdigit() else m for m in s["models"]]
    for m in models:
        if m not in MODELS:
            raise SymcorrError(f"unknown model {m!r}")
    test_options = {}
    if s["test"] == "jp":
        test_options["reps"] = args.jp_reps
    kw = dict(sizes=tuple(int(n) for n in s["sizes"]), models=tuple(models), threads=args.threads,
              reps=int(s["reps"]), alpha=float(s["alpha"]), d=int(s["d"]), root_seed=int(s["seed"]),
              test_options=test_options)
    progress = (lambda msg: print(msg, file=sys.stderr)) if args.verbose else None
    builder = size_table if s["kind"] == "size" else power_table
    table = builder(s["test"], progress=progress, **kw)
    tsv, text = emit_table(table)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{s['kind']}_{s['test']}"
    (out / f"{stem}.tsv").write_text(tsv)
    (out / f"{stem}.txt").write_text(text)
    manifest = seed_manifest(s["seed"], reps=int(s["reps"]))
    write_json(out / f"{stem}.json", {"settings": {**s, "models": models}, "table": table.to_dict(),
                                      "seed_manifest": manifest})
    write_json(out / "seed_manifest.json", manifest)
    sys.stdout.write(text)
    return EXIT_OK


def _add_common(p, *, column=True):
    p.add_argument("--d", type=int, default=3, help="ordinal pattern order (default 3)")
    p.add_argument("--kernel", choices=sorted(KERNELS), default="bartlett")
    p.add_argument("--bandwidth", type=float, default=None, help="override the log(N) bandwidth")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jitter", type=float, default=0.0, help="uniform tie-breaking noise magnitude (off)")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--output", "-o", default=None, help="also write the JSON report here")
    if column:
        p.add_argument("--column", default=None, help="CSV column name or 0-based index")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symcorr", description="Symbolic correlation integral tools")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sci", help="estimate the SCI and Renyi-2 permutation entropy of a series")
    p.add_argument("input")
    _add_common(p)
    p.set_defaults(func=cmd_sci)

    p = sub.add_parser("test", help="two-sample test for a common data-generating process")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--method", choices=METHODS, default="sci")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--reps", type=int, default=499, help="JP randomization replicates")
    p.add_argument("--denominator", choices=DENOMINATORS, default="rss")
    _add_common(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("simulate", help="simulate a benchmark process to a one-column file")
    p.add_argument("--model", choices=MODELS, required=True)
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--manifest", default=None, help="write the seed manifest JSON here")
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("mc", help="Monte Carlo size/power tables")
    p.add_argument("--kind", choices=("size", "power"), default="size")
    p.add_argument("--test", choices=METHODS, default="sci")
    p.add_argument("--sizes", type=int, nargs="+", default=list(DEFAULT_SIZES))
    p.add_argument("--models", nargs="+", default=list(MODELS), help="model names or DGP numbers 1-4")
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--seed", type=int, default=20240101)
    p.add_argument("--threads", type=int, default=1, help="worker processes; results do not depend on it")
    p.add_argument("--jp-reps", type=int, default=199)
    p.add_argument("--plan", default=None, help="JSON file overriding the plan flags")
    p.add_argument("--out", default="mc_out")
    p.add_argument("--verbose", "-v", action="store_true")
    p.set_defaults(func=cmd_mc)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, SeriesParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SymcorrError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
