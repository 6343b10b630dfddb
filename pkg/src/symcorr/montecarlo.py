"""Size/power experiments: replicate, test, aggregate, tabulate."""
from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .dgp import DGP_NAMES, RNG_NAME, SEED_DERIVATION, DgpSpec, derive_seed, simulate
from .errors import InvalidInputError
from .testing import METHODS, run_test

DEFAULT_SIZES = (2000, 5000, 10000)
NULL_THETA = 0.5
ALT_THETA = 0.8


@dataclass(frozen=True)
class ExperimentPlan:
    dgp_x: DgpSpec
    dgp_y: DgpSpec
    test: str = "sci"
    d: int = 3
    n: int = 2000
    reps: int = 1000
    alpha: float = 0.05
    root_seed: int = 20240101
    test_options: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if self.reps < 1:
            raise InvalidInputError("reps must be >= 1")
        if not 0 < self.alpha <= 1:
            raise InvalidInputError("alpha must lie in (0, 1]")
        if self.test not in METHODS:
            raise InvalidInputError(f"unknown test {self.test!r}")


@dataclass
class ExperimentResult:
    rejections: int
    reps: int
    wall_time: float
    per_rep_stats: list[float] | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def rejection_rate(self) -> float:
        return self.rejections / self.reps

    @property
    def mc_std_error(self) -> float:
        r = self.rejection_rate
        return math.sqrt(r * (1 - r) / self.reps)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["rejection_rate"] = self.rejection_rate
        d["mc_std_error"] = self.mc_std_error
        return d


def _one_replication(plan: ExperimentPlan, rep: int):
    x = simulate(replace(plan.dgp_x, n=plan.n, seed=derive_seed(plan.root_seed, rep, 0)))
    y = simulate(replace(plan.dgp_y, n=plan.n, seed=derive_seed(plan.root_seed, rep, 1)))
    opts = dict(plan.test_options)
    if plan.test == "jp":
        opts.setdefault("seed", derive_seed(plan.root_seed, rep, 2))
    res = run_test(plan.test, x, y, d=plan.d, **opts)
    return res.statistic, res.p_value, bool(res.diagnostics.get("degenerate", False))


def _run_chunk(plan: ExperimentPlan, reps: range):
    return [_one_replication(plan, r) for r in reps]


def run_experiment(plan: ExperimentPlan, threads: int = 1, keep_stats: bool = False) -> ExperimentResult:
    """Run ``plan.reps`` replications and count rejections at ``plan.alpha``.

    Replication ``r`` draws X and Y from streams ``(r, 0)`` and ``(r, 1)`` of
    the root seed, so results do not depend on ``threads``.
    """
    start = time.perf_counter()
    if threads <= 1:
        outcomes = _run_chunk(plan, range(plan.reps))
    else:
        bounds = np.linspace(0, plan.reps, threads + 1).astype(int)
        chunks = [range(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(_run_chunk, [plan] * len(chunks), chunks)
            outcomes = [o for part in parts for o in part]
    rejections = sum(1 for _, p, _ in outcomes if p <= plan.alpha)
    degenerate = [i for i, (_, _, deg) in enumerate(outcomes) if deg]
    diagnostics = {
        "degenerate_replications": len(degenerate),
        "degenerate_rejections": sum(1 for i in degenerate if outcomes[i][1] <= plan.alpha),
    }
    return ExperimentResult(
        rejections=rejections,
        reps=plan.reps,
        wall_time=time.perf_counter() - start,
        per_rep_stats=[s for s, _, _ in outcomes] if keep_stats else None,
        diagnostics=diagnostics,
    )


def dgp_label(model: str) -> str:
    inverse = {v: k for k, v in DGP_NAMES.items()}
    return f"DGP{inverse[model]}"


def size_plan(model: str, n: int, test: str = "sci", **kw) -> ExperimentPlan:
    spec = DgpSpec(model, NULL_THETA)
    return ExperimentPlan(spec, spec, test=test, n=n, **kw)


def power_plan(model_x: str, model_y: str, n: int, test: str = "sci", **kw) -> ExperimentPlan:
    """X from ``model_x``; Y from ``model_y``, or the same model with its coefficient raised 0.5 -> 0.8."""
    theta_y = ALT_THETA if model_x == model_y else NULL_THETA
    return ExperimentPlan(DgpSpec(model_x, NULL_THETA), DgpSpec(model_y, theta_y), test=test, n=n, **kw)


@dataclass
class Table:
    """Grid of experiment results with row and column labels.

    Cells listed in ``omitted`` are printed as ``--``; any other missing cell
    is an error.
    """

    title: str
    rows: list[str]
    cols: list[str]
    cells: dict[tuple[str, str], ExperimentResult]
    omitted: set[tuple[str, str]] = field(default_factory=set)

    def missing(self) -> list[tuple[str, str]]:
        return [(r, c) for r in self.rows for c in self.cols
                if (r, c) not in self.cells and (r, c) not in self.omitted]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "rows": self.rows,
            "cols": self.cols,
            "cells": [{"row": r, "col": c, **res.to_dict()} for (r, c), res in self.cells.items()],
            "omitted": [{"row": r, "col": c} for r, c in sorted(self.omitted)],
        }


class IncompleteTableError(InvalidInputError):
    pass


def emit_table(table: Table) -> tuple[str, str]:
    """Render ``table`` as (TSV, aligned text); values to 3 decimals with MC standard errors."""
    missing = table.missing()
    if missing:
        listing = ", ".join(f"{r}/{c}" for r, c in missing)
        raise IncompleteTableError(f"table {table.title!r} is missing cells: {listing}")

    def cell(r, c):
        res = table.cells.get((r, c))
        if res is None:
            return "--", "--"
        return f"{res.rejection_rate:.3f}", f"{res.mc_std_error:.3f}"

    header = [""] + [h for c in table.cols for h in (c, f"{c}_se")]
    tsv_lines = ["\t".join(header)]
    for r in table.rows:
        tsv_lines.append("\t".join([r] + [v for c in table.cols for v in cell(r, c)]))

    text_rows = [[""] + table.cols]
    for r in table.rows:
        row = [r]
        for c in table.cols:
            v, se = cell(r, c)
            row.append(v if v == "--" else f"{v} ({se})")
        text_rows.append(row)
    widths = [max(len(row[i]) for row in text_rows) for i in range(len(text_rows[0]))]
    lines = [table.title]
    for row in text_rows:
        lines.append("  ".join(v.ljust(w) if i == 0 else v.rjust(w) for i, (v, w) in enumerate(zip(row, widths))))
    return "\n".join(tsv_lines) + "\n", "\n".join(lines) + "\n"


def size_table(test: str = "sci", sizes=DEFAULT_SIZES, models=tuple(DGP_NAMES.values()),
               threads: int = 1, progress=None, **plan_kw) -> Table:
    """Size grid with rows ``n=...`` and one column per DGP."""
    rows = [f"n={n}" for n in sizes]
    cols = [dgp_label(m) for m in models]
    cells = {}
    for n in sizes:
        for m in models:
            cells[(f"n={n}", dgp_label(m))] = run_experiment(size_plan(m, n, test, **plan_kw), threads)
            if progress:
                progress(f"size {test} {dgp_label(m)} n={n}: {cells[(f'n={n}', dgp_label(m))].rejection_rate:.3f}")
    return Table(f"Size of the {test} test", rows, cols, cells)


def power_table(test: str = "sci", sizes=DEFAULT_SIZES, models=tuple(DGP_NAMES.values()),
                threads: int = 1, progress=None, **plan_kw) -> Table:
    """Upper-triangular power grid; rows ``DGPi n=...``, columns DGPj with ``j >= i``."""
    rows = [f"{dgp_label(mx)} n={n}" for mx in models for n in sizes]
    cols = [dgp_label(m) for m in models]
    cells, omitted = {}, set()
    for i, mx in enumerate(models):
        for n in sizes:
            row = f"{dgp_label(mx)} n={n}"
            for j, my in enumerate(models):
                if j < i:
                    omitted.add((row, dgp_label(my)))
                    continue
                res = run_experiment(power_plan(mx, my, n, test, **plan_kw), threads)
                cells[(row, dgp_label(my))] = res
                if progress:
                    progress(f"power {test} {row} vs {dgp_label(my)}: {res.rejection_rate:.3f}")
    return Table(f"Power of the {test} test", rows, cols, cells, omitted)


def seed_manifest(root_seed: int, **extra) -> dict:
    return {"root_seed": int(root_seed), "rng": RNG_NAME, "derivation": SEED_DERIVATION, **extra}


def write_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, allow_nan=False)
        fh.write("\n")
