"""Sweeps over S, A, K1 or N1, CSV output, figure data and the ``sbacc`` CLI.

Every trial ``t`` of a sweep uses the seed ``(base.seed, t)`` whatever the
axis value or scheme, so all rows of a sweep are paired and a CSV is
reproducible byte for byte. Wall-clock timing is opt-in because it would
break that.
"""

from __future__ import annotations

import argparse
import csv
import functools
import io
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import bounds
from . import dct_code as dc
from . import protocol as P
from .config import ConfigError, ExperimentConfig, load_config

AXES = ("S", "A", "K1", "N1")

COLUMNS = (
    "axis", "axis_value", "scheme", "function", "trials", "avg_rel_error",
    "avg_rel_error_db", "stderr_rel_error", "p_loc_hat", "avg_mse", "bound_total",
    "runtime_ms",
)

FIGURE_AXIS = {"fig1": "S", "fig2": "A"}


@dataclass(frozen=True)
class SweepSpec:
    base: ExperimentConfig
    axis: str = "A"
    values: tuple[int, ...] = (0,)
    schemes: tuple[P.Scheme, ...] = (P.Scheme.SBACC, P.Scheme.BACC, P.Scheme.DISCARD)
    output_path: str | None = None
    workers: int = 1
    timing: bool = False

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        object.__setattr__(self, "schemes", tuple(P.Scheme(s) for s in self.schemes))
        self.validate()

    def validate(self) -> None:
        if self.axis not in AXES:
            raise ConfigError(f"axis must be one of {AXES}, got {self.axis!r}")
        if not self.values:
            raise ConfigError("sweep values must be non-empty")
        if not self.schemes:
            raise ConfigError("at least one scheme is required")
        if self.workers < 1:
            raise ConfigError("workers must be positive")
        for _ in self.configs():
            pass

    def configs(self) -> Iterable[tuple[int, ExperimentConfig]]:
        for v in self.values:
            try:
                cfg = self.base.replace(**{self.axis: v})
            except ConfigError as exc:
                raise ConfigError(f"{self.axis}={v}: {exc}") from exc
            yield v, cfg


@dataclass
class TrialRecord:
    rel_error: float
    mse: float
    p_loc: float
    residual_var: float
    bound: float
    seconds: float = 0.0


@functools.lru_cache(maxsize=16)
def _code(n: int, k1: int) -> dc.DctCode:
    return dc.build_code(n, k1)


def trial_config(cfg: ExperimentConfig, trial: int) -> ExperimentConfig:
    return cfg.replace(seed=P.trial_seed(cfg.seed, trial))


def sbacc_bound(cfg: ExperimentConfig, ds: P.Dataset, f: P.TargetFunction,
                p_loc: float, sigma_q2: float) -> float:
    """Adversarial bound total for one trial, ``p_loc`` being the failure rate."""
    d1, d2 = bounds.derivative_norms(f, ds.alpha, ds.blocks)
    if cfg.A > cfg.n1_effective:
        return float("nan")
    terms = bounds.theorem2_bound(cfg, d1, d2, p_loc=p_loc, sigma_q2=sigma_q2)
    return terms.total


def run_trial(cfg: ExperimentConfig, scheme: P.Scheme, function: str, trial: int,
              timing: bool = False) -> TrialRecord:
    tcfg = trial_config(cfg, trial)
    f = P.get_function(function)
    ds = P.random_dataset(tcfg)
    start = time.perf_counter()
    code = None if scheme is P.Scheme.BACC else _code(tcfg.N, tcfg.K1)
    res = P.run_scheme(scheme, ds, f, tcfg, code)
    seconds = time.perf_counter() - start if timing else 0.0
    stats = res.decode_stats
    bound = float("nan")
    if scheme is P.Scheme.SBACC:
        sq2 = tcfg.sigma_q2 if tcfg.sigma_q2 is not None else stats.residual_var
        p_fail = tcfg.p_loc if tcfg.p_loc is not None else 1.0 - stats.p_loc_hat
        bound = sbacc_bound(tcfg, ds, f, p_fail, sq2)
    return TrialRecord(res.avg_rel_error, res.mse(), stats.p_loc_hat, stats.residual_var,
                       bound, seconds)


def _task(args) -> TrialRecord:
    return run_trial(*args)


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.15e}"


def run_sweep(spec: SweepSpec) -> list[dict]:
    """Run every (axis value, scheme, function, trial) and write the CSV.

    Rows come out ordered by axis value, scheme and function whatever the
    completion order of the worker pool.
    """
    points = [(v, cfg, s, fn) for v, cfg in spec.configs() for s in spec.schemes
              for fn in cfg.function_list]
    tasks = [(cfg, s, fn, t, spec.timing) for _, cfg, s, fn in points for t in range(cfg.trials)]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            records = list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (4 * spec.workers))))
    else:
        records = [_task(t) for t in tasks]
    rows = []
    k = 0
    for v, cfg, s, fn in points:
        recs = records[k:k + cfg.trials]
        k += cfg.trials
        rel = np.array([r.rel_error for r in recs])
        avg = float(rel.mean())
        stderr = float(rel.std(ddof=1) / math.sqrt(len(rel))) if len(rel) > 1 else 0.0
        bound_vals = [r.bound for r in recs]
        rows.append({
            "axis": spec.axis,
            "axis_value": v,
            "scheme": s.value,
            "function": fn,
            "trials": cfg.trials,
            "avg_rel_error": avg,
            "avg_rel_error_db": P.to_db(avg),
            "stderr_rel_error": stderr,
            "p_loc_hat": float(np.mean([r.p_loc for r in recs])),
            "avg_mse": float(np.mean([r.mse for r in recs])),
            "bound_total": float(np.mean(bound_vals)),
            "runtime_ms": float(sum(r.seconds for r in recs) * 1e3),
        })
    if spec.output_path is not None:
        write_csv(rows, spec.output_path)
    return rows


def format_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in COLUMNS])
    return buf.getvalue()


def write_csv(rows: Sequence[dict], path: str | Path) -> None:
    Path(path).write_text(format_csv(rows))


def read_csv(path: str | Path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or list(reader.fieldnames) != list(COLUMNS):
            raise ConfigError(f"{path}: not a sweep CSV (header {reader.fieldnames})")
        rows = []
        for raw in reader:
            row = dict(raw)
            for key in ("axis_value", "trials"):
                row[key] = int(row[key])
            for key in COLUMNS[5:]:
                row[key] = float(row[key])
            rows.append(row)
    return rows


def emit_figure_data(csv_path: str | Path, figure: str, out_path: str | Path) -> dict:
    """Write one ``(axis value, dB error)`` block per series.

    Series are ``scheme/function`` pairs; blocks are separated by two blank
    lines (the gnuplot ``index`` layout) and headed by a ``# series`` comment.
    Returns the series as ``{name: [(x, y), ...]}``.
    """
    figure = figure.lower()
    if figure not in FIGURE_AXIS:
        raise ConfigError(f"figure must be one of {sorted(FIGURE_AXIS)}")
    rows = read_csv(csv_path)
    if not rows:
        raise ConfigError(f"{csv_path}: no data rows")
    axes = {r["axis"] for r in rows}
    if axes != {FIGURE_AXIS[figure]}:
        raise ConfigError(f"{figure} needs an {FIGURE_AXIS[figure]}-sweep, got axis {sorted(axes)}")
    series: dict[str, list[tuple[int, float]]] = {}
    for r in rows:
        series.setdefault(f"{r['scheme']}/{r['function']}", []).append(
            (r["axis_value"], r["avg_rel_error_db"]))
    blocks = []
    for name, pts in series.items():
        lines = [f"# series {name}", f"# {FIGURE_AXIS[figure]} avg_rel_error_db"]
        lines += [f"{x} {_fmt(y)}" for x, y in sorted(pts)]
        blocks.append("\n".join(lines))
    Path(out_path).write_text("\n\n\n".join(blocks) + "\n")
    return series


# --------------------------------------------------------------------------- CLI


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise ConfigError(f"bad integer list {text!r}") from exc


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sbacc", description="SBACC experiment runner")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a sweep and write CSV")
    run.add_argument("--config", required=True)
    run.add_argument("--axis", default=None, choices=AXES)
    run.add_argument("--values", default=None, help="comma-separated integers")
    run.add_argument("--schemes", default="sbacc,bacc,discard")
    run.add_argument("--functions", default=None, help="comma-separated function names")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--trials", type=int, default=None)
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--timing", action="store_true", help="record wall-clock runtime_ms")
    run.add_argument("--out", default=None)
    fig = sub.add_parser("figure", help="reshape a sweep CSV into plot data")
    fig.add_argument("--input", required=True)
    fig.add_argument("--figure", required=True, choices=sorted(FIGURE_AXIS))
    fig.add_argument("--out", required=True)
    bnd = sub.add_parser("bounds", help="print the bound terms for a config")
    bnd.add_argument("--config", required=True)
    bnd.add_argument("--seed", type=int, default=None)
    return ap


def _cmd_run(args) -> None:
    overrides = {"seed": args.seed, "trials": args.trials}
    if args.functions:
        overrides["functions"] = tuple(s.strip() for s in args.functions.split(",") if s.strip())
    cfg = load_config(args.config, **overrides)
    for name in cfg.function_list:
        P.get_function(name)
    axis = args.axis or "A"
    values = _int_list(args.values) if args.values else (getattr(cfg, axis),)
    try:
        schemes = tuple(P.Scheme(s.strip()) for s in args.schemes.split(",") if s.strip())
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    spec = SweepSpec(cfg, axis, values, schemes, args.out, args.workers, args.timing)
    rows = run_sweep(spec)
    if args.out is None:
        sys.stdout.write(format_csv(rows))


def _cmd_bounds(args) -> None:
    cfg = load_config(args.config, seed=args.seed)
    f = P.get_function(cfg.function)
    ds = P.random_dataset(cfg)
    d1, d2 = bounds.derivative_norms(f, ds.alpha, ds.blocks)
    try:
        terms = bounds.theorem2_bound(cfg, d1, d2)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(f"d1 = {_fmt(d1)}")
    print(f"d2 = {_fmt(d2)}")
    for k, v in terms.as_dict().items():
        print(f"{k} = {_fmt(v)}")


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "run":
            _cmd_run(args)
        elif args.command == "figure":
            emit_figure_data(args.input, args.figure, args.out)
        else:
            _cmd_bounds(args)
    except (ConfigError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
