"""Command-line interface: ``quadftc run | report | compare | sweep``.

Exit codes: 0 success, 2 configuration or telemetry-schema error,
3 numerical failure (divergence, singular attitude, infeasible allocation).
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import yaml

from .controller import MODES
from .errors import ConfigError, DomainError, SimulationDiverged, TelemetrySchemaError
from .report import format_comparison, format_json, format_table, telemetry_metrics
from .scenario import ScenarioConfig, build_experiment_scenarios, load_scenario, scenario_from_dict
from .simulation import simulate
from .telemetry import read_csv, write_csv

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

SWEEP_KEYS = ("lam", "k1", "k2", "k3", "k4", "n")


def _err(msg: str) -> None:
    print(f"quadftc: error: {msg}", file=sys.stderr)


def _load(path) -> ScenarioConfig:
    if path is None:
        return ScenarioConfig()
    try:
        return load_scenario(path)
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc.strerror}") from exc


# ------------------------------------------------------------------ commands


def cmd_run(args) -> int:
    cfg = _load(args.config)
    if args.mode:
        cfg = cfg.with_mode(args.mode)
    tel = simulate(cfg)
    write_csv(tel, args.out)
    print(f"wrote {len(tel)} records to {args.out}")
    return EXIT_OK


def cmd_report(args) -> int:
    cfg = _load(args.config)
    tel = read_csv(args.input)
    metrics = telemetry_metrics(tel, cfg.references, band=args.band)
    print(format_json(metrics) if args.format == "json" else format_table(metrics))
    return EXIT_OK


def _simulate_indexed(item):
    # module-level so worker processes can unpickle it
    index, cfg = item
    return index, simulate(cfg)


def _run_all(configs, jobs):
    """Simulate every config; results are ordered by input index."""
    items = list(enumerate(configs))
    if jobs <= 1:
        results = [_simulate_indexed(it) for it in items]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_simulate_indexed, items))
    return [tel for _, tel in sorted(results, key=lambda r: r[0])]


def cmd_compare(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    scenarios = build_experiment_scenarios()
    if args.mode:
        scenarios = tuple(s.with_mode(args.mode) for s in scenarios)
    tels = _run_all(scenarios, args.jobs)
    tables = {}
    for name, cfg, tel in zip(("nominal", "faulted"), scenarios, tels):
        write_csv(tel, out / f"{name}.csv")
        tables[name] = telemetry_metrics(tel, cfg.references, band=args.band)
    doc = {name: json.loads(format_json(m)) for name, m in tables.items()}
    (out / "metrics.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(format_comparison(tables["nominal"], tables["faulted"]))
    return EXIT_OK


def _load_grid(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError("<grid>", f"cannot read {path}: {exc.strerror}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError("<grid>", f"not valid YAML: {exc}") from exc
    if not isinstance(doc, dict) or not doc:
        raise ConfigError("<grid>", "expected a non-empty mapping of gain name to value list")
    grid = {}
    for key, values in doc.items():
        if key not in SWEEP_KEYS:
            raise ConfigError(f"grid.{key}", f"unknown gain; expected one of {SWEEP_KEYS}")
        if not isinstance(values, list) or not values:
            raise ConfigError(f"grid.{key}", "expected a non-empty list")
        grid[key] = values
    return grid


def sweep_objective(metrics: dict) -> float:
    """Sum of overshoot (%) and settling time (s) over all channels.

    A channel that never settles makes the objective infinite.
    """
    total = 0.0
    for m in metrics.values():
        if m.settling_time is None:
            return math.inf
        total += (m.overshoot or 0.0) + m.settling_time
    return total


def _sweep_point(item):
    index, cfg = item
    try:
        tel = simulate(cfg)
    except SimulationDiverged as exc:
        return index, None, f"diverged at t={exc.t}"
    return index, telemetry_metrics(tel, cfg.references), "ok"


def cmd_sweep(args) -> int:
    base = _load(args.config)
    grid = _load_grid(args.grid)
    keys = list(grid)
    points = []
    for combo in itertools.product(*(grid[k] for k in keys)):
        kw = dict(zip(keys, combo))
        try:
            gains = replace(base.gains, **kw)
        except (DomainError, TypeError) as exc:
            raise ConfigError("grid", f"invalid gains {kw}: {exc}") from exc
        points.append((kw, replace(base, gains=gains)))

    items = [(i, cfg) for i, (_, cfg) in enumerate(points)]
    if args.jobs <= 1:
        results = [_sweep_point(it) for it in items]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_point, items))
    results.sort(key=lambda r: r[0])

    channels = ("roll", "pitch", "yaw", "altitude")
    header = (["index"] + keys + [f"{c}_{q}" for c in channels for q in ("overshoot", "settling")]
              + ["objective", "status"])
    best = None
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for index, metrics, status in results:
            kw = points[index][0]
            row = [index] + [kw[k] for k in keys]
            if metrics is None:
                row += [""] * (2 * len(channels)) + ["inf", status]
            else:
                for c in channels:
                    m = metrics[c]
                    row += ["" if m.overshoot is None else repr(m.overshoot),
                            "" if m.settling_time is None else repr(m.settling_time)]
                obj = sweep_objective(metrics)
                row += [repr(obj), status]
                if best is None or obj < best[0]:
                    best = (obj, kw)
            writer.writerow(row)
    print(f"wrote {len(results)} grid points to {args.out}")
    if best is not None:
        print(f"best objective {best[0]:.6g} at {best[1]}")
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadftc",
        description="Quadrotor sliding-mode fault-tolerant control simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate one scenario and write telemetry CSV")
    p.add_argument("--config", help="scenario YAML (omit for the nominal scenario)")
    p.add_argument("--out", required=True, help="telemetry CSV path")
    p.add_argument("--mode", choices=MODES, help="override the controller mode")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="metric table for a telemetry CSV")
    p.add_argument("--in", dest="input", required=True, help="telemetry CSV path")
    p.add_argument("--band", type=float, default=0.02, help="settling band fraction")
    p.add_argument("--config", help="scenario YAML the telemetry came from "
                   "(supplies the references; default scenario if omitted)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("compare", help="run nominal and rotor-4 fault scenarios side by side")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--band", type=float, default=0.02)
    p.add_argument("--mode", choices=MODES, help="override the controller mode")
    p.add_argument("--jobs", type=int, default=1, help="parallel simulations")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="grid search over controller gains")
    p.add_argument("--config", help="base scenario YAML")
    p.add_argument("--grid", required=True, help="YAML mapping gain name -> list of values")
    p.add_argument("--out", required=True, help="results CSV path")
    p.add_argument("--jobs", type=int, default=1, help="parallel simulations")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "band", 0.02) is not None and not (0 < getattr(args, "band", 0.02) < 1):
        _err(f"--band must lie in (0, 1), got {args.band}")
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        _err(f"invalid configuration: {exc}")
        return EXIT_CONFIG
    except TelemetrySchemaError as exc:
        _err(f"telemetry schema mismatch: {exc}")
        return EXIT_CONFIG
    except OSError as exc:
        _err(str(exc))
        return EXIT_CONFIG
    except SimulationDiverged as exc:
        _err(f"numerical failure at t={exc.t}: {exc}")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
