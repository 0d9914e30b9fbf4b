"""Grid search over controller gains on the nominal scenario.

Runs ``quadftc sweep`` over ``scripts/gain_grid.yaml`` (roll and pitch share
k2 = k3 so the grid stays small) and then checks the chattering ratio of the
best point against the signum baseline.

    python3 scripts/tune_gains.py --out sweep.csv
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

import yaml

from quadftc.cli import main as cli_main
from quadftc.metrics import total_variation
from quadftc.scenario import ScenarioConfig
from quadftc.simulation import simulate

HERE = Path(__file__).resolve().parent


def chattering_ratios(gains):
    cfg = replace(ScenarioConfig(), gains=gains)
    st = simulate(cfg.with_mode("super-twisting"))
    sg = simulate(cfg.with_mode("signum-baseline"))
    late = st["t"] >= 5.0
    return {u: total_variation(st[u][late]) / total_variation(sg[u][late])
            for u in ("U1", "U2", "U3", "U4")}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", default=str(HERE / "gain_grid.yaml"))
    ap.add_argument("--out", default="sweep.csv")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args(argv)

    grid = yaml.safe_load(Path(args.grid).read_text())
    # tie pitch to roll: expand k2 into k3 as well by sweeping a config per k2 value
    k2_values = grid.pop("k2", [ScenarioConfig().gains.k2])
    rows = []
    with tempfile.TemporaryDirectory() as tmp:
        for k2 in k2_values:
            cfg_path = Path(tmp) / "base.yaml"
            cfg_path.write_text(yaml.safe_dump({"gains": {"k2": k2, "k3": k2}}))
            grid_path = Path(tmp) / "grid.yaml"
            grid_path.write_text(yaml.safe_dump(grid))
            out = Path(tmp) / f"sweep_{k2}.csv"
            code = cli_main(["sweep", "--config", str(cfg_path), "--grid", str(grid_path),
                             "--out", str(out), "--jobs", str(args.jobs)])
            if code:
                return code
            with open(out, newline="") as fh:
                for row in csv.DictReader(fh):
                    row["k2"] = row["k3"] = k2
                    rows.append(row)

    keys = [k for k in ("lam", "k1", "k2", "k3", "k4", "n") if k in rows[0]]
    rows.sort(key=lambda r: float(r["objective"]))
    with open(args.out, "w", newline="") as fh:
        fields = keys + [k for k in rows[0] if k not in keys and k != "index"]
        w = csv.DictWriter(fh, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    print(f"{len(rows)} points written to {args.out}; best five:")
    for r in rows[:5]:
        print("  ", {k: r[k] for k in keys}, "objective", r["objective"])

    best = rows[0]
    if math.isfinite(float(best["objective"])):
        gains = replace(ScenarioConfig().gains,
                        **{k: (int(float(best[k])) if k == "n" else float(best[k])) for k in keys})
        ratios = chattering_ratios(gains)
        print("super-twisting / signum control variation (last 5 s):",
              {k: round(v, 4) for k, v in ratios.items()})
    return 0


if __name__ == "__main__":
    sys.exit(main())
