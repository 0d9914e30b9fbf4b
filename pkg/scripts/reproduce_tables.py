"""Nominal vs rotor-4-fault metric tables plus the chattering comparison.

    python3 scripts/reproduce_tables.py --out-dir results/

Writes the ``compare`` outputs (two telemetry CSVs and metrics.json) and
prints, for each input, the control total variation over the last 5 s in
super-twisting, signum-baseline and continuous-function modes.
"""

from __future__ import annotations

import argparse
import sys
import time

from quadftc.cli import main as cli_main
from quadftc.controller import MODES
from quadftc.metrics import total_variation
from quadftc.scenario import build_experiment_scenarios
from quadftc.simulation import simulate


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args(argv)

    code = cli_main(["compare", "--out-dir", args.out_dir])
    if code:
        return code

    nominal, _ = build_experiment_scenarios()
    print("\ncontrol total variation, nominal scenario, t >= 5 s")
    print(f"{'mode':<17} {'U1':>10} {'U2':>10} {'U3':>10} {'U4':>10} {'wall (s)':>9}")
    for mode in MODES:
        t0 = time.perf_counter()
        tel = simulate(nominal.with_mode(mode))
        wall = time.perf_counter() - t0
        late = tel["t"] >= 5.0
        tv = [total_variation(tel[u][late]) for u in ("U1", "U2", "U3", "U4")]
        print(f"{mode:<17} " + " ".join(f"{v:>10.4g}" for v in tv) + f" {wall:>9.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
