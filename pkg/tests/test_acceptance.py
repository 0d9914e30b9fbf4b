"""Acceptance criteria, one test per criterion.

Each test records a ``[criterion N] PASS|FAIL: ...`` line, printed in the
pytest terminal summary (and directly when this file is run as a script),
then asserts. Tolerances are the stated ones; nothing is loosened to make a
result pass.

    python3 -m pytest tests/test_acceptance.py -v
"""

import json
import math
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from quadftc.allocation import allocate_with_status, estimate_effectiveness
from quadftc.cli import main as cli_main
from quadftc.controller import smooth_sign
from quadftc.dynamics import FaultEntry, FaultSchedule, SimState, apply_fault, state_derivative
from quadftc.integrator import IntegratorConfig, rk4_step
from quadftc.metrics import overshoot, rise_time, settling_time, total_variation
from quadftc.model import QuadrotorParams, mix, mixing_matrix
from quadftc.scenario import build_experiment_scenarios
from quadftc.simulation import simulate

P = QuadrotorParams()
CHANNELS = ("roll", "pitch", "yaw", "altitude")


def record(n, ok, detail):
    label = f"criterion {n:>2}" if isinstance(n, int) else n
    line = f"[{label}] {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def _fmt(v, fmt=".3f"):
    return "n/r" if v is None else format(v, fmt)


@pytest.fixture(scope="module")
def compare_outputs(tmp_path_factory):
    """Two independent ``compare`` invocations with their parsed metrics."""
    dirs = []
    for i in range(2):
        d = tmp_path_factory.mktemp(f"compare{i}")
        assert cli_main(["compare", "--out-dir", str(d)]) == 0
        dirs.append(d)
    metrics = json.loads((dirs[0] / "metrics.json").read_text())
    return dirs, metrics


# ---------------------------------------------------------------- trend criteria


def test_runtime_per_run():
    times = {}
    for name, cfg in zip(("nominal", "faulted"), build_experiment_scenarios()):
        t0 = time.perf_counter()
        simulate(cfg)
        times[name] = time.perf_counter() - t0
    ok = all(t <= 2.0 for t in times.values())
    record("runtime     ", ok, "wall-clock per 10 s run at dt = 1 ms <= 2 s: "
           + ", ".join(f"{k} {v:.2f} s" for k, v in times.items()))
    assert ok


def test_criterion_1_nominal_overshoot_and_settling(compare_outputs):
    m = compare_outputs[1]["nominal"]
    os_ok = all(m[c]["overshoot"] <= 3.0 for c in ("roll", "pitch", "yaw")) \
        and m["altitude"]["overshoot"] <= 5.0
    st_ok = all(m[c]["settling_time"] is not None and m[c]["settling_time"] <= 0.5 for c in CHANNELS)
    ok = os_ok and st_ok
    record(1, ok, "nominal overshoot % (<=3 att, <=5 alt) "
           + "/".join(_fmt(m[c]["overshoot"]) for c in CHANNELS)
           + "; settling s (<=0.5) " + "/".join(_fmt(m[c]["settling_time"]) for c in CHANNELS))
    assert ok


def test_criterion_2_faulted_overshoot_trend(compare_outputs):
    dirs, metrics = compare_outputs
    nom, flt = metrics["nominal"], metrics["faulted"]
    tel = np.loadtxt(dirs[0] / "faulted.csv", delimiter=",", skiprows=2)
    bounded = bool(np.isfinite(tel).all() and np.abs(tel[:, 1:13]).max() < 1e3)
    exceeds = {c: flt[c]["overshoot"] > nom[c]["overshoot"] for c in CHANNELS}
    yaw_top = all(flt["yaw"]["overshoot"] > flt[c]["overshoot"] for c in ("roll", "pitch", "altitude"))
    capped = all(flt[c]["overshoot"] <= 25.0 for c in CHANNELS)
    ok = bounded and all(exceeds.values()) and yaw_top and capped
    record(2, ok, f"faulted bounded={bounded}; overshoot % faulted vs nominal "
           + ", ".join(f"{c} {flt[c]['overshoot']:.4f}>{nom[c]['overshoot']:.4f}:{exceeds[c]}"
                       for c in CHANNELS)
           + f"; yaw strictly largest={yaw_top}; all <=25%={capped}")
    assert ok


def test_criterion_3_faulted_settling(compare_outputs):
    flt = compare_outputs[1]["faulted"]
    st = {c: flt[c]["settling_time"] for c in CHANNELS}
    within = all(v is not None and v <= 1.5 for v in st.values())
    yaw_slowest = within and all(st["yaw"] > st[c] for c in ("roll", "pitch", "altitude"))
    ok = within and yaw_slowest
    record(3, ok, "faulted settling s (<=1.5, yaw slowest) "
           + "/".join(_fmt(st[c]) for c in CHANNELS) + f"; yaw slowest={yaw_slowest}")
    assert ok


def test_criterion_4_chattering():
    nominal, _ = build_experiment_scenarios()
    st_tel = simulate(nominal.with_mode("super-twisting"))
    sg_tel = simulate(nominal.with_mode("signum-baseline"))
    late = st_tel["t"] >= 5.0
    ratios = {u: total_variation(st_tel[u][late]) / total_variation(sg_tel[u][late])
              for u in ("U1", "U2", "U3", "U4")}
    ok = all(r <= 0.1 for r in ratios.values())
    record(4, ok, "TV(super-twisting)/TV(signum) over last 5 s (<=0.1) "
           + ", ".join(f"{u} {r:.4f}" for u, r in ratios.items()))
    assert ok


# ---------------------------------------------------------------- property suites


def test_criterion_5_mixing_round_trip():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240605)
    vmax = P.omega_max**2
    B = mixing_matrix(P)
    worst_nom = 0.0
    for _ in range(100):
        u = B @ rng.uniform(0.02, 0.98, 4) * vmax
        w, clamped = allocate_with_status(u, (1, 1, 1, 1), P)
        assert not clamped
        got = np.array(mix(w * w, P))
        worst_nom = max(worst_nom, np.abs(got - u).max() / np.abs(u).max())
    worst_flt, checked = 0.0, 0
    while checked < 100:
        k = rng.uniform(0.4, 1.0, 4)
        u = B @ (rng.uniform(0.0, 1.0, 4) * k * k * vmax)
        w, clamped = allocate_with_status(u, k, P)
        if clamped:
            continue
        got = np.array(mix((w * k) ** 2, P))
        worst_flt = max(worst_flt, np.abs(got - u).max() / np.abs(u).max())
        checked += 1
    elapsed = time.perf_counter() - t0
    ok = worst_nom <= 1e-9 and worst_flt <= 1e-9 and elapsed < 1.0
    record(5, ok, f"round-trip rel error K=1 {worst_nom:.1e}, faulted {worst_flt:.1e} "
           f"(<=1e-9), {elapsed:.2f} s")
    assert ok


def test_criterion_6_rk4_order():
    def final(dt):
        y = np.array([1.0])
        for i in range(IntegratorConfig(dt=dt, t_end=1.0).n_steps):
            y = rk4_step(lambda t, s: -s, y, i * dt, dt)
        return y[0]

    ratio = abs(final(0.01) - math.exp(-1)) / abs(final(0.005) - math.exp(-1))
    ok = 14 <= ratio <= 18
    record(6, ok, f"RK4 error ratio under dt halving {ratio:.3f} (in [14, 18])")
    assert ok


def test_criterion_7_metric_oracles():
    t = np.arange(0, 20.0005, 1e-3)
    y = 1 - np.exp(-t)
    rt, st = rise_time(t, y, 1.0), settling_time(t, y, 1.0, 0.02)
    zeta, wd = 0.5, math.sqrt(0.75)
    y2 = 1 - np.exp(-zeta * t) * (np.cos(wd * t) + zeta / wd * np.sin(wd * t))
    os_ = overshoot(y2, 1.0)
    ok = abs(rt - math.log(9)) <= 0.01 and abs(st - math.log(50)) <= 0.01 and abs(os_ - 16.3) <= 0.2
    record(7, ok, f"rise {rt:.4f} vs ln9 {math.log(9):.4f}; settling {st:.4f} vs ln50 "
           f"{math.log(50):.4f}; overshoot {os_:.3f} vs 16.3")
    assert ok


def test_criterion_8_fault_identity():
    cmd = np.array([300.0, 361.5, 500.0, 1000.0])
    worst = 0.0
    for le in (0.0, 0.25, 0.6, 1.0):
        for rotor in (1, 2, 3, 4):
            sched = FaultSchedule((FaultEntry(rotor, 0.0, le),))
            k = estimate_effectiveness(cmd, apply_fault(cmd, sched, 0.0))
            worst = max(worst, abs((1 - k[rotor - 1]) - le))
    ok = worst <= 1e-12
    record(8, ok, f"recovered LE max error {worst:.1e} (<=1e-12)")
    assert ok


def test_criterion_9_hover_invariance():
    y0 = SimState(z=2.0).as_array()
    y = y0.copy()
    cfg = IntegratorConfig()
    u = (P.m * P.g, 0.0, 0.0, 0.0)
    for i in range(cfg.n_steps):
        y = rk4_step(lambda t, s: state_derivative(s, u, 0.0, P), y, i * cfg.dt, cfg.dt)
    dev = float(np.abs(y - y0).max())
    ok = dev < 1e-9
    record(9, ok, f"hover max state deviation over 10 s {dev:.1e} (<1e-9)")
    assert ok


def test_criterion_10_determinism(compare_outputs):
    dirs, _ = compare_outputs
    same = {name: (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()
            for name in ("nominal.csv", "faulted.csv")}
    ok = all(same.values())
    record(10, ok, "compare CSVs byte-identical across two runs: "
           + ", ".join(f"{k} {v}" for k, v in same.items()))
    assert ok


def test_criterion_11_smooth_sign():
    t0 = time.perf_counter()
    grid = np.linspace(-1, 1, 2001)
    odd = bounded = monotone = True
    for n in (2, 8, 32):
        vals = np.array([smooth_sign(s, n) for s in grid])
        neg = np.array([smooth_sign(-s, n) for s in grid])
        odd &= bool(np.all(vals == -neg))
        bounded &= bool(np.all(np.abs(vals) <= 1))
        # non-decreasing: at large n the values round to exactly +-1 near the ends
        monotone &= bool(np.all(np.diff(vals) >= 0))
        if n == 2:
            monotone &= bool(np.all(np.diff(vals) > 0))
    converging = True
    for s in (-0.9, -0.3, -0.01, 0.01, 0.3, 0.9):
        gaps = [abs(smooth_sign(s, n) - math.copysign(1, s)) for n in (2, 8, 32)]
        converging &= gaps[0] > gaps[1] > gaps[2]
    elapsed = time.perf_counter() - t0
    ok = odd and bounded and monotone and converging and elapsed < 1.0
    record(11, ok, f"odd={odd} bounded={bounded} monotone on [-1,1]={monotone} "
           f"converges to sign (n=2,8,32)={converging}")
    assert ok


if __name__ == "__main__":
    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    sys.exit(code)
