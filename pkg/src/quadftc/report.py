"""Per-channel metric tables from telemetry.

Rows follow the order roll, pitch, yaw, altitude.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .metrics import (
    ResponseMetrics,
    overshoot,
    rise_time,
    rms,
    settling_time,
    sinusoid_tracking_metrics,
    total_variation,
)
from .scenario import References, Sinusoid
from .simulation import Telemetry

__all__ = ["ROWS", "channel_metrics", "telemetry_metrics", "format_table", "format_json",
           "format_comparison"]

# (row label, reference attribute, state column, input column)
ROWS = (
    ("roll", "phi", "phi", "U2"),
    ("pitch", "theta", "theta", "U3"),
    ("yaw", "psi", "psi", "U4"),
    ("altitude", "z", "z", "U1"),
)


def channel_metrics(t, ref: Sinusoid, measured, control, band: float = 0.02) -> ResponseMetrics:
    """Metrics for one channel driven by ``ref``.

    A moving reference is scored on its first peak (see
    :func:`~quadftc.metrics.sinusoid_tracking_metrics`). A constant
    reference is scored as a set-point: against its value if non-zero;
    against nothing if zero, in which case rise time and overshoot are
    undefined and settling uses an absolute band of ``band`` around 0.
    """
    t = np.asarray(t, dtype=float)
    measured = np.asarray(measured, dtype=float)
    control = np.asarray(control, dtype=float)
    values = np.array([ref(x)[0] for x in t.tolist()])
    _, peak = ref.first_peak()
    if peak != 0:
        return sinusoid_tracking_metrics(t, values, measured, control, offset=ref.offset,
                                         peak=peak, band=band)
    half = control[t >= t[0] + 0.5 * (t[-1] - t[0])]
    target = ref.offset
    err = measured - values
    if target != 0:
        return ResponseMetrics(rise_time(t, measured, target), overshoot(measured, target),
                               settling_time(t, measured, target, band), rms(err),
                               total_variation(half))
    return ResponseMetrics(None, None, settling_time(t, 1.0 + err, 1.0, band), rms(err),
                           total_variation(half))


def telemetry_metrics(tel: Telemetry, references: References, band: float = 0.02) -> dict:
    t = tel["t"]
    return {
        label: channel_metrics(t, getattr(references, attr), tel[col], tel[u], band)
        for label, attr, col, u in ROWS
    }


def _cell(v, fmt):
    if v is None:
        return "n/r"
    return format(v, fmt)


def format_table(metrics: dict) -> str:
    lines = [f"{'channel':<9} {'rise (s)':>9} {'overshoot (%)':>14} {'settling (s)':>13} "
             f"{'rms error':>11} {'control TV':>11}"]
    for label, m in metrics.items():
        lines.append(
            f"{label:<9} {_cell(m.rise_time, '.3f'):>9} {_cell(m.overshoot, '.3f'):>14} "
            f"{_cell(m.settling_time, '.3f'):>13} {_cell(m.rms_error, '.3e'):>11} "
            f"{_cell(m.control_total_variation, '.4g'):>11}"
        )
    return "\n".join(lines)


def format_comparison(nominal: dict, faulted: dict) -> str:
    """Side-by-side nominal/faulted table of rise time, overshoot and settling."""
    lines = [f"{'channel':<9} | {'rise':>7} {'os %':>8} {'settle':>7} | "
             f"{'rise':>7} {'os %':>8} {'settle':>7}",
             f"{'':<9} | {'nominal':^24} | {'rotor 4 fault':^24}"]
    for label in nominal:
        a, b = nominal[label], faulted[label]
        lines.append(
            f"{label:<9} | {_cell(a.rise_time, '.3f'):>7} {_cell(a.overshoot, '.3f'):>8} "
            f"{_cell(a.settling_time, '.3f'):>7} | {_cell(b.rise_time, '.3f'):>7} "
            f"{_cell(b.overshoot, '.3f'):>8} {_cell(b.settling_time, '.3f'):>7}"
        )
    return "\n".join(lines)


def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def format_json(metrics: dict) -> str:
    return json.dumps(
        {label: {k: _clean(v) for k, v in m.as_dict().items()} for label, m in metrics.items()},
        indent=2,
    )
