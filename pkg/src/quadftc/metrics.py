"""Time-response metrics: rise time, overshoot, settling time, tracking error.

Times are measured from the first sample, so every metric is invariant to a
shift of the time axis. Not-reached results are reported as ``None``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ResponseMetrics",
    "rise_time",
    "overshoot",
    "settling_time",
    "total_variation",
    "rms",
    "sinusoid_tracking_metrics",
]


@dataclass(frozen=True)
class ResponseMetrics:
    rise_time: float | None
    overshoot: float | None
    settling_time: float | None
    rms_error: float
    control_total_variation: float

    def as_dict(self) -> dict:
        return {
            "rise_time": self.rise_time,
            "overshoot": self.overshoot,
            "settling_time": self.settling_time,
            "rms_error": self.rms_error,
            "control_total_variation": self.control_total_variation,
        }


def _series(t, y):
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.ndim != 1 or t.shape != y.shape:
        raise ValueError("time and signal must be 1-D and of equal length")
    if t.size == 0:
        raise ValueError("empty series")
    return t, y


def _oriented(y, target):
    # work with a positive target so "reaching" means "rising to"
    return (-y, -target) if target < 0 else (y, target)


def _first_crossing(t, y, level):
    hit = np.flatnonzero(y >= level)
    if hit.size == 0:
        return None
    i = hit[0]
    if i == 0:
        return t[0]
    y0, y1 = y[i - 1], y[i]
    return t[i - 1] + (level - y0) / (y1 - y0) * (t[i] - t[i - 1])


def rise_time(t, y, target: float) -> float | None:
    """Time to go from 10% to 90% of ``target``, interpolating between samples."""
    t, y = _series(t, y)
    y, target = _oriented(y, target)
    t10 = _first_crossing(t, y, 0.1 * target)
    t90 = _first_crossing(t, y, 0.9 * target)
    if t10 is None or t90 is None:
        return None
    return float(t90 - t10)


def overshoot(y, target: float) -> float:
    """Peak excursion beyond ``target`` in percent of ``|target|``, floored at 0."""
    if target == 0:
        raise ValueError("overshoot is undefined for a zero target")
    y = np.asarray(y, dtype=float)
    y, target = _oriented(y, target)
    return max(0.0, 100.0 * (float(np.max(y)) - target) / target)


def settling_time(t, y, target: float, band: float = 0.02) -> float | None:
    """Time after which ``y`` stays within ``target +- band*|target|``.

    Checked at the samples: the result is the first sample after the last
    one outside the band, 0 if no sample is outside, ``None`` if the final
    sample is outside.
    """
    t, y = _series(t, y)
    outside = np.flatnonzero(np.abs(y - target) > band * abs(target))
    if outside.size == 0:
        return 0.0
    last = outside[-1]
    if last == t.size - 1:
        return None
    return float(t[last + 1] - t[0])


def total_variation(u) -> float:
    u = np.asarray(u, dtype=float)
    return float(np.sum(np.abs(np.diff(u))))


def rms(e) -> float:
    e = np.asarray(e, dtype=float)
    return float(math.sqrt(np.mean(e * e)))


def sinusoid_tracking_metrics(t, reference, measured, control=None, *, offset=None,
                              peak=None, band: float = 0.02) -> ResponseMetrics:
    """Step-style metrics for a sinusoid-tracking run.

    The "specified value" is the first reference peak measured from
    ``offset`` (default: the reference's first sample). Rise time and
    overshoot use the measured signal about that offset. Settling uses the
    tracking error: the time after which ``|measured - reference|`` stays
    within ``band * |peak|``. RMS error spans the whole run; control total
    variation spans its second half.
    """
    t, ref = _series(t, reference)
    _, meas = _series(t, measured)
    if offset is None:
        offset = float(ref[0])
    rel_ref = ref - offset
    rel_meas = meas - offset
    if peak is None:
        peak = _first_peak(rel_ref)
    if peak == 0:
        raise ValueError("reference has no non-zero peak")

    err = meas - ref
    settle = settling_time(t, peak + err, peak, band)
    tv = 0.0
    if control is not None:
        _, u = _series(t, control)
        tv = total_variation(u[t >= t[0] + 0.5 * (t[-1] - t[0])])
    return ResponseMetrics(
        rise_time=rise_time(t, rel_meas, peak),
        overshoot=overshoot(rel_meas, peak),
        settling_time=settle,
        rms_error=rms(err),
        control_total_variation=tv,
    )


def _first_peak(rel_ref):
    """Value of the first local extremum of a sampled reference (or its last sample)."""
    d = np.diff(rel_ref)
    nz = np.flatnonzero(d != 0)
    if nz.size == 0:
        return float(rel_ref[0])
    direction = np.sign(d[nz[0]])
    turn = np.flatnonzero(np.sign(d[nz[0]:]) == -direction)
    if turn.size == 0:
        return float(rel_ref[-1])
    return float(rel_ref[nz[0] + turn[0]])
