"""Wrench-to-rotor allocation with loss-of-effectiveness compensation."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import AllocationInfeasible, DomainError
from .model import QuadrotorParams, mixing_matrix

__all__ = [
    "MAX_CONDITION",
    "loss_of_effectiveness",
    "estimate_effectiveness",
    "effective_mixing_matrix",
    "solve_squared_speeds",
    "allocate",
    "allocate_with_status",
]

MAX_CONDITION = 1e8


def loss_of_effectiveness(w_d: float, w: float) -> float:
    """Fractional speed loss ``(w_d - w) / w_d`` clamped to [0, 1]."""
    if not (math.isfinite(w_d) and w_d > 0):
        raise DomainError(f"desired speed must be > 0, got {w_d!r}")
    return min(1.0, max(0.0, (w_d - w) / w_d))


def estimate_effectiveness(commanded, measured, previous=None) -> np.ndarray:
    """Per-rotor effectiveness ``1 - LE`` from commanded and measured speeds.

    Rotors with a zero command carry ``previous`` forward (all ones if
    not given).
    """
    wd = np.asarray(commanded, dtype=float)
    w = np.asarray(measured, dtype=float)
    k = np.ones(4) if previous is None else np.array(previous, dtype=float)
    active = wd > 0
    if active.any():
        safe = np.where(active, wd, 1.0)
        # 1 - LE with LE = (wd - w) / wd clamped to [0, 1]
        est = 1.0 - np.clip((safe - w) / safe, 0.0, 1.0)
        k = np.where(active, est, k)
    return k


def _check_effectiveness(K) -> tuple[float, ...]:
    k = tuple(float(v) for v in K)
    if len(k) != 4 or not all(0.0 <= v <= 1.0 for v in k):
        raise DomainError(f"effectiveness must be four values in [0, 1], got {K!r}")
    return k


@lru_cache(maxsize=64)
def _inverse(params: QuadrotorParams, k: tuple[float, ...]) -> np.ndarray:
    M = effective_mixing_matrix(params, k)
    cond = np.linalg.cond(M)
    if not cond < MAX_CONDITION:
        raise AllocationInfeasible(f"effective mixing matrix ill-conditioned (cond={cond:.3g}) for K={k}")
    inv = np.linalg.inv(M)
    inv.setflags(write=False)
    return inv


def effective_mixing_matrix(params: QuadrotorParams, K) -> np.ndarray:
    """Mixing matrix acting on commanded squared speeds.

    A rotor keeping a fraction ``k`` of its commanded speed keeps ``k**2`` of
    its commanded squared speed.
    """
    k = np.asarray(K, dtype=float)
    return mixing_matrix(params) * (k * k)[None, :]


def solve_squared_speeds(wrench, K, params: QuadrotorParams) -> np.ndarray:
    """Commanded squared speeds that reproduce ``wrench`` exactly, before limits."""
    k = _check_effectiveness(K)
    u = np.array(tuple(wrench), dtype=float)
    if not np.isfinite(u).all():
        raise DomainError("wrench must be finite")
    return _inverse(params, k) @ u


def _interval(lo, hi, x):
    return min(hi, max(lo, x))


def _largest_scale(constraints):
    """Largest g in [0, 1] with ``c + slope * g >= 0`` for every ``(c, slope)``.

    Every constraint must already hold at g = 0.
    """
    g = 1.0
    for c, slope in constraints:
        if slope < 0:
            g = min(g, c / -slope)
    return max(g, 0.0)


def _prioritized(u, k, params):
    """Achieved squared speeds that best reproduce ``u`` within the rotor limits.

    Works on the pair structure of the mixing matrix: roll only sees
    a4 - a2, pitch only a1 - a3, thrust the total and yaw the (2, 4) sum
    minus the (1, 3) sum. Thrust is matched first (clipped to what the rotors
    can deliver). If a torque-free wrench is reachable at that thrust, the
    torque vector is scaled down as a whole, keeping its direction. Otherwise
    roll and pitch are scaled together and yaw takes whatever value is left
    closest to its demand.
    """
    kf, km, l = params.K_f, params.K_m, params.l
    h1, h2, h3, h4 = (ki * ki * params.omega_max**2 for ki in k)
    U1, U2, U3, U4 = u
    T = _interval(0.0, 2 * min(h1, h3) + 2 * min(h2, h4), U1 / kf)
    d13, d24, Y = U3 / (l * kf), U2 / (l * kf), U4 / km
    half = 0.5 * T

    if half <= 2 * min(h1, h3) and half <= 2 * min(h2, h4):
        g = _largest_scale((
            (half, -(0.5 * Y + abs(d13))),
            (2 * h1 - half, 0.5 * Y - d13),
            (2 * h3 - half, 0.5 * Y + d13),
            (half, 0.5 * Y - abs(d24)),
            (2 * h4 - half, -(0.5 * Y + d24)),
            (2 * h2 - half, d24 - 0.5 * Y),
        ))
        d13, d24, Y = g * d13, g * d24, g * Y
    else:
        g = _largest_scale((
            (h1, -d13), (h3, d13), (h4, -d24), (h2, d24),
            (T, -(abs(d13) + abs(d24))),
            (2 * h1 + 2 * h4 - T, -d13 - d24),
            (2 * h1 + 2 * h2 - T, -d13 + d24),
            (2 * h3 + 2 * h4 - T, d13 - d24),
            (2 * h3 + 2 * h2 - T, d13 + d24),
        ))
        d13, d24 = g * d13, g * d24
        p_lo, p_hi = abs(d13), min(2 * h1 - d13, 2 * h3 + d13)
        q_lo, q_hi = abs(d24), min(2 * h4 - d24, 2 * h2 + d24)
        T = _interval(p_lo + q_lo, p_hi + q_hi, T)
        Y = _interval(max(2 * q_lo - T, T - 2 * p_hi), min(2 * q_hi - T, T - 2 * p_lo), Y)

    P, Q = 0.5 * (T - Y), 0.5 * (T + Y)
    a = np.array([0.5 * (P + d13), 0.5 * (Q - d24), 0.5 * (P - d13), 0.5 * (Q + d24)])
    return np.clip(a, 0.0, [h1, h2, h3, h4])


def allocate_with_status(wrench, K, params: QuadrotorParams, strategy: str = "prioritized"):
    """Commanded rotor speeds and whether the exact solution hit a speed limit.

    With ``strategy="clip"`` out-of-range squared speeds are clipped
    independently. With ``"prioritized"`` (default) the achieved wrench keeps
    thrust first and gives up torque as described in :func:`_prioritized`.
    """
    v = solve_squared_speeds(wrench, K, params)
    vmax = params.omega_max**2
    clamped = bool(v.min() < 0.0 or v.max() > vmax)
    if clamped:
        if strategy == "prioritized":
            k = np.asarray(K, dtype=float)
            a = _prioritized(tuple(float(x) for x in wrench), tuple(k), params)
            v = np.divide(a, k * k, out=np.zeros(4), where=k > 0)
        elif strategy != "clip":
            raise ValueError(f"unknown saturation strategy {strategy!r}")
    return np.sqrt(np.clip(v, 0.0, vmax)), clamped


def allocate(wrench, K, params: QuadrotorParams, strategy: str = "prioritized") -> np.ndarray:
    """Commanded rotor speeds reproducing ``wrench`` through rotors of health ``K``."""
    return allocate_with_status(wrench, K, params, strategy)[0]
