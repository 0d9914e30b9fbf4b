"""Sliding-mode attitude and altitude control.

Channels are ordered ``(z, phi, theta, psi)`` throughout, matching the
wrench components ``(U1, U2, U3, U4)``. A reference at time ``t`` is given
as four ``(value, rate, accel)`` triples in that order. Tracking errors are
``desired - actual``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import SimState
from .errors import DomainError, SingularityError
from .model import ControlWrench, QuadrotorParams

__all__ = [
    "CHANNELS",
    "MODES",
    "ControllerGains",
    "ControllerState",
    "sign",
    "smooth_sign",
    "sliding_surfaces",
    "equivalent_control",
    "super_twisting_update",
    "control",
    "control_with_surfaces",
]

CHANNELS = ("z", "phi", "theta", "psi")
MODES = ("super-twisting", "signum-baseline", "continuous-fn")

# Smallest admissible cos(phi) * cos(theta) for the thrust channel.
TILT_EPS = 1e-3

# State indices of (position, rate) for each channel.
_IDX = ((2, 8), (3, 9), (4, 10), (5, 11))


@dataclass(frozen=True)
class ControllerGains:
    """Surface slope, super-twisting gains and switching-function exponent.

    Defaults come from ``scripts/tune_gains.py``. The attitude gains are small
    because at a 1 ms step the super-twisting term itself chatters in
    proportion to ``k`` times the channel's input gain (l / I, about 60-80).

    ``lam_channels`` optionally overrides ``lam`` per channel.
    """

    lam: float = 8.0
    k1: float = 2.0
    k2: float = 0.2
    k3: float = 0.2
    k4: float = 0.1
    n: int = 2
    mode: str = "super-twisting"
    lam_channels: tuple[float, float, float, float] | None = None

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise DomainError(f"lam must be > 0, got {self.lam!r}")
        for name in ("k1", "k2", "k3", "k4"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be > 0, got {v!r}")
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 2 or self.n % 2:
            raise DomainError(f"n must be an even integer >= 2, got {self.n!r}")
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.lam_channels is not None:
            lc = tuple(float(v) for v in self.lam_channels)
            if len(lc) != 4 or not all(math.isfinite(v) and v > 0 for v in lc):
                raise DomainError("lam_channels must hold four positive values")
            object.__setattr__(self, "lam_channels", lc)

    @property
    def k(self) -> tuple[float, float, float, float]:
        return (self.k1, self.k2, self.k3, self.k4)

    @property
    def lambdas(self) -> tuple[float, float, float, float]:
        if self.lam_channels is not None:
            return self.lam_channels
        return (self.lam,) * 4


@dataclass(frozen=True)
class ControllerState:
    """Running integrals of the super-twisting switching terms, one per channel."""

    acc: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)


def sign(s: float) -> float:
    """Signum with ``sign(0) == 0``."""
    return 1.0 if s > 0 else (-1.0 if s < 0 else 0.0)


def smooth_sign(s: float, n: int = 2) -> float:
    """Continuous stand-in for sign: ((1+s)^n - (1-s)^n) / ((1+s)^n + (1-s)^n)."""
    if n < 2 or n % 2:
        raise DomainError(f"n must be an even integer >= 2, got {n!r}")
    if s < 0:
        return -smooth_sign(-s, n)
    # r = ((1-s)/(1+s))^n lies in [0, 1] for s >= 0, so nothing overflows
    r = ((1.0 - s) / (1.0 + s)) ** n
    return (1.0 - r) / (1.0 + r)


def _as_tuple(state):
    if isinstance(state, SimState):
        return (
            state.x, state.y, state.z, state.phi, state.theta, state.psi,
            state.xd, state.yd, state.zd, state.phid, state.thetad, state.psid,
        )  # fmt: skip
    if isinstance(state, np.ndarray):
        return state.tolist()
    if type(state) is list and len(state) == 12:
        return state
    return tuple(float(v) for v in state)


def _lambdas(lam):
    if isinstance(lam, (int, float)):
        return (float(lam),) * 4
    if type(lam) is tuple and len(lam) == 4:
        return lam
    return tuple(float(v) for v in lam)


def sliding_surfaces(state, refs, lam) -> tuple[float, float, float, float]:
    """``s = e_dot + lam * e`` per channel, with ``e = desired - actual``."""
    y = _as_tuple(state)
    lams = _lambdas(lam)
    out = []
    for (ip, iv), (r, rd, _), lm in zip(_IDX, refs, lams):
        out.append((rd - y[iv]) + lm * (r - y[ip]))
    return tuple(out)


def equivalent_control(state, refs, lam, params: QuadrotorParams) -> ControlWrench:
    """Inputs that hold every sliding variable constant on the nominal model.

    The rate-error term enters as ``+lam * (rate_d - rate)``, the sign for
    which ``s_dot`` vanishes under either error convention.
    """
    y = _as_tuple(state)
    lz, lf, lt, lp = _lambdas(lam)
    (_, zd_r, zdd_r), (_, pd_r, pdd_r), (_, qd_r, qdd_r), (_, rd_r, rdd_r) = refs
    phi, theta = y[3], y[4]
    zd, p, q, r = y[8], y[9], y[10], y[11]
    tilt = math.cos(phi) * math.cos(theta)
    if tilt <= TILT_EPS:
        raise SingularityError(f"cos(phi)cos(theta) = {tilt:.3g} too small for thrust control")

    Ix, Iy, Iz, l, m = params.I_x, params.I_y, params.I_z, params.l, params.m
    u1 = m / tilt * (params.g + zdd_r + lz * (zd_r - zd))
    u2 = Ix / l * (-q * r * (Iy - Iz) / Ix + pdd_r + lf * (pd_r - p))
    # cross term uses phi_dot * psi_dot here, unlike the plant's pitch equation
    u3 = Iy / l * (-p * r * (Iz - Ix) / Iy + qdd_r + lt * (qd_r - q))
    u4 = Iz / l * (-p * q * (Ix - Iy) / Iz + rdd_r + lp * (rd_r - r))
    return ControlWrench(u1, u2, u3, u4)


def super_twisting_update(surfaces, gains: ControllerGains, cstate: ControllerState, dt: float):
    """Super-twisting switching terms and the advanced integral state.

    For each channel: ``-1.5 sqrt(k) sqrt(|s|) sign(s) - acc``, using the
    integral accumulated so far; then ``acc += 1.1 k sign(s) dt``.
    """
    if not dt > 0:
        raise DomainError(f"dt must be > 0, got {dt!r}")
    corrections = []
    acc_next = []
    for s, k, acc in zip(surfaces, gains.k, cstate.acc):
        sg = sign(s)
        corrections.append(-1.5 * math.sqrt(k) * math.sqrt(abs(s)) * sg - acc)
        acc_next.append(acc + 1.1 * k * sg * dt)
    return tuple(corrections), ControllerState(tuple(acc_next))


def control(state, refs, gains: ControllerGains, cstate: ControllerState, dt: float,
            params: QuadrotorParams):
    """One evaluation of the control law. Returns ``(wrench, new_cstate)``.

    The super-twisting terms carry a leading minus, so they act on the
    surface written as measured minus reference (the negated ``s``). The
    signum and continuous variants add their switching term to ``s`` itself.
    """
    wrench, cstate, _ = control_with_surfaces(state, refs, gains, cstate, dt, params)
    return wrench, cstate


def control_with_surfaces(state, refs, gains: ControllerGains, cstate: ControllerState,
                          dt: float, params: QuadrotorParams):
    """As :func:`control`, also returning the sliding variables it used."""
    y = _as_tuple(state)
    ueq = equivalent_control(y, refs, gains.lambdas, params)
    s = sliding_surfaces(y, refs, gains.lambdas)
    if gains.mode == "super-twisting":
        corr, cstate = super_twisting_update(tuple(-v for v in s), gains, cstate, dt)
    elif gains.mode == "signum-baseline":
        corr = tuple(sign(v) for v in s)
    else:
        corr = tuple(smooth_sign(v, gains.n) for v in s)
    return ControlWrench(*(u + c for u, c in zip(ueq, corr))), cstate, s
