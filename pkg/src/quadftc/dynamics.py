"""Rigid-body equations of motion and the multiplicative rotor fault."""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields

import numpy as np

from .errors import DomainError, SingularityError
from .model import ControlWrench, QuadrotorParams

__all__ = [
    "AS_PRINTED",
    "EULER_GUARD",
    "STATE_FIELDS",
    "SimState",
    "FaultEntry",
    "FaultSchedule",
    "state_derivative",
    "relative_rotor_speed",
    "apply_fault",
]

# The pitch gyroscopic term is divided by I_x and the yaw input is scaled by
# l / I_z, exactly as the reference model writes them. Kept for traceability.
AS_PRINTED = True

# Minimum distance of |phi| and |theta| from pi/2 (rad).
EULER_GUARD = 1e-3

STATE_FIELDS = (
    "x", "y", "z", "phi", "theta", "psi",
    "xd", "yd", "zd", "phid", "thetad", "psid",
)  # fmt: skip


@dataclass(frozen=True)
class SimState:
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    phi: float = 0.0
    theta: float = 0.0
    psi: float = 0.0
    xd: float = 0.0
    yd: float = 0.0
    zd: float = 0.0
    phid: float = 0.0
    thetad: float = 0.0
    psid: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            if not math.isfinite(getattr(self, f.name)):
                raise DomainError(f"state field {f.name} is not finite")

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_array(cls, values) -> "SimState":
        return cls(*(float(v) for v in values))


_ATTITUDE_LIMIT = math.pi / 2 - EULER_GUARD


def _check_attitude(phi, theta):
    limit = _ATTITUDE_LIMIT
    if not math.isfinite(phi) or not math.isfinite(theta):
        raise SingularityError(f"non-finite attitude phi={phi!r}, theta={theta!r}")
    if abs(phi) >= limit or abs(theta) >= limit:
        raise SingularityError(f"attitude phi={phi:.6g}, theta={theta:.6g} too close to pi/2")


def state_derivative(state, wrench, omega_r: float, params: QuadrotorParams) -> np.ndarray:
    """Time derivative of the 12-state vector.

    ``state`` may be a :class:`SimState` or any length-12 sequence ordered as
    :data:`STATE_FIELDS`. ``omega_r`` is the net propeller speed feeding the
    gyroscopic terms of roll and pitch.
    """
    if isinstance(state, SimState):
        state = astuple(state)
    elif isinstance(state, np.ndarray):
        state = state.tolist()
    _, _, _, phi, theta, psi, xd, yd, zd, p, q, r = state
    U1, U2, U3, U4 = wrench
    limit = _ATTITUDE_LIMIT
    if not (-limit < phi < limit and -limit < theta < limit):
        _check_attitude(phi, theta)

    Ix, Iy, Iz, l, m, jr = params.I_x, params.I_y, params.I_z, params.l, params.m, params.J_R
    cf, sf = math.cos(phi), math.sin(phi)
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(psi), math.sin(psi)

    phidd = r * q * (Iy - Iz) / Ix + q * omega_r * jr / Ix + l / Ix * U2
    thetadd = r * q * (Iz - Ix) / Iy + p * omega_r * jr / Ix + l / Iy * U3
    psidd = p * q * (Ix - Iy) / Iz + l / Iz * U4
    a = U1 / m
    xdd = (cf * st * cp + sp * sf) * a
    ydd = (cf * st * sp - cp * sf) * a
    zdd = ct * cf * a - params.g
    return np.array([xd, yd, zd, p, q, r, xdd, ydd, zdd, phidd, thetadd, psidd])


def relative_rotor_speed(omega) -> float:
    """Net propeller speed, signed by each rotor's spin direction."""
    w1, w2, w3, w4 = omega
    return float(-w1 + w2 - w3 + w4)


@dataclass(frozen=True)
class FaultEntry:
    rotor: int
    start: float
    le: float

    def __post_init__(self):
        if self.rotor not in (1, 2, 3, 4):
            raise DomainError(f"rotor index must be 1..4, got {self.rotor!r}")
        if not (math.isfinite(self.start) and self.start >= 0):
            raise DomainError(f"fault start must be >= 0, got {self.start!r}")
        if not (0.0 <= self.le <= 1.0):
            raise DomainError(f"loss of effectiveness must lie in [0, 1], got {self.le!r}")


@dataclass(frozen=True)
class FaultSchedule:
    """Step faults: from ``start`` onward the rotor keeps (1 - le) of its speed.

    Entries have no end time, so each rotor may appear at most once.
    """

    entries: tuple[FaultEntry, ...] = ()

    def __post_init__(self):
        entries = tuple(e if isinstance(e, FaultEntry) else FaultEntry(*e) for e in self.entries)
        rotors = [e.rotor for e in entries]
        if len(set(rotors)) != len(rotors):
            raise DomainError("at most one fault entry per rotor")
        object.__setattr__(self, "entries", entries)

    def loss_at(self, t: float) -> np.ndarray:
        le = np.zeros(4)
        for e in self.entries:
            if t >= e.start:
                le[e.rotor - 1] = e.le
        return le


def apply_fault(commanded, schedule: FaultSchedule, t: float) -> np.ndarray:
    """Actual rotor speeds given the commanded ones and the fault schedule."""
    return np.asarray(commanded, dtype=float) * (1.0 - schedule.loss_at(t))
