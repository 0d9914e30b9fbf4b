"""Physical parameters, attitude kinematics and the rotor mixing map."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import NamedTuple

import numpy as np

from .errors import DomainError

__all__ = [
    "QuadrotorParams",
    "ControlWrench",
    "rotation_matrix",
    "rotor_thrust_and_moment",
    "mixing_matrix",
    "mix",
]


@dataclass(frozen=True)
class QuadrotorParams:
    """Parrot AR.Drone 2.0 (indoor hull) constants, SI units."""

    m: float = 0.429
    l: float = 0.1785
    J_R: float = 2.03e-5
    I_x: float = 2.24e-3
    I_y: float = 2.98e-3
    I_z: float = 4.80e-3
    K_f: float = 8.05e-6
    K_m: float = 2.42e-7
    omega_max: float = 1047.2
    g: float = 9.81

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise DomainError(f"{f.name} must be finite and > 0, got {value!r}")

    @property
    def hover_speed(self) -> float:
        """Per-rotor speed that balances gravity with all rotors healthy."""
        return math.sqrt(self.m * self.g / (4.0 * self.K_f))


class ControlWrench(NamedTuple):
    """Total thrust and the three body torques, (F, T_phi, T_theta, T_psi)."""

    U1: float
    U2: float
    U3: float
    U4: float


def _check_finite(*values):
    for v in values:
        if not math.isfinite(v):
            raise DomainError(f"non-finite input {v!r}")


def rotation_matrix(phi: float, theta: float, psi: float) -> np.ndarray:
    """Body-to-earth rotation for roll ``phi``, pitch ``theta``, yaw ``psi``."""
    _check_finite(phi, theta, psi)
    cf, sf = math.cos(phi), math.sin(phi)
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(psi), math.sin(psi)
    return np.array(
        [
            [ct * cp, sf * st * cp - cf * sp, cf * st * cp + sf * sp],
            [ct * sp, sf * st * sp + cf * cp, cf * st * sp - sf * cp],
            [-st, sf * ct, cf * ct],
        ]
    )


def rotor_thrust_and_moment(omega: float, params: QuadrotorParams) -> tuple[float, float]:
    if not math.isfinite(omega) or omega < 0:
        raise DomainError(f"rotor speed must be finite and >= 0, got {omega!r}")
    w2 = omega * omega
    return params.K_f * w2, params.K_m * w2


def mixing_matrix(params: QuadrotorParams) -> np.ndarray:
    """4x4 map from squared rotor speeds to (U1, U2, U3, U4).

    Rotor 1 produces positive pitch torque, rotor 4 positive roll torque,
    and the (2, 4) pair positive yaw torque.
    """
    kf, km, l = params.K_f, params.K_m, params.l
    return np.array(
        [
            [kf, kf, kf, kf],
            [0.0, -l * kf, 0.0, l * kf],
            [l * kf, 0.0, -l * kf, 0.0],
            [-km, km, -km, km],
        ]
    )


def mix(omega_sq, params: QuadrotorParams) -> ControlWrench:
    """Wrench produced by the squared rotor speeds ``omega_sq``.

    Pure linear map; speed limits are enforced by the allocator, not here.
    """
    w1, w2, w3, w4 = (float(v) for v in omega_sq)
    if min(w1, w2, w3, w4) < 0:
        raise DomainError("squared rotor speeds must be >= 0")
    kf, km, l = params.K_f, params.K_m, params.l
    return ControlWrench(
        kf * (w1 + w2 + w3 + w4),
        l * kf * (w4 - w2),
        l * kf * (w1 - w3),
        km * (-w1 + w2 - w3 + w4),
    )
