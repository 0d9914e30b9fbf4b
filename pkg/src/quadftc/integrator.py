"""Fixed-step classical Runge-Kutta integration."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SimulationDiverged

__all__ = ["IntegratorConfig", "rk4_step"]


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 1e-3
    t_end: float = 10.0

    def __post_init__(self):
        if not (math.isfinite(self.dt) and 0 < self.dt <= 0.01):
            raise DomainError(f"dt must lie in (0, 0.01], got {self.dt!r}")
        if not (math.isfinite(self.t_end) and self.t_end > 0):
            raise DomainError(f"t_end must be > 0, got {self.t_end!r}")
        steps = self.t_end / self.dt
        if abs(steps - round(steps)) > 1e-6 * max(1.0, steps):
            raise DomainError(f"t_end / dt = {steps!r} is not a whole number of steps")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))

    def times(self) -> np.ndarray:
        """Sample instants ``0, dt, ..., t_end`` (n_steps + 1 values)."""
        return np.arange(self.n_steps + 1) * self.dt


def rk4_step(f, y, t: float, dt: float):
    """Advance ``y' = f(t, y)`` by one step of size ``dt``.

    Raises :class:`SimulationDiverged` if any stage or the result is
    non-finite.
    """
    if not dt > 0:
        raise DomainError(f"dt must be > 0, got {dt!r}")
    y = np.asarray(y, dtype=float)
    half = 0.5 * dt
    k1 = f(t, y)
    k2 = f(t + half, y + half * k1)
    k3 = f(t + half, y + half * k2)
    k4 = f(t + dt, y + dt * k3)
    y_next = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.isfinite(y_next).all():
        raise SimulationDiverged(f"non-finite state at t={t:.6g}", t=t)
    return y_next
