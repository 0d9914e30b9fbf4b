"""Closed-loop run: reference -> controller -> allocation -> faulty rotors -> plant."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .allocation import allocate_with_status, estimate_effectiveness
from .controller import ControllerState, control_with_surfaces
from .dynamics import STATE_FIELDS, SimState, apply_fault, relative_rotor_speed, state_derivative
from .errors import AllocationInfeasible, SimulationDiverged, SingularityError
from .integrator import rk4_step
from .model import mix, mixing_matrix
from .scenario import ScenarioConfig

__all__ = ["TELEMETRY_COLUMNS", "Telemetry", "simulate"]

TELEMETRY_COLUMNS = (
    ("t",) + STATE_FIELDS
    + ("U1", "U2", "U3", "U4")
    + ("w1c", "w2c", "w3c", "w4c")
    + ("w1a", "w2a", "w3a", "w4a")
    + ("s_z", "s_phi", "s_theta", "s_psi")
    + ("k1", "k2", "k3", "k4")
    + ("clamped",)
)
_COL = {name: i for i, name in enumerate(TELEMETRY_COLUMNS)}


@dataclass
class Telemetry:
    """One row per integration step, columns as :data:`TELEMETRY_COLUMNS`."""

    data: np.ndarray

    def __getitem__(self, name: str) -> np.ndarray:
        return self.data[:, _COL[name]]

    def __len__(self) -> int:
        return self.data.shape[0]

    @property
    def columns(self):
        return TELEMETRY_COLUMNS


def _gyro_speed(omega):
    return relative_rotor_speed(omega)


def simulate(config: ScenarioConfig, omega_r=_gyro_speed) -> Telemetry:
    """Run ``config`` over its full horizon.

    ``omega_r`` maps actual rotor speeds to the gyroscopic propeller speed;
    pass ``lambda w: 0.0`` to drop the gyroscopic terms. Numerical failures
    propagate as :class:`SimulationDiverged` carrying the failure time.
    """
    params, gains, integ = config.params, config.gains, config.integrator
    cond = np.linalg.cond(mixing_matrix(params))
    if not math.isfinite(cond):
        raise AllocationInfeasible("mixing matrix is singular")

    dt = integ.dt
    n = integ.n_steps
    refs = config.references
    faults = config.faults
    delay = config.detection_delay
    # without faults every estimate is exactly 1, so the probe is skipped
    has_faults = bool(faults.entries)

    data = np.empty((n + 1, len(TELEMETRY_COLUMNS)))
    y = config.initial_state.as_array()
    cstate = ControllerState()
    K = np.ones(4)
    probe = np.full(4, params.hover_speed)

    for i in range(n + 1):
        t = i * dt
        try:
            r = refs.at(t)
            # faults are observed through measured speeds, possibly late
            if has_faults:
                K = estimate_effectiveness(probe, apply_fault(probe, faults, t - delay), K)
            wrench, cstate, s = control_with_surfaces(y, r, gains, cstate, dt, params)
            w_cmd, clamped = allocate_with_status(wrench, K, params)
            w_act = apply_fault(w_cmd, faults, t) if has_faults else w_cmd
            achieved = mix(w_act * w_act, params)
        except (SingularityError, AllocationInfeasible) as exc:
            raise SimulationDiverged(f"{exc} (t={t:.6g})", t=t) from exc
        if not all(math.isfinite(u) for u in wrench):
            raise SimulationDiverged(f"non-finite control at t={t:.6g}", t=t)

        row = data[i]
        row[0] = t
        row[1:13] = y
        row[13:17] = wrench
        row[17:21] = w_cmd
        row[21:25] = w_act
        row[25:29] = s
        row[29:33] = K
        row[33] = float(clamped)
        if i == n:
            break

        wr = omega_r(w_act)
        probe = np.where(w_cmd > 0, w_cmd, probe)

        def f(_t, state, _u=achieved, _wr=wr):
            return state_derivative(state, _u, _wr, params)

        try:
            y = rk4_step(f, y, t, dt)
        except SingularityError as exc:
            raise SimulationDiverged(f"{exc} (t={t:.6g})", t=t) from exc
        except SimulationDiverged as exc:
            exc.t = t
            raise
    return Telemetry(data)


def final_state(tel: Telemetry) -> SimState:
    return SimState.from_array(tel.data[-1, 1:13])
