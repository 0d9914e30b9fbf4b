"""Quadrotor super-twisting sliding-mode control with rotor-fault compensation.

Modules:

* :mod:`~quadftc.model` -- physical parameters, rotation matrix, rotor mixing
* :mod:`~quadftc.dynamics` -- rigid-body equations of motion, rotor fault model
* :mod:`~quadftc.integrator` -- fixed-step RK4
* :mod:`~quadftc.controller` -- sliding surfaces, equivalent control, switching laws
* :mod:`~quadftc.allocation` -- wrench-to-rotor allocation with effectiveness weighting
* :mod:`~quadftc.scenario` -- references, experiment configs, YAML scenario files
* :mod:`~quadftc.simulation` -- closed-loop runs producing telemetry
* :mod:`~quadftc.metrics` -- rise time, overshoot, settling time, chattering
* :mod:`~quadftc.cli` -- ``quadftc run | report | compare | sweep``
"""

from .allocation import allocate, estimate_effectiveness, loss_of_effectiveness
from .controller import ControllerGains, ControllerState, control, smooth_sign
from .dynamics import FaultEntry, FaultSchedule, SimState, apply_fault, state_derivative
from .errors import (
    AllocationInfeasible,
    ConfigError,
    DomainError,
    SimulationDiverged,
    SingularityError,
    TelemetrySchemaError,
)
from .integrator import IntegratorConfig, rk4_step
from .metrics import ResponseMetrics, overshoot, rise_time, settling_time
from .model import ControlWrench, QuadrotorParams, mix, mixing_matrix, rotation_matrix
from .scenario import ScenarioConfig, build_experiment_scenarios, load_scenario
from .simulation import Telemetry, simulate

__version__ = "0.1.0"

__all__ = [
    "AllocationInfeasible", "ConfigError", "ControlWrench", "ControllerGains",
    "ControllerState", "DomainError", "FaultEntry", "FaultSchedule", "IntegratorConfig",
    "QuadrotorParams", "ResponseMetrics", "ScenarioConfig", "SimState", "SimulationDiverged",
    "SingularityError", "Telemetry", "TelemetrySchemaError", "allocate", "apply_fault",
    "build_experiment_scenarios", "control", "estimate_effectiveness", "load_scenario",
    "loss_of_effectiveness", "mix", "mixing_matrix", "overshoot", "rise_time",
    "rk4_step", "rotation_matrix", "settling_time", "simulate", "smooth_sign",
    "state_derivative",
]
