"""Reference generators, experiment configurations and scenario files.

A scenario file is YAML with the top-level sections ``params``, ``gains``,
``integrator``, ``references``, ``faults``, ``initial_state`` and ``mode``.
Every key is optional; an empty document is the nominal experiment.
Unknown keys raise :class:`ConfigError`. See ``docs/scenario_schema.md``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field, fields, replace

import yaml

from .controller import CHANNELS, MODES, ControllerGains
from .dynamics import FaultEntry, FaultSchedule, SimState
from .errors import ConfigError, DomainError
from .integrator import IntegratorConfig
from .model import QuadrotorParams

__all__ = [
    "Sinusoid",
    "References",
    "ScenarioConfig",
    "sinusoid_reference",
    "default_references",
    "build_experiment_scenarios",
    "scenario_to_dict",
    "scenario_from_dict",
    "dump_scenario",
    "load_scenario",
]


@dataclass(frozen=True)
class Sinusoid:
    """``offset + amplitude * sin(omega * t + phase)`` with exact derivatives."""

    amplitude: float = 0.0
    omega: float = 0.0
    phase: float = 0.0
    offset: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            if not math.isfinite(getattr(self, f.name)):
                raise DomainError(f"{f.name} must be finite")
        if self.omega < 0:
            raise DomainError(f"omega must be >= 0, got {self.omega!r}")

    def __call__(self, t: float) -> tuple[float, float, float]:
        arg = self.omega * t + self.phase
        s, c = math.sin(arg), math.cos(arg)
        a, w = self.amplitude, self.omega
        return self.offset + a * s, a * w * c, -a * w * w * s

    def first_peak(self) -> tuple[float, float]:
        """Time and value of the first extremum after t = 0.

        The value is measured from ``offset``. A signal that starts at an
        extremum moves away from it first, so its first peak is the opposite
        one. For a constant signal this is ``(0, 0)``.
        """
        if self.amplitude == 0 or self.omega == 0:
            return 0.0, 0.0
        # first t > 0 with omega t + phase = pi/2 + j pi
        j = math.floor((self.phase - math.pi / 2) / math.pi + 1e-12) + 1
        t = (math.pi / 2 + j * math.pi - self.phase) / self.omega
        return t, self.amplitude * math.sin(self.omega * t + self.phase)


def sinusoid_reference(amplitude: float, omega: float, phase: float = 0.0,
                       offset: float = 0.0) -> Sinusoid:
    return Sinusoid(amplitude, omega, phase, offset)


@dataclass(frozen=True)
class References:
    """Per-channel reference generators."""

    z: Sinusoid = Sinusoid()
    phi: Sinusoid = Sinusoid()
    theta: Sinusoid = Sinusoid()
    psi: Sinusoid = Sinusoid()

    def at(self, t: float):
        """Four ``(value, rate, accel)`` triples ordered ``(z, phi, theta, psi)``."""
        return (self.z(t), self.phi(t), self.theta(t), self.psi(t))


def default_references() -> References:
    attitude = Sinusoid(0.5, 0.5, 0.0, 0.0)
    return References(z=Sinusoid(1.0, 0.5, 0.0, 2.0), phi=attitude, theta=attitude, psi=attitude)


def _default_initial_state() -> SimState:
    refs = default_references()
    return SimState(z=refs.z(0.0)[0], phi=refs.phi(0.0)[0], theta=refs.theta(0.0)[0],
                    psi=refs.psi(0.0)[0])


DEFAULT_GAINS = ControllerGains()


@dataclass(frozen=True)
class ScenarioConfig:
    params: QuadrotorParams = field(default_factory=QuadrotorParams)
    gains: ControllerGains = field(default_factory=lambda: DEFAULT_GAINS)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    references: References = field(default_factory=default_references)
    faults: FaultSchedule = field(default_factory=FaultSchedule)
    initial_state: SimState = field(default_factory=_default_initial_state)
    detection_delay: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.detection_delay) and self.detection_delay >= 0):
            raise DomainError(f"detection_delay must be >= 0, got {self.detection_delay!r}")

    @property
    def mode(self) -> str:
        return self.gains.mode

    def with_mode(self, mode: str) -> "ScenarioConfig":
        return replace(self, gains=replace(self.gains, mode=mode))


def build_experiment_scenarios() -> tuple[ScenarioConfig, ScenarioConfig]:
    """The nominal run and the run with rotor 4 losing 60% from t = 0."""
    nominal = ScenarioConfig()
    faulted = replace(nominal, faults=FaultSchedule((FaultEntry(rotor=4, start=0.0, le=0.6),)))
    return nominal, faulted


# ---------------------------------------------------------------- serialization

_PARAM_KEYS = tuple(f.name for f in fields(QuadrotorParams))
_GAIN_KEYS = ("lam", "k1", "k2", "k3", "k4", "n", "lam_channels")
_INTEGRATOR_KEYS = ("dt", "t_end")
_SINUSOID_KEYS = ("amplitude", "omega", "phase", "offset")
_STATE_KEYS = tuple(f.name for f in fields(SimState))
_FAULT_KEYS = ("rotor", "start", "le")
_SECTIONS = ("params", "gains", "integrator", "references", "faults", "initial_state", "mode")


def scenario_to_dict(config: ScenarioConfig) -> dict:
    gains = {k: getattr(config.gains, k) for k in _GAIN_KEYS}
    if gains["lam_channels"] is None:
        del gains["lam_channels"]
    else:
        gains["lam_channels"] = list(gains["lam_channels"])
    return {
        "params": dataclasses.asdict(config.params),
        "gains": gains,
        "integrator": {"dt": config.integrator.dt, "t_end": config.integrator.t_end},
        "references": {
            ch: dataclasses.asdict(getattr(config.references, ch)) for ch in CHANNELS
        },
        "faults": {
            "detection_delay": config.detection_delay,
            "entries": [dataclasses.asdict(e) for e in config.faults.entries],
        },
        "initial_state": dataclasses.asdict(config.initial_state),
        "mode": config.gains.mode,
    }


def _mapping(value, key):
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigError(key, f"expected a mapping, got {type(value).__name__}")
    return value


def _number(value, key, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key, f"expected a number, got {value!r}")
    if integer:
        if float(value) != int(value):
            raise ConfigError(key, f"expected an integer, got {value!r}")
        return int(value)
    return float(value)


def _section(doc, name, allowed, integer_keys=(), prefix=""):
    sec = _mapping(doc.get(name), prefix + name)
    out = {}
    for key, value in sec.items():
        path = f"{prefix}{name}.{key}"
        if key not in allowed:
            raise ConfigError(path, "unknown key")
        out[key] = _number(value, path, integer=key in integer_keys)
    return out


def _build(cls, kwargs, section, base=None):
    try:
        return replace(base, **kwargs) if base is not None else cls(**kwargs)
    except DomainError as exc:
        key = next((k for k in kwargs if k in str(exc)), None)
        raise ConfigError(f"{section}.{key}" if key else section, str(exc)) from exc


def scenario_from_dict(doc) -> ScenarioConfig:
    """Validate a parsed scenario document and build the configuration."""
    doc = _mapping(doc, "<root>")
    for key in doc:
        if key not in _SECTIONS:
            raise ConfigError(key, "unknown section")
    base = ScenarioConfig()

    params = _build(QuadrotorParams, _section(doc, "params", _PARAM_KEYS), "params", base.params)

    gsec = _mapping(doc.get("gains"), "gains")
    gkw = {}
    for key, value in gsec.items():
        path = f"gains.{key}"
        if key not in _GAIN_KEYS:
            raise ConfigError(path, "unknown key")
        if key == "lam_channels":
            if value is None:
                gkw[key] = None
                continue
            if not isinstance(value, (list, tuple)) or len(value) != 4:
                raise ConfigError(path, "expected a list of four numbers")
            gkw[key] = tuple(_number(v, path) for v in value)
        else:
            gkw[key] = _number(value, path, integer=key == "n")
    if "mode" in doc:
        if doc["mode"] not in MODES:
            raise ConfigError("mode", f"expected one of {MODES}, got {doc['mode']!r}")
        gkw["mode"] = doc["mode"]
    gains = _build(ControllerGains, gkw, "gains", base.gains)

    integrator = _build(IntegratorConfig, _section(doc, "integrator", _INTEGRATOR_KEYS),
                        "integrator", base.integrator)

    rsec = _mapping(doc.get("references"), "references")
    rkw = {}
    for ch, value in rsec.items():
        if ch not in CHANNELS:
            raise ConfigError(f"references.{ch}", "unknown channel")
        kw = _section(rsec, ch, _SINUSOID_KEYS, prefix="references.")
        rkw[ch] = _build(Sinusoid, kw, f"references.{ch}", getattr(base.references, ch))
    references = replace(base.references, **rkw)

    fsec = _mapping(doc.get("faults"), "faults")
    delay = base.detection_delay
    entries = []
    for key, value in fsec.items():
        if key == "detection_delay":
            delay = _number(value, "faults.detection_delay")
            if delay < 0:
                raise ConfigError("faults.detection_delay", "must be >= 0")
        elif key == "entries":
            if not isinstance(value, list):
                raise ConfigError("faults.entries", "expected a list")
            for i, item in enumerate(value):
                path = f"faults.entries[{i}]"
                item = _mapping(item, path)
                for k in item:
                    if k not in _FAULT_KEYS:
                        raise ConfigError(f"{path}.{k}", "unknown key")
                missing = [k for k in _FAULT_KEYS if k not in item]
                if missing:
                    raise ConfigError(f"{path}.{missing[0]}", "missing key")
                kw = {k: _number(item[k], f"{path}.{k}", integer=k == "rotor") for k in _FAULT_KEYS}
                entries.append(_build(FaultEntry, kw, path))
        else:
            raise ConfigError(f"faults.{key}", "unknown key")
    try:
        faults = FaultSchedule(tuple(entries))
    except DomainError as exc:
        raise ConfigError("faults.entries", str(exc)) from exc

    skw = _section(doc, "initial_state", _STATE_KEYS)
    initial_state = _build(SimState, skw, "initial_state", base.initial_state)

    return ScenarioConfig(params=params, gains=gains, integrator=integrator,
                          references=references, faults=faults,
                          initial_state=initial_state, detection_delay=delay)


def dump_scenario(config: ScenarioConfig) -> str:
    return yaml.safe_dump(scenario_to_dict(config), sort_keys=False)


def load_scenario(path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError("<document>", f"not valid YAML: {exc}") from exc
    return scenario_from_dict(doc)
