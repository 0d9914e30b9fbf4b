"""Exception types shared across the simulator."""


class DomainError(ValueError):
    """An argument lies outside the domain of a model function."""


class SingularityError(ArithmeticError):
    """Attitude too close to the Euler-angle singularity."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class SimulationDiverged(ArithmeticError):
    """The integrated state became non-finite."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class AllocationInfeasible(ArithmeticError):
    """The effectiveness-weighted mixing matrix cannot be inverted reliably."""


class ConfigError(ValueError):
    """A scenario document is malformed. ``key`` is the dotted path at fault."""

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


class TelemetrySchemaError(ValueError):
    """A telemetry file does not match the expected version or columns."""

    def __init__(self, message, missing=()):
        super().__init__(message)
        self.missing = tuple(missing)
