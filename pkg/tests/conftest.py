import functools

import pytest
from hypothesis import settings

from quadftc.scenario import build_experiment_scenarios
from quadftc.simulation import simulate

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

# Lines recorded by the acceptance tests, echoed in the terminal summary.
ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def run_experiment_scenario(which: str, mode: str = "super-twisting"):
    nominal, faulted = build_experiment_scenarios()
    cfg = {"nominal": nominal, "faulted": faulted}[which].with_mode(mode)
    return cfg, simulate(cfg)


@pytest.fixture(scope="session")
def nominal_run():
    return run_experiment_scenario("nominal")


@pytest.fixture(scope="session")
def faulted_run():
    return run_experiment_scenario("faulted")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
