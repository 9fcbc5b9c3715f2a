import functools

import numpy as np
import pytest

from drivencoin.evolution import evolve
from drivencoin.schedule import parse_schedule
from drivencoin.state import DEFAULT_COIN, initial_state


@functools.lru_cache(maxsize=None)
def cached_run(schedule_text: str, horizon: int = 100, coin=DEFAULT_COIN):
    return evolve(
        initial_state(coin, max(horizon, 1)),
        parse_schedule(schedule_text),
        horizon,
        keep_distributions=True,
        snapshot_times=range(0, horizon + 1, 10),
        spectrum_stride=10,
    )


@pytest.fixture
def run():
    return cached_run


def random_density(rng, dim, rank=None):
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import SUMMARY

    if SUMMARY:
        terminalreporter.section("acceptance criteria")
        for line in sorted(SUMMARY, key=lambda l: int(l.split()[1])):
            terminalreporter.write_line(line)
