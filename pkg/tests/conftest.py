"""Shared test configuration for btiepi.

- Seeded random generators, so every run draws the same points
- Shared cost models and grids built through the factories
- Settings isolated from the developer's environment and .env file
"""

import numpy as np
import pytest

from btiepi.config import get_settings
from btiepi.log import configure_logging

from tests.factories import CostFactory, GridFactory

_ENVIRONMENT = (
    "BTIEPI_LOG",
    "BTIEPI_JOBS",
    "BTIEPI_SEP_TOL",
    "BTIEPI_TREE_CAP",
    "BTIEPI_VERTEX_CAP",
    "BTIEPI_NODE_LIMIT",
    "BTIEPI_CUT_ROUNDS",
)


def pytest_configure(config):
    configure_logging("WARNING")


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """Default settings for every test; cached settings are dropped before and after."""
    for variable in _ENVIRONMENT:
        monkeypatch.setenv(variable, "")
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def exp_cost():
    return CostFactory.create()


@pytest.fixture
def table_cost():
    return CostFactory.table()


@pytest.fixture
def grid4():
    return GridFactory.create(periods=4, pre_offline=2.0)


@pytest.fixture
def unit_grid():
    """Grid factory shortcut: ``unit_grid(T, pre_offline)``."""

    def make(periods: int, pre_offline: float = 0.0):
        return GridFactory.create(periods=periods, pre_offline=pre_offline)

    return make
