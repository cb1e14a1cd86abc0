"""Shared fixtures for the projlab test suite."""

import copy
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from projlab.lab.closedforms import QuadratureConfig
from projlab.lab.optimize import OptimizerConfig
from projlab.services.config import DEFAULT_CONFIG, WORKERS_ENV
from projlab.shared_state import LogBus, shutdown_event


@pytest.fixture
def fast_optimizer():
    """Fewer restarts than the default, same seed every time."""
    return OptimizerConfig(restarts=8, max_iter=800, seed=7)


@pytest.fixture
def quad_config():
    return QuadratureConfig()


@pytest.fixture
def log_bus():
    return LogBus(maxsize=100)


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    monkeypatch.delenv(WORKERS_ENV, raising=False)
    shutdown_event.clear()
    yield
    shutdown_event.clear()


@pytest.fixture
def default_config():
    return copy.deepcopy(DEFAULT_CONFIG)
