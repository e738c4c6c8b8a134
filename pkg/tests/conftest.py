"""Shared fixtures and the --runslow switch."""

from __future__ import annotations

import logging

import numpy as np
import pytest

from dmoa_transfer.pyDynamicTransfer.problems import FDA1, get_problem


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run slow acceptance checks"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def fda1() -> FDA1:
    return FDA1()


@pytest.fixture
def small_fda1():
    """FDA1 with a short tail so optimizer tests stay quick."""
    return get_problem("FDA1", n=5)


@pytest.fixture(autouse=True)
def restore_logging():
    """The CLI installs its own console handler; put the old ones back."""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)
