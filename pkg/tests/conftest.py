"""Shared fixtures: the test curve x^5 - 5x^3 + 4x and its sigma context."""

import numpy as np
import pytest

from g2sigma import calibrate_c, compute_periods, make_curve

TEST_LAMBDA = [0.0, 4.0, 0.0, -5.0, 0.0, 1.0]


@pytest.fixture(scope="session")
def curve():
    return make_curve(TEST_LAMBDA)


@pytest.fixture(scope="session")
def pd(curve):
    return compute_periods(curve, 192)


@pytest.fixture(scope="session")
def ctx(pd):
    return calibrate_c(pd)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
