"""Shared pytest fixtures for the warpiso test suite."""

from __future__ import annotations

import numpy as np
import pytest

from warpiso.quad import MuIntegral
from warpiso.warpfn import WarpingFunction, parse

EX1_SOURCE = "exp(t^2 - 2*sin(t))"


@pytest.fixture(scope="session")
def wf_cosh() -> WarpingFunction:
    return parse("cosh(t)")


@pytest.fixture(scope="session")
def wf_exp() -> WarpingFunction:
    return parse("exp(t)")


@pytest.fixture(scope="session")
def wf_unit() -> WarpingFunction:
    return parse("1")


@pytest.fixture(scope="session")
def wf_ex1() -> WarpingFunction:
    return parse(EX1_SOURCE)


@pytest.fixture(scope="session")
def mu_cosh(wf_cosh: WarpingFunction) -> MuIntegral:
    return MuIntegral(wf_cosh, 1)


@pytest.fixture(scope="session")
def mu_cosh2(wf_cosh: WarpingFunction) -> MuIntegral:
    return MuIntegral(wf_cosh, 2)


@pytest.fixture(scope="session")
def mu_exp(wf_exp: WarpingFunction) -> MuIntegral:
    return MuIntegral(wf_exp, 1)


@pytest.fixture(scope="session")
def mu_unit(wf_unit: WarpingFunction) -> MuIntegral:
    return MuIntegral(wf_unit, 1)


@pytest.fixture(scope="session")
def mu_ex1(wf_ex1: WarpingFunction) -> MuIntegral:
    return MuIntegral(wf_ex1, 1)


@pytest.fixture
def rng() -> np.random.Generator:
    """Fixed-seed generator so random instances are reproducible."""

    return np.random.default_rng(20240611)
