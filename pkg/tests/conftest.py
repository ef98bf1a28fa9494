import math

import numpy as np
import pytest

from nlhelm.nonlinearity import Nonlinearity, Weight
from nlhelm.variational import Grid1D


@pytest.fixture(scope="session")
def power_indicator():
    """The shipped interval model: f = 1_(-1,1)(x) u^3."""
    return Nonlinearity(kind="power", q=Weight(kind="indicator", a=-1.0, b=1.0, scale=1.0),
                        p=4.0, s0=1.0)


@pytest.fixture(scope="session")
def power_radial():
    """The shipped radial model: f = exp(-(r/2)^2) u^3, nonincreasing weight."""
    return Nonlinearity(kind="power", q=Weight(kind="gaussian", width=2.0, scale=1.0),
                        p=4.0, s0=1.0, radial=True)


@pytest.fixture(scope="session")
def shipped_grid():
    return Grid1D(R=math.pi, n=513)


@pytest.fixture(scope="session")
def shipped_solutions(shipped_grid, power_indicator):
    """Critical points of the shipped interval model at k = 1.3 (reused by
    several tests; the Newton run takes a few seconds)."""
    from nlhelm.variational import newton_deflated_solve

    return newton_deflated_solve(shipped_grid, power_indicator, 1.3)


def series_j(mu: float, x: float, terms: int = 60) -> float:
    """Independent ascending-series oracle for J_mu."""
    total = 0.0
    for m in range(terms):
        total += (-1.0) ** m * (x / 2.0) ** (2 * m + mu) / (
            math.factorial(m) * math.gamma(mu + m + 1.0)
        )
    return total


def series_y0(x: float, terms: int = 60) -> float:
    """Independent series oracle for Y_0 (DLMF 10.8.1)."""
    euler = 0.57721566490153286060651209
    s = 0.0
    hk = 0.0
    for kk in range(1, terms):
        hk += 1.0 / kk
        s += (-1.0) ** (kk + 1) * hk * (x * x / 4.0) ** kk / math.factorial(kk) ** 2
    return 2.0 / math.pi * ((math.log(x / 2.0) + euler) * series_j(0.0, x, terms) + s)
