from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import settings

from jacobi_pencils.pencil import from_oprl, theta1

settings.register_profile("fixed", derandomize=True, max_examples=60, deadline=None)
settings.load_profile("fixed")


def oprl_families(length: int = 52):
    """Three rational Jacobi-matrix families used throughout the suite."""
    cheb = ([Fraction(1, 2)] * length, [Fraction(0)] * length)
    shifted = ([Fraction(k + 2, k + 1) for k in range(length)], [Fraction(1, k + 1) for k in range(length)])
    periodic = ([Fraction(1 + k % 3, 2) for k in range(length)], [Fraction((-1) ** k, 3) for k in range(length)])
    return {
        "chebyshev": from_oprl(*cheb, name="chebyshev"),
        "shifted": from_oprl(*shifted, name="shifted"),
        "periodic": from_oprl(*periodic, name="periodic"),
    }


@pytest.fixture(scope="session")
def th1():
    return theta1(64)


@pytest.fixture(scope="session")
def oprl():
    return oprl_families()
