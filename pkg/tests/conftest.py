# conftest.py
#
# Copyright 2026 The badapprox contributors.
#
# SPDX-License-Identifier: GPL-3.0-or-later

from fractions import Fraction

import pytest

from badapprox.models.quadratic import QuadraticNumber
from badapprox.services.parameters import make_params
from badapprox.services.sieve_service import SieveService

DELTA = Fraction(1, 10000)


@pytest.fixture(scope="session")
def golden():
    """(sqrt(5) - 1) / 2"""
    return QuadraticNumber(-1, 1, 2, 5)


@pytest.fixture(scope="session")
def params16():
    return make_params(16, DELTA)


@pytest.fixture(scope="session")
def params32():
    return make_params(32, DELTA)


@pytest.fixture(scope="session")
def state16(golden, params16):
    return SieveService(golden, params16).run(Fraction(0), 3)


@pytest.fixture(scope="session")
def state32(golden, params32):
    return SieveService(golden, params32).run(Fraction(0), 3)
