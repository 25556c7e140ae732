# test_parameters.py
#
# Copyright 2026 The badapprox contributors.
#
# SPDX-License-Identifier: GPL-3.0-or-later

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis.strategies import integers

from badapprox.errors import ParameterError
from badapprox.models.sieve import KappaMode
from badapprox.services.parameters import (derived_dk, derived_Kk, dyadic_class, estimate_work,
                                           k_range, make_params, standard_kappa, regime_flags,
                                           slope_class)

DELTA = Fraction(1, 10000)


def test_standard_kappa_rounds_fifth_root_down():
    assert standard_kappa(16, DELTA) == (Fraction(27, 10000), False)
    assert standard_kappa(32, DELTA) == (Fraction(64, 10000), True)


def test_make_params_modes(params16):
    assert params16.kappa == Fraction(27, 10000)
    assert params16.kappa_mode is KappaMode.STANDARD
    assert not params16.kappa_exact
    assert params16.first_length == Fraction(27, 160000)
    user = make_params(16, DELTA, kappa=Fraction(1, 100))
    assert user.kappa_mode is KappaMode.USER
    assert user.kappa == Fraction(1, 100)


@pytest.mark.parametrize("kwargs", [
    dict(R=1, delta=DELTA),
    dict(R=16, delta=Fraction(0)),
    dict(R=16, delta=DELTA, kappa=Fraction(-1)),
    dict(R=16, delta=DELTA, kappa=Fraction(17)),
    dict(R=16, delta=DELTA, strict_mode=True),
])
def test_make_params_rejects(kwargs):
    with pytest.raises(ParameterError):
        make_params(**kwargs)


def test_k_range():
    assert list(k_range(16)) == [0, 1, 2, 3, 4]
    assert list(k_range(32)) == [0, 1, 2, 3, 4, 5]


def test_derived_dk_at_desk_scale(params16, params32):
    assert [derived_dk(params16, k) for k in k_range(16)] == [1, 2, 3, 5, 9]
    assert derived_dk(params32, 0) == 1
    assert derived_Kk(params32, 2) == 4
    assert derived_Kk(params16, 0) == Fraction(256, 27)
    with pytest.raises(ParameterError):
        derived_dk(params16, 5)


@pytest.mark.parametrize("H,n,k", [(1, 1, 0), (15, 1, 3), (16, 2, 0), (31, 2, 0),
                                   (32, 2, 1), (255, 2, 3), (256, 3, 0)])
def test_dyadic_class(H, n, k):
    assert dyadic_class(H, n, 16) == k


def test_dyadic_class_window():
    with pytest.raises(ParameterError):
        dyadic_class(256, 2, 16)
    with pytest.raises(ParameterError):
        dyadic_class(15, 2, 16)


@given(integers(min_value=1, max_value=16 ** 4 - 1))
def test_dyadic_class_brackets_height(H):
    n = next(n for n in range(1, 5) if H < 16 ** n)
    k = dyadic_class(H, n, 16)
    assert 2 ** k * 16 ** (n - 1) <= H < 2 ** (k + 1) * 16 ** (n - 1)


def test_slope_class(params16):
    # at small n every slope is bounded
    assert slope_class(1, 3, params16) == 0
    # n = 30: R^(n/3 - lambda) = 16^(10 - 1741/330) is about 2^18.9
    assert slope_class(2 ** 19, 30, params16) == 0
    assert slope_class(2 ** 18, 30, params16) == 1
    assert slope_class(1, 30, params16) == 1
    # n = 60: class 2 spans about 2^16.7 .. 2^37.8
    assert slope_class(2 ** 17, 60, params16) == 2
    assert slope_class(2 ** 16, 60, params16) == 3
    with pytest.raises(ParameterError):
        slope_class(0, 3, params16)


def test_regime_flags_outside_proven_regime(params16):
    flags = regime_flags(params16)
    assert not flags.all_hold
    assert not flags.r_large
    assert not flags.delta_small
    assert set(flags.as_dict()) == {"r_large", "delta_small", "delta_vs_r", "kappa_small",
                                    "floor_r_8_55_ge_2", "dk_lower", "dk_upper", "dk_kk_product"}


def test_estimate_work(params16):
    assert estimate_work(params16, 3) == 5576
    assert estimate_work(params16, 0) == 0


def test_derived_quantities_at_large_r():
    params = make_params(2 ** 55, Fraction(1, 2 ** 20))
    assert params.kappa_exact
    assert derived_dk(params, 0) == 256
    assert derived_dk(params, 3) == 1024
    assert derived_Kk(params, 0) == 2 ** 44
    assert derived_dk(params, 0) * derived_Kk(params, 0) == 2 ** 52
