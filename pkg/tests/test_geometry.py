# test_geometry.py
#
# Copyright 2026 The badapprox contributors.
#
# SPDX-License-Identifier: GPL-3.0-or-later

import random
from fractions import Fraction
from math import gcd

import pytest

from badapprox.errors import InvariantViolation, ParallelLinesError, ParameterError
from badapprox.models.line import Line, RationalPoint
from badapprox.services.diagnostics_service import DiagnosticsService
from badapprox.services.geometry import (determinant3, enumerate_triples, forbidden_interval,
                                         height, intersect, intersect_with_multiplier,
                                         interval_meets, lattice_residue, line_meets_interval,
                                         passes_through)


def random_line(rng: random.Random) -> Line:
    while True:
        A = rng.randint(-40, 40)
        B = rng.randint(1, 40)
        C = rng.randint(-60, 60)
        if gcd(gcd(A, B), C) == 1:
            return Line(A, B, C)


def test_height():
    assert height(0, 1) == 1
    assert height(3, 1) == 9
    assert height(1, 3) == 27
    assert height(-4, 2) == 32
    with pytest.raises(ParameterError):
        height(1, 0)


def test_line_validation():
    with pytest.raises(ParameterError):
        Line(1, 0, 1)
    with pytest.raises(ParameterError):
        Line(2, 4, 6)
    assert Line(2, 4, 1).height == 64


def test_forbidden_interval_is_closed(golden):
    interval = forbidden_interval(Line(0, 1, 0), golden, Fraction(1, 10000))
    assert interval.lo == Fraction(-1, 10000)
    assert interval.hi == Fraction(1, 10000)
    assert interval_meets(interval, Fraction(1, 10000), Fraction(1, 1000))
    assert not interval_meets(interval, Fraction(2, 10000), Fraction(1, 1000))
    assert line_meets_interval(Line(0, 1, 0), golden, Fraction(0), Fraction(1, 10))
    assert not line_meets_interval(Line(1, 1, 0), golden, Fraction(0), Fraction(1, 10))


def test_intersection_of_simple_lines():
    # x - y = 0 and 2x - y + 1 = 0 meet at (-1, -1)
    point = intersect(Line(1, 1, 0), Line(2, 1, 1))
    assert point == RationalPoint(-1, -1, 1)
    point, s = intersect_with_multiplier(Line(1, 2, 0), Line(0, 1, 1))
    assert point == RationalPoint(2, 1, 1)
    assert s == 1
    with pytest.raises(ParallelLinesError):
        intersect(Line(1, 2, 0), Line(1, 2, 1))


def test_random_pairs_meet_on_both_lines(golden, params16):
    rng = random.Random(20240611)
    diagnostics = DiagnosticsService(golden, params16)
    checked = 0
    while checked < 10 ** 4:
        l1, l2 = random_line(rng), random_line(rng)
        if l1.A * l2.B == l2.A * l1.B:
            continue
        point, s = intersect_with_multiplier(l1, l2)
        assert passes_through(l1, point)
        assert passes_through(l2, point)
        assert lattice_residue(l1, point) == 0
        assert point.q <= 2 * max(abs(l1.A), abs(l2.A)) * max(l1.B, l2.B)
        assert s * point.q == l1.A * l2.B - l2.A * l1.B
        assert diagnostics.check_intersection_identity(l1, l2) == point
        checked += 1


def test_determinant_vanishes_for_concurrent_lines():
    assert determinant3(Line(1, 1, 0), Line(2, 1, 0), Line(1, 2, 0)) == 0
    assert determinant3(Line(1, 1, 0), Line(2, 1, 0), Line(0, 1, 1)) == -1


def test_rational_point_validation():
    with pytest.raises(ParameterError):
        RationalPoint(2, 4, 6)
    with pytest.raises(ParameterError):
        RationalPoint(1, 1, 0)
    assert RationalPoint(1, 2, 5).y == Fraction(2, 5)


def brute_force_lines(h_min, h_max, y_lo, y_hi, theta, delta):
    found = set()
    for B in range(1, 8):
        for A in range(-12, 13):
            for C in range(-40, 41):
                if gcd(gcd(A, B), C) != 1:
                    continue
                line = Line(A, B, C)
                if not h_min <= line.height < h_max:
                    continue
                if forbidden_interval(line, theta, delta).meets(y_lo, y_hi):
                    found.add(line)
    return found


@pytest.mark.parametrize("h_min,h_max,y_lo,y_hi", [
    (1, 64, Fraction(0), Fraction(1, 10)),
    (16, 128, Fraction(1, 3), Fraction(1, 2)),
    (1, 2, Fraction(-1, 5), Fraction(1, 5)),
])
def test_enumerate_triples_matches_brute_force(golden, h_min, h_max, y_lo, y_hi):
    delta = Fraction(1, 100)
    lines = list(enumerate_triples(h_min, h_max, y_lo, y_hi, golden, delta))
    assert len(lines) == len(set(lines))
    assert set(lines) == brute_force_lines(h_min, h_max, y_lo, y_hi, golden, delta)


def test_enumerate_triples_order(golden):
    lines = list(enumerate_triples(1, 64, Fraction(0), Fraction(1), golden, Fraction(1, 100)))
    keys = [(line.B, abs(line.A), -line.A) for line in lines]
    assert keys == sorted(keys)


def test_enumerate_triples_first_level(golden):
    lines = list(enumerate_triples(1, 16, Fraction(0), Fraction(27, 160000),
                                   golden, Fraction(1, 10000)))
    assert lines == [Line(0, 1, 0)]


def test_intersection_bound_is_enforced(monkeypatch):
    # the bound holds for every real pair, so feed a point that cannot occur
    from badapprox.services import geometry
    monkeypatch.setattr(geometry, "RationalPoint", lambda p, r, q: RationalPoint(p, r, q * 1000 + 1))
    with pytest.raises(InvariantViolation):
        geometry.intersect_with_multiplier(Line(1, 1, 0), Line(2, 1, 1))
