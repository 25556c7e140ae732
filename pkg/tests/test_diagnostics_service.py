# test_diagnostics_service.py
#
# Copyright 2026 The badapprox contributors.
#
# SPDX-License-Identifier: GPL-3.0-or-later

from fractions import Fraction
from math import gcd, isqrt

import pytest
from hypothesis import given, settings
from hypothesis.strategies import composite, integers, tuples

from badapprox.models.diagnostics import CheckStatus
from badapprox.models.line import Line, RationalPoint
from badapprox.services.diagnostics_service import DiagnosticsService

ORIGIN = RationalPoint(0, 0, 1)
THROUGH_ORIGIN = [Line(0, 1, 0), Line(1, 1, 0), Line(2, 1, 0), Line(1, 2, 0)]


@pytest.fixture
def diagnostics(golden, params16):
    return DiagnosticsService(golden, params16)


def by_name(results):
    return {result.name: result.status for result in results}


def test_no_parallel(diagnostics):
    assert diagnostics.check_no_parallel([Line(1, 1, 0)]).status is CheckStatus.VACUOUS
    assert diagnostics.check_no_parallel(THROUGH_ORIGIN).status is CheckStatus.HOLDS
    assert diagnostics.check_no_parallel([Line(1, 2, 0), Line(1, 2, 1)]).status is CheckStatus.FAILS


def test_common_point(diagnostics):
    result = diagnostics.check_common_point(THROUGH_ORIGIN)
    assert result.status is CheckStatus.HOLDS
    assert result.point == ORIGIN


def test_common_point_witness(diagnostics):
    result = diagnostics.check_common_point([Line(1, 1, 0), Line(2, 1, 0), Line(0, 1, 1)])
    assert result.status is CheckStatus.FAILS
    assert result.determinant == -1
    assert len(result.witness) == 3
    assert diagnostics.check_common_point([Line(1, 1, 0)]).status is CheckStatus.NOT_APPLICABLE


def test_split_collections_with_explicit_omega(diagnostics):
    split = diagnostics.split_collections([Line(0, 1, 0), Line(1, 1, 0)], ORIGIN, 0, 2,
                                          omega4=Fraction(1, 100))
    assert split.collection_a == (Line(0, 1, 0),)
    assert split.collection_b == (Line(1, 1, 0),)
    assert split.d_k == 1
    assert split.b_size.status is CheckStatus.HOLDS


def test_split_collections_counts_b_against_dk(diagnostics):
    split = diagnostics.split_collections(THROUGH_ORIGIN[1:], ORIGIN, 0, 2, omega4=Fraction(0))
    assert len(split.collection_b) == 3
    assert split.b_size.status is CheckStatus.FAILS


def test_pigeonhole_triple(diagnostics):
    status, triple = diagnostics.pigeonhole_triple(RationalPoint(1, 2, 5))
    assert status is CheckStatus.HOLDS
    assert triple == (2, 1, 0)


@given(tuples(integers(min_value=-500, max_value=500), integers(min_value=-500, max_value=500),
              integers(min_value=1, max_value=5000)))
def test_pigeonhole_always_finds_a_small_line(golden, params16, values):
    p, r, q = values
    g = gcd(gcd(p, r), q)
    point = RationalPoint(p // g, r // g, q // g)
    status, (A, B, C) = DiagnosticsService(golden, params16).pigeonhole_triple(point)
    assert status is CheckStatus.HOLDS
    assert A * point.p - B * point.r + C * point.q == 0
    assert max(abs(A), B) <= isqrt(point.q)
    assert B >= 0 and (A, B) != (0, 0)


def test_pigeonhole_respects_cap(golden, params16):
    service = DiagnosticsService(golden, params16, pigeonhole_cap=1)
    status, triple = service.pigeonhole_triple(RationalPoint(1, 2, 5))
    assert status is CheckStatus.NOT_EVALUATED
    assert triple is None


def test_principal_inequalities_gate(diagnostics):
    results = by_name(diagnostics.principal_inequalities([Line(0, 1, 0)], ORIGIN, 0, 2))
    assert results["lattice_membership"] is CheckStatus.HOLDS
    assert results["pigeonhole_triple"] is CheckStatus.HOLDS
    for name in ("first_principal_inequality", "principal_gap_bound",
                 "second_principal_inequality", "omega_chain"):
        assert results[name] is CheckStatus.NOT_APPLICABLE


def test_principal_inequalities_outside_regime(diagnostics):
    # d_0 = 1 at R = 16, so two lines open the gate; the point is far from the fiber
    results = by_name(diagnostics.principal_inequalities(THROUGH_ORIGIN[:2], ORIGIN, 0, 2))
    assert results["first_principal_inequality"] is CheckStatus.FAILS
    assert results["principal_gap_bound"] is CheckStatus.FAILS
    assert results["second_principal_inequality"] is CheckStatus.HOLDS
    assert "omega_chain" in results


def test_slope_ratio_attained_at_boundary():
    result = DiagnosticsService.lemma5_check(16, 16, 4, 1)
    assert result.status is CheckStatus.HOLDS
    assert result.lhs == result.rhs == 4096
    assert result.attained


def test_slope_ratio_interior_point():
    result = DiagnosticsService.lemma5_check(16, 16, 8, 4)
    assert result.status is CheckStatus.HOLDS
    assert not result.attained


@pytest.mark.parametrize("sigma,W,A,B", [(16, 16, 5, 1), (16, 16, 1, 0), (2, 16, 1, 3), (16, 100, 1, 1)])
def test_slope_ratio_outside_premises(sigma, W, A, B):
    assert DiagnosticsService.lemma5_check(sigma, W, A, B).status is CheckStatus.NOT_APPLICABLE


@composite
def slope_ratio_premises(draw):
    sigma = draw(integers(min_value=1, max_value=10 ** 4))
    B = draw(integers(min_value=1, max_value=sigma))
    a_bound = isqrt(sigma * B)
    A = draw(integers(min_value=-a_bound, max_value=a_bound))
    W = draw(integers(min_value=1, max_value=B * max(A * A, B * B)))
    return sigma, W, A, B


@settings(max_examples=1000)
@given(slope_ratio_premises())
def test_slope_ratio_holds_under_its_premises(values):
    result = DiagnosticsService.lemma5_check(*values)
    assert result.status is CheckStatus.HOLDS
    assert result.lhs <= result.rhs


@given(integers(min_value=1, max_value=200), integers(min_value=1, max_value=10 ** 5),
       integers(min_value=-300, max_value=300), integers(min_value=1, max_value=200))
def test_slope_ratio_never_fails(sigma, W, A, B):
    assert DiagnosticsService.lemma5_check(sigma, W, A, B).status is not CheckStatus.FAILS


def test_starred_checks_need_an_ancestor(diagnostics):
    common, results = diagnostics.starred_checks(THROUGH_ORIGIN, 2, 2)
    assert common.status is CheckStatus.NOT_APPLICABLE
    assert all(result.status is CheckStatus.NOT_APPLICABLE for result in results)


def test_starred_checks_on_concurrent_family(diagnostics):
    common, results = diagnostics.starred_checks(THROUGH_ORIGIN, 1, 3)
    assert common.point == ORIGIN
    statuses = by_name(results)
    assert statuses["no_parallel"] is CheckStatus.HOLDS
    assert statuses["b_l_single"] is CheckStatus.HOLDS
    assert set(statuses) >= {"class_gap_bound", "class_coefficient_bound", "class_slope_ratio",
                             "class_denominator_lower", "class_omega_upper"}
    # q = 1 is below R^(2/3)
    assert statuses["class_denominator_lower"] is CheckStatus.FAILS


def test_analyze_level_on_desk_run(golden, params16, state16):
    service = DiagnosticsService(golden, params16)
    first = service.analyze_level(state16, 1)
    assert first.failures == []
    assert first.attribution.status is CheckStatus.HOLDS
    assert len(first.groups) == 1
    assert first.groups[0].slope == "k=0"
    fundamental = by_name(first.fundamental)
    assert fundamental["bounded_slope_removals"] is CheckStatus.VACUOUS
    assert fundamental["steep_slope_removals"] is CheckStatus.VACUOUS
    assert fundamental["t_recursion"] is CheckStatus.HOLDS
    assert fundamental["survivor_growth"] is CheckStatus.VACUOUS
    for level in (2, 3):
        later = service.analyze_level(state16, level)
        assert later.groups == []
        assert later.failures == []


def test_analyze_level_does_not_touch_state(golden, params32, state32):
    before = (state32.history, state32.ledgers)
    document = DiagnosticsService(golden, params32).analyze_level(state32, 1).to_dict(full=True)
    assert (state32.history, state32.ledgers) == before
    assert document["level"] == 1
    assert document["group_details"][0]["lines"] == [[0, 1, 0]]
