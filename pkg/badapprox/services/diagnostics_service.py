# diagnostics_service.py
#
# Copyright 2026 The badapprox contributors.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.
#
# SPDX-License-Identifier: GPL-3.0-or-later

from collections import defaultdict
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import gmpy2
import mpmath

from ..errors import InvariantViolation, ParallelLinesError
from ..models.diagnostics import (CheckResult, CheckStatus, CollectionSplit, CommonPointResult,
                                  GroupDiagnostics, Lemma5Result, LevelDiagnostics)
from ..models.line import Line, RationalPoint
from ..models.quadratic import QuadraticNumber
from ..models.sieve import Params, SieveState
from .exact_arithmetic import approx, compare_rational_power
from .geometry import determinant3, intersect, intersect_with_multiplier, lattice_residue, passes_through
from .logger_service import get_logger
from .parameters import derived_dk, regime_flags

DEFAULT_PIGEONHOLE_CAP = 10 ** 6


def _status(ok: bool) -> CheckStatus:
    return CheckStatus.HOLDS if ok else CheckStatus.FAILS


def _iv_status(holds: Optional[bool]) -> CheckStatus:
    """Map an interval comparison (True, False or undecided None) to a status"""
    if holds is None:
        return CheckStatus.NOT_EVALUATED
    return _status(holds)


class DiagnosticsService:
    """Executable counting bounds, evaluated on sieve output.

    Nothing here mutates a SieveState. Failed checks are recorded; they only
    raise when every regime flag holds, since the bounds are proved for that
    regime alone.
    """

    def __init__(self, theta: QuadraticNumber, params: Params,
                 pigeonhole_cap: int = DEFAULT_PIGEONHOLE_CAP):
        self.theta = theta
        self.params = params
        self.pigeonhole_cap = pigeonhole_cap
        self.regime = regime_flags(params)
        self.logger = get_logger('diagnostics_service')

    # -- line families --------------------------------------------------

    def check_no_parallel(self, lines: Sequence[Line], segment=None) -> CheckResult:
        """No two lines crossing the same segment share a slope"""
        if len(lines) < 2:
            return CheckResult("no_parallel", CheckStatus.VACUOUS)
        for l1, l2 in combinations(lines, 2):
            if l1.A * l2.B == l2.A * l1.B:
                return CheckResult("no_parallel", CheckStatus.FAILS,
                                   {"pair": f"{l1} {l2}"})
        return CheckResult("no_parallel", CheckStatus.HOLDS)

    def check_common_point(self, lines: Sequence[Line], segment=None) -> CommonPointResult:
        """Single point shared by all lines, or a 3x3 determinant witness"""
        if len(lines) < 2:
            return CommonPointResult(CheckStatus.NOT_APPLICABLE)
        base = None
        for l1, l2 in combinations(lines, 2):
            try:
                base = (l1, l2, intersect(l1, l2))
                break
            except ParallelLinesError:
                continue
        if base is None:
            return CommonPointResult(CheckStatus.NOT_APPLICABLE)

        l1, l2, point = base
        for line in lines:
            if not passes_through(line, point):
                D = determinant3(l1, l2, line)
                return CommonPointResult(CheckStatus.FAILS, witness=(l1, l2, line), determinant=D)
        if any(lattice_residue(line, point) for line in lines):
            raise InvariantViolation(f"Line through {point} off its residue lattice")
        return CommonPointResult(CheckStatus.HOLDS, point=point)

    # -- bounded-slope class k --------------------------------------------

    def _gap(self, point: RationalPoint) -> QuadraticNumber:
        """|q*theta - p|"""
        return abs(self.theta * point.q - point.p)

    def sigma_k(self, point: RationalPoint, k: int) -> Optional[QuadraticNumber]:
        d = derived_dk(self.params, k)
        if d == 0:
            return None
        return (2 * self.params.kappa / d) * Fraction(2 ** k, self.params.R) / self._gap(point)

    def omega4_k(self, point: RationalPoint, k: int, n: int) -> Optional[QuadraticNumber]:
        """omega_k**4 = |theta - p/q|**4 * sigma_k**3 / W_k"""
        sigma = self.sigma_k(point, k)
        if sigma is None:
            return None
        W = 2 ** k * self.params.R ** (n - 1)
        return (self._gap(point) / point.q) ** 4 * sigma ** 3 / W

    def split_collections(self, lines: Sequence[Line], point: RationalPoint, k: int, n: int,
                          omega4: Optional[Fraction] = None) -> CollectionSplit:
        """Lines crossing the fiber within omega_k of r/q go to A, the rest to B"""
        d = derived_dk(self.params, k)
        sigma = self.sigma_k(point, k)
        if omega4 is None:
            omega4 = self.omega4_k(point, k, n)
        if omega4 is None:
            b_size = CheckResult("b_collection_size", CheckStatus.NOT_APPLICABLE, {"d_k": str(d)})
            return CollectionSplit((), tuple(lines), sigma, None, d, b_size)

        collection_a, collection_b = [], []
        for line in lines:
            offset = line.ordinate(self.theta) - point.y
            (collection_a if offset ** 4 <= omega4 else collection_b).append(line)
        b_size = CheckResult("b_collection_size", _status(len(collection_b) <= d),
                             {"size_b": str(len(collection_b)), "d_k": str(d)})
        return CollectionSplit(tuple(collection_a), tuple(collection_b), sigma, omega4, d, b_size)

    def pigeonhole_triple(self, point: RationalPoint) -> Tuple[CheckStatus, Optional[Tuple[int, int, int]]]:
        """Search max(|A|, B) <= sqrt(q), B >= 0, (A, B) != 0 with A p - B r + C q = 0"""
        side = int(gmpy2.isqrt(point.q))
        if (2 * side + 1) * (side + 1) > self.pigeonhole_cap:
            return CheckStatus.NOT_EVALUATED, None
        for B in range(0, side + 1):
            for a_abs in range(0, side + 1):
                for A in ((a_abs, -a_abs) if a_abs else (0,)):
                    if A == 0 and B == 0:
                        continue
                    numerator = B * point.r - A * point.p
                    if numerator % point.q == 0:
                        return CheckStatus.HOLDS, (A, B, numerator // point.q)
        return CheckStatus.FAILS, None

    def principal_inequalities(self, collection_a: Sequence[Line], point: RationalPoint,
                               k: int, n: int) -> List[CheckResult]:
        """Both principal inequalities and the consequences between them.

        Everything with an irrational exponent is squared or raised to the
        fourth or eighth power first.
        """
        params = self.params
        R, kappa, delta = params.R, params.kappa, params.delta
        q = point.q
        d = derived_dk(params, k)
        results: List[CheckResult] = []

        residues_ok = all(lattice_residue(line, point) == 0 for line in collection_a)
        results.append(CheckResult("lattice_membership", _status(residues_ok),
                                   {"lines": str(len(collection_a))}))

        status, triple = self.pigeonhole_triple(point)
        results.append(CheckResult("pigeonhole_triple", status,
                                   {"triple": str(triple)} if triple else {}))

        gated = ("first_principal_inequality", "principal_gap_bound",
                 "second_principal_inequality", "omega_chain")
        if d == 0 or len(collection_a) < 2 * d:
            detail = {"size_a": str(len(collection_a)), "two_d_k": str(2 * d)}
            results.extend(CheckResult(name, CheckStatus.NOT_APPLICABLE, detail) for name in gated)
            return results

        gap = self._gap(point)
        sigma = self.sigma_k(point, k)
        omega4 = self.omega4_k(point, k, n)

        results.append(CheckResult("first_principal_inequality", _status(q * d <= 12 * sigma * sigma),
                                   {"q_d_k": str(q * d), "sigma": approx(sigma, 12)}))

        gap_bound = Fraction(48) * kappa ** 2 * 4 ** k / (d ** 3 * q * R ** 2)
        gap_ok = gap * gap <= gap_bound
        results.append(CheckResult("principal_gap_bound", _status(gap_ok),
                                   {"gap": approx(gap, 12)}))

        if q ** 3 < R ** (2 * (n - 1)):
            second_ok = omega4 >= delta ** 4 / (16 * q ** 6)
            results.append(CheckResult("second_principal_inequality", _status(second_ok),
                                       {"omega4": approx(omega4, 12)}))
        else:
            results.append(CheckResult("second_principal_inequality", CheckStatus.NOT_APPLICABLE,
                                       {"reason": "q >= R^(2(n-1)/3)"}))

        chain_bound = (Fraction(2 ** 8 * 12) * kappa ** 8 / (d ** 9 * q ** 9 * R ** (2 * n))
                       * Fraction(2 ** k, R) ** 6)
        chain = omega4 * omega4 <= chain_bound
        if gap_ok and not chain:
            raise InvariantViolation(f"Gap bound holds but its omega consequence fails at {point}")
        results.append(CheckResult("omega_chain", _status(chain)))
        return results

    # -- slope classes l >= 1 -------------------------------------------

    def starred_checks(self, lines: Sequence[Line], l: int, n: int,
                       segment=None) -> Tuple[CommonPointResult, List[CheckResult]]:
        """Checks for the lines of slope class l crossing a level-(n-l) segment"""
        params = self.params
        R, kappa, lam = params.R, params.kappa, params.lam
        names = ("class_gap_bound", "class_coefficient_bound", "class_slope_ratio",
                 "b_l_single", "class_denominator_lower", "class_omega_upper")
        if not lines or n - l < 1:
            reason = {"reason": "empty class" if not lines else "n - l < 1"}
            return (CommonPointResult(CheckStatus.NOT_APPLICABLE),
                    [CheckResult(name, CheckStatus.NOT_APPLICABLE, reason) for name in names])

        results = [self.check_no_parallel(lines, segment)]
        common = self.check_common_point(lines, segment)

        ordered = sorted(lines, key=lambda line: (line.B, line.attribution_key()))
        b_line = ordered[0]
        a_lines = ordered[1:]
        results.append(CheckResult("b_l_single", CheckStatus.HOLDS,
                                   {"line": str(b_line), "size_a": str(len(a_lines))}))

        if common.point is None:
            reason = {"reason": "no common point"}
            results.extend(CheckResult(name, CheckStatus.NOT_APPLICABLE, reason)
                           for name in names if name != "b_l_single")
            return common, results

        point = common.point
        q = point.q
        gap = self._gap(point)

        # |q theta - p| <= kappa * R^(-n/3 - (2 lambda - 1) l)
        exponent = -Fraction(n, 3) - (2 * lam - 1) * l
        results.append(CheckResult("class_gap_bound",
                                   _status(compare_rational_power(gap / kappa, R, exponent) <= 0)))

        sigma = kappa * R ** l / gap
        coefficients_ok = all(line.B <= sigma and line.A * line.A <= sigma * line.B
                              for line in a_lines)
        results.append(CheckResult("class_coefficient_bound", _status(coefficients_ok)))

        W = R ** (n - 1)
        ratio_ok = all(line.A ** 4 * W <= sigma ** 3 * line.B ** 4 for line in a_lines)
        results.append(CheckResult("class_slope_ratio", _status(ratio_ok)))

        if n - l - 1 >= 0:
            results.append(CheckResult("class_denominator_lower",
                                       _status(q ** 3 >= R ** (2 * (n - l - 1))),
                                       {"q": str(q)}))
        else:
            results.append(CheckResult("class_denominator_lower", CheckStatus.NOT_APPLICABLE))

        omega4 = (gap / q) ** 4 * sigma ** 3 / W
        upper = -4 * n - 2 * lam * l + Fraction(20 * l + 11, 3)
        results.append(CheckResult("class_omega_upper",
                                   _status(compare_rational_power(omega4 / kappa ** 4, R, upper) <= 0)))
        return common, results

    # -- scalar checks ---------------------------------------------------

    @staticmethod
    def lemma5_check(sigma, W, A, B) -> Lemma5Result:
        """|A|/B <= (sigma^3/W)^(1/4) under B <= sigma, A^2 <= sigma*B, H(A, B) >= W"""
        if not (B > 0 and B <= sigma and A * A <= sigma * B and B * max(A * A, B * B) >= W):
            return Lemma5Result(CheckStatus.NOT_APPLICABLE)
        lhs = A ** 4 * W
        rhs = sigma ** 3 * B ** 4
        return Lemma5Result(_status(lhs <= rhs), lhs, rhs)

    def check_intersection_identity(self, l1: Line, l2: Line) -> Optional[RationalPoint]:
        """|Y1 - Y2| * B1 * B2 = |s| * |q theta - p| for the intersection of two lines"""
        try:
            point, s = intersect_with_multiplier(l1, l2)
        except ParallelLinesError:
            return None
        spread = abs(l1.ordinate(self.theta) - l2.ordinate(self.theta)) * (l1.B * l2.B)
        gap = self._gap(point)
        if spread != abs(s) * gap or spread < gap:
            raise InvariantViolation(f"Intersection identity broken for {l1} and {l2}")
        return point

    # -- counting ceilings ----------------------------------------------

    def fundamental_counters(self, state: SieveState, level: int) -> List[CheckResult]:
        """Per-parent removal counts against both ceilings and the survivor recursion"""
        params = self.params
        R = params.R
        ledger = state.ledgers[level - 1]
        iv = mpmath.iv
        log_r = iv.log(iv.mpf(R))
        r_power = iv.exp(log_r * iv.mpf(52) / 55)
        results: List[CheckResult] = []

        bounded = {parent: sum(count for bucket, count in counts.items() if bucket.startswith("k="))
                   for parent, counts in ledger.removed_by_parent.items()}
        max_bounded = max(bounded.values(), default=0)
        ceiling1 = iv.mpf(2 ** 13) * r_power * log_r
        if iv.mpf(R) <= ceiling1:
            status = CheckStatus.VACUOUS
        else:
            status = _iv_status(iv.mpf(max_bounded) <= ceiling1)
        results.append(CheckResult("bounded_slope_removals", status,
                                   {"max_count": str(max_bounded), "ceiling": str(ceiling1)}))

        # removals by class l, summed over the parents inside each level-(n-l) segment
        per_ancestor: Dict[Tuple[int, int], int] = defaultdict(int)
        for parent, counts in ledger.removed_by_parent.items():
            for bucket, count in counts.items():
                if bucket.startswith("l="):
                    l = int(bucket[2:])
                    if level - l >= 1:
                        per_ancestor[(l, parent // R ** l)] += count
        max_l = max(per_ancestor.values(), default=0)
        if compare_rational_power(Fraction(R, 8), R, Fraction(52, 55)) <= 0:
            status = CheckStatus.VACUOUS
        else:
            status = _status(compare_rational_power(Fraction(max_l, 8), R, Fraction(52, 55)) <= 0)
        results.append(CheckResult("steep_slope_removals", status, {"max_count": str(max_l)}))

        before = len(state.history[level - 1])
        after = len(state.history[level])
        expected = R * before - ledger.removed_total
        if after != expected:
            raise InvariantViolation(
                f"T_{level + 1} = {after} but R*T_{level} - removed = {expected}")
        results.append(CheckResult("t_recursion", CheckStatus.HOLDS,
                                   {"T_n": str(before), "T_n1": str(after),
                                    "removed": str(ledger.removed_total)}))

        factor = iv.mpf(R) - iv.mpf(2 ** 14) * r_power * log_r
        if factor <= iv.mpf(0):
            status = CheckStatus.VACUOUS
        else:
            status = _iv_status(iv.mpf(before) * factor <= iv.mpf(after))
        results.append(CheckResult("survivor_growth", status, {"factor": str(factor)}))
        return results

    # -- full level -----------------------------------------------------

    def _containing(self, state: SieveState, level: int, y: QuadraticNumber) -> List[int]:
        """Survivor indices at `level` whose closed segment holds y"""
        length = self.params.kappa / self.params.R ** level
        position = (y - state.origin) / length
        j = position.floor()
        candidates = [j]
        if position == j:
            candidates.append(j - 1)
        survivors = set(state.history[level - 1])
        return [index for index in candidates if index in survivors]

    def _record(self, diagnostics: LevelDiagnostics, where: str, checks: Sequence[CheckResult]):
        for check in checks:
            if check.failed:
                diagnostics.failures.append(f"{where}: {check.name} {check.details}")

    def _bounded_group(self, state: SieveState, n: int, parent: int, k: int,
                       lines: List[Line]) -> GroupDiagnostics:
        checks = [self.check_no_parallel(lines)]
        common = self.check_common_point(lines)
        checks.append(CheckResult("common_point", common.status,
                                  {"determinant": str(common.determinant)} if common.witness else {}))
        size_a = size_b = 0
        if common.point is not None:
            split = self.split_collections(lines, common.point, k, n)
            size_a, size_b = len(split.collection_a), len(split.collection_b)
            checks.append(split.b_size)
            checks.extend(self._close_pair_checks(lines, common.point, k, n))
            checks.extend(self.principal_inequalities(split.collection_a, common.point, k, n))
        return GroupDiagnostics(segment_level=n, segment_index=parent, slope=f"k={k}",
                                lines=tuple(lines), point=common.point, checks=tuple(checks),
                                size_a=size_a, size_b=size_b)

    def _close_pair_checks(self, lines: Sequence[Line], point: RationalPoint,
                           k: int, n: int) -> List[CheckResult]:
        """For close pairs the larger-B line obeys B <= sigma_k, A^2 <= sigma_k B and the slope-ratio bound"""
        sigma = self.sigma_k(point, k)
        d = derived_dk(self.params, k)
        if sigma is None:
            return [CheckResult("coefficient_bound", CheckStatus.NOT_APPLICABLE),
                    CheckResult("slope_ratio", CheckStatus.NOT_APPLICABLE)]
        closeness = self.params.kappa / (d * self.params.R ** n)
        W = 2 ** k * self.params.R ** (n - 1)
        pairs = 0
        coefficients_ok = ratio_ok = True
        for l1, l2 in combinations(lines, 2):
            if abs(l1.ordinate(self.theta) - l2.ordinate(self.theta)) > closeness:
                continue
            pairs += 1
            big = l1 if l1.B >= l2.B else l2
            if not (big.B <= sigma and big.A * big.A <= sigma * big.B):
                coefficients_ok = False
                continue
            if self.lemma5_check(sigma, W, big.A, big.B).status is CheckStatus.FAILS:
                ratio_ok = False
        if pairs == 0:
            return [CheckResult("coefficient_bound", CheckStatus.NOT_APPLICABLE),
                    CheckResult("slope_ratio", CheckStatus.NOT_APPLICABLE)]
        return [CheckResult("coefficient_bound", _status(coefficients_ok), {"pairs": str(pairs)}),
                CheckResult("slope_ratio", _status(ratio_ok), {"pairs": str(pairs)})]

    def analyze_level(self, state: SieveState, level: int) -> LevelDiagnostics:
        """Every check for the step from `level` to level + 1"""
        n = level
        ledger = state.ledgers[n - 1]
        diagnostics = LevelDiagnostics(level=n, regime=self.regime)

        bounded: Dict[Tuple[int, int], List[Line]] = defaultdict(list)
        starred: Dict[Tuple[int, int], List[Line]] = defaultdict(list)
        for entry in ledger.lines:
            y = entry.line.ordinate(self.theta)
            if entry.slope_class == 0:
                for parent in self._containing(state, n, y):
                    bounded[(parent, entry.k)].append(entry.line)
            elif n - entry.slope_class >= 1:
                for ancestor in self._containing(state, n - entry.slope_class, y):
                    starred[(ancestor, entry.slope_class)].append(entry.line)

        for (parent, k), lines in sorted(bounded.items()):
            for l1, l2 in combinations(lines, 2):
                if self.check_intersection_identity(l1, l2) is not None:
                    diagnostics.intersection_pairs += 1
            group = self._bounded_group(state, n, parent, k, lines)
            diagnostics.groups.append(group)
            self._record(diagnostics, f"level {n} segment {parent} k={k}", group.checks)

        for (ancestor, l), lines in sorted(starred.items()):
            for l1, l2 in combinations(lines, 2):
                if self.check_intersection_identity(l1, l2) is not None:
                    diagnostics.intersection_pairs += 1
            common, checks = self.starred_checks(lines, l, n)
            checks.insert(1, CheckResult("class_common_point", common.status))
            group = GroupDiagnostics(segment_level=n - l, segment_index=ancestor, slope=f"l={l}",
                                     lines=tuple(lines), point=common.point, checks=tuple(checks),
                                     size_a=max(len(lines) - 1, 0), size_b=min(len(lines), 1))
            diagnostics.groups.append(group)
            self._record(diagnostics, f"level {n - l} segment {ancestor} l={l}", group.checks)

        diagnostics.attribution = self._check_attribution(ledger)
        diagnostics.fundamental = self.fundamental_counters(state, n)
        self._record(diagnostics, f"level {n}", diagnostics.fundamental)

        if diagnostics.failures:
            if self.regime.all_hold:
                raise InvariantViolation(
                    f"{len(diagnostics.failures)} check failures inside the proven regime: "
                    f"{diagnostics.failures[0]}")
            self.logger.info(f"Level {n}: {len(diagnostics.failures)} checks fail "
                             f"outside the proven regime")
        self.logger.debug(f"Level {n} diagnostics: {diagnostics.status_counts()}")
        return diagnostics

    def _check_attribution(self, ledger) -> CheckResult:
        """Each removed child sits in exactly one bucket and the buckets add up"""
        total = ledger.removed_total
        bucket_sum = sum(ledger.buckets.values())
        parent_sum = sum(sum(counts.values()) for counts in ledger.removed_by_parent.values())
        if not bucket_sum == parent_sum == total:
            raise InvariantViolation(
                f"Attribution mismatch at level {ledger.level}: buckets {bucket_sum}, "
                f"parents {parent_sum}, removed {total}")
        return CheckResult("attribution", CheckStatus.HOLDS,
                           {"removed": str(total), "buckets": str(len(ledger.buckets))})
