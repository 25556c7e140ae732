# sieve_service.py
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

import concurrent.futures
from bisect import bisect_left, bisect_right
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from ..errors import EmptySieveError, InvariantViolation, ParameterError
from ..models.line import ForbiddenInterval, Line
from ..models.quadratic import QuadraticNumber
from ..models.sieve import (DeltaHit, ExtractionPolicy, LedgerLine, LevelLedger, Params,
                            PointExtraction, Segment, SieveState)
from .geometry import enumerate_triples, forbidden_interval
from .logger_service import get_logger
from .parameters import derived_Kk, dyadic_class, slope_class


@dataclass(frozen=True)
class CountBoundReport:
    """Result of recounting every (interval, parent) pair of one step"""
    level: int
    pairs_checked: int
    max_count: int
    violations: Tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        return not self.violations


def subdivide(segment: Segment, R: int) -> List[Segment]:
    """The R equal children of a segment, left to right"""
    if R != segment.R:
        raise ParameterError(f"Segment was built for R={segment.R}, not R={R}")
    first = segment.index * R
    return [Segment(segment.level + 1, first + mu, segment.origin, segment.kappa, R)
            for mu in range(R)]


def count_children_meeting(interval: ForbiddenInterval, parent: Segment, R: int) -> int:
    """Children of the parent touching the closed interval, by direct endpoint comparison"""
    return sum(1 for child in subdivide(parent, R) if interval.meets(child.left, child.right))


class SieveService:
    """Runs the interval sieve for a fixed theta and parameter set.

    With workers > 1 the per-line hit searches run on a thread pool. The
    arithmetic is pure Python and holds the GIL, so this changes scheduling
    only: results are identical for every worker count and no speedup is
    promised.
    """

    def __init__(self, theta: QuadraticNumber, params: Params, workers: int = 1):
        self.theta = theta
        self.params = params
        self.workers = max(1, workers)
        self.logger = get_logger('sieve_service')

    def init(self, start: Fraction) -> SieveState:
        """Level-1 state holding the single segment [start, start + kappa/R]"""
        start = Fraction(start)
        if start < 0 or start + self.params.first_length > 1:
            raise ParameterError(
                f"J_1 = [{start}, {start + self.params.first_length}] is not inside [0, 1]")
        self.logger.info(f"Initial segment J_1 = [{start}, {start + self.params.first_length}]")
        return SieveState(theta=self.theta, params=self.params, origin=start, history=((0,),))

    def _classify(self, line: Line, n: int) -> LedgerLine:
        H = line.height
        return LedgerLine(line=line, height=H, k=dyadic_class(H, n, self.params.R),
                          slope_class=slope_class(line.B, n, self.params))

    def _hits_for_line(self, line: Line, n: int, origin: Fraction,
                       survivors: Sequence[int]) -> List[DeltaHit]:
        """Every surviving parent whose children the line's interval touches"""
        R = self.params.R
        child_length = self.params.kappa / R ** (n + 1)
        interval = forbidden_interval(line, self.theta, self.params.delta)
        # child j spans [origin + j*L, origin + (j+1)*L]
        j_lo = ((interval.lo - origin) / child_length).ceil() - 1
        j_hi = ((interval.hi - origin) / child_length).floor()
        j_lo = max(j_lo, 0)
        j_hi = min(j_hi, R ** n - 1)
        if j_lo > j_hi:
            return []

        hits = []
        first = bisect_left(survivors, j_lo // R)
        last = bisect_right(survivors, j_hi // R)
        for parent in survivors[first:last]:
            lo = max(j_lo, parent * R)
            hi = min(j_hi, parent * R + R - 1)
            if lo <= hi:
                hits.append(DeltaHit(line=line, parent_index=parent, child_lo=lo, child_hi=hi))
        return hits

    def step(self, state: SieveState) -> SieveState:
        """Advance one level, deleting children that meet a forbidden interval
        with height in [R**(n-1), R**n)."""
        n = state.level
        R = self.params.R
        survivors = state.history[-1]
        window_lo = state.origin
        window_hi = state.origin + self.params.first_length

        lines = sorted(
            enumerate_triples(R ** (n - 1), R ** n, window_lo, window_hi,
                              self.theta, self.params.delta),
            key=Line.attribution_key,
        )
        entries = tuple(self._classify(line, n) for line in lines)
        self.logger.debug(f"Level {n}: {len(entries)} lines meet J_1")

        if self.workers > 1 and len(lines) > 1:
            with concurrent.futures.ThreadPoolExecutor(max_workers=self.workers) as executor:
                per_line = list(executor.map(
                    lambda line: self._hits_for_line(line, n, state.origin, survivors), lines))
        else:
            per_line = [self._hits_for_line(line, n, state.origin, survivors) for line in lines]

        # lines are in attribution order, so the first claim on a child wins
        attribution: Dict[int, LedgerLine] = {}
        hits: List[DeltaHit] = []
        for entry, line_hits in zip(entries, per_line):
            for hit in line_hits:
                hits.append(hit)
                for child in range(hit.child_lo, hit.child_hi + 1):
                    attribution.setdefault(child, entry)

        buckets: Counter = Counter()
        removed_by_parent: Dict[int, Counter] = {}
        for child, entry in attribution.items():
            buckets[entry.bucket] += 1
            removed_by_parent.setdefault(child // R, Counter())[entry.bucket] += 1

        next_survivors = tuple(
            parent * R + mu
            for parent in survivors
            for mu in range(R)
            if parent * R + mu not in attribution
        )
        ledger = LevelLedger(
            level=n,
            parents=len(survivors),
            lines=entries,
            hits=tuple(hits),
            attribution=attribution,
            buckets=dict(sorted(buckets.items())),
            removed_by_parent={parent: dict(sorted(counts.items()))
                               for parent, counts in sorted(removed_by_parent.items())},
        )
        self.logger.info(
            f"Step {n} -> {n + 1}: T_{n} = {len(survivors)}, removed {ledger.removed_total}, "
            f"T_{n + 1} = {len(next_survivors)}")
        if not next_survivors:
            self.logger.warning(f"No survivors left at level {n + 1}")

        return SieveState(
            theta=state.theta,
            params=state.params,
            origin=state.origin,
            history=state.history + (next_survivors,),
            ledgers=state.ledgers + (ledger,),
        )

    def run(self, start: Fraction, depth: int) -> SieveState:
        """init followed by `depth` steps"""
        state = self.init(start)
        for _ in range(depth):
            state = self.step(state)
        return state

    def count_bound_check(self, state: SieveState, ledger: LevelLedger) -> CountBoundReport:
        """Recount each hit by endpoint comparison and test both child-count ceilings.

        The ceilings are |Delta|/|I| + 2 and, in dyadic class k, 2*K_k + 2.
        Any failure is a bug, so it raises.
        """
        n = ledger.level
        R = self.params.R
        child_length = self.params.kappa / R ** (n + 1)
        info = {entry.line: entry for entry in ledger.lines}
        violations: List[str] = []
        max_count = 0

        for hit in ledger.hits:
            interval = forbidden_interval(hit.line, self.theta, self.params.delta)
            parent = state.segment(n, hit.parent_index)
            recount = count_children_meeting(interval, parent, R)
            max_count = max(max_count, recount)
            if recount != hit.count:
                violations.append(f"{hit.line} on parent {hit.parent_index}: "
                                  f"recorded {hit.count}, recounted {recount}")
            if recount > interval.length / child_length + 2:
                violations.append(f"{hit.line} on parent {hit.parent_index}: "
                                  f"{recount} > |Delta|/|I| + 2")
            k = info[hit.line].k
            if recount > 2 * derived_Kk(self.params, k) + 2:
                violations.append(f"{hit.line} on parent {hit.parent_index}: "
                                  f"{recount} > 2K_{k} + 2")

        report = CountBoundReport(level=n, pairs_checked=len(ledger.hits),
                                  max_count=max_count, violations=tuple(violations))
        if violations:
            for violation in violations:
                self.logger.error(f"Count bound violated: {violation}")
            raise InvariantViolation(f"{len(violations)} child-count bound violations at level {n}")
        return report

    def extract_point(self, state: SieveState,
                      policy: ExtractionPolicy = ExtractionPolicy.LEFTMOST) -> PointExtraction:
        """Pick one final-level survivor and return it with its ancestor chain"""
        final = state.history[-1]
        if not final:
            raise EmptySieveError(f"No survivors at level {state.level}")
        R = self.params.R
        top = state.level

        if policy is ExtractionPolicy.LEFTMOST:
            chosen = state.segment(top, final[0])
            chain = tuple(chosen.ancestor(level) for level in range(1, top + 1))
            return PointExtraction(chain=chain, policy=policy)

        chain = [state.segment(1, 0)]
        for level in range(2, top + 1):
            shift = R ** (top - level)
            weights = Counter(index // shift for index in final)
            current = chain[-1].index
            children = [index for index in state.history[level - 1]
                        if index // R == current and weights[index] > 0]
            # max weight, ties to the leftmost child
            best = min(children, key=lambda index: (-weights[index], index))
            chain.append(state.segment(level, best))
        return PointExtraction(chain=tuple(chain), policy=policy)
