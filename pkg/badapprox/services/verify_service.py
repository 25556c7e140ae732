# verify_service.py
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

from fractions import Fraction
from math import gcd
from typing import Dict, Set, Tuple

import gmpy2

from ..errors import InfeasibleError, ParameterError
from ..models.certificate import fraction_from_str, fraction_to_str
from ..models.quadratic import QuadraticNumber
from ..models.reports import BadnessReport, Condition0Report, OracleResult
from ..models.sieve import Params
from .exact_arithmetic import (approx, check_homogeneous, continued_fraction_of, nearest_int,
                               nearest_int_dist, nearest_int_dist_enclosed, parse_theta)
from .logger_service import get_logger

ENCLOSURE_TOLERANCE = Fraction(1, 10 ** 30)


class VerifyService:
    """Independent oracles for theta, for the extracted xi and for the sieve itself"""

    def __init__(self, cap: int = 10 ** 8):
        self.cap = cap
        self.logger = get_logger('verify_service')

    def verify_bad(self, theta: QuadraticNumber, xi_interval: Tuple[Fraction, Fraction],
                   delta: Fraction, h_max: int) -> BadnessReport:
        """Minimum of ||A*theta - B*xi|| * max(A^2, B^2) over all xi in the interval.

        Pairs with B > 0 and B*max(A^2, B^2) <= h_max are covered, together
        with B = 0, A > 0, A^2 <= h_max. Ties go to the smallest (B, |A|, C).
        """
        lo, hi = (Fraction(x) for x in xi_interval)
        if not 0 <= lo <= hi <= 1:
            raise ParameterError(f"xi interval [{lo}, {hi}] is not inside [0, 1]")
        if h_max < 1:
            raise ParameterError(f"h_max must be >= 1, got {h_max}")

        best = None  # (value, (B, |A|, C), A, B, C)

        def consider(value, A: int, B: int, C: int):
            nonlocal best
            key = (B, abs(A), C)
            if best is None or value < best[0] or (value == best[0] and key < best[1]):
                best = (value, key, A, B, C)

        for A in range(1, int(gmpy2.isqrt(h_max)) + 1):
            x = theta * A
            consider(nearest_int_dist(x) * (A * A), A, 0, -nearest_int(x))

        for B in range(1, int(gmpy2.iroot(h_max, 3)[0]) + 1):
            a_max = int(gmpy2.isqrt(h_max // B))
            for a_abs in range(0, a_max + 1):
                if B * max(a_abs * a_abs, B * B) > h_max:
                    continue
                weight = max(a_abs * a_abs, B * B)
                for A in ((a_abs, -a_abs) if a_abs else (0,)):
                    # A*theta - B*xi runs monotonically over [bottom, top]
                    base = theta * A
                    top = base - B * lo
                    bottom = base - B * hi
                    m = top.floor()
                    if m >= bottom:
                        consider(Fraction(0), A, B, -m)
                        continue
                    d_top = nearest_int_dist(top)
                    d_bottom = nearest_int_dist(bottom)
                    if d_top <= d_bottom:
                        consider(d_top * weight, A, B, -nearest_int(top))
                    else:
                        consider(d_bottom * weight, A, B, -nearest_int(bottom))

        value, _, A, B, C = best
        if isinstance(value, QuadraticNumber):
            enclosure = value.enclose(ENCLOSURE_TOLERANCE)
        else:
            enclosure = (value, value)
        passes = value >= delta
        self.logger.info(
            f"verify_bad up to H={h_max}: minimum {approx(value)} at (A,B,C)=({A},{B},{C}), "
            f"{'pass' if passes else 'FAIL'} against delta={delta}")
        return BadnessReport(h_max=h_max, A=A, B=B, C=C, minimum=value, enclosure=enclosure,
                             delta=Fraction(delta), xi_interval=(lo, hi), passes=passes)

    def certify_condition0(self, theta: QuadraticNumber, delta: Fraction,
                           q_max: int) -> Condition0Report:
        """Finite check of q^2 ||q theta|| >= delta with the a_max tail bound.

        For partial quotients bounded by a_max, q ||q theta|| >= 1/(a_max + 2),
        so every q > q_max clears delta once q_max >= delta * (a_max + 2).
        """
        result = check_homogeneous(theta, delta, q_max)
        a_max = continued_fraction_of(theta).max_partial_quotient()
        tail_bound = Fraction(1, a_max + 2)
        passes = result.holds
        extends = passes and q_max >= delta * (a_max + 2)
        _, distance_enclosure = nearest_int_dist_enclosed(theta * result.q, ENCLOSURE_TOLERANCE)
        self.logger.info(
            f"Condition (0): min {approx(result.value)} at q={result.q} for q <= {q_max}, "
            f"a_max={a_max}, {'pass' if passes else 'FAIL'}")
        return Condition0Report(
            q_max=q_max,
            minimum=result.value,
            minimizing_q=result.q,
            delta=Fraction(delta),
            passes=passes,
            margin=result.value - delta,
            a_max=a_max,
            tail_bound=tail_bound,
            extends_to_all=extends,
            distance_enclosure=distance_enclosure,
        )

    def _band_forbidden(self, theta: QuadraticNumber, params: Params, start: Fraction,
                        m: int) -> Tuple[Set[int], int]:
        """Level-(m+1) cells meeting a closed interval of a line with H in [R^(m-1), R^m)"""
        R = params.R
        h_lo, h_hi = R ** (m - 1), R ** m
        cell = params.kappa / R ** (m + 1)
        cells = R ** m
        end = start + params.first_length
        forbidden: Set[int] = set()
        lines = 0

        B = 1
        while B * B * B < h_hi:
            a_bound = int(gmpy2.isqrt(h_hi))
            for A in range(-a_bound, a_bound + 1):
                H = B * max(A * A, B * B)
                if not h_lo <= H < h_hi:
                    continue
                w = params.delta / H
                shift = theta * A
                e_lo, e_hi = shift.enclose(Fraction(1, 2 ** 64))
                c_first = int((B * (start - w) - e_hi).__floor__())
                c_last = int((B * (end + w) - e_lo).__ceil__())
                for C in range(c_first, c_last + 1):
                    if gcd(gcd(A, B), C) != 1:
                        continue
                    lines += 1
                    center = (shift + C) / B
                    lo, hi = center - w, center + w
                    y_lo, y_hi = center.enclose(Fraction(1, 2 ** 64))
                    j_first = int(((y_lo - w - start) / cell).__floor__()) - 1
                    j_last = int(((y_hi + w - start) / cell).__floor__()) + 1
                    for j in range(max(j_first, 0), min(j_last, cells - 1) + 1):
                        left = start + j * cell
                        if left <= hi and left + cell >= lo:
                            forbidden.add(j)
            B += 1
        return forbidden, lines

    def grid_oracle(self, theta: QuadraticNumber, delta: Fraction, params: Params,
                    depth: int, start: Fraction) -> OracleResult:
        """Cells of length kappa/R^depth in J_1 that survive every height band.

        A cell is permitted when, for each m < depth, its level-(m+1) ancestor
        meets no closed interval of a line with R^(m-1) <= H < R^m. This is the
        set the sieve keeps at level `depth`, rebuilt from plain loops.
        """
        if Fraction(delta) != params.delta:
            raise ParameterError("delta does not match the parameter set")
        if depth < 1:
            raise ParameterError(f"Oracle depth must be >= 1, got {depth}")
        R = params.R
        estimate = R ** (depth - 1) * depth + sum(
            (2 * int(gmpy2.isqrt(R ** m)) + 1) * int(gmpy2.iroot(R ** m, 3)[0])
            for m in range(1, depth))
        if estimate > self.cap:
            raise InfeasibleError(
                f"Grid oracle at depth {depth} needs about {estimate} tests, cap is {self.cap}",
                estimate=estimate, cap=self.cap)

        forbidden: Dict[int, Set[int]] = {}
        lines = 0
        for m in range(1, depth):
            forbidden[m], band_lines = self._band_forbidden(theta, params, Fraction(start), m)
            lines += band_lines

        permitted = tuple(
            i for i in range(R ** (depth - 1))
            if all(i // R ** (depth - 1 - m) not in forbidden[m] for m in range(1, depth))
        )
        self.logger.info(f"Grid oracle at level {depth}: {len(permitted)} of "
                         f"{R ** (depth - 1)} cells permitted, {lines} lines checked")
        return OracleResult(level=depth, permitted=permitted, lines_checked=lines)

    def recheck_certificate(self, document: dict) -> Tuple[BadnessReport, bool]:
        """Recompute a certificate's badness section and compare it with the stored one"""
        theta = parse_theta(document['config']['theta'])
        badness = document['badness']
        xi = (fraction_from_str(badness['xi_left']), fraction_from_str(badness['xi_right']))
        delta = fraction_from_str(badness['delta'])
        report = self.verify_bad(theta, xi, delta, int(badness['h_max']))
        stored = tuple(badness["minimizer"])
        enclosure = [fraction_to_str(report.enclosure[0]), fraction_to_str(report.enclosure[1])]
        matches = (report.passes == badness['passes']
                   and (report.A, report.B, report.C) == stored
                   and badness.get('enclosure') == enclosure
                   and badness.get('minimum') == approx(report.minimum, 20))
        if not matches:
            self.logger.error(f"Certificate recheck mismatch: stored {stored} {badness.get('enclosure')}, "
                              f"recomputed {(report.A, report.B, report.C)} {enclosure}")
        return report, matches
