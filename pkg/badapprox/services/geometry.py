# geometry.py
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
from typing import Iterator, Tuple, Union

import gmpy2

from ..errors import InvariantViolation, ParallelLinesError, ParameterError
from ..models.line import ForbiddenInterval, Line, RationalPoint
from ..models.quadratic import QuadraticNumber

Endpoint = Union[Fraction, QuadraticNumber]


def height(A: int, B: int) -> int:
    """H(A, B) = B * max(A**2, B**2)"""
    if B <= 0:
        raise ParameterError(f"height needs B > 0, got {B}")
    return B * max(A * A, B * B)


def forbidden_interval(line: Line, theta: QuadraticNumber, delta: Fraction) -> ForbiddenInterval:
    if delta <= 0:
        raise ParameterError(f"delta must be positive, got {delta}")
    return ForbiddenInterval(
        center=line.ordinate(theta),
        half_width=Fraction(delta) / line.height,
        source=line,
    )


def interval_meets(interval: ForbiddenInterval, lo: Endpoint, hi: Endpoint) -> bool:
    """Closed forbidden interval against the closed segment [lo, hi]"""
    return interval.meets(lo, hi)


def line_meets_interval(line: Line, theta: QuadraticNumber, lo: Endpoint, hi: Endpoint) -> bool:
    """True when the line crosses the fiber inside [lo, hi]"""
    y = line.ordinate(theta)
    return lo <= y <= hi


def intersect_with_multiplier(l1: Line, l2: Line) -> Tuple[RationalPoint, int]:
    """Intersection point and the integer s with s*q = A1*B2 - A2*B1.

    The same s also gives s*p = B1*C2 - B2*C1 and s*r = A1*C2 - A2*C1.
    """
    det = l1.A * l2.B - l2.A * l1.B
    if det == 0:
        raise ParallelLinesError(f"Lines {l1} and {l2} are parallel")
    p_raw = l1.B * l2.C - l2.B * l1.C
    r_raw = l1.A * l2.C - l2.A * l1.C
    s = gcd(gcd(p_raw, r_raw), det)
    if det < 0:
        s = -s
    point = RationalPoint(p_raw // s, r_raw // s, det // s)

    bound = 2 * max(abs(l1.A), abs(l2.A)) * max(l1.B, l2.B)
    if point.q > bound:
        raise InvariantViolation(
            f"Intersection of {l1} and {l2} has q={point.q} above 2*max|A|*max B = {bound}")
    return point, s


def intersect(l1: Line, l2: Line) -> RationalPoint:
    return intersect_with_multiplier(l1, l2)[0]


def lattice_residue(line: Line, point: RationalPoint) -> int:
    """(A*p - B*r) mod q"""
    return (line.A * point.p - line.B * point.r) % point.q


def passes_through(line: Line, point: RationalPoint) -> bool:
    return line.A * point.p - line.B * point.r + line.C * point.q == 0


def determinant3(l1: Line, l2: Line, l3: Line) -> int:
    """Determinant of the 3x3 matrix of (A, B, C) rows"""
    (a1, b1, c1), (a2, b2, c2), (a3, b3, c3) = l1.as_tuple(), l2.as_tuple(), l3.as_tuple()
    return (a1 * (b2 * c3 - b3 * c2)
            - b1 * (a2 * c3 - a3 * c2)
            + c1 * (a2 * b3 - a3 * b2))


def enumerate_triples(h_min: int, h_max: int, y_lo: Fraction, y_hi: Fraction,
                      theta: QuadraticNumber, delta: Fraction) -> Iterator[Line]:
    """Primitive lines with h_min <= H < h_max whose closed interval meets [y_lo, y_hi].

    Lines come out by B ascending, then |A| ascending with A before -A,
    then C ascending.
    """
    if h_min >= h_max:
        return
    if y_lo > y_hi:
        raise ParameterError(f"Empty window [{y_lo}, {y_hi}]")
    top = h_max - 1
    b_max = int(gmpy2.iroot(top, 3)[0])
    for B in range(1, b_max + 1):
        a_max = int(gmpy2.isqrt(top // B))
        for a_abs in range(0, a_max + 1):
            H = B * max(a_abs * a_abs, B * B)
            if H < h_min or H > top:
                continue
            half_width = Fraction(delta) / H
            for A in ((a_abs, -a_abs) if a_abs else (0,)):
                # center (A*theta + C)/B must lie in [y_lo - w, y_hi + w]
                shift = theta * A
                c_lo = (B * (y_lo - half_width) - shift).ceil()
                c_hi = (B * (y_hi + half_width) - shift).floor()
                for C in range(c_lo, c_hi + 1):
                    if gcd(gcd(A, B), C) == 1:
                        yield Line(A, B, C)
