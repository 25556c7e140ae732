# line.py
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

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Tuple, Union

from ..errors import ParameterError
from .quadratic import QuadraticNumber


@dataclass(frozen=True)
class Line:
    """The integer line A*x - B*y + C = 0 with B > 0 and gcd(A, B, C) = 1"""
    A: int
    B: int
    C: int

    def __post_init__(self):
        if self.B <= 0:
            raise ParameterError(f"Line needs B > 0, got {self.B}")
        if gcd(gcd(self.A, self.B), self.C) != 1:
            raise ParameterError(f"Line ({self.A}, {self.B}, {self.C}) is not primitive")

    @property
    def height(self) -> int:
        return self.B * max(self.A * self.A, self.B * self.B)

    @property
    def slope(self) -> Fraction:
        return Fraction(self.A, self.B)

    def attribution_key(self) -> Tuple[int, int, int, int, int]:
        """Order used to pick one responsible line per removed child"""
        return (self.height, self.B, abs(self.A), self.A, self.C)

    def ordinate(self, theta: QuadraticNumber) -> QuadraticNumber:
        """y-coordinate where the line crosses the fiber x = theta"""
        return (theta * self.A + self.C) / self.B

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.A, self.B, self.C)

    def __str__(self) -> str:
        return f"({self.A},{self.B},{self.C})"


@dataclass(frozen=True)
class ForbiddenInterval:
    """Closed interval of half-width delta/H around the line's crossing with the fiber"""
    center: QuadraticNumber
    half_width: Fraction
    source: Line

    @property
    def lo(self) -> QuadraticNumber:
        return self.center - self.half_width

    @property
    def hi(self) -> QuadraticNumber:
        return self.center + self.half_width

    @property
    def length(self) -> Fraction:
        return 2 * self.half_width

    def meets(self, lo: Union[Fraction, QuadraticNumber], hi: Union[Fraction, QuadraticNumber]) -> bool:
        """True when the closed interval [lo, hi] touches this interval"""
        return lo <= self.hi and hi >= self.lo


@dataclass(frozen=True)
class RationalPoint:
    """The point (p/q, r/q) with q > 0 and gcd(p, r, q) = 1"""
    p: int
    r: int
    q: int

    def __post_init__(self):
        if self.q <= 0:
            raise ParameterError(f"RationalPoint needs q > 0, got {self.q}")
        if gcd(gcd(self.p, self.r), self.q) != 1:
            raise ParameterError(f"RationalPoint ({self.p}, {self.r}, {self.q}) is not reduced")

    @property
    def x(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def y(self) -> Fraction:
        return Fraction(self.r, self.q)

    def __str__(self) -> str:
        return f"({self.p}/{self.q}, {self.r}/{self.q})"
