# reports.py
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
from typing import Tuple, Union

from .quadratic import QuadraticNumber

ExactValue = Union[Fraction, QuadraticNumber]


@dataclass(frozen=True)
class BadnessReport:
    """Worst value of ||A*theta - B*xi|| * max(A^2, B^2) over a xi interval"""
    h_max: int
    A: int
    B: int
    C: int
    minimum: ExactValue
    enclosure: Tuple[Fraction, Fraction]
    delta: Fraction
    xi_interval: Tuple[Fraction, Fraction]
    passes: bool


@dataclass(frozen=True)
class Condition0Report:
    """Finite check of inf q^2 ||q theta|| >= delta plus its continued-fraction tail bound"""
    q_max: int
    minimum: QuadraticNumber
    minimizing_q: int
    delta: Fraction
    passes: bool
    margin: QuadraticNumber
    a_max: int
    tail_bound: Fraction
    extends_to_all: bool
    distance_enclosure: Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class OracleResult:
    """Cells the brute-force oracle permits at one level"""
    level: int
    permitted: Tuple[int, ...]
    lines_checked: int
