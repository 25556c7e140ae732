# sieve.py
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

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .line import Line
from .quadratic import QuadraticNumber

LAMBDA = Fraction(1741, 330)


class KappaMode(Enum):
    """How kappa was chosen"""
    STANDARD = "standard"
    USER = "user"


class ExtractionPolicy(Enum):
    """Which final survivor extract_point returns"""
    LEFTMOST = "leftmost"
    DEEPEST = "deepest"


@dataclass(frozen=True)
class Params:
    """Sieve parameters.

    In standard mode kappa = delta * floor(R**(6/5)); kappa_exact records whether
    the floor was a no-op (R a perfect fifth power).
    """
    R: int
    delta: Fraction
    kappa: Fraction
    lam: Fraction = LAMBDA
    strict_mode: bool = False
    kappa_mode: KappaMode = KappaMode.STANDARD
    kappa_exact: bool = True

    @property
    def first_length(self) -> Fraction:
        """|J_1| = kappa / R"""
        return self.kappa / self.R


@dataclass(frozen=True)
class RegimeFlags:
    """Which of the large-R parameter conditions hold"""
    r_large: bool
    delta_small: bool
    delta_vs_r: bool
    kappa_small: bool
    floor_r_8_55_ge_2: bool
    dk_lower: bool
    dk_upper: bool
    dk_kk_product: bool

    @property
    def all_hold(self) -> bool:
        return all(getattr(self, name) for name in self.__dataclass_fields__)

    def as_dict(self) -> Dict[str, bool]:
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


@dataclass(frozen=True, order=True)
class Segment:
    """Level-n survivor candidate, the index-th piece of length kappa/R**n from origin"""
    level: int
    index: int
    origin: Fraction = field(compare=False)
    kappa: Fraction = field(compare=False)
    R: int = field(compare=False)

    @property
    def length(self) -> Fraction:
        return self.kappa / self.R ** self.level

    @property
    def left(self) -> Fraction:
        return self.origin + self.index * self.length

    @property
    def right(self) -> Fraction:
        return self.origin + (self.index + 1) * self.length

    @property
    def lineage(self) -> Tuple[int, ...]:
        """Child numbers 1..R along the path from the level-1 segment"""
        digits: List[int] = []
        index = self.index
        for _ in range(self.level - 1):
            index, mu = divmod(index, self.R)
            digits.append(mu + 1)
        return tuple(reversed(digits))

    def parent(self) -> Optional['Segment']:
        if self.level <= 1:
            return None
        return Segment(self.level - 1, self.index // self.R, self.origin, self.kappa, self.R)

    def ancestor(self, level: int) -> 'Segment':
        if not 1 <= level <= self.level:
            raise ValueError(f"No ancestor at level {level} for a level-{self.level} segment")
        return Segment(level, self.index // self.R ** (self.level - level),
                       self.origin, self.kappa, self.R)

    def contains(self, y) -> bool:
        return self.left <= y <= self.right


@dataclass(frozen=True)
class LedgerLine:
    """An enumerated line with its classification at this step"""
    line: Line
    height: int
    k: int
    slope_class: int  # 0 for bounded slope, l >= 1 otherwise

    @property
    def bucket(self) -> str:
        if self.slope_class == 0:
            return f"k={self.k}"
        return f"l={self.slope_class}"


@dataclass(frozen=True)
class DeltaHit:
    """A forbidden interval hitting children child_lo..child_hi of one parent"""
    line: Line
    parent_index: int
    child_lo: int
    child_hi: int

    @property
    def count(self) -> int:
        return self.child_hi - self.child_lo + 1


@dataclass(frozen=True)
class LevelLedger:
    """Record of the step from level `level` to level + 1"""
    level: int
    parents: int
    lines: Tuple[LedgerLine, ...]
    hits: Tuple[DeltaHit, ...]
    attribution: Dict[int, LedgerLine] = field(default_factory=dict)
    buckets: Dict[str, int] = field(default_factory=dict)
    removed_by_parent: Dict[int, Dict[str, int]] = field(default_factory=dict)

    @property
    def removed_total(self) -> int:
        return len(self.attribution)

    def line_info(self, line: Line) -> Optional[LedgerLine]:
        for entry in self.lines:
            if entry.line == line:
                return entry
        return None


@dataclass(frozen=True)
class SieveState:
    """Immutable snapshot of the construction after some number of steps.

    history[m] holds the sorted survivor indices at level m + 1.
    """
    theta: QuadraticNumber
    params: Params
    origin: Fraction
    history: Tuple[Tuple[int, ...], ...]
    ledgers: Tuple[LevelLedger, ...] = ()

    @property
    def level(self) -> int:
        return len(self.history)

    @property
    def counts(self) -> Tuple[int, ...]:
        """T_1, ..., T_n"""
        return tuple(len(indices) for indices in self.history)

    def segment(self, level: int, index: int) -> Segment:
        return Segment(level, index, self.origin, self.params.kappa, self.params.R)

    def segments_at(self, level: int) -> List[Segment]:
        return [self.segment(level, index) for index in self.history[level - 1]]

    @property
    def survivors(self) -> List[Segment]:
        return self.segments_at(self.level)


@dataclass(frozen=True)
class PointExtraction:
    """Chosen final survivor and the chain of its ancestors"""
    chain: Tuple[Segment, ...]
    policy: ExtractionPolicy

    @property
    def segment(self) -> Segment:
        return self.chain[-1]

    @property
    def interval(self) -> Tuple[Fraction, Fraction]:
        return self.segment.left, self.segment.right
