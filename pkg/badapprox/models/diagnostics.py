# diagnostics.py
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

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from .line import Line, RationalPoint
from .quadratic import QuadraticNumber
from .sieve import RegimeFlags

ExactValue = Union[int, Fraction, QuadraticNumber]


class CheckStatus(Enum):
    """Outcome of one executable counting check"""
    HOLDS = "holds"
    FAILS = "fails"
    NOT_APPLICABLE = "not_applicable"
    NOT_EVALUATED = "not_evaluated"
    VACUOUS = "vacuous"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: CheckStatus
    details: Dict[str, str] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.status is CheckStatus.FAILS

    def to_dict(self) -> Dict[str, object]:
        return {"name": self.name, "status": self.status.value, "details": dict(self.details)}


@dataclass(frozen=True)
class CommonPointResult:
    """Common point of a line family, or a non-zero determinant witness"""
    status: CheckStatus
    point: Optional[RationalPoint] = None
    witness: Tuple[Line, ...] = ()
    determinant: int = 0


@dataclass(frozen=True)
class CollectionSplit:
    """Lines through P split by whether they cross the fiber within omega of r/q"""
    collection_a: Tuple[Line, ...]
    collection_b: Tuple[Line, ...]
    sigma: Optional[QuadraticNumber]
    omega4: Optional[ExactValue]
    d_k: int
    b_size: CheckResult


@dataclass(frozen=True)
class Lemma5Result:
    """|A|/B against (sigma^3/W)^(1/4), compared as A^4 W against sigma^3 B^4"""
    status: CheckStatus
    lhs: Optional[ExactValue] = None
    rhs: Optional[ExactValue] = None

    @property
    def attained(self) -> bool:
        return self.status is CheckStatus.HOLDS and self.lhs == self.rhs


@dataclass(frozen=True)
class GroupDiagnostics:
    """All checks for the lines of one class crossing one segment"""
    segment_level: int
    segment_index: int
    slope: str
    lines: Tuple[Line, ...]
    point: Optional[RationalPoint]
    checks: Tuple[CheckResult, ...]
    size_a: int = 0
    size_b: int = 0

    def to_dict(self) -> Dict[str, object]:
        return {
            "segment_level": self.segment_level,
            "segment_index": self.segment_index,
            "class": self.slope,
            "lines": [list(line.as_tuple()) for line in self.lines],
            "point": None if self.point is None else [self.point.p, self.point.r, self.point.q],
            "size_a": self.size_a,
            "size_b": self.size_b,
            "checks": [check.to_dict() for check in self.checks],
        }


@dataclass
class LevelDiagnostics:
    """Diagnostics for the step from `level` to level + 1"""
    level: int
    regime: RegimeFlags
    groups: List[GroupDiagnostics] = field(default_factory=list)
    fundamental: List[CheckResult] = field(default_factory=list)
    attribution: Optional[CheckResult] = None
    intersection_pairs: int = 0
    failures: List[str] = field(default_factory=list)

    def status_counts(self) -> Dict[str, int]:
        counts: Counter = Counter()
        for group in self.groups:
            for check in group.checks:
                counts[check.status.value] += 1
        for check in self.fundamental:
            counts[check.status.value] += 1
        return dict(sorted(counts.items()))

    def to_dict(self, full: bool = False) -> Dict[str, object]:
        document: Dict[str, object] = {
            "level": self.level,
            "groups": len(self.groups),
            "intersection_pairs": self.intersection_pairs,
            "status_counts": self.status_counts(),
            "attribution": None if self.attribution is None else self.attribution.to_dict(),
            "fundamental": [check.to_dict() for check in self.fundamental],
            "failures": list(self.failures),
        }
        if full:
            document["group_details"] = [group.to_dict() for group in self.groups]
        return document
