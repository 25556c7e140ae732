# certificate.py
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
from typing import Any, Dict, Optional

from .quadratic import QuadraticNumber

CERTIFICATE_FORMAT = "badapprox-certificate/1"


class RunStatus(Enum):
    """Overall outcome, mapped onto the process exit code"""
    PASS = "pass"
    FAIL = "fail"
    EMPTY = "empty"

    @property
    def exit_code(self) -> int:
        return 0 if self is RunStatus.PASS else 2


class DiagLevel(Enum):
    OFF = "off"
    SUMMARY = "summary"
    FULL = "full"


def fraction_to_str(value: Fraction) -> str:
    """Exact 'num/den' form, denominators of 1 included"""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def fraction_from_str(text: str) -> Fraction:
    return Fraction(text)


def exact_to_str(value) -> str:
    """'num/den' for rationals, 'a,b,c,d' for quadratic irrationals"""
    if isinstance(value, QuadraticNumber):
        if value.is_rational:
            return fraction_to_str(value.to_fraction())
        return value.to_spec()
    return fraction_to_str(value)


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on; kappa=None selects the standard choice"""
    theta: str
    R: int
    delta: Fraction
    kappa: Optional[Fraction]
    depth: int
    start: Fraction
    strict_mode: bool = False
    hmax: Optional[int] = None
    cap: int = 10 ** 8
    qmax: int = 10 ** 6
    diag: DiagLevel = DiagLevel.SUMMARY
    policy: str = "leftmost"
    workers: int = 1
    oracle: bool = False
    timings: bool = False
    out_cert: Optional[str] = None
    out_intervals: Optional[str] = None
    backup: bool = False

    @property
    def effective_hmax(self) -> int:
        """Verification height, R^(depth-1) unless given"""
        if self.hmax is not None:
            return self.hmax
        return self.R ** max(self.depth - 1, 0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theta": self.theta,
            "R": self.R,
            "delta": fraction_to_str(self.delta),
            "kappa": "standard" if self.kappa is None else fraction_to_str(self.kappa),
            "depth": self.depth,
            "start": fraction_to_str(self.start),
            "strict": self.strict_mode,
            "hmax": self.effective_hmax,
            "cap": self.cap,
            "qmax": self.qmax,
            "diag": self.diag.value,
            "policy": self.policy,
            "oracle": self.oracle,
        }


@dataclass
class Certificate:
    """Machine-readable record of one run, filled section by section"""
    config: RunConfig
    sections: Dict[str, Any] = field(default_factory=dict)
    status: RunStatus = RunStatus.FAIL

    def add(self, name: str, content: Any):
        self.sections[name] = content

    def to_dict(self) -> Dict[str, Any]:
        document: Dict[str, Any] = {
            "format": CERTIFICATE_FORMAT,
            "config": self.config.to_dict(),
        }
        document.update(self.sections)
        document["status"] = self.status.value
        return document
