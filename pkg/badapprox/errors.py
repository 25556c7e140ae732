# errors.py
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


class BadApproxError(Exception):
    """Base class for all errors raised by badapprox"""


class ConfigError(BadApproxError):
    """Run configuration could not be parsed or is inconsistent"""


class ParameterError(BadApproxError):
    """Sieve parameters violate an invariant or an argument is out of range"""


class InfeasibleError(BadApproxError):
    """Estimated amount of work exceeds the configured cap"""

    def __init__(self, message: str, estimate: int, cap: int):
        super().__init__(message)
        self.estimate = estimate
        self.cap = cap


class ParallelLinesError(BadApproxError):
    """Two lines with equal slope have no intersection point"""


class EmptySieveError(BadApproxError):
    """No survivor segment is left to extract a point from"""


class InvariantViolation(BadApproxError):
    """An identity that must always hold was found broken"""
