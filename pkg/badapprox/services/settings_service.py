# settings_service.py
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

from argparse import Namespace
from fractions import Fraction
from typing import Any, Mapping, Optional, Union

from ..errors import ConfigError
from ..models.certificate import DiagLevel, RunConfig
from ..models.sieve import ExtractionPolicy
from .logger_service import get_logger

DEFAULTS = {
    "theta": "quad:-1,1,2,5",
    "R": 16,
    "delta": "1/10000",
    "kappa": "standard",
    "depth": 3,
    "start": "0",
    "strict": False,
    "hmax": None,
    "cap": 10 ** 8,
    "qmax": 10 ** 6,
    "diag": "summary",
    "policy": "leftmost",
    "workers": 1,
    "oracle": False,
    "timings": False,
    "out_cert": None,
    "out_intervals": None,
    "backup": False,
}


STANDARD_KAPPA_NAMES = ("standard", "paper")


class SettingsService:
    """Typed access to run options coming from the command line or a mapping"""

    def __init__(self, values: Union[Namespace, Mapping[str, Any], None] = None):
        self.logger = get_logger('settings_service')
        if values is None:
            values = {}
        elif isinstance(values, Namespace):
            values = vars(values)
        self.values = {key: value for key, value in values.items() if value is not None}

    def _raw(self, key: str) -> Any:
        return self.values.get(key, DEFAULTS[key])

    def _int(self, key: str, minimum: int) -> int:
        value = self._raw(key)
        try:
            number = int(value)
        except (TypeError, ValueError) as e:
            self.logger.error(f"Setting {key}={value!r} is not an integer")
            raise ConfigError(f"{key} must be an integer, got {value!r}") from e
        if number < minimum:
            self.logger.error(f"Setting {key}={number} is below {minimum}")
            raise ConfigError(f"{key} must be >= {minimum}, got {number}")
        return number

    def _fraction(self, key: str) -> Fraction:
        value = self._raw(key)
        try:
            return Fraction(str(value))
        except (TypeError, ValueError, ZeroDivisionError) as e:
            self.logger.error(f"Setting {key}={value!r} is not an exact rational")
            raise ConfigError(f"{key} must be a rational like 1/10000, got {value!r}") from e

    def get_theta_spec(self) -> str:
        return str(self._raw("theta"))

    def get_R(self) -> int:
        return self._int("R", 2)

    def get_delta(self) -> Fraction:
        delta = self._fraction("delta")
        if delta <= 0:
            raise ConfigError(f"delta must be positive, got {delta}")
        return delta

    def get_kappa(self) -> Optional[Fraction]:
        """None for the standard choice delta * floor(R^(6/5)); "paper" is accepted as its alias"""
        if str(self._raw("kappa")).strip().lower() in STANDARD_KAPPA_NAMES:
            return None
        kappa = self._fraction("kappa")
        if kappa <= 0:
            raise ConfigError(f"kappa must be positive, got {kappa}")
        return kappa

    def get_depth(self) -> int:
        return self._int("depth", 0)

    def get_start(self) -> Fraction:
        return self._fraction("start")

    def get_strict_mode(self) -> bool:
        return bool(self._raw("strict"))

    def get_hmax(self) -> Optional[int]:
        if self._raw("hmax") is None:
            return None
        return self._int("hmax", 1)

    def get_cap(self) -> int:
        return self._int("cap", 1)

    def get_qmax(self) -> int:
        return self._int("qmax", 1)

    def get_diag_level(self) -> DiagLevel:
        value = self._raw("diag")
        try:
            return DiagLevel(value)
        except ValueError as e:
            self.logger.error(f"Unknown diag level {value!r}")
            raise ConfigError(f"diag must be off, summary or full, got {value!r}") from e

    def get_policy(self) -> str:
        value = self._raw("policy")
        try:
            return ExtractionPolicy(value).value
        except ValueError as e:
            self.logger.error(f"Unknown extraction policy {value!r}")
            raise ConfigError(f"policy must be leftmost or deepest, got {value!r}") from e

    def get_workers(self) -> int:
        return self._int("workers", 1)

    def get_oracle(self) -> bool:
        return bool(self._raw("oracle"))

    def get_timings(self) -> bool:
        return bool(self._raw("timings"))

    def get_backup(self) -> bool:
        return bool(self._raw("backup"))

    def get_out_cert(self) -> Optional[str]:
        return self._raw("out_cert")

    def get_out_intervals(self) -> Optional[str]:
        return self._raw("out_intervals")

    def build_run_config(self) -> RunConfig:
        config = RunConfig(
            theta=self.get_theta_spec(),
            R=self.get_R(),
            delta=self.get_delta(),
            kappa=self.get_kappa(),
            depth=self.get_depth(),
            start=self.get_start(),
            strict_mode=self.get_strict_mode(),
            hmax=self.get_hmax(),
            cap=self.get_cap(),
            qmax=self.get_qmax(),
            diag=self.get_diag_level(),
            policy=self.get_policy(),
            workers=self.get_workers(),
            oracle=self.get_oracle(),
            timings=self.get_timings(),
            out_cert=self.get_out_cert(),
            out_intervals=self.get_out_intervals(),
            backup=self.get_backup(),
        )
        self.logger.debug(f"Run configuration: {config.to_dict()}")
        return config
