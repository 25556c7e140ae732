# file_service.py
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

import csv
import json
import os
import shutil
from fractions import Fraction
from typing import Any, Dict, List, Optional

from ..errors import ConfigError
from ..models.sieve import Segment, SieveState
from .logger_service import get_logger

logger = get_logger('file_service')

INTERVAL_COLUMNS = ("level", "lineage", "left_num", "left_den", "length_num", "length_den")


class FileService:
    """Reading and writing certificates and survivor interval tables"""

    @staticmethod
    def backup_existing_file(file_path: str) -> Optional[str]:
        """Copy an existing file aside before it is overwritten"""
        if not os.path.exists(file_path):
            return None

        backup_path = f"{file_path}.backup"
        counter = 1
        while os.path.exists(backup_path):
            backup_path = f"{file_path}.backup.{counter}"
            counter += 1

        try:
            shutil.copy2(file_path, backup_path)
            logger.info(f"Created backup: {backup_path}")
            return backup_path
        except OSError as e:
            logger.error(f"Error creating backup for {file_path}: {e}")
            return None

    @staticmethod
    def certificate_text(document: Dict[str, Any]) -> str:
        """Deterministic JSON rendering, keys in insertion order"""
        return json.dumps(document, indent=2, ensure_ascii=False) + "\n"

    @staticmethod
    def write_certificate(path: str, document: Dict[str, Any], create_backup: bool = False) -> bool:
        """
        Write a certificate document as UTF-8 JSON.

        Args:
            path: Destination file
            document: Output of Certificate.to_dict()
            create_backup: Whether to keep a copy of an existing file

        Returns:
            True if the file was written
        """
        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            if create_backup:
                FileService.backup_existing_file(path)
            with open(path, 'w', encoding='utf-8', newline='\n') as f:
                f.write(FileService.certificate_text(document))
            logger.info(f"Wrote certificate {path}")
            return True
        except OSError as e:
            logger.error(f"Error writing certificate {path}: {e}")
            return False

    @staticmethod
    def read_certificate(path: str) -> Dict[str, Any]:
        try:
            with open(path, 'r', encoding='utf-8') as f:
                document = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"Error reading certificate {path}: {e}")
            raise ConfigError(f"Cannot read certificate {path}: {e}") from e
        if not isinstance(document, dict) or "config" not in document:
            raise ConfigError(f"{path} is not a certificate")
        return document

    @staticmethod
    def interval_rows(state: SieveState) -> List[List[str]]:
        """One row per survivor of every level, levels ascending, indices ascending"""
        rows = []
        for level in range(1, state.level + 1):
            for segment in state.segments_at(level):
                left, length = segment.left, segment.length
                rows.append([str(level), ".".join(str(mu) for mu in segment.lineage),
                             str(left.numerator), str(left.denominator),
                             str(length.numerator), str(length.denominator)])
        return rows

    @staticmethod
    def emit_intervals(state: SieveState, path: str, create_backup: bool = False) -> bool:
        """Write the survivor table as CSV with LF line endings"""
        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            if create_backup:
                FileService.backup_existing_file(path)
            with open(path, 'w', encoding='utf-8', newline='') as f:
                writer = csv.writer(f, lineterminator='\n')
                writer.writerow(INTERVAL_COLUMNS)
                writer.writerows(FileService.interval_rows(state))
            logger.info(f"Wrote survivor intervals for {state.level} levels to {path}")
            return True
        except OSError as e:
            logger.error(f"Error writing intervals {path}: {e}")
            return False

    @staticmethod
    def read_intervals(path: str, origin: Fraction, kappa: Fraction, R: int) -> List[Segment]:
        """Parse an interval table back into segments, checking each row against its lineage"""
        segments = []
        try:
            with open(path, 'r', encoding='utf-8', newline='') as f:
                reader = csv.DictReader(f)
                if tuple(reader.fieldnames or ()) != INTERVAL_COLUMNS:
                    raise ConfigError(f"{path}: unexpected header {reader.fieldnames}")
                for row in reader:
                    level = int(row["level"])
                    lineage = [int(mu) for mu in row["lineage"].split(".")] if row["lineage"] else []
                    index = 0
                    for mu in lineage:
                        index = index * R + (mu - 1)
                    segment = Segment(level, index, origin, kappa, R)
                    left = Fraction(int(row["left_num"]), int(row["left_den"]))
                    length = Fraction(int(row["length_num"]), int(row["length_den"]))
                    if segment.left != left or segment.length != length:
                        raise ConfigError(f"{path}: row {row} does not match its lineage")
                    segments.append(segment)
        except OSError as e:
            logger.error(f"Error reading intervals {path}: {e}")
            raise ConfigError(f"Cannot read intervals {path}: {e}") from e
        return segments
