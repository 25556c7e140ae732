# logger_service.py
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

import logging
import logging.handlers
import os
import sys
from pathlib import Path
from typing import Optional


def get_user_cache_dir() -> Path:
    """XDG cache directory, falling back to ~/.cache"""
    cache_home = os.environ.get('XDG_CACHE_HOME')
    if cache_home:
        return Path(cache_home)
    return Path.home() / '.cache'


class LoggerService:
    """Centralized logging service for badapprox"""

    _instance: Optional['LoggerService'] = None
    _initialized = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not self._initialized:
            self._setup_logging()
            LoggerService._initialized = True

    def _setup_logging(self):
        """Setup logging configuration"""
        self.logger = logging.getLogger('badapprox')
        self.logger.setLevel(logging.DEBUG)
        self.logger.propagate = False

        # Clear any existing handlers
        self.logger.handlers.clear()

        detailed_formatter = logging.Formatter(
            fmt='%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

        simple_formatter = logging.Formatter(
            fmt='%(levelname)s: %(message)s'
        )

        # Console handler on stderr, stdout is reserved for the run summary
        self.console_handler = logging.StreamHandler(sys.stderr)
        self.console_handler.setLevel(logging.WARNING)
        self.console_handler.setFormatter(simple_formatter)
        self.logger.addHandler(self.console_handler)

        self.log_file = None
        log_dir = get_user_cache_dir() / "badapprox" / "logs"
        try:
            log_dir.mkdir(parents=True, exist_ok=True)
            log_file = log_dir / "badapprox.log"

            # File handler with rotation
            file_handler = logging.handlers.RotatingFileHandler(
                log_file,
                maxBytes=5*1024*1024,  # 5MB
                backupCount=3,
                encoding='utf-8'
            )
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(detailed_formatter)
            self.logger.addHandler(file_handler)
            self.log_file = log_file
        except OSError as e:
            self.logger.warning(f"Could not open log file in {log_dir}: {e}")

        self.logger.info("Logging system initialized")
        if self.log_file:
            self.logger.info(f"Log file: {self.log_file}")

    def get_logger(self, name: str = None) -> logging.Logger:
        """Get a logger instance for a specific module"""
        if name:
            return logging.getLogger(f'badapprox.{name}')
        return self.logger

    def set_level(self, level: str):
        """Set the console logging level"""
        level_map = {
            'DEBUG': logging.DEBUG,
            'INFO': logging.INFO,
            'WARNING': logging.WARNING,
            'ERROR': logging.ERROR,
            'CRITICAL': logging.CRITICAL
        }

        if level.upper() in level_map:
            self.console_handler.setLevel(level_map[level.upper()])
            self.logger.info(f"Console logging level set to {level.upper()}")
        else:
            self.logger.warning(f"Invalid logging level: {level}")

    def log_startup_info(self):
        """Log run startup information"""
        self.logger.info("=" * 50)
        self.logger.info("badapprox run starting")
        self.logger.info(f"Python version: {sys.version}")
        self.logger.info(f"Platform: {sys.platform}")
        self.logger.info(f"User cache dir: {get_user_cache_dir()}")
        self.logger.info(f"Log file: {self.get_log_file_path() or 'console only'}")
        self.logger.info("=" * 50)

    def log_shutdown_info(self):
        """Log run shutdown information"""
        self.logger.info("=" * 50)
        self.logger.info("badapprox run finished")
        self.logger.info("=" * 50)

    def get_log_file_path(self) -> Optional[str]:
        """Get the path to the current log file"""
        return str(self.log_file) if self.log_file else None


# Convenience function to get logger instance
def get_logger(name: str = None) -> logging.Logger:
    """Get a logger instance for the specified module"""
    service = LoggerService()
    return service.get_logger(name)
