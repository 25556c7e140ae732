# __init__.py
#
# Copyright 2026 The badapprox contributors.
#
# SPDX-License-Identifier: GPL-3.0-or-later

__version__ = "0.1.0"
