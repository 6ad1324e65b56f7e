#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
"""Command line interface of the package."""
from spectral_index.cli.commands import cli, spectrum, index, r_index, compare, converge
