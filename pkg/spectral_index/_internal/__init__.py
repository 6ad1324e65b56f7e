#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
"""Code not to be accessed by external applications."""
