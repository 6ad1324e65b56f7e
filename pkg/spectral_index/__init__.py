#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
"""Exposes the primary interfaces for the library."""

from spectral_index._version import __version__
from spectral_index.spectra import Spectrum, CountMode, CountQuery, count, shift, scale, product_sum
from spectral_index.closed_form import ProductSphereModel, RoundSphereFactor
from spectral_index.spectral_index import (
    Operator,
    index_report,
    r_index_report,
    model_spectrum,
    grid_spectrum,
    run_comparison_suite,
    run_convergence,
)
