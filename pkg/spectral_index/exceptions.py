#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
"""Public exceptions exposed by the package."""


class SpectralIndexError(Exception):
    """Base exception for spectral-index."""


class UncertifiedCountError(SpectralIndexError):
    """Raised when a count or cutoff is not covered by a spectrum's completeness guarantee."""


class ToleranceOverlapError(SpectralIndexError):
    """Raised when a counting tolerance window captures two distinct spectrum entries."""


class InvalidModelError(SpectralIndexError):
    """Raised when a product-of-spheres model or curvature profile is malformed."""


class NotMinimalError(SpectralIndexError):
    """Raised when an operation requiring a minimal hypersurface receives a non-minimal one."""


class NotRMinimalError(SpectralIndexError):
    """Raised when an operation requiring an r-minimal hypersurface receives one with H_{r+1} != 0."""


class NotEllipticError(SpectralIndexError):
    """Raised when the Newton transformation of the requested order is not positive definite."""


class NoRadiusSolutionError(SpectralIndexError):
    """Raised when no generalized Clifford torus with S_{r+1} = 0 exists for the requested dimensions."""


class GridMismatchError(SpectralIndexError):
    """Raised when a field or operator lives on a different grid than expected."""


class NonPositiveWeightError(SpectralIndexError):
    """Raised when a weight function is not strictly positive."""


class ZeroVectorError(SpectralIndexError):
    """Raised when a Rayleigh quotient is requested for the zero vector."""


class SolverCapacityError(SpectralIndexError):
    """Raised when a dense eigensolve is requested on more nodes than the solver cap allows."""


class CertifierInputError(SpectralIndexError):
    """Raised when a certifier receives constants outside its domain (for example S <= 0)."""


class InvalidConfigError(SpectralIndexError):
    """Raised when experiment parameters fail validation."""


class FalsificationError(SpectralIndexError):
    """Raised when a computed instance contradicts a counting theorem, which signals an implementation bug."""
