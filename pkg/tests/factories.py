#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
import math

from fractions import Fraction
from functools import wraps
from tempfile import TemporaryDirectory

import numpy as np

from hypothesis import strategies as st

from spectral_index.closed_form import ProductSphereModel
from spectral_index.comparison import CertificateReport, CertificationStatus, ComparisonBranch, ComparisonReport
from spectral_index.curvature import PrincipalCurvatureProfile
from spectral_index.discrete import GridTorus, build_laplacian
from spectral_index.spectra import Spectrum


def patchfs(func):
    @wraps(func)
    def wrapper(*args, **kwargs):
        with TemporaryDirectory() as fs:
            func(*args, fs=fs, **kwargs)

    return wrapper


def make_spectrum(*pairs, cutoff=math.inf):
    return Spectrum(entries=tuple(pairs), cutoff=cutoff)


def make_clifford_laplace_spectrum():
    # Minimal S^1 x S^1, n = 2, S = 2.
    return make_spectrum((0, 1), (2, 4), (4, 4), (8, 4), cutoff=9)


def make_model_json(*factors):
    return '{"factors": [%s]}' % ", ".join('{"dim": %d, "rad2": "%s"}' % (dim, rad2) for dim, rad2 in factors)


def make_grid(n=8, periods=None):
    if periods is None:
        return GridTorus.clifford(n)
    return GridTorus(periods=periods, resolution=(n, n))


def make_laplacian(n=8):
    return build_laplacian(make_grid(n))


def make_rng(seed=0):
    return np.random.default_rng(seed)


def make_comparison_report(lhs=5, rhs=5, branch=ComparisonBranch.NONCONSTANT, verdict=True):
    return ComparisonReport(a=2.0, a0=1.0, branch=branch, lhs_count=lhs, rhs_count=rhs, verdict=verdict)


def make_certificate(status=CertificationStatus.CERTIFIED, bound=5, guaranteed=5):
    return CertificateReport(
        certifier="certify_constantS",
        status=status,
        classification="classification",
        bound=bound,
        guaranteed=guaranteed,
        counts={"N_below_n_plus_S": bound or 0},
    )


def clifford_model(m=1, n=2):
    return ProductSphereModel.clifford(m, n)


def great_sphere(n=2):
    return ProductSphereModel.great_sphere(n)


def exact_values():
    return st.fractions(min_value=Fraction(-50), max_value=Fraction(50), max_denominator=12)


def spectra(min_size=0, max_size=8):
    """Complete exact spectra with distinct values and small multiplicities."""
    return st.lists(
        st.tuples(exact_values(), st.integers(min_value=1, max_value=5)),
        min_size=min_size,
        max_size=max_size,
        unique_by=lambda pair: pair[0],
    ).map(lambda pairs: Spectrum(entries=tuple(sorted(pairs))))


def curvature_profiles(max_groups=3, max_multiplicity=3):
    return st.lists(
        st.tuples(
            st.floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False),
            st.integers(min_value=1, max_value=max_multiplicity),
        ),
        min_size=1,
        max_size=max_groups,
    ).map(lambda groups: PrincipalCurvatureProfile(groups=tuple(groups)))
