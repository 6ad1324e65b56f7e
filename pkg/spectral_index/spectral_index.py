#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
"""Defines the public experiment API of the package."""
import logging
import math
import pathlib

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from spectral_index._internal.progress import SuiteProgress
from spectral_index._internal.random_fields import random_potential, random_weight, read_field_csv
from spectral_index.closed_form import (
    CoordinateEigenfunctionReport,
    NormalEigenfunctionReport,
    ProductSphereModel,
    jacobi_spectrum,
    lambda1,
    laplace_spectrum,
    lr_spectrum,
    morse_index,
    newton_blocks,
    r_index,
    r_stability_threshold,
    stability_constants,
    verify_coordinate_eigenfunctions,
    verify_normal_eigenfunctions,
)
from spectral_index.comparison import (
    CertificateReport,
    ComparisonBranch,
    ComparisonReport,
    IndexBoundReport,
    certify_constantS,
    certify_rmin,
    certify_rstability,
    certify_Sbig,
    check_comparison,
    laplacian_index_bound,
    strengthened_index_bound,
)
from spectral_index.curvature import check_elliptic, elementary_symmetric, orient_for_order, solve_generalized_clifford
from spectral_index.discrete import (
    ConvergenceTable,
    GridTorus,
    WeightField,
    add_potential,
    build_laplacian,
    clifford_period,
    convergence_study,
    eigenvalue_spectrum,
    solve_weighted,
    weighted_eigenvalues,
)
from spectral_index.exceptions import FalsificationError, InvalidConfigError, InvalidModelError
from spectral_index.spectra import Real, Spectrum

logger = logging.getLogger(__name__)

# Largest deviation allowed between the constant-ratio spectra after undoing the shift.
SHIFT_IDENTITY_TOLERANCE = 1e-8


class Operator(Enum):
    """Operators whose closed-form spectra can be requested."""

    LAPLACE = "laplace"
    JACOBI = "jacobi"
    LR = "lr"


@dataclass(frozen=True)
class IndexReport:
    """Morse index data of a minimal model."""

    model: ProductSphereModel
    squared_norm: Real
    morse_index: int
    lambda1: Real
    bound: IndexBoundReport
    strengthened_bound: Optional[int]
    coordinates: CoordinateEigenfunctionReport
    certificates: Tuple[CertificateReport, ...]

    def summary_rows(self) -> List[Tuple[str, Any]]:
        """(name, value) rows for a table."""
        rows: List[Tuple[str, Any]] = [
            ("model", self.model.describe()),
            ("n", self.model.dimension),
            ("S", self.squared_norm),
            ("full", self.model.is_full),
            ("Morse index", self.morse_index),
            ("lambda_1", self.lambda1),
            ("N^Delta_{<=n} bound", self.bound.bound),
            ("multiplicity of n", self.bound.multiplicity_at_n),
            ("strengthened bound", "not applicable" if self.strengthened_bound is None else self.strengthened_bound),
        ]
        rows.extend((report.certifier, report.classification) for report in self.certificates)
        return rows

    def to_dict(self) -> Dict[str, Any]:
        """JSON-compatible representation."""
        return {
            "model": self.model.to_dict(),
            "n": self.model.dimension,
            "squared_norm": float(self.squared_norm),
            "full": self.model.is_full,
            "morse_index": self.morse_index,
            "lambda1": float(self.lambda1),
            "bound": self.bound.to_dict(),
            "strengthened_bound": self.strengthened_bound,
            "coordinate_eigenfunctions": {
                "multiplicity_at_n": self.coordinates.multiplicity_at_n,
                "multiplicity_at_S": self.coordinates.multiplicity_at_s,
                "required": self.coordinates.required,
                "failures": list(self.coordinates.failures),
            },
            "certificates": [report.to_dict() for report in self.certificates],
        }


@dataclass(frozen=True)
class RIndexReport:
    """r-index data of an r-minimal generalized Clifford torus."""

    m: int
    r: int
    model: ProductSphereModel
    symmetric_functions: Tuple[float, ...]
    newton_eigenvalues: Tuple[float, ...]
    ellipticity_margin: float
    threshold: Real
    r_index: int
    eigenfunctions: NormalEigenfunctionReport
    certificate: CertificateReport
    stability: CertificateReport

    @property
    def n(self) -> int:
        """Hypersurface dimension."""
        return self.model.dimension

    @property
    def r1_squared(self) -> Real:
        """Squared radius of the first factor."""
        return self.model.factors[0].rad2

    def summary_rows(self) -> List[Tuple[str, Any]]:
        """(name, value) rows for a table."""
        profile = self.model.curvature_profile()
        return [
            ("(m, n, r)", f"({self.m}, {self.n}, {self.r})"),
            ("r1^2", self.r1_squared),
            ("r2^2", self.model.factors[1].rad2),
            ("principal curvatures", ", ".join(f"{k:.10g} x{mult}" for k, mult in profile.groups)),
            ("S_0..S_n", ", ".join(f"{value:.10g}" for value in self.symmetric_functions)),
            ("T_r eigenvalues", ", ".join(f"{value:.10g}" for value in self.newton_eigenvalues)),
            ("ellipticity margin", self.ellipticity_margin),
            ("threshold", self.threshold),
            ("r-index", self.r_index),
            (
                "position/normal multiplicities",
                f"{self.eigenfunctions.position_multiplicity}, {self.eigenfunctions.normal_multiplicity}",
            ),
            ("classification", self.certificate.classification),
        ]

    def to_dict(self) -> Dict[str, Any]:
        """JSON-compatible representation."""
        return {
            "m": self.m,
            "n": self.n,
            "r": self.r,
            "r1_squared": float(self.r1_squared),
            "model": self.model.to_dict(),
            "curvature_profile": self.model.curvature_profile().to_dict(),
            "symmetric_functions": list(self.symmetric_functions),
            "newton_eigenvalues": list(self.newton_eigenvalues),
            "ellipticity_margin": self.ellipticity_margin,
            "threshold": float(self.threshold),
            "r_index": self.r_index,
            "eigenfunctions": {
                "position_eigenvalue": float(self.eigenfunctions.position_eigenvalue),
                "normal_eigenvalue": float(self.eigenfunctions.normal_eigenvalue),
                "position_multiplicity": self.eigenfunctions.position_multiplicity,
                "normal_multiplicity": self.eigenfunctions.normal_multiplicity,
                "required": self.eigenfunctions.required,
                "failures": list(self.eigenfunctions.failures),
            },
            "certificate": self.certificate.to_dict(),
            "stability": self.stability.to_dict(),
        }


@dataclass(frozen=True)
class ComparisonInstance:
    """One seeded instance of the comparison suite."""

    seed: int
    report: ComparisonReport
    shift_error: Optional[float]

    @property
    def passed(self) -> bool:
        """Verdict, plus the shift identity in the constant branch."""
        if self.shift_error is not None and self.shift_error > SHIFT_IDENTITY_TOLERANCE:
            return False
        return self.report.verdict

    def to_dict(self) -> Dict[str, Any]:
        """JSON-compatible representation."""
        document = {"seed": self.seed, "passed": self.passed, "shift_error": self.shift_error}
        document.update(self.report.to_dict())
        return document


@dataclass(frozen=True)
class ComparisonSuiteSummary:
    """Outcome of a seeded comparison suite."""

    resolution: int
    constant_ratio: bool
    weighted: bool
    instances: Tuple[ComparisonInstance, ...]

    @property
    def passed(self) -> int:
        """Number of instances whose statement held."""
        return sum(1 for instance in self.instances if instance.passed)

    @property
    def falsified(self) -> int:
        """Number of instances contradicting the comparison theorem."""
        return len(self.instances) - self.passed

    @property
    def worst_margin(self) -> Optional[int]:
        """Smallest lhs - rhs over the instances."""
        return min((instance.report.margin for instance in self.instances), default=None)

    @property
    def worst_shift_error(self) -> Optional[float]:
        """Largest shift identity deviation in the constant branch."""
        errors = [instance.shift_error for instance in self.instances if instance.shift_error is not None]
        return max(errors) if errors else None

    def raise_for_falsification(self) -> None:
        """Raise when any instance failed.

        Raises:
            FalsificationError: At least one instance contradicts the theorem.
        """
        if self.falsified:
            seeds = [instance.seed for instance in self.instances if not instance.passed]
            raise FalsificationError(f"{self.falsified} of {len(self.instances)} instances failed, seeds {seeds}.")

    def to_dict(self) -> Dict[str, Any]:
        """JSON-compatible representation."""
        return {
            "resolution": self.resolution,
            "branch": (ComparisonBranch.CONSTANT if self.constant_ratio else ComparisonBranch.NONCONSTANT).value,
            "weighted": self.weighted,
            "instances": len(self.instances),
            "passed": self.passed,
            "falsified": self.falsified,
            "worst_margin": self.worst_margin,
            "worst_shift_error": self.worst_shift_error,
            "results": [instance.to_dict() for instance in self.instances],
        }


def load_model(path: Union[str, pathlib.Path]) -> ProductSphereModel:
    """Read a model JSON file.

    Raises:
        InvalidModelError: The file is missing or malformed.
    """
    try:
        text = pathlib.Path(path).read_text()
    except OSError as err:
        raise InvalidModelError(f"Could not read model file {path}: {err}")
    return ProductSphereModel.from_json(text)


def parse_periods(text: str) -> Tuple[float, float]:
    """"clifford" or two comma separated positive periods.

    Raises:
        InvalidConfigError: The text is neither.
    """
    if text.strip().lower() == "clifford":
        return (clifford_period(), clifford_period())
    try:
        periods = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise InvalidConfigError(f"Periods must be 'clifford' or two comma separated numbers, got '{text}'.")
    if len(periods) != 2 or not all(period > 0 and math.isfinite(period) for period in periods):
        raise InvalidConfigError(f"Periods must be two positive numbers, got '{text}'.")
    return periods  # type: ignore


def model_spectrum(
    model: ProductSphereModel, cutoff: Real, operator: Operator = Operator.LAPLACE, r: int = 0
) -> Spectrum:
    """Closed-form spectrum of Delta, J or L_r on a model, complete below `cutoff`."""
    if operator is Operator.JACOBI:
        spectrum = jacobi_spectrum(model, cutoff)
    elif operator is Operator.LR:
        spectrum = lr_spectrum(model, r, cutoff)
    else:
        spectrum = laplace_spectrum(model, cutoff)
    logger.info(f"{operator.value} spectrum of {model.describe()}: {spectrum.total_multiplicity} eigenvalues.")
    return spectrum


def grid_spectrum(
    resolution: int,
    periods: Tuple[float, float],
    cutoff: Real,
    potential_file: Optional[str] = None,
    weight_file: Optional[str] = None,
) -> Spectrum:
    """Weighted spectrum of Delta_h + q on an N x N grid torus, truncated below `cutoff`.

    q and p are read from CSV grids when given; they default to 0 and 1.
    """
    grid = GridTorus(periods=periods, resolution=(resolution, resolution))
    op = build_laplacian(grid)
    if potential_file:
        op = add_potential(op, read_field_csv(potential_file, grid))
    weight = WeightField(values=read_field_csv(weight_file, grid)) if weight_file else None
    return solve_weighted(op, weight).truncated(cutoff)


def index_report(model: ProductSphereModel) -> IndexReport:
    """Morse index, lambda_1, the Laplacian bound and the constant-S certificates of a minimal model.

    Raises:
        NotMinimalError: The model is not minimal.
    """
    n = model.dimension
    s = model.squared_norm()
    index = morse_index(model)
    laplace = laplace_spectrum(model, n + s + 1)
    certificates: List[CertificateReport] = []
    if s > 0:
        certificates.append(certify_constantS(laplace, n, s))
        certificates.append(certify_Sbig(jacobi_spectrum(model, 1), n))
    return IndexReport(
        model=model,
        squared_norm=s,
        morse_index=index,
        lambda1=lambda1(model),
        bound=laplacian_index_bound(laplace, n),
        strengthened_bound=strengthened_index_bound(laplace, n),
        coordinates=verify_coordinate_eigenfunctions(model),
        certificates=tuple(certificates),
    )


def r_index_report(m: int, n: int, r: int, weighted: bool = False) -> RIndexReport:
    """Solve the r-minimal generalized Clifford torus S^m x S^{n-m} and certify its r-index.

    Raises:
        NoRadiusSolutionError: No such torus exists.
        NotEllipticError: L_r is not elliptic on it.
    """
    radii = solve_generalized_clifford(m, n, r)
    logger.info(f"Solved ({m}, {n}, {r}): r1^2 = {float(radii.r1_squared):.12g}.")
    model = ProductSphereModel.generalized_clifford(m, n, r)
    profile = orient_for_order(model.curvature_profile(), r)
    s_r, s_r2 = stability_constants(model, r)
    threshold = r_stability_threshold(model, r)
    spectrum = lr_spectrum(model, r, threshold + 1)
    return RIndexReport(
        m=m,
        r=r,
        model=model,
        symmetric_functions=elementary_symmetric(profile).S,
        newton_eigenvalues=newton_blocks(model, r),
        ellipticity_margin=check_elliptic(profile, r).margin,
        threshold=threshold,
        r_index=r_index(model, r),
        eigenfunctions=verify_normal_eigenfunctions(model, r),
        certificate=certify_rmin(spectrum, n, r, s_r, s_r2, weighted=weighted),
        stability=certify_rstability(spectrum, n, r, s_r, s_r2),
    )


def run_comparison_suite(
    resolution: int = 16,
    seeds: int = 100,
    constant_ratio: bool = False,
    weighted: bool = False,
    seed_base: int = 0,
    periods: Optional[Tuple[float, float]] = None,
    progress: bool = True,
) -> ComparisonSuiteSummary:
    """Check the weighted comparison theorem on seeded random instances of Delta_h + q with weight p.

    Each instance draws q (and p when `weighted`) from numpy's generator seeded with seed_base + i, solves both
    pencils densely and compares the counts at the median eigenvalue of Delta_h. With `constant_ratio`, q = c p for
    a random constant c, and the spectra must also agree after the shift by c.
    """
    if seeds < 1:
        raise InvalidConfigError(f"The suite needs at least one seed, got {seeds}.")
    grid = GridTorus(periods=periods or (clifford_period(), clifford_period()), resolution=(resolution, resolution))
    laplacian = build_laplacian(grid)
    instances = []
    with SuiteProgress("compare", seeds, enabled=progress) as bar:
        for seed in range(seed_base, seed_base + seeds):
            instance = _comparison_instance(grid, laplacian, seed, constant_ratio, weighted)
            instances.append(instance)
            bar.step(instance.passed)
    summary = ComparisonSuiteSummary(
        resolution=resolution, constant_ratio=constant_ratio, weighted=weighted, instances=tuple(instances)
    )
    logger.info(f"Comparison suite: {summary.passed}/{len(instances)} passed.")
    return summary


def run_convergence(periods: Tuple[float, float], resolutions: Sequence[int]) -> ConvergenceTable:
    """Discretisation error table of the grid Laplacian against the exact flat-torus spectrum."""
    table = convergence_study(periods, resolutions)
    logger.info(f"Convergence study over {list(table.resolutions)} finished.")
    return table


def _comparison_instance(
    grid: GridTorus, laplacian: Any, seed: int, constant_ratio: bool, weighted: bool
) -> ComparisonInstance:
    rng = np.random.default_rng(seed)
    weight = random_weight(grid, rng) if weighted else WeightField.constant(grid)
    if constant_ratio:
        c = float(rng.uniform(1.0, 5.0))
        q: Union[float, np.ndarray] = c * weight.values
    else:
        q = random_potential(grid, rng)

    values = weighted_eigenvalues(laplacian, weight)
    hat_values = weighted_eigenvalues(add_potential(laplacian, q), weight)
    spec_l = eigenvalue_spectrum(values)
    spec_lhat = eigenvalue_spectrum(hat_values)
    a = float(values[len(values) // 2])
    report = check_comparison(spec_l, spec_lhat, q, weight, a)

    shift_error = float(np.max(np.abs(hat_values + c - values))) if constant_ratio else None
    return ComparisonInstance(seed=seed, report=report, shift_error=shift_error)
