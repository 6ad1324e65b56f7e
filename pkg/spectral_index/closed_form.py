#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
"""Exact spectra of great spheres and (generalized) Clifford tori in the unit sphere.

Every model is a product of at most two round spheres, so the Laplacian, the Jacobi operator J = Delta + n + S and
the operators L_r = div(T_r grad) all have constant coefficients and their spectra are sums of round-sphere spectra.
Squared radii are kept as exact rationals whenever they are given that way, which keeps the thresholds n and n + S
exactly comparable with the eigenvalues.
"""
import json
import logging
import math

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Tuple

from spectral_index.curvature import (
    PrincipalCurvatureProfile,
    SymmetricFunctionTable,
    check_elliptic,
    check_r_minimal,
    clifford_profile,
    elementary_symmetric,
    newton_eigenvalues,
    orient_for_order,
    solve_generalized_clifford,
)
from spectral_index.exceptions import InvalidModelError, NotEllipticError, NotMinimalError, NotRMinimalError
from spectral_index.spectra import (
    Real,
    Spectrum,
    count_below,
    counting_tolerance,
    product_sum_all,
    shift,
)

logger = logging.getLogger(__name__)

RADIUS_SUM_TOLERANCE = 1e-12


@dataclass(frozen=True)
class RoundSphereFactor:
    """A round sphere S^dim of squared radius `rad2`."""

    dim: int
    rad2: Real

    def __post_init__(self) -> None:
        """Validate dimension and radius."""
        if self.dim < 1:
            raise InvalidModelError(f"Sphere dimension must be at least 1, got {self.dim}.")
        if not self.rad2 > 0:
            raise InvalidModelError(f"Sphere radius squared must be positive, got {self.rad2}.")

    @property
    def radius(self) -> float:
        """The radius as a float."""
        return math.sqrt(self.rad2)

    @property
    def first_eigenvalue(self) -> Real:
        """Smallest positive Laplace eigenvalue, dim / rad^2."""
        return self.dim / _as_divisor(self.rad2)


@dataclass(frozen=True)
class ProductSphereModel:
    """A hypersurface of the unit (n+1)-sphere given as a product of one or two round spheres.

    A single factor must have radius 1 (the totally geodesic great sphere); two factors must satisfy
    r1^2 + r2^2 = 1.
    """

    factors: Tuple[RoundSphereFactor, ...]

    def __post_init__(self) -> None:
        """Check the radius constraint."""
        object.__setattr__(self, "factors", tuple(self.factors))
        if len(self.factors) not in (1, 2):
            raise InvalidModelError(f"Only one- and two-factor products are supported, got {len(self.factors)}.")
        total = sum(factor.rad2 for factor in self.factors)
        exact = all(isinstance(factor.rad2, (int, Fraction)) for factor in self.factors)
        if (exact and total != 1) or (not exact and abs(total - 1) > RADIUS_SUM_TOLERANCE):
            raise InvalidModelError(f"Squared radii must sum to 1 for the product to lie in S^{{n+1}}, got {total}.")

    @classmethod
    def great_sphere(cls, n: int) -> "ProductSphereModel":
        """The totally geodesic S^n."""
        return cls(factors=(RoundSphereFactor(dim=n, rad2=Fraction(1)),))

    @classmethod
    def clifford(cls, m: int, n: int) -> "ProductSphereModel":
        """The minimal Clifford hypersurface S^m(sqrt(m/n)) x S^{n-m}(sqrt((n-m)/n))."""
        return cls.generalized_clifford(m, n, 0)

    @classmethod
    def generalized_clifford(cls, m: int, n: int, r: int) -> "ProductSphereModel":
        """The r-minimal generalized Clifford torus with an m-dimensional first factor."""
        radii = solve_generalized_clifford(m, n, r)
        return cls(
            factors=(
                RoundSphereFactor(dim=m, rad2=radii.r1_squared),
                RoundSphereFactor(dim=n - m, rad2=radii.r2_squared),
            )
        )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ProductSphereModel":
        """Parse {"factors": [{"dim": d, "rad2": "p/q"}, ...]}; squared radii are read as exact rationals."""
        try:
            factors = tuple(
                RoundSphereFactor(dim=int(item["dim"]), rad2=Fraction(str(item["rad2"]))) for item in data["factors"]
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as err:
            raise InvalidModelError(f"Malformed model document: {err}")
        return cls(factors=factors)

    @classmethod
    def from_json(cls, text: str) -> "ProductSphereModel":
        """Parse a model JSON document."""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise InvalidModelError(f"Model file is not valid JSON: {err}")
        return cls.from_dict(data)

    def to_dict(self) -> Dict[str, Any]:
        """Inverse of `from_dict`; exact radii are written as "p/q" strings."""
        return {"factors": [{"dim": f.dim, "rad2": str(f.rad2)} for f in self.factors]}

    @property
    def dimension(self) -> int:
        """Hypersurface dimension n."""
        return sum(factor.dim for factor in self.factors)

    @property
    def is_full(self) -> bool:
        """Two-factor products are not contained in any great hypersphere; the great sphere is."""
        return len(self.factors) == 2

    def curvature_profile(self) -> PrincipalCurvatureProfile:
        """Orientation-normalised principal curvatures."""
        if len(self.factors) == 1:
            return PrincipalCurvatureProfile.umbilic(0.0, self.dimension)
        first, second = self.factors
        return clifford_profile(first.dim, self.dimension, first.radius, second.radius).normalized()

    def symmetric_functions(self) -> SymmetricFunctionTable:
        """S_r, H_r, F_r of the normalised profile."""
        return elementary_symmetric(self.curvature_profile())

    def squared_norm(self) -> Real:
        """S = |A|^2, exact when the squared radii are rational.

        For S^{d1}(r1) x S^{d2}(r2) this is d1 r2^2 / r1^2 + d2 r1^2 / r2^2.
        """
        if len(self.factors) == 1:
            return 0
        first, second = self.factors
        return first.dim * second.rad2 / _as_divisor(first.rad2) + second.dim * first.rad2 / _as_divisor(second.rad2)

    def is_minimal(self) -> bool:
        """Vanishing mean curvature, decided exactly for rational radii (d1 r2^2 = d2 r1^2)."""
        if len(self.factors) == 1:
            return True
        first, second = self.factors
        if isinstance(first.rad2, (int, Fraction)) and isinstance(second.rad2, (int, Fraction)):
            return first.dim * second.rad2 == second.dim * first.rad2
        return check_r_minimal(self.curvature_profile(), 0)

    def describe(self) -> str:
        """Human-readable name such as S^1(sqrt(1/2)) x S^1(sqrt(1/2))."""
        return " x ".join(f"S^{f.dim}(sqrt({f.rad2}))" for f in self.factors)


@dataclass(frozen=True)
class CoordinateEigenfunctionReport:
    """Multiplicities behind the coordinate-function eigenvalue identities Delta x = -n x, Delta nu = -S nu."""

    n: int
    squared_norm: Real
    full: bool
    multiplicity_at_n: int
    multiplicity_at_s: int
    required: int
    failures: Tuple[str, ...]

    @property
    def passed(self) -> bool:
        """True when every membership holds."""
        return not self.failures


@dataclass(frozen=True)
class NormalEigenfunctionReport:
    """Multiplicities behind L_r x = -(n-r) S_r x and L_r nu = (r+2) S_{r+2} nu."""

    r: int
    position_eigenvalue: Real
    normal_eigenvalue: Real
    position_multiplicity: int
    normal_multiplicity: int
    required: int
    normal_degenerate: bool
    failures: Tuple[str, ...]

    @property
    def passed(self) -> bool:
        """True when every membership holds."""
        return not self.failures


def sphere_spectrum(dim: int, rad2: Real, cutoff: Real) -> Spectrum:
    """Laplace spectrum of the round sphere S^dim of squared radius rad2, complete below `cutoff`.

    Eigenvalues are k(k + dim - 1) / rad^2 with the dimension of degree-k spherical harmonics as multiplicity:
    C(dim + k, k) - C(dim + k - 2, k - 2).
    """
    if not math.isfinite(cutoff):
        raise ValueError("Sphere spectra need a finite cutoff.")
    factor = RoundSphereFactor(dim=dim, rad2=rad2)
    divisor = _as_divisor(factor.rad2)
    entries = []
    k = 0
    while True:
        value = k * (k + dim - 1) / divisor if k else 0
        if not value < cutoff:
            break
        entries.append((value, _harmonic_dimension(dim, k)))
        k += 1
    logger.debug(f"S^{dim} with rad^2 = {rad2}: {len(entries)} modes below {cutoff}.")
    return Spectrum(entries=tuple(entries), cutoff=cutoff)


def flat_torus_spectrum(periods: Tuple[float, float], cutoff: Real) -> Spectrum:
    """Spectrum of the flat torus R^2 / (l1 Z x l2 Z): a product of circles of radius l_i / (2 pi)."""
    factors = [sphere_spectrum(1, (period / (2 * math.pi)) ** 2, cutoff) for period in periods]
    return product_sum_all(factors, cutoff)


def laplace_spectrum(model: ProductSphereModel, cutoff: Real) -> Spectrum:
    """Spectrum of -Delta on the model, complete below `cutoff`."""
    return product_sum_all([sphere_spectrum(f.dim, f.rad2, cutoff) for f in model.factors], cutoff)


def jacobi_spectrum(model: ProductSphereModel, cutoff: Real) -> Spectrum:
    """Spectrum of J = Delta + n + S (Ju = -lambda u), complete below `cutoff`.

    Raises:
        NotMinimalError: The model is not minimal.
    """
    _require_minimal(model)
    potential = model.dimension + model.squared_norm()
    return shift(laplace_spectrum(model, cutoff + potential), potential)


def morse_index(model: ProductSphereModel) -> int:
    """Number of negative eigenvalues of J, i.e. N^Delta_{<n+S}."""
    _require_minimal(model)
    threshold = model.dimension + model.squared_norm()
    spectrum = laplace_spectrum(model, threshold + 1)
    index = count_below(spectrum, threshold, counting_tolerance(spectrum, threshold))
    logger.info(f"Morse index of {model.describe()}: {index}.")
    return index


def lambda1(model: ProductSphereModel) -> Real:
    """Smallest positive Laplace eigenvalue."""
    first = min(factor.first_eigenvalue for factor in model.factors)
    spectrum = laplace_spectrum(model, first + 1)
    return next(value for value, _ in spectrum.entries if value > 0)


def verify_coordinate_eigenfunctions(model: ProductSphereModel) -> CoordinateEigenfunctionReport:
    """Check that n and S are Laplace eigenvalues with the multiplicity the coordinate functions force.

    For a full model the n + 2 coordinates of the position vector and of the unit normal are linearly independent
    eigenfunctions, so both eigenvalues need multiplicity at least n + 2. The great sphere has constant normal and
    its position coordinates only span n + 1 dimensions.
    """
    _require_minimal(model)
    n, s = model.dimension, model.squared_norm()
    spectrum = laplace_spectrum(model, max(n, s) + 1)
    tolerance = counting_tolerance(spectrum, n, s)
    at_n = spectrum.multiplicity(n, tolerance)
    at_s = spectrum.multiplicity(s, tolerance)
    required = n + 2 if model.is_full else n + 1
    failures = []
    if at_n < required:
        failures.append(f"eigenvalue {n} has multiplicity {at_n} < {required}")
    if model.is_full and at_s < required:
        failures.append(f"eigenvalue {s} has multiplicity {at_s} < {required}")
    return CoordinateEigenfunctionReport(
        n=n,
        squared_norm=s,
        full=model.is_full,
        multiplicity_at_n=at_n,
        multiplicity_at_s=at_s,
        required=required,
        failures=tuple(failures),
    )


def newton_blocks(model: ProductSphereModel, r: int) -> Tuple[float, ...]:
    """Eigenvalue of T_r on the tangent space of each factor, in the orientation with S_r >= 0."""
    profile = orient_for_order(model.curvature_profile(), r)
    return newton_eigenvalues(profile, r).values


def lr_spectrum(model: ProductSphereModel, r: int, cutoff: Real) -> Spectrum:
    """Spectrum of L_r = div(T_r grad) (L_r u = -lambda u), complete below `cutoff`.

    T_r is constant on each factor, so L_r = t_1 Delta_1 + t_2 Delta_2 and scaling a factor's Laplacian by t is
    the same as dividing its squared radius by t.

    Raises:
        NotEllipticError: Some Newton eigenvalue of order r is not positive.
    """
    if r == 0:
        return laplace_spectrum(model, cutoff)
    profile = orient_for_order(model.curvature_profile(), r)
    ellipticity = check_elliptic(profile, r)
    if not ellipticity.elliptic:
        raise NotEllipticError(
            f"L_{r} is not elliptic on {model.describe()}: smallest Newton eigenvalue {ellipticity.margin}."
        )
    blocks = newton_eigenvalues(profile, r).values
    factors = [sphere_spectrum(f.dim, f.rad2 / t, cutoff) for f, t in zip(model.factors, blocks)]
    return product_sum_all(factors, cutoff)


def stability_constants(model: ProductSphereModel, r: int) -> Tuple[Real, Real]:
    """(S_r, S_{r+2}) in the orientation used for L_r; exact (1, -S/2) when r = 0 and the radii are rational."""
    if r == 0:
        s = model.squared_norm()
        return 1, -Fraction(s) / 2 if isinstance(s, (int, Fraction)) else -s / 2
    table = elementary_symmetric(orient_for_order(model.curvature_profile(), r))
    return table.s(r), table.s(r + 2)


def verify_normal_eigenfunctions(model: ProductSphereModel, r: int) -> NormalEigenfunctionReport:
    """Check that (n - r) S_r and -(r + 2) S_{r+2} are L_r eigenvalues of multiplicity at least n + 2.

    Raises:
        NotRMinimalError: The model is not r-minimal.
    """
    _require_r_minimal(model, r)
    n = model.dimension
    s_r, s_r2 = stability_constants(model, r)
    position = (n - r) * s_r
    normal = -(r + 2) * s_r2
    spectrum = lr_spectrum(model, r, max(position, normal) + 1)
    tolerance = counting_tolerance(spectrum, position, normal)
    at_position = spectrum.multiplicity(position, tolerance)
    at_normal = spectrum.multiplicity(normal, tolerance)
    required = n + 2 if model.is_full else n + 1
    normal_degenerate = abs(normal) <= max(tolerance, 0)
    failures = []
    if at_position < required:
        failures.append(f"eigenvalue {position} has multiplicity {at_position} < {required}")
    if not normal_degenerate and at_normal < required:
        failures.append(f"eigenvalue {normal} has multiplicity {at_normal} < {required}")
    return NormalEigenfunctionReport(
        r=r,
        position_eigenvalue=position,
        normal_eigenvalue=normal,
        position_multiplicity=at_position,
        normal_multiplicity=at_normal,
        required=required,
        normal_degenerate=normal_degenerate,
        failures=tuple(failures),
    )


def r_stability_threshold(model: ProductSphereModel, r: int) -> Real:
    """(n - r) S_r - (r + 2) S_{r+2}: J_r = L_r + threshold, so N^{J_r}_{<0} = N^{L_r}_{<threshold}."""
    s_r, s_r2 = stability_constants(model, r)
    return (model.dimension - r) * s_r - (r + 2) * s_r2


def r_index(model: ProductSphereModel, r: int) -> int:
    """Number of negative eigenvalues of J_r = L_r + (n - r) S_r - (r + 2) S_{r+2}.

    Raises:
        NotRMinimalError: The model is not r-minimal.
        NotEllipticError: L_r is not elliptic.
    """
    _require_r_minimal(model, r)
    threshold = r_stability_threshold(model, r)
    spectrum = lr_spectrum(model, r, threshold + 1)
    index = count_below(spectrum, threshold, counting_tolerance(spectrum, threshold))
    logger.info(f"{r}-index of {model.describe()}: {index}.")
    return index


def _require_minimal(model: ProductSphereModel) -> None:
    if not model.is_minimal():
        raise NotMinimalError(f"{model.describe()} is not minimal.")


def _require_r_minimal(model: ProductSphereModel, r: int) -> None:
    if r == 0:
        if not model.is_minimal():
            raise NotRMinimalError(f"{model.describe()} is not minimal.")
        return
    if not check_r_minimal(model.curvature_profile(), r):
        raise NotRMinimalError(f"{model.describe()} is not {r}-minimal.")


def _harmonic_dimension(dim: int, k: int) -> int:
    if k == 0:
        return 1
    return math.comb(dim + k, k) - (math.comb(dim + k - 2, k - 2) if k >= 2 else 0)


def _as_divisor(value: Real) -> Real:
    return Fraction(value) if isinstance(value, int) else value
