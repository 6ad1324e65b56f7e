#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
"""Algebra of principal curvatures.

Elementary symmetric functions S_r, normalised mean curvatures H_r, the functionals F_r, eigenvalues of the Newton
transformations T_r, ellipticity and r-minimality checks, and the radius solver for r-minimal generalized Clifford
tori. Profiles are stored as groups of equal curvatures, which is how isoparametric hypersurfaces present them.
"""
import json
import logging
import math

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from numpy.polynomial import polynomial
from scipy import optimize

from spectral_index.exceptions import InvalidModelError, NoRadiusSolutionError, NotRMinimalError

logger = logging.getLogger(__name__)

ZERO_TOLERANCE = 1e-12
R_MINIMAL_TOLERANCE = 1e-9

# Radius bracket and scan used by the generalized Clifford solver.
BRACKET_MARGIN = 1e-6
SCAN_POINTS = 2001
BISECTION_XTOL = 1e-15
BISECTION_MAX_ITERATIONS = 200
ROOT_FUNCTION_TOLERANCE = 1e-12


@dataclass(frozen=True)
class PrincipalCurvatureProfile:
    """Principal curvatures grouped by value.

    Attributes:
        groups: Pairs (curvature, multiplicity). The hypersurface dimension is the sum of multiplicities.
    """

    groups: Tuple[Tuple[float, int], ...]

    def __post_init__(self) -> None:
        """Validate the groups."""
        object.__setattr__(self, "groups", tuple((float(k), int(mult)) for k, mult in self.groups))
        if not self.groups:
            raise InvalidModelError("A curvature profile needs at least one group.")
        for k, mult in self.groups:
            if mult < 1:
                raise InvalidModelError(f"Curvature {k} has non-positive multiplicity {mult}.")
            if not math.isfinite(k):
                raise InvalidModelError(f"Curvature {k} is not finite.")

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "PrincipalCurvatureProfile":
        """Group a flat list of principal curvatures, keeping the order of first appearance."""
        groups: Dict[float, int] = {}
        for k in values:
            groups[float(k)] = groups.get(float(k), 0) + 1
        return cls(groups=tuple(groups.items()))

    @classmethod
    def umbilic(cls, k: float, n: int) -> "PrincipalCurvatureProfile":
        """All n principal curvatures equal to k."""
        return cls(groups=((k, n),))

    @property
    def dimension(self) -> int:
        """Hypersurface dimension n."""
        return sum(mult for _, mult in self.groups)

    @property
    def squared_norm(self) -> float:
        """|A|^2, the squared norm of the second fundamental form."""
        return sum(mult * k * k for k, mult in self.groups)

    @property
    def scale(self) -> float:
        """max(1, max |k_i|), used to make tolerances relative."""
        return max([1.0] + [abs(k) for k, _ in self.groups])

    def values(self) -> List[float]:
        """Curvatures repeated according to multiplicity."""
        return [k for k, mult in self.groups for _ in range(mult)]

    def flipped(self) -> "PrincipalCurvatureProfile":
        """The profile for the opposite unit normal."""
        return PrincipalCurvatureProfile(groups=tuple((-k, mult) for k, mult in self.groups))

    def normalized(self) -> "PrincipalCurvatureProfile":
        """Orientation with S_1 > 0, or S_1 = 0 and the first nonzero odd S_r positive."""
        symmetric = elementary_symmetric(self).S
        for r in range(1, self.dimension + 1, 2):
            if abs(symmetric[r]) > ZERO_TOLERANCE * self.scale ** r:
                return self.flipped() if symmetric[r] < 0 else self
        return self

    def to_dict(self) -> Dict[str, Any]:
        """JSON-compatible representation."""
        return {"groups": [[k, mult] for k, mult in self.groups]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PrincipalCurvatureProfile":
        """Inverse of `to_dict`."""
        try:
            return cls(groups=tuple((k, mult) for k, mult in data["groups"]))
        except (KeyError, TypeError, ValueError) as err:
            raise InvalidModelError(f"Malformed curvature profile document: {err}")

    def to_json(self) -> str:
        """Serialise as {"groups": [[k, mult], ...]}."""
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "PrincipalCurvatureProfile":
        """Parse the output of `to_json`."""
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class SymmetricFunctionTable:
    """S_0..S_n, H_0..H_n and F_0..F_{n-1} of a profile."""

    S: Tuple[float, ...]
    H: Tuple[float, ...]
    F: Tuple[float, ...]

    @property
    def dimension(self) -> int:
        """Hypersurface dimension n."""
        return len(self.S) - 1

    def s(self, r: int) -> float:
        """S_r, taken to be zero beyond the dimension."""
        return self.S[r] if 0 <= r < len(self.S) else 0.0

    def h(self, r: int) -> float:
        """H_r, taken to be zero beyond the dimension."""
        return self.H[r] if 0 <= r < len(self.H) else 0.0


@dataclass(frozen=True)
class NewtonEigenvalues:
    """Eigenvalues of the Newton transformation T_r, one per curvature group.

    Attributes:
        order: r.
        profile: The profile the transformation was built from.
        values: t_r(i), aligned with `profile.groups`.
    """

    order: int
    profile: PrincipalCurvatureProfile
    values: Tuple[float, ...]

    def trace(self) -> float:
        """Trace of T_r, which equals (n - r) S_r."""
        return sum(mult * t for (_, mult), t in zip(self.profile.groups, self.values))

    def curvature_trace(self) -> float:
        """Trace of A T_r, which equals (r + 1) S_{r+1}."""
        return sum(mult * k * t for (k, mult), t in zip(self.profile.groups, self.values))


@dataclass(frozen=True)
class EllipticityCheck:
    """Whether L_r = div(T_r grad) is elliptic, with the smallest Newton eigenvalue as margin."""

    elliptic: bool
    margin: float


@dataclass(frozen=True)
class CliffordRadii:
    """Radii of S^m(r1) x S^{n-m}(r2) in the unit sphere.

    Attributes:
        r1: Radius of the m-dimensional factor.
        r2: Radius of the (n-m)-dimensional factor.
        r1_squared: r1^2, exact when the closed form applies.
    """

    r1: float
    r2: float
    r1_squared: Any

    @property
    def r2_squared(self) -> Any:
        """1 - r1^2, exact when r1^2 is."""
        return 1 - self.r1_squared


def elementary_symmetric(profile: PrincipalCurvatureProfile) -> SymmetricFunctionTable:
    """Compute S_r as coefficients of prod_i (1 + k_i t)^{mult_i}, then H_r and F_r.

    The product is expanded group by group, so each group costs one binomial power and one polynomial product.
    """
    n = profile.dimension
    coefficients = np.array([1.0])
    for k, mult in profile.groups:
        coefficients = polynomial.polymul(coefficients, polynomial.polypow([1.0, k], mult))
    symmetric = [float(c) for c in coefficients[: n + 1]]
    symmetric += [0.0] * (n + 1 - len(symmetric))

    means = [symmetric[r] / math.comb(n, r) for r in range(n + 1)]

    functionals: List[float] = []
    for r in range(n):
        if r == 0:
            functionals.append(1.0)
        elif r == 1:
            functionals.append(symmetric[1])
        else:
            functionals.append(symmetric[r] + (n - r + 1) / (r - 1) * functionals[r - 2])

    return SymmetricFunctionTable(S=tuple(symmetric), H=tuple(means), F=tuple(functionals))


def newton_eigenvalues(profile: PrincipalCurvatureProfile, r: int) -> NewtonEigenvalues:
    """Eigenvalues of T_r from T_0 = I, T_r = S_r I - A T_{r-1}.

    On the eigenspace of the shape operator with curvature k_i the recursion reads t_r(i) = S_r - k_i t_{r-1}(i).
    """
    n = profile.dimension
    if not 0 <= r <= n - 1:
        raise ValueError(f"Newton transformation order must satisfy 0 <= r <= {n - 1}, got {r}.")
    symmetric = elementary_symmetric(profile).S
    values = [1.0] * len(profile.groups)
    for j in range(1, r + 1):
        values = [symmetric[j] - k * t for (k, _), t in zip(profile.groups, values)]
    return NewtonEigenvalues(order=r, profile=profile, values=tuple(values))


def check_elliptic(profile: PrincipalCurvatureProfile, r: int) -> EllipticityCheck:
    """L_r is elliptic when every eigenvalue of T_r is strictly positive."""
    margin = min(newton_eigenvalues(profile, r).values)
    return EllipticityCheck(elliptic=margin > 0, margin=margin)


def check_r_minimal(profile: PrincipalCurvatureProfile, r: int, tolerance: float = R_MINIMAL_TOLERANCE) -> bool:
    """True when H_{r+1} vanishes, i.e. |S_{r+1}| <= tolerance * max(1, max |k_i|)^{r+1}."""
    n = profile.dimension
    if not 0 <= r <= n - 1:
        raise ValueError(f"r-minimality is defined for 0 <= r <= {n - 1}, got {r}.")
    value = elementary_symmetric(profile).S[r + 1]
    return abs(value) <= tolerance * profile.scale ** (r + 1)


def caminha_check(profile: PrincipalCurvatureProfile, r: int, tolerance: float = R_MINIMAL_TOLERANCE) -> bool:
    """Check 0 = H_{r+1}^2 >= H_r H_{r+2} on an r-minimal profile.

    Raises:
        NotRMinimalError: The profile does not have H_{r+1} = 0.
    """
    if not check_r_minimal(profile, r, tolerance):
        raise NotRMinimalError(f"Profile {profile.groups} is not {r}-minimal.")
    table = elementary_symmetric(profile)
    return table.h(r) * table.h(r + 2) <= tolerance * profile.scale ** (2 * r + 2)


def orient_for_order(profile: PrincipalCurvatureProfile, r: int) -> PrincipalCurvatureProfile:
    """Normalised profile, flipped once more if that leaves S_r negative.

    For odd r the Newton transformation T_r changes sign with the normal. The r-stability operators are set up in
    the orientation where S_r >= 0; for even r this is the normalised orientation.
    """
    oriented = profile.normalized()
    if elementary_symmetric(oriented).S[r] < -ZERO_TOLERANCE * oriented.scale ** r:
        return oriented.flipped()
    return oriented


def clifford_profile(m: int, n: int, r1: float, r2: Optional[float] = None) -> PrincipalCurvatureProfile:
    """Principal curvatures of S^m(r1) x S^{n-m}(r2), before orientation normalisation.

    The m directions tangent to the first factor have curvature r2/r1 and the remaining n - m have -r1/r2.
    """
    if r2 is None:
        r2 = math.sqrt(1.0 - r1 * r1)
    return PrincipalCurvatureProfile(groups=((r2 / r1, m), (-r1 / r2, n - m)))


def solve_generalized_clifford(m: int, n: int, r: int) -> CliffordRadii:
    """Radii of the generalized Clifford torus S^m(r1) x S^{n-m}(r2) with S_{r+1} = 0.

    For r = 0 the minimal radii sqrt(m/n), sqrt((n-m)/n) are returned exactly. Otherwise the radius r1 is scanned
    on (delta, 1 - delta) for every sign change of S_{r+1}, each one is refined by bisection, and the smallest root
    on which L_r is elliptic (with S_r > 0 in the orientation of `orient_for_order`) is returned. Roots whose
    residual |S_{r+1}| exceeds the function tolerance are discarded.

    Raises:
        NoRadiusSolutionError: No root of S_{r+1} gives an elliptic r-minimal torus.
    """
    if not 1 <= m <= n - 1:
        raise ValueError(f"Factor dimension must satisfy 1 <= m <= n - 1, got m={m}, n={n}.")
    if not 0 <= r <= n - 1:
        raise ValueError(f"Order must satisfy 0 <= r <= n - 1, got r={r}, n={n}.")

    if r == 0:
        r1_squared = Fraction(m, n)
        return CliffordRadii(r1=math.sqrt(m / n), r2=math.sqrt((n - m) / n), r1_squared=r1_squared)

    def target(r1: float) -> float:
        return elementary_symmetric(clifford_profile(m, n, r1)).S[r + 1]

    roots = _sign_change_roots(target)
    if not roots:
        raise NoRadiusSolutionError(
            f"S_{r + 1} has no sign change for S^{m} x S^{n - m} in S^{n + 1}; no {r}-minimal generalized Clifford "
            "torus exists for these dimensions."
        )

    for root in roots:
        profile = clifford_profile(m, n, root)
        residual = target(root)
        if abs(residual) > ROOT_FUNCTION_TOLERANCE * profile.scale ** (r + 1):
            logger.warning(f"Discarding r1 = {root}: residual S_{r + 1} = {residual} exceeds the function tolerance.")
            continue
        oriented = orient_for_order(profile, r)
        s_r = elementary_symmetric(oriented).S[r]
        ellipticity = check_elliptic(oriented, r)
        if s_r <= ZERO_TOLERANCE * oriented.scale ** r or not ellipticity.elliptic:
            logger.debug(f"Skipping r1^2 = {root * root}: S_{r} = {s_r}, Newton margin {ellipticity.margin}.")
            continue
        logger.info(f"Solved {r}-minimal S^{m} x S^{n - m}: r1^2 = {root * root}.")
        return CliffordRadii(r1=root, r2=math.sqrt(1.0 - root * root), r1_squared=root * root)

    raise NoRadiusSolutionError(
        f"None of the {len(roots)} roots of S_{r + 1} for S^{m} x S^{n - m} gives an elliptic L_{r}; no "
        f"{r}-minimal generalized Clifford torus in the scope of L_{r} exists for these dimensions."
    )


def _sign_change_roots(target: Callable[[float], float]) -> List[float]:
    grid = np.linspace(BRACKET_MARGIN, 1.0 - BRACKET_MARGIN, SCAN_POINTS)
    samples = [target(x) for x in grid]
    roots: List[float] = []
    for left, right, f_left, f_right in zip(grid[:-1], grid[1:], samples[:-1], samples[1:]):
        if f_left == 0.0:
            roots.append(float(left))
        elif f_right != 0.0 and np.sign(f_left) != np.sign(f_right):
            root = optimize.bisect(
                target, float(left), float(right), xtol=BISECTION_XTOL, maxiter=BISECTION_MAX_ITERATIONS
            )
            roots.append(root)
    return roots
