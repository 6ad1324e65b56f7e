#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
"""Counting certifiers that operate on `Spectrum` values.

The weighted comparison N^{L+q,p}_{<a-a0} >= N^{L,p}_{<=a} with a0 = inf q/p, the Laplacian lower bound for the
Morse index of a minimal hypersurface, and the constant-curvature and r-minimal index pipelines. Certifiers never
look at geometry, so synthetic spectra can drive every branch. An input that does not meet a certifier's hypotheses
produces a report with status `hypothesis_failure`; it is not an error.
"""
import logging

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from spectral_index.discrete import WeightField
from spectral_index.exceptions import CertifierInputError, NonPositiveWeightError
from spectral_index.spectra import (
    Real,
    Spectrum,
    count_at_or_below,
    count_below,
    counting_tolerance,
)

logger = logging.getLogger(__name__)

# q/p is treated as constant when its spread is within this tolerance relative to max(1, max |q/p|).
CONSTANT_RATIO_TOLERANCE = 1e-12

# Relative tolerance when comparing curvature ratios against n - r.
RATIO_TOLERANCE = 1e-9

Field = Union[Real, np.ndarray, WeightField]


class ComparisonBranch(Enum):
    """Which statement of the comparison theorem applies."""

    NONCONSTANT = "nonconstant"
    CONSTANT = "constant"


class CertificationStatus(Enum):
    """Outcome of a certifier."""

    CERTIFIED = "certified"
    RIGIDITY = "rigidity_regime"
    HYPOTHESIS_FAILURE = "hypothesis_failure"


@dataclass(frozen=True)
class RatioInfimum:
    """inf q/p and whether q/p is constant."""

    value: Real
    constant: bool


@dataclass(frozen=True)
class ComparisonReport:
    """Both sides of the comparison inequality (or equalities) at one threshold.

    Attributes:
        a: The threshold on the unperturbed side.
        a0: inf q/p.
        branch: Nonconstant: lhs = N^{L^}_{<a-a0}, rhs = N^{L}_{<=a}. Constant: lhs = N^{L^}_{<=a-a0},
            rhs = N^{L}_{<=a}, and the strict counts must agree as well.
        lhs_count: Count for L^ = L + q.
        rhs_count: Count for L.
        verdict: Whether the branch's statement holds.
        strict_lhs_count: N^{L^}_{<a-a0} in the constant branch.
        strict_rhs_count: N^{L}_{<a} in the constant branch.
    """

    a: Real
    a0: Real
    branch: ComparisonBranch
    lhs_count: int
    rhs_count: int
    verdict: bool
    strict_lhs_count: Optional[int] = None
    strict_rhs_count: Optional[int] = None

    @property
    def margin(self) -> int:
        """lhs_count - rhs_count."""
        return self.lhs_count - self.rhs_count

    def to_dict(self) -> Dict[str, Any]:
        """JSON-compatible representation."""
        return {
            "a": float(self.a),
            "a0": float(self.a0),
            "branch": self.branch.value,
            "lhs_count": self.lhs_count,
            "rhs_count": self.rhs_count,
            "strict_lhs_count": self.strict_lhs_count,
            "strict_rhs_count": self.strict_rhs_count,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class IndexBoundReport:
    """Sum of Laplace multiplicities over 0 <= lambda <= n, with the flags the n + 4 bound depends on.

    Attributes:
        n: Hypersurface dimension.
        bound: N^Delta_{<=n}.
        contributing: Entries (eigenvalue, multiplicity) counted in the bound.
        lambda1: Smallest positive eigenvalue in the spectrum, if any lies below its cutoff.
        multiplicity_at_n: N^Delta_{=n}.
    """

    n: int
    bound: int
    contributing: Tuple[Tuple[Real, int], ...]
    lambda1: Optional[Real]
    multiplicity_at_n: int

    @property
    def lambda1_below_n(self) -> bool:
        """lambda_1 < n."""
        return self.lambda1 is not None and self.lambda1 < self.n

    @property
    def multiplicity_exceeds_coordinates(self) -> bool:
        """mult(n) >= n + 3."""
        return self.multiplicity_at_n >= self.n + 3

    @property
    def coordinate_multiplicity_ok(self) -> bool:
        """mult(n) >= n + 2, which every full minimal hypersurface satisfies."""
        return self.multiplicity_at_n >= self.n + 2

    def to_dict(self) -> Dict[str, Any]:
        """JSON-compatible representation."""
        return {
            "n": self.n,
            "bound": self.bound,
            "contributing": [[float(value), mult] for value, mult in self.contributing],
            "lambda1": None if self.lambda1 is None else float(self.lambda1),
            "multiplicity_at_n": self.multiplicity_at_n,
            "lambda1_below_n": self.lambda1_below_n,
            "multiplicity_exceeds_coordinates": self.multiplicity_exceeds_coordinates,
            "coordinate_multiplicity_ok": self.coordinate_multiplicity_ok,
        }


@dataclass(frozen=True)
class CertificateReport:
    """Outcome of one of the index certifiers.

    Attributes:
        certifier: Name of the certifier that produced the report.
        status: Certified, rigidity regime or hypothesis failure.
        classification: Human-readable verdict.
        bound: The certified count, absent on hypothesis failure when no count is claimed.
        guaranteed: The lower bound the argument promises for `bound` (n + 3 or 2n + 5).
        counts: Every count the certifier evaluated, by name.
        floors: Multiplicity floors the argument needs, by the name of the count they apply to.
    """

    certifier: str
    status: CertificationStatus
    classification: str
    bound: Optional[int]
    guaranteed: Optional[int]
    counts: Dict[str, int] = field(default_factory=dict)
    floors: Dict[str, int] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        """Whether the certified count reaches the guaranteed bound; vacuously true on hypothesis failure."""
        if self.status is CertificationStatus.HYPOTHESIS_FAILURE or self.guaranteed is None:
            return True
        return self.bound is not None and self.bound >= self.guaranteed

    @property
    def unmet_floors(self) -> Tuple[str, ...]:
        """Names of counts below their floors."""
        return tuple(name for name, floor in self.floors.items() if self.counts.get(name, 0) < floor)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-compatible representation."""
        return {
            "certifier": self.certifier,
            "status": self.status.value,
            "classification": self.classification,
            "bound": self.bound,
            "guaranteed": self.guaranteed,
            "holds": self.holds,
            "counts": dict(self.counts),
            "floors": dict(self.floors),
            "unmet_floors": list(self.unmet_floors),
        }


def inf_ratio(q: Field, p: Field) -> RatioInfimum:
    """inf q/p over the nodes, or the exact quotient of two constants.

    Raises:
        NonPositiveWeightError: p is not positive everywhere.
    """
    q_values, p_values = _field_values(q), _field_values(p)
    if q_values is None and p_values is None:
        if not p > 0:  # type: ignore
            raise NonPositiveWeightError(f"Weight must be positive, got {p}.")
        if _is_exact(q) and _is_exact(p):
            return RatioInfimum(value=Fraction(q) / Fraction(p), constant=True)  # type: ignore
        return RatioInfimum(value=float(q) / float(p), constant=True)  # type: ignore

    q_array = q_values if q_values is not None else np.asarray(float(q))  # type: ignore
    p_array = p_values if p_values is not None else np.asarray(float(p))  # type: ignore
    if np.any(p_array <= 0):
        raise NonPositiveWeightError(f"Weight must be positive, its minimum is {float(np.min(p_array))}.")
    ratio = np.broadcast_to(q_array / p_array, np.broadcast(q_array, p_array).shape)
    spread = float(np.ptp(ratio))
    scale = max(1.0, float(np.max(np.abs(ratio))))
    return RatioInfimum(value=float(np.min(ratio)), constant=spread <= CONSTANT_RATIO_TOLERANCE * scale)


def check_comparison(spec_l: Spectrum, spec_lhat: Spectrum, q: Field, p: Field, a: Real) -> ComparisonReport:
    """Evaluate the comparison theorem for L and L^ = L + q with weight p at threshold a.

    Raises:
        UncertifiedCountError: A spectrum is not complete where a count needs it.
    """
    ratio = inf_ratio(q, p)
    a0 = ratio.value
    shifted = a - a0
    tolerance_l = counting_tolerance(spec_l, a)
    tolerance_lhat = counting_tolerance(spec_lhat, shifted)
    rhs = count_at_or_below(spec_l, a, tolerance_l)

    if not ratio.constant:
        lhs = count_below(spec_lhat, shifted, tolerance_lhat)
        report = ComparisonReport(
            a=a, a0=a0, branch=ComparisonBranch.NONCONSTANT, lhs_count=lhs, rhs_count=rhs, verdict=lhs >= rhs
        )
    else:
        lhs = count_at_or_below(spec_lhat, shifted, tolerance_lhat)
        strict_lhs = count_below(spec_lhat, shifted, tolerance_lhat)
        strict_rhs = count_below(spec_l, a, tolerance_l)
        report = ComparisonReport(
            a=a,
            a0=a0,
            branch=ComparisonBranch.CONSTANT,
            lhs_count=lhs,
            rhs_count=rhs,
            verdict=lhs == rhs and strict_lhs == strict_rhs,
            strict_lhs_count=strict_lhs,
            strict_rhs_count=strict_rhs,
        )
    logger.debug(f"Comparison at a = {a}, a0 = {a0}: {report.lhs_count} vs {report.rhs_count} ({report.branch.value}).")
    return report


def laplacian_index_bound(laplace_spec: Spectrum, n: int) -> IndexBoundReport:
    """N^Delta_{<=n}: eigenfunctions with eigenvalue at most n span a space on which the index form is negative.

    Raises:
        UncertifiedCountError: The spectrum is not complete up to n.
    """
    tolerance = counting_tolerance(laplace_spec, n)
    bound = count_at_or_below(laplace_spec, n, tolerance)
    contributing = tuple((value, mult) for value, mult in laplace_spec.entries if value <= n + tolerance)
    positive = [value for value, _ in laplace_spec.entries if value > tolerance]
    lambda1 = positive[0] if positive else None
    report = IndexBoundReport(
        n=n,
        bound=bound,
        contributing=contributing,
        lambda1=None if lambda1 is None else (n if abs(lambda1 - n) <= tolerance else lambda1),
        multiplicity_at_n=laplace_spec.multiplicity(n, tolerance),
    )
    logger.info(f"Laplacian index bound for n = {n}: {bound}.")
    return report


def strengthened_index_bound(laplace_spec: Spectrum, n: int) -> Optional[int]:
    """The Laplacian index bound when lambda_1 < n or n has multiplicity at least n + 3, otherwise None.

    For a full hypersurface either condition makes the bound at least n + 4. The count is read from the spectrum
    only, so a spectrum without the coordinate multiplicities can return less.
    """
    report = laplacian_index_bound(laplace_spec, n)
    if not (report.lambda1_below_n or report.multiplicity_exceeds_coordinates):
        return None
    if report.bound < n + 4:
        logger.warning(f"Strengthened bound {report.bound} is below n + 4 = {n + 4}; the spectrum is not full.")
    return report.bound


def certify_constantS(laplace_spec: Spectrum, n: int, S: Real) -> CertificateReport:  # noqa: N802
    """Index certificate for a minimal hypersurface with constant |A|^2 = S, using N^J_{<0} = N^Delta_{<n+S}.

    When S <= n the hypersurface is a Clifford minimal hypersurface with index n + 3. Otherwise n and S must both be
    Laplace eigenvalues of multiplicity n + 2, which together with the constants give 2n + 5.

    Raises:
        CertifierInputError: S is not positive.
        UncertifiedCountError: The spectrum is not complete below n + S.
    """
    if not S > 0:
        raise CertifierInputError(f"A full minimal hypersurface has S > 0, got S = {S}.")
    threshold = n + S
    tolerance = counting_tolerance(laplace_spec, threshold, n, S)
    bound = count_below(laplace_spec, threshold, tolerance)
    counts = {"N_below_n_plus_S": bound}

    if S <= n + tolerance:
        return _report(
            "certify_constantS",
            CertificationStatus.RIGIDITY,
            "rigidity regime (Clifford, index n+3)",
            bound,
            n + 3,
            counts,
        )

    counts["multiplicity_at_n"] = laplace_spec.multiplicity(n, tolerance)
    counts["multiplicity_at_S"] = laplace_spec.multiplicity(S, tolerance)
    floors = {"multiplicity_at_n": n + 2, "multiplicity_at_S": n + 2}
    return _floored_report("certify_constantS", bound, 2 * n + 5, counts, floors, "S > n, index at least 2n+5")


def certify_Sbig(jacobi_spec: Spectrum, n: int) -> CertificateReport:  # noqa: N802
    """Index certificate from a Jacobi spectrum: N^J_{<0} >= N^J_{<-n} + N^J_{=-n} >= (n + 3) + (n + 2).

    Raises:
        UncertifiedCountError: The spectrum is not complete below 0.
    """
    tolerance = counting_tolerance(jacobi_spec, -n, 0)
    below = count_below(jacobi_spec, -n, tolerance)
    at = jacobi_spec.multiplicity(-n, tolerance)
    counts = {
        "N_below_minus_n": below,
        "multiplicity_at_minus_n": at,
        "index": count_below(jacobi_spec, 0, tolerance),
    }
    floors = {"N_below_minus_n": n + 3, "multiplicity_at_minus_n": n + 2}
    return _floored_report("certify_Sbig", below + at, 2 * n + 5, counts, floors, "S > n, index at least 2n+5")


def certify_rmin(
    lr_spec: Spectrum, n: int, r: int, Sr: Real, Sr2: Real, weighted: bool = False  # noqa: N803
) -> CertificateReport:
    """r-index certificate for an r-minimal hypersurface with constant S_r > 0 and S_{r+2}.

    The count is N^{L_r}_{<(n-r) S_r - (r+2) S_{r+2}}. When -(r+2) S_{r+2} / S_r <= n - r the hypersurface is in the
    rigidity regime of the generalized Clifford tori, with r-index n + 3. Otherwise (n - r) S_r and -(r+2) S_{r+2}
    must both be L_r eigenvalues of multiplicity n + 2, giving 2n + 5.

    S_{r+2} must not be positive: on an r-minimal hypersurface with S_r > 0 this always holds. With `weighted`,
    the count N^{L_r}_{<=(n-r) S_r} that the weighted comparison bounds the r-index by is reported as well.

    Raises:
        CertifierInputError: S_r is not positive.
        UncertifiedCountError: The spectrum is not complete below the threshold.
    """
    if not Sr > 0:
        raise CertifierInputError(f"The r-stability operator needs S_r > 0, got S_{r} = {Sr}.")
    position = (n - r) * Sr
    normal = -(r + 2) * Sr2
    threshold = position + normal
    tolerance = counting_tolerance(lr_spec, threshold, position, normal)
    scale = max(1.0, abs(float(Sr)), abs(float(Sr2)))

    if Sr2 > RATIO_TOLERANCE * scale:
        return _report(
            "certify_rmin",
            CertificationStatus.HYPOTHESIS_FAILURE,
            f"S_{r + 2} = {float(Sr2):.6g} > 0 contradicts r-minimality with S_{r} > 0",
            None,
            None,
            {},
        )

    bound = count_below(lr_spec, threshold, tolerance)
    counts = {"r_index": bound}
    floors: Dict[str, int] = {}
    if weighted:
        counts["N_at_or_below_position"] = count_at_or_below(lr_spec, position, tolerance)
        floors["N_at_or_below_position"] = n + 3

    if normal <= position + tolerance + RATIO_TOLERANCE * scale:
        return _floored_report(
            "certify_rmin",
            bound,
            n + 3,
            counts,
            floors,
            "rigidity regime (generalized Clifford, r-index n+3)",
            status=CertificationStatus.RIGIDITY,
        )

    counts["multiplicity_at_position"] = lr_spec.multiplicity(position, tolerance)
    counts["multiplicity_at_normal"] = lr_spec.multiplicity(normal, tolerance)
    floors.update({"multiplicity_at_position": n + 2, "multiplicity_at_normal": n + 2})
    return _floored_report("certify_rmin", bound, 2 * n + 5, counts, floors, "r-index at least 2n+5")


def certify_rstability(lr_spec: Spectrum, n: int, r: int, Sr: Real, Sr2: Real) -> CertificateReport:  # noqa: N803
    """r-index at least n + 3 for an r-minimal hypersurface with S_{r+2} < 0.

    With L = L_r + (n - r) S_r and the constant potential q = -(r+2) S_{r+2} > 0, J_r = L + q. Constant eigenvalue
    shifts give N^{J_r}_{<0} = N^L_{<q} >= N^L_{<=0} = N^L_{<0} + N^L_{=0}, and N^L_{=0} >= n + 2 by the position
    vector coordinates.

    Raises:
        CertifierInputError: S_r is not positive.
        UncertifiedCountError: The spectrum is not complete below the threshold.
    """
    if not Sr > 0:
        raise CertifierInputError(f"The r-stability operator needs S_r > 0, got S_{r} = {Sr}.")
    position = (n - r) * Sr
    q = -(r + 2) * Sr2
    tolerance = counting_tolerance(lr_spec, position, position + q)
    if not q > tolerance:
        return _report(
            "certify_rstability",
            CertificationStatus.HYPOTHESIS_FAILURE,
            f"S_{r + 2} = {float(Sr2):.6g} is not negative",
            None,
            None,
            {},
        )
    below = count_below(lr_spec, position, tolerance)
    at = lr_spec.multiplicity(position, tolerance)
    counts = {
        "N_below_zero": below,
        "multiplicity_at_zero": at,
        "N_at_or_below_zero": below + at,
        "r_index": count_below(lr_spec, position + q, tolerance),
    }
    floors = {"multiplicity_at_zero": n + 2}
    return _floored_report("certify_rstability", counts["r_index"], n + 3, counts, floors, "r-index at least n+3")


def _floored_report(
    certifier: str,
    bound: int,
    guaranteed: int,
    counts: Dict[str, int],
    floors: Dict[str, int],
    classification: str,
    status: CertificationStatus = CertificationStatus.CERTIFIED,
) -> CertificateReport:
    unmet = [name for name, floor in floors.items() if counts.get(name, 0) < floor]
    if unmet:
        details = ", ".join(f"{name} = {counts[name]} < {floors[name]}" for name in unmet)
        return _report(
            certifier,
            CertificationStatus.HYPOTHESIS_FAILURE,
            f"floors unmet: {details}",
            None,
            None,
            counts,
            floors,
        )
    return _report(certifier, status, classification, bound, guaranteed, counts, floors)


def _report(
    certifier: str,
    status: CertificationStatus,
    classification: str,
    bound: Optional[int],
    guaranteed: Optional[int],
    counts: Dict[str, int],
    floors: Optional[Dict[str, int]] = None,
) -> CertificateReport:
    report = CertificateReport(
        certifier=certifier,
        status=status,
        classification=classification,
        bound=bound,
        guaranteed=guaranteed,
        counts=dict(counts),
        floors=dict(floors or {}),
    )
    logger.info(f"{certifier}: {status.value}, {classification}, bound {bound}.")
    return report


def _field_values(value: Field) -> Optional[np.ndarray]:
    if isinstance(value, WeightField):
        return value.values
    if isinstance(value, np.ndarray) or isinstance(value, (list, tuple)):
        return np.asarray(value, dtype=float)
    return None


def _is_exact(value: Any) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)
