#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
"""Eigenvalue multisets with a completeness cutoff, and the counting functions built on them.

A `Spectrum` lists eigenvalues with multiplicity and promises that every eigenvalue strictly below its cutoff is
present. All counts are certified against that promise: asking how many eigenvalues lie below a threshold the
spectrum does not cover is an error rather than a silent undercount.
"""
import csv
import io
import json
import logging
import math

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Sequence, Tuple, Union

from spectral_index.exceptions import ToleranceOverlapError, UncertifiedCountError

logger = logging.getLogger(__name__)

Real = Union[int, float, Fraction]

# Two values within MERGE_TOLERANCE * max(1, |value|) are the same eigenvalue.
MERGE_TOLERANCE = 1e-9

# Counting window used whenever a spectrum or a threshold carries floating point values.
INEXACT_COUNT_TOLERANCE = 1e-7

CSV_HEADER = ("value", "multiplicity")


class CountMode(Enum):
    """Predicate used by `count`."""

    STRICT_BELOW = "strict_below"
    AT_OR_BELOW = "at_or_below"
    EQUAL = "equal"


@dataclass(frozen=True)
class CountQuery:
    """A counting question N_{<a}, N_{<=a} or N_{=a}.

    Attributes:
        threshold: The value a.
        mode: Which of the three counting functions to evaluate.
        tolerance: Comparisons against the threshold are made up to this absolute tolerance.
    """

    threshold: Real
    mode: CountMode = CountMode.STRICT_BELOW
    tolerance: float = 0.0

    def __post_init__(self) -> None:
        """Validate the tolerance."""
        if self.tolerance < 0:
            raise ValueError(f"Counting tolerance must be nonnegative, got {self.tolerance}.")


@dataclass(frozen=True)
class Spectrum:
    """A finite multiset of eigenvalues, complete below `cutoff`.

    Attributes:
        entries: Pairs (value, multiplicity), strictly increasing in value.
        cutoff: Every eigenvalue strictly below this bound is listed with its full multiplicity.
    """

    entries: Tuple[Tuple[Real, int], ...] = ()
    cutoff: Real = math.inf

    def __post_init__(self) -> None:
        """Check ordering and multiplicities."""
        object.__setattr__(self, "entries", tuple((value, int(mult)) for value, mult in self.entries))
        previous = None
        for value, mult in self.entries:
            if mult < 1:
                raise ValueError(f"Multiplicity of eigenvalue {value} must be positive, got {mult}.")
            if previous is not None and not value > previous:
                raise ValueError(f"Spectrum entries must be strictly increasing, {value} follows {previous}.")
            previous = value

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[Tuple[Real, int]], cutoff: Real = math.inf, tolerance: float = MERGE_TOLERANCE
    ) -> "Spectrum":
        """Build a spectrum from unsorted (value, multiplicity) pairs, merging values within tolerance.

        Args:
            pairs: Eigenvalues with multiplicities, in any order, possibly repeated.
            cutoff: The completeness bound of the resulting spectrum.
            tolerance: Relative merge tolerance.
        """
        return cls(entries=merge_entries(pairs, tolerance), cutoff=cutoff)

    @classmethod
    def from_values(
        cls, values: Iterable[Real], cutoff: Real = math.inf, tolerance: float = MERGE_TOLERANCE
    ) -> "Spectrum":
        """Build a spectrum from a list of eigenvalues repeated according to multiplicity."""
        return cls.from_pairs(((value, 1) for value in values), cutoff=cutoff, tolerance=tolerance)

    @property
    def values(self) -> List[Real]:
        """Distinct eigenvalues in increasing order."""
        return [value for value, _ in self.entries]

    @property
    def total_multiplicity(self) -> int:
        """Number of eigenvalues counted with multiplicity."""
        return sum(mult for _, mult in self.entries)

    @property
    def is_exact(self) -> bool:
        """True when every value (and the cutoff, if finite) is an integer or a rational."""
        exact_cutoff = self.cutoff == math.inf or _is_exact(self.cutoff)
        return exact_cutoff and all(_is_exact(value) for value, _ in self.entries)

    def lowest(self) -> Real:
        """The smallest listed eigenvalue."""
        if not self.entries:
            raise ValueError("The spectrum is empty.")
        return self.entries[0][0]

    def multiplicity(self, value: Real, tolerance: float = 0.0) -> int:
        """Multiplicity of `value`, i.e. N_{=value}."""
        return count(self, CountQuery(value, CountMode.EQUAL, tolerance))

    def truncated(self, cutoff: Real) -> "Spectrum":
        """Restrict to the eigenvalues strictly below a smaller cutoff."""
        if cutoff > self.cutoff:
            raise UncertifiedCountError(f"Cannot truncate a spectrum complete below {self.cutoff} at {cutoff}.")
        return Spectrum(entries=tuple((v, m) for v, m in self.entries if v < cutoff), cutoff=cutoff)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-compatible representation; an infinite cutoff is written as null."""
        return {
            "cutoff": None if self.cutoff == math.inf else float(self.cutoff),
            "entries": [[float(value), mult] for value, mult in self.entries],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Spectrum":
        """Inverse of `to_dict`."""
        try:
            cutoff = math.inf if data["cutoff"] is None else data["cutoff"]
            entries = tuple((value, int(mult)) for value, mult in data["entries"])
        except (KeyError, TypeError, ValueError) as err:
            raise ValueError(f"Malformed spectrum document: {err}")
        return cls(entries=entries, cutoff=cutoff)

    def to_json(self) -> str:
        """Serialise as {"cutoff": x, "entries": [[value, mult], ...]}."""
        return json.dumps(self.to_dict(), indent=4)

    @classmethod
    def from_json(cls, text: str) -> "Spectrum":
        """Parse the output of `to_json`."""
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        """Serialise as CSV with columns value,multiplicity; the cutoff is not part of the CSV format."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for value, mult in self.entries:
            writer.writerow((repr(float(value)), mult))
        return buffer.getvalue()

    @classmethod
    def from_csv(cls, text: str, cutoff: Real = math.inf) -> "Spectrum":
        """Parse the output of `to_csv`, attaching the given cutoff."""
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or tuple(rows[0]) != CSV_HEADER:
            raise ValueError(f"Spectrum CSV must start with the header {','.join(CSV_HEADER)}.")
        return cls(entries=tuple((float(value), int(mult)) for value, mult in rows[1:]), cutoff=cutoff)


def merge_entries(
    pairs: Iterable[Tuple[Real, int]], tolerance: float = MERGE_TOLERANCE
) -> Tuple[Tuple[Real, int], ...]:
    """Sort (value, multiplicity) pairs and merge chains of values closer than the relative tolerance.

    The first value of a chain represents it, so exact values merge exactly and stay exact.
    """
    merged: List[List[Any]] = []
    last_value = None
    for value, mult in sorted(pairs, key=lambda pair: pair[0]):
        if last_value is not None and abs(value - last_value) <= tolerance * max(1, abs(last_value)):
            merged[-1][1] += mult
        else:
            merged.append([value, mult])
        last_value = value
    return tuple((value, mult) for value, mult in merged)


def count(spec: Spectrum, query: CountQuery) -> int:
    """Evaluate N_{<a}, N_{<=a} or N_{=a} with multiplicity.

    Values are compared up to the query tolerance, so that the three counts partition the spectrum and
    N_{=a} = N_{<=a} - N_{<a} holds exactly.

    Raises:
        UncertifiedCountError: The threshold (widened by the tolerance) is not below the spectrum cutoff.
        ToleranceOverlapError: The tolerance window around the threshold contains two distinct entries.
    """
    a, eps = query.threshold, query.tolerance
    reach = a if query.mode is CountMode.STRICT_BELOW else a + eps
    if not reach < spec.cutoff:
        raise UncertifiedCountError(
            f"Count {query.mode.value} {a} is not certified: the spectrum is only complete below {spec.cutoff}."
        )

    if eps > 0:
        window = [value for value, _ in spec.entries if a - eps <= value <= a + eps]
        if len(window) > 1:
            raise ToleranceOverlapError(
                f"Tolerance {eps} around {a} captures {len(window)} distinct eigenvalues {window}; use a smaller "
                "tolerance."
            )

    if query.mode is CountMode.STRICT_BELOW:
        return sum(mult for value, mult in spec.entries if value < a - eps)
    if query.mode is CountMode.AT_OR_BELOW:
        return sum(mult for value, mult in spec.entries if value <= a + eps)
    return sum(mult for value, mult in spec.entries if a - eps <= value <= a + eps)


def count_below(spec: Spectrum, threshold: Real, tolerance: float = 0.0) -> int:
    """Shorthand for N_{<threshold}."""
    return count(spec, CountQuery(threshold, CountMode.STRICT_BELOW, tolerance))


def count_at_or_below(spec: Spectrum, threshold: Real, tolerance: float = 0.0) -> int:
    """Shorthand for N_{<=threshold}."""
    return count(spec, CountQuery(threshold, CountMode.AT_OR_BELOW, tolerance))


def counting_tolerance(spec: Spectrum, *thresholds: Real) -> float:
    """Default counting tolerance: zero when the spectrum and the thresholds are exact, otherwise a float window."""
    if spec.is_exact and all(_is_exact(value) for value in thresholds):
        return 0.0
    return INEXACT_COUNT_TOLERANCE


def shift(spec: Spectrum, c: Real) -> Spectrum:
    """Spectrum after adding the constant potential c (times the weight) to the operator.

    With the convention Lu = -lambda p u, adding c p to L maps every eigenvalue lambda to lambda - c.
    """
    return Spectrum(entries=tuple((value - c, mult) for value, mult in spec.entries), cutoff=spec.cutoff - c)


def scale(spec: Spectrum, c: Real) -> Spectrum:
    """Spectrum of c * L for a positive constant c."""
    if not c > 0:
        raise ValueError(f"Spectra can only be scaled by a positive constant, got {c}.")
    return Spectrum(entries=tuple((value * c, mult) for value, mult in spec.entries), cutoff=spec.cutoff * c)


def product_sum(spec_a: Spectrum, spec_b: Spectrum, cutoff: Real, tolerance: float = MERGE_TOLERANCE) -> Spectrum:
    """Spectrum of the sum operator on a Riemannian product, complete below `cutoff`.

    Eigenvalues are the pairwise sums of factor eigenvalues, with multiplicities multiplied.

    Raises:
        UncertifiedCountError: The factor cutoffs cannot guarantee completeness below `cutoff`.
    """
    min_a = spec_a.lowest() if spec_a.entries else math.inf
    min_b = spec_b.lowest() if spec_b.entries else math.inf
    if spec_a.cutoff + min_b < cutoff or spec_b.cutoff + min_a < cutoff:
        raise UncertifiedCountError(
            f"Cannot certify a product spectrum below {cutoff} from factors complete below {spec_a.cutoff} and "
            f"{spec_b.cutoff}."
        )
    pairs = [
        (value_a + value_b, mult_a * mult_b)
        for value_a, mult_a in spec_a.entries
        for value_b, mult_b in spec_b.entries
        if value_a + value_b < cutoff
    ]
    return Spectrum.from_pairs(pairs, cutoff=cutoff, tolerance=tolerance)


def product_sum_all(spectra: Sequence[Spectrum], cutoff: Real) -> Spectrum:
    """Fold `product_sum` over any number of factors."""
    result = Spectrum(entries=((0, 1),), cutoff=math.inf)
    for factor in spectra:
        result = product_sum(result, factor, cutoff)
    return result


def _is_exact(value: Real) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)
