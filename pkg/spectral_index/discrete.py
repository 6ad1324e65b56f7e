#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
"""Finite-difference operators on flat grid tori and the dense weighted eigensolver.

Operators follow the geometer's sign convention: the discrete Laplacian is negative semi-definite and the solver
returns the values lambda of L u = -lambda p u, so Laplacian spectra are nonnegative. Nodes are numbered row-major,
node (i, j) having index i * N2 + j and coordinates (i h1, j h2).
"""
import logging
import math

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from scipy import linalg, sparse

from spectral_index.closed_form import flat_torus_spectrum
from spectral_index.exceptions import (
    GridMismatchError,
    InvalidConfigError,
    NonPositiveWeightError,
    SolverCapacityError,
    ZeroVectorError,
)
from spectral_index.spectra import Spectrum

logger = logging.getLogger(__name__)

DENSE_SOLVER_CAP = 4096
MINIMUM_RESOLUTION = 4

# Discrete eigenvalues that agree to this relative tolerance are reported as one eigenvalue.
DISCRETE_MERGE_TOLERANCE = 2e-7

CONVERGENCE_MODES = 6

FieldLike = Union[float, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class GridTorus:
    """Uniform periodic grid on R^2 / (l1 Z x l2 Z).

    Attributes:
        periods: (l1, l2).
        resolution: (N1, N2) nodes per direction.
    """

    periods: Tuple[float, float]
    resolution: Tuple[int, int]

    def __post_init__(self) -> None:
        """Validate periods and resolution."""
        object.__setattr__(self, "periods", tuple(float(period) for period in self.periods))
        object.__setattr__(self, "resolution", tuple(int(n) for n in self.resolution))
        if len(self.periods) != 2 or len(self.resolution) != 2:
            raise InvalidConfigError("A grid torus needs exactly two periods and two resolutions.")
        if not all(period > 0 and math.isfinite(period) for period in self.periods):
            raise InvalidConfigError(f"Grid periods must be positive, got {self.periods}.")
        if min(self.resolution) < MINIMUM_RESOLUTION:
            raise InvalidConfigError(
                f"Grid resolution must be at least {MINIMUM_RESOLUTION} per direction, got {self.resolution}."
            )

    @classmethod
    def square(cls, period: float, n: int) -> "GridTorus":
        """An n x n grid with both periods equal."""
        return cls(periods=(period, period), resolution=(n, n))

    @classmethod
    def clifford(cls, n: int) -> "GridTorus":
        """The flat Clifford torus S^1(1/sqrt(2)) x S^1(1/sqrt(2)) on an n x n grid."""
        return cls.square(clifford_period(), n)

    @property
    def spacing(self) -> Tuple[float, float]:
        """(h1, h2)."""
        return (self.periods[0] / self.resolution[0], self.periods[1] / self.resolution[1])

    @property
    def node_count(self) -> int:
        """N1 * N2."""
        return self.resolution[0] * self.resolution[1]

    @property
    def node_measure(self) -> float:
        """Area h1 * h2 carried by each node."""
        h1, h2 = self.spacing
        return h1 * h2

    def coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        """Node coordinates as two (N1, N2) arrays."""
        h1, h2 = self.spacing
        x = np.arange(self.resolution[0]) * h1
        y = np.arange(self.resolution[1]) * h2
        return np.meshgrid(x, y, indexing="ij")

    def field(self, values: FieldLike, name: str = "field") -> np.ndarray:
        """Flatten node values (a scalar, a flat vector or an (N1, N2) array) to a read-only row-major vector.

        Raises:
            GridMismatchError: The values do not have one entry per node.
        """
        array = np.asarray(values, dtype=float)
        if array.ndim == 0:
            array = np.full(self.node_count, float(array))
        elif array.ndim == 2 and array.shape != self.resolution:
            raise GridMismatchError(f"{name} has shape {array.shape}, the grid is {self.resolution}.")
        array = np.array(array.reshape(-1))
        if array.size != self.node_count:
            raise GridMismatchError(f"{name} has {array.size} values, the grid has {self.node_count} nodes.")
        array.setflags(write=False)
        return array


@dataclass(frozen=True, eq=False)
class DiscreteOperator:
    """The stencil Laplacian plus a diagonal potential, L_h = Delta_h + q.

    The matrix is symmetric, i.e. self-adjoint for the uniform node measure, and with q = 0 its rows sum to zero.
    """

    grid: GridTorus
    stencil: sparse.csr_matrix
    potential: np.ndarray = field(default=None)  # type: ignore

    def __post_init__(self) -> None:
        """Default the potential to zero and fix it against mutation."""
        if self.potential is None:
            object.__setattr__(self, "potential", self.grid.field(0.0, "potential"))
        else:
            object.__setattr__(self, "potential", self.grid.field(self.potential, "potential"))

    def matrix(self) -> sparse.csr_matrix:
        """Sparse matrix of the operator."""
        return (self.stencil + sparse.diags(self.potential)).tocsr()

    def dense(self) -> np.ndarray:
        """Dense matrix of the operator."""
        return self.matrix().toarray()

    def apply(self, u: FieldLike) -> np.ndarray:
        """L_h u for a node field u."""
        return self.matrix() @ self.grid.field(u, "u")

    def inner(self, u: FieldLike, v: FieldLike) -> float:
        """<u, v> with the node measure h1 h2."""
        return float(self.grid.node_measure * np.dot(self.grid.field(u, "u"), self.grid.field(v, "v")))


@dataclass(frozen=True, eq=False)
class WeightField:
    """A positive weight p given by its node values."""

    values: np.ndarray

    def __post_init__(self) -> None:
        """Check positivity."""
        values = np.array(np.asarray(self.values, dtype=float).reshape(-1))
        if values.size == 0 or not np.all(np.isfinite(values)):
            raise NonPositiveWeightError("Weight field must have finite values.")
        if values.min() <= 0:
            raise NonPositiveWeightError(f"Weight field must be positive, its minimum is {values.min()}.")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, grid: GridTorus, value: float = 1.0) -> "WeightField":
        """p = value at every node."""
        return cls(values=np.full(grid.node_count, float(value)))

    @property
    def minimum(self) -> float:
        """inf p over the nodes."""
        return float(self.values.min())

    def on(self, grid: GridTorus) -> np.ndarray:
        """The node values, checked against a grid."""
        return grid.field(self.values, "weight")


@dataclass(frozen=True, eq=False)
class WeightedEigenpairs:
    """All eigenpairs of L u = -lambda p u.

    Attributes:
        operator: L.
        weight: p.
        values: Eigenvalues in increasing order.
        vectors: Matching eigenvectors as columns, normalised so that U^T diag(p) U = I.
    """

    operator: DiscreteOperator
    weight: WeightField
    values: np.ndarray
    vectors: np.ndarray

    def residuals(self) -> np.ndarray:
        """||L u + lambda p u|| / ||u|| for every pair."""
        p = self.weight.on(self.operator.grid)
        applied = self.operator.matrix() @ self.vectors
        residual = applied + self.vectors * (self.values * p[:, np.newaxis])
        return np.linalg.norm(residual, axis=0) / np.linalg.norm(self.vectors, axis=0)

    def p_gram(self) -> np.ndarray:
        """U^T diag(p) U, which is the identity up to rounding."""
        p = self.weight.on(self.operator.grid)
        return self.vectors.T @ (self.vectors * p[:, np.newaxis])

    def to_spectrum(self, tolerance: float = DISCRETE_MERGE_TOLERANCE) -> Spectrum:
        """All eigenvalues as a complete spectrum."""
        return Spectrum.from_values((float(value) for value in self.values), cutoff=math.inf, tolerance=tolerance)


@dataclass(frozen=True)
class ConvergenceRow:
    """Error of one exact eigenvalue at one resolution."""

    resolution: int
    mode: int
    exact: float
    approximation: float
    error: float
    order: Optional[float]


@dataclass(frozen=True)
class ConvergenceTable:
    """Errors of the discrete Laplacian against the exact flat-torus spectrum.

    `error` is relative for nonzero eigenvalues and absolute for the zero eigenvalue. `order` is the observed order
    log(e_coarse / e_fine) / log(N_fine / N_coarse) against the previous resolution, and is absent for the first
    resolution and for the zero eigenvalue.
    """

    periods: Tuple[float, float]
    resolutions: Tuple[int, ...]
    exact_values: Tuple[float, ...]
    rows: Tuple[ConvergenceRow, ...]

    @property
    def has_order(self) -> bool:
        """True when at least two resolutions were run."""
        return len(self.resolutions) > 1

    def error(self, resolution: int, mode: int) -> float:
        """Error of exact eigenvalue number `mode` (0 is the zero eigenvalue) at a resolution."""
        return next(row.error for row in self.rows if row.resolution == resolution and row.mode == mode)

    def header(self) -> List[str]:
        """Column names of `to_rows`."""
        columns = ["resolution", "mode", "exact", "approximation", "error"]
        return columns + ["order"] if self.has_order else columns

    def to_rows(self) -> List[List[Union[int, float, str]]]:
        """Rows for CSV and tables, matching `header`."""
        rows: List[List[Union[int, float, str]]] = []
        for row in self.rows:
            cells: List[Union[int, float, str]] = [row.resolution, row.mode, row.exact, row.approximation, row.error]
            if self.has_order:
                cells.append("" if row.order is None else row.order)
            rows.append(cells)
        return rows

    def to_dict(self) -> dict:
        """JSON-compatible representation."""
        return {
            "periods": list(self.periods),
            "resolutions": list(self.resolutions),
            "exact_values": list(self.exact_values),
            "rows": [dict(zip(self.header(), cells)) for cells in self.to_rows()],
        }


def clifford_period() -> float:
    """Period 2 pi / sqrt(2) of a circle of radius 1 / sqrt(2)."""
    return 2 * math.pi / math.sqrt(2)


def build_laplacian(grid: GridTorus) -> DiscreteOperator:
    """Periodic 5-point Laplacian, assembled as kron(D1, I) + kron(I, D2) from periodic second differences."""
    first = _periodic_second_difference(grid.resolution[0], grid.spacing[0])
    second = _periodic_second_difference(grid.resolution[1], grid.spacing[1])
    stencil = sparse.kron(first, sparse.identity(grid.resolution[1])) + sparse.kron(
        sparse.identity(grid.resolution[0]), second
    )
    logger.debug(f"Assembled the 5-point Laplacian on a {grid.resolution} grid.")
    return DiscreteOperator(grid=grid, stencil=stencil.tocsr())


def add_potential(op: DiscreteOperator, q: FieldLike) -> DiscreteOperator:
    """L_h + q for a node field (or constant) q.

    Raises:
        GridMismatchError: q does not live on the operator's grid.
    """
    return DiscreteOperator(grid=op.grid, stencil=op.stencil, potential=op.potential + op.grid.field(q, "q"))


def solve_weighted_pairs(op: DiscreteOperator, weight: Optional[WeightField] = None) -> WeightedEigenpairs:
    """Every eigenpair of L u = -lambda p u by symmetric reduction.

    The pencil (-L, diag(p)) is conjugated by diag(p)^(-1/2) into a symmetric matrix that is diagonalised densely;
    eigenvectors are mapped back so that they are p-orthonormal.

    Raises:
        SolverCapacityError: The grid has more nodes than the dense solver accepts.
        GridMismatchError: The weight does not live on the grid.
    """
    weight = weight or WeightField.constant(op.grid)
    scaling, reduced = _reduce(op, weight)
    values, reduced_vectors = linalg.eigh(reduced)
    logger.info(f"Solved the weighted pencil on a {op.grid.resolution} grid: lowest eigenvalue {values[0]:.6g}.")
    vectors = reduced_vectors * scaling[:, np.newaxis]
    return WeightedEigenpairs(operator=op, weight=weight, values=values, vectors=vectors)


def solve_weighted(op: DiscreteOperator, weight: Optional[WeightField] = None) -> Spectrum:
    """All N1 * N2 eigenvalues of L u = -lambda p u as a spectrum complete below infinity."""
    return eigenvalue_spectrum(weighted_eigenvalues(op, weight))


def eigenvalue_spectrum(values: Iterable[float]) -> Spectrum:
    """Merge solver eigenvalues closer than the discrete merge tolerance into a spectrum."""
    return Spectrum.from_values((float(value) for value in values), tolerance=DISCRETE_MERGE_TOLERANCE)


def weighted_eigenvalues(op: DiscreteOperator, weight: Optional[WeightField] = None) -> np.ndarray:
    """Sorted eigenvalues of L u = -lambda p u with multiplicity, skipping the eigenvectors."""
    _, reduced = _reduce(op, weight or WeightField.constant(op.grid))
    values = linalg.eigh(reduced, eigvals_only=True)
    logger.debug(f"Eigenvalues of the weighted pencil on a {op.grid.resolution} grid: lowest {values[0]:.6g}.")
    return values


def rayleigh(op: DiscreteOperator, weight: Optional[WeightField], u: FieldLike) -> float:
    """Discrete quotient -<u, L u> / <u, p u> with the node measure.

    Raises:
        ZeroVectorError: u vanishes identically.
    """
    vector = op.grid.field(u, "u")
    if not np.any(vector):
        raise ZeroVectorError("The Rayleigh quotient of the zero vector is undefined.")
    p = weight.on(op.grid) if weight is not None else np.ones(op.grid.node_count)
    return float(-np.dot(vector, op.matrix() @ vector) / np.dot(vector, p * vector))


def negative_inertia(op: DiscreteOperator, weight: Optional[WeightField] = None) -> int:
    """Number of negative eigenvalues of L u = -lambda p u, read off an LDL^T factorisation.

    By Sylvester's law of inertia the reduced matrix diag(p)^(-1/2) (-L) diag(p)^(-1/2) has as many negative
    eigenvalues as D has, so no eigensolve is needed. D has 1x1 and 2x2 diagonal blocks.
    """
    grid = op.grid
    _, reduced = _reduce(op, weight or WeightField.constant(grid))
    _, block_diagonal, _ = linalg.ldl(reduced, lower=True)

    negative = 0
    index = 0
    size = block_diagonal.shape[0]
    while index < size:
        if index + 1 < size and block_diagonal[index + 1, index] != 0.0:
            block = block_diagonal[index : index + 2, index : index + 2]
            negative += int(np.count_nonzero(np.linalg.eigvalsh(block) < 0))
            index += 2
        else:
            negative += int(block_diagonal[index, index] < 0)
            index += 1
    logger.debug(f"Inertia of the weighted pencil on a {grid.resolution} grid: {negative} negative.")
    return negative


def convergence_study(
    periods: Tuple[float, float], resolutions: Sequence[int], modes: int = CONVERGENCE_MODES
) -> ConvergenceTable:
    """Compare the first `modes` distinct flat-torus eigenvalues with their N x N grid approximations.

    The sorted discrete eigenvalues are matched to the exact ones with multiplicity; the error of an exact
    eigenvalue is the worst error over its cluster of discrete approximations.

    Raises:
        InvalidConfigError: The resolutions are not strictly increasing.
    """
    resolutions = tuple(int(n) for n in resolutions)
    if not resolutions:
        raise InvalidConfigError("A convergence study needs at least one resolution.")
    if any(coarse >= fine for coarse, fine in zip(resolutions, resolutions[1:])):
        raise InvalidConfigError(f"Resolutions must be strictly increasing, got {list(resolutions)}.")

    exact = _first_distinct_eigenvalues(periods, modes)
    rows: List[ConvergenceRow] = []
    previous_n: Optional[int] = None
    previous_errors: List[float] = []
    for n in resolutions:
        grid = GridTorus(periods=periods, resolution=(n, n))
        errors = _cluster_errors(exact, weighted_eigenvalues(build_laplacian(grid)))
        for mode, ((value, _), (approximation, error)) in enumerate(zip(exact, errors)):
            order = None
            if previous_n is not None and value != 0 and error > 0 and previous_errors[mode] > 0:
                order = math.log(previous_errors[mode] / error) / math.log(n / previous_n)
            rows.append(
                ConvergenceRow(
                    resolution=n, mode=mode, exact=float(value), approximation=approximation, error=error, order=order
                )
            )
        previous_n, previous_errors = n, [error for _, error in errors]
        logger.info(f"Resolution {n}: errors {', '.join(f'{error:.3e}' for error in previous_errors)}.")
    return ConvergenceTable(
        periods=(float(periods[0]), float(periods[1])),
        resolutions=resolutions,
        exact_values=tuple(float(value) for value, _ in exact),
        rows=tuple(rows),
    )


def _reduce(op: DiscreteOperator, weight: WeightField) -> Tuple[np.ndarray, np.ndarray]:
    # diag(p)^(-1/2) and the symmetric matrix diag(p)^(-1/2) (-L) diag(p)^(-1/2)
    grid = op.grid
    if grid.node_count > DENSE_SOLVER_CAP:
        raise SolverCapacityError(
            f"A {grid.resolution} grid has {grid.node_count} nodes; the dense solver is capped at {DENSE_SOLVER_CAP}."
        )
    scaling = 1.0 / np.sqrt(weight.on(grid))
    return scaling, scaling[:, np.newaxis] * (-op.dense()) * scaling[np.newaxis, :]


def _first_distinct_eigenvalues(periods: Tuple[float, float], modes: int) -> Tuple[Tuple[float, int], ...]:
    cutoff = 4 * max((2 * math.pi / period) ** 2 for period in periods) + 1
    spectrum = flat_torus_spectrum(periods, cutoff)
    while len(spectrum.entries) < modes:
        cutoff *= 2
        spectrum = flat_torus_spectrum(periods, cutoff)
    return spectrum.entries[:modes]


def _cluster_errors(exact: Sequence[Tuple[float, int]], discrete: np.ndarray) -> List[Tuple[float, float]]:
    # Constants span the kernel of the stencil, so the zero mode is exact up to solver roundoff.
    roundoff = DISCRETE_MERGE_TOLERANCE * max(1.0, float(np.max(np.abs(discrete))))
    errors = []
    start = 0
    for value, mult in exact:
        cluster = discrete[start : start + mult]
        start += mult
        if value == 0 and float(np.max(np.abs(cluster))) <= roundoff:
            errors.append((0.0, 0.0))
            continue
        deviations = np.abs(cluster - float(value))
        worst = int(np.argmax(deviations))
        error = float(deviations[worst]) / (abs(float(value)) if value != 0 else 1.0)
        errors.append((float(cluster[worst]), error))
    return errors


def _periodic_second_difference(n: int, h: float) -> sparse.dia_matrix:
    ones = np.ones(n)
    return sparse.diags(
        [ones[:1], ones[:-1], -2 * ones, ones[:-1], ones[:1]], [-(n - 1), -1, 0, 1, n - 1], shape=(n, n)
    ) / (h * h)
