#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
"""Smooth random node fields on grid tori, and their CSV form.

Fields are low-frequency trigonometric polynomials, so their extrema on the grid are known in advance: a field
built with `offset` and `amplitude` takes values in [offset - amplitude, offset + amplitude].
"""
import logging
import math
import pathlib

from typing import Union

import numpy as np

from spectral_index.discrete import GridTorus, WeightField
from spectral_index.exceptions import GridMismatchError, InvalidConfigError

logger = logging.getLogger(__name__)

DEFAULT_MODES = 2
DEFAULT_TERMS = 4


def trigonometric_field(
    grid: GridTorus,
    rng: np.random.Generator,
    offset: float = 0.0,
    amplitude: float = 1.0,
    modes: int = DEFAULT_MODES,
    terms: int = DEFAULT_TERMS,
) -> np.ndarray:
    """Random sum of `terms` plane waves cos(2 pi (k x / l1 + l y / l2) + phase) with 0 < |(k, l)| <= modes.

    The sum is normalised by the total coefficient mass, so it never leaves [offset - amplitude, offset + amplitude].
    """
    x, y = grid.coordinates()
    total = np.zeros(grid.resolution)
    mass = 0.0
    for _ in range(terms):
        k, l = 0, 0
        while k == 0 and l == 0:
            k = int(rng.integers(0, modes + 1))
            l = int(rng.integers(-modes, modes + 1))  # noqa: E741
        coefficient = rng.normal()
        phase = rng.uniform(0.0, 2 * math.pi)
        total += coefficient * np.cos(2 * math.pi * (k * x / grid.periods[0] + l * y / grid.periods[1]) + phase)
        mass += abs(coefficient)
    return grid.field(offset + amplitude * total / mass)


def random_potential(
    grid: GridTorus, rng: np.random.Generator, base: float = 4.0, amplitude: float = 1.0
) -> np.ndarray:
    """A nonconstant potential q oscillating around `base`."""
    return trigonometric_field(grid, rng, offset=base, amplitude=amplitude)


def random_weight(grid: GridTorus, rng: np.random.Generator, low: float = 0.5, high: float = 1.5) -> WeightField:
    """A positive weight with values in [low, high]."""
    return WeightField(values=trigonometric_field(grid, rng, offset=(low + high) / 2, amplitude=(high - low) / 2))


def write_field_csv(path: Union[str, pathlib.Path], grid: GridTorus, values: np.ndarray) -> None:
    """Write node values as an N1 x N2 comma separated grid, row i holding the nodes (i, 0..N2-1)."""
    np.savetxt(path, grid.field(values).reshape(grid.resolution), delimiter=",", fmt="%.17g")
    logger.debug(f"Wrote a {grid.resolution} field to {path}.")


def read_field_csv(path: Union[str, pathlib.Path], grid: GridTorus) -> np.ndarray:
    """Read a field written by `write_field_csv`.

    Raises:
        InvalidConfigError: The file cannot be read.
        GridMismatchError: The file does not hold one value per grid node.
    """
    try:
        values = np.loadtxt(path, delimiter=",", ndmin=2)
    except OSError as err:
        raise InvalidConfigError(f"Could not read field file {path}: {err}")
    except ValueError as err:
        raise GridMismatchError(f"Field file {path} is not a numeric grid: {err}")
    return grid.field(values)
