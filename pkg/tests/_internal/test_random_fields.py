#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
import pathlib

from unittest import TestCase

import numpy as np

from hypothesis import given, settings, strategies as st

from spectral_index._internal.random_fields import (
    random_potential,
    random_weight,
    read_field_csv,
    trigonometric_field,
    write_field_csv,
)
from spectral_index.exceptions import GridMismatchError, InvalidConfigError
from tests.factories import make_grid, make_rng, patchfs


class TestTrigonometricField(TestCase):
    @settings(deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_values_stay_in_band(self, seed):
        field = trigonometric_field(make_grid(6), make_rng(seed), offset=4.0, amplitude=1.0)

        self.assertTrue(np.all(field >= 3.0 - 1e-12))
        self.assertTrue(np.all(field <= 5.0 + 1e-12))

    def test_is_deterministic_per_seed(self):
        grid = make_grid(6)

        np.testing.assert_array_equal(random_potential(grid, make_rng(7)), random_potential(grid, make_rng(7)))

    def test_potential_is_not_constant(self):
        self.assertGreater(np.ptp(random_potential(make_grid(6), make_rng(1))), 0.0)

    def test_weight_is_positive(self):
        weight = random_weight(make_grid(6), make_rng(2), low=0.5, high=1.5)

        self.assertGreaterEqual(weight.minimum, 0.5 - 1e-12)
        self.assertLessEqual(float(weight.values.max()), 1.5 + 1e-12)


class TestFieldCsv(TestCase):
    @patchfs
    def test_written_field_reads_back_in_node_order(self, fs):
        grid = make_grid(4)
        values = np.arange(16.0) / 3
        path = pathlib.Path(fs, "q.csv")

        write_field_csv(path, grid, values)

        self.assertEqual(len(path.read_text().splitlines()), 4)
        np.testing.assert_array_equal(read_field_csv(path, grid), values)

    @patchfs
    def test_rejects_field_for_other_grid(self, fs):
        path = pathlib.Path(fs, "q.csv")
        write_field_csv(path, make_grid(4), np.zeros(16))

        with self.assertRaises(GridMismatchError):
            read_field_csv(path, make_grid(6))

    @patchfs
    def test_rejects_non_numeric_file(self, fs):
        path = pathlib.Path(fs, "q.csv")
        path.write_text("a,b\nc,d\n")

        with self.assertRaises(GridMismatchError):
            read_field_csv(path, make_grid(4))

    @patchfs
    def test_missing_file_is_a_config_error(self, fs):
        with self.assertRaises(InvalidConfigError):
            read_field_csv(pathlib.Path(fs, "missing.csv"), make_grid(4))
