#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
import itertools
import math
import pathlib

from unittest import TestCase

import numpy as np

from spectral_index import Operator, grid_spectrum, index_report, model_spectrum, r_index_report
from spectral_index._internal.random_fields import write_field_csv
from spectral_index._internal.reports import load_schema
from spectral_index.comparison import CertificationStatus, ComparisonBranch
from spectral_index.discrete import GridTorus, build_laplacian, clifford_period, solve_weighted
from spectral_index.exceptions import (
    FalsificationError,
    InvalidConfigError,
    InvalidModelError,
    NoRadiusSolutionError,
)
from spectral_index.spectral_index import (
    ComparisonInstance,
    ComparisonSuiteSummary,
    load_model,
    parse_periods,
    run_comparison_suite,
    run_convergence,
)
from tests.factories import clifford_model, great_sphere, make_comparison_report, make_model_json, patchfs

CLIFFORD_PERIODS = (clifford_period(), clifford_period())


def assert_matches_schema(test, name, result):
    schema = load_schema(name)["properties"]["result"]
    test.assertEqual(set(schema["required"]) - set(result), set())


class TestLoadModel(TestCase):
    @patchfs
    def test_reads_model_file(self, fs):
        path = pathlib.Path(fs, "model.json")
        path.write_text(make_model_json((1, "1/3"), (2, "2/3")))

        self.assertEqual(load_model(path), clifford_model(1, 3))

    @patchfs
    def test_missing_file_is_invalid_model(self, fs):
        with self.assertRaises(InvalidModelError):
            load_model(pathlib.Path(fs, "missing.json"))


class TestParsePeriods(TestCase):
    def test_clifford_keyword(self):
        self.assertEqual(parse_periods("Clifford"), CLIFFORD_PERIODS)

    def test_explicit_periods(self):
        self.assertEqual(parse_periods("1.5, 2"), (1.5, 2.0))

    def test_rejects_malformed_periods(self):
        for text in ("abc", "1", "1,2,3", "0,1", "inf,1"):
            with self.assertRaises(InvalidConfigError):
                parse_periods(text)


class TestSpectra(TestCase):
    def test_model_spectrum_for_each_operator(self):
        model = clifford_model(1, 2)

        self.assertEqual(model_spectrum(model, 9).entries, ((0, 1), (2, 4), (4, 4), (8, 4)))
        self.assertEqual(model_spectrum(model, 1, Operator.JACOBI).entries, ((-4, 1), (-2, 4), (0, 4)))
        self.assertEqual(model_spectrum(model, 5, Operator.LR, 0).entries, ((0, 1), (2, 4), (4, 4)))

    def test_grid_spectrum_is_truncated(self):
        spec = grid_spectrum(8, CLIFFORD_PERIODS, 3)

        self.assertEqual(spec.cutoff, 3)
        self.assertEqual([mult for _, mult in spec.entries], [1, 4])
        self.assertAlmostEqual(spec.entries[0][0], 0.0, places=9)

    def test_grid_spectrum_matches_weighted_solver(self):
        grid = GridTorus(periods=CLIFFORD_PERIODS, resolution=(8, 8))

        spec = grid_spectrum(8, CLIFFORD_PERIODS, 12)

        self.assertEqual(spec, solve_weighted(build_laplacian(grid)).truncated(12))

    @patchfs
    def test_grid_spectrum_reads_potential_and_weight(self, fs):
        grid = GridTorus(periods=CLIFFORD_PERIODS, resolution=(8, 8))
        potential, weight = pathlib.Path(fs, "q.csv"), pathlib.Path(fs, "p.csv")
        write_field_csv(potential, grid, np.full(64, 2.0))
        write_field_csv(weight, grid, np.full(64, 2.0))

        spec = grid_spectrum(8, CLIFFORD_PERIODS, 1, str(potential), str(weight))

        self.assertAlmostEqual(spec.entries[0][0], -1.0)
        self.assertEqual(spec.entries[0][1], 1)


class TestIndexReport(TestCase):
    def test_clifford(self):
        report = index_report(clifford_model(1, 2))

        self.assertEqual(report.morse_index, 5)
        self.assertEqual(report.lambda1, 2)
        self.assertEqual(report.bound.bound, 5)
        self.assertIsNone(report.strengthened_bound)
        self.assertTrue(report.coordinates.passed)
        self.assertEqual(
            [certificate.status for certificate in report.certificates],
            [CertificationStatus.RIGIDITY, CertificationStatus.HYPOTHESIS_FAILURE],
        )
        assert_matches_schema(self, "index", report.to_dict())

    def test_great_sphere_has_no_certificates(self):
        report = index_report(great_sphere(3))

        self.assertEqual(report.morse_index, 1)
        self.assertEqual(report.bound.bound, 5)
        self.assertEqual(report.certificates, ())
        self.assertIn(("Morse index", 1), report.summary_rows())


class TestRIndexReport(TestCase):
    def test_first_order_torus(self):
        report = r_index_report(1, 3, 1, weighted=True)

        self.assertEqual(report.n, 3)
        self.assertAlmostEqual(report.r1_squared, 2 / 3)
        self.assertAlmostEqual(report.threshold, 6 * math.sqrt(2))
        self.assertEqual(report.r_index, 6)
        self.assertGreater(report.ellipticity_margin, 0)
        self.assertEqual(report.certificate.status, CertificationStatus.RIGIDITY)
        self.assertEqual(report.certificate.counts["N_at_or_below_position"], 6)
        self.assertEqual(report.stability.status, CertificationStatus.CERTIFIED)
        self.assertIn(("r-index", 6), report.summary_rows())
        assert_matches_schema(self, "r-index", report.to_dict())

    def test_minimal_case_matches_morse_index(self):
        report = r_index_report(2, 5, 0)

        self.assertEqual(report.r_index, 8)
        self.assertTrue(report.eigenfunctions.passed)

    def test_missing_torus(self):
        with self.assertRaises(NoRadiusSolutionError):
            r_index_report(1, 2, 1)

    def test_skips_non_elliptic_root(self):
        report = r_index_report(2, 5, 2)

        self.assertEqual(report.r_index, 8)
        self.assertGreater(report.ellipticity_margin, 0)
        self.assertEqual(report.r_index, r_index_report(3, 5, 2).r_index)

    def test_solvable_tori_up_to_dimension_five_have_r_index_n_plus_three(self):
        solved = 0
        for n in range(2, 6):
            for m, r in itertools.product(range(1, n), range(n)):
                try:
                    report = r_index_report(m, n, r)
                except NoRadiusSolutionError:
                    continue
                solved += 1
                with self.subTest(m=m, n=n, r=r):
                    self.assertEqual(report.r_index, n + 3)
                    self.assertEqual(report.certificate.bound, n + 3)
                    self.assertEqual(report.certificate.status, CertificationStatus.RIGIDITY)

        self.assertGreater(solved, 10)


class TestComparisonSuite(TestCase):
    def test_nonconstant_instances_pass(self):
        summary = run_comparison_suite(resolution=6, seeds=4, progress=False)

        self.assertEqual(summary.passed, 4)
        self.assertEqual(summary.falsified, 0)
        self.assertGreaterEqual(summary.worst_margin, 0)
        self.assertIsNone(summary.worst_shift_error)
        self.assertTrue(all(i.report.branch is ComparisonBranch.NONCONSTANT for i in summary.instances))
        summary.raise_for_falsification()

    def test_weighted_instances_pass(self):
        summary = run_comparison_suite(resolution=6, seeds=3, weighted=True, seed_base=100, progress=False)

        self.assertEqual([instance.seed for instance in summary.instances], [100, 101, 102])
        self.assertEqual(summary.falsified, 0)

    def test_constant_ratio_instances_satisfy_shift_identity(self):
        summary = run_comparison_suite(resolution=6, seeds=3, constant_ratio=True, weighted=True, progress=False)

        self.assertEqual(summary.falsified, 0)
        self.assertLess(summary.worst_shift_error, 1e-8)
        self.assertEqual(summary.to_dict()["branch"], "constant")

    def test_is_deterministic(self):
        first = run_comparison_suite(resolution=6, seeds=2, progress=False).to_dict()
        second = run_comparison_suite(resolution=6, seeds=2, progress=False).to_dict()

        self.assertEqual(first, second)
        assert_matches_schema(self, "compare", first)

    def test_rejects_empty_suite(self):
        with self.assertRaises(InvalidConfigError):
            run_comparison_suite(seeds=0, progress=False)

    def test_full_suite_at_sixteen_squared(self):
        summary = run_comparison_suite(resolution=16, seeds=200, progress=False)

        self.assertEqual(summary.passed, 200)
        self.assertEqual(summary.falsified, 0)

    def test_constant_ratio_suite_at_sixteen_squared(self):
        summary = run_comparison_suite(resolution=16, seeds=50, constant_ratio=True, weighted=True, progress=False)

        self.assertEqual(summary.falsified, 0)
        self.assertLess(summary.worst_shift_error, 1e-8)

    def test_failed_instance_raises_falsification(self):
        summary = ComparisonSuiteSummary(
            resolution=6,
            constant_ratio=False,
            weighted=False,
            instances=(
                ComparisonInstance(seed=0, report=make_comparison_report(), shift_error=None),
                ComparisonInstance(seed=1, report=make_comparison_report(lhs=3, verdict=False), shift_error=None),
            ),
        )

        self.assertEqual(summary.worst_margin, -2)
        with self.assertRaises(FalsificationError):
            summary.raise_for_falsification()

    def test_shift_error_fails_instance(self):
        instance = ComparisonInstance(
            seed=0, report=make_comparison_report(branch=ComparisonBranch.CONSTANT), shift_error=1e-3
        )

        self.assertFalse(instance.passed)


class TestConvergence(TestCase):
    def test_table_matches_schema(self):
        table = run_convergence(CLIFFORD_PERIODS, [8, 16])

        self.assertTrue(table.has_order)
        assert_matches_schema(self, "converge", table.to_dict())


class TestModelFamilies(TestCase):
    def test_clifford_family_index_is_n_plus_three(self):
        for n in range(2, 7):
            for m in range(1, n):
                report = index_report(clifford_model(m, n))

                self.assertEqual(report.morse_index, n + 3, f"m = {m}, n = {n}")
                self.assertEqual(report.bound.bound, report.morse_index, f"m = {m}, n = {n}")
                self.assertEqual(report.bound.multiplicity_at_n, n + 2, f"m = {m}, n = {n}")

    def test_great_spheres_have_index_one(self):
        for n in range(1, 7):
            self.assertEqual(index_report(great_sphere(n)).morse_index, 1)

    def test_lower_bound_holds_on_full_models_and_is_flagged_on_great_spheres(self):
        for n in range(1, 7):
            report = index_report(great_sphere(n))
            self.assertFalse(report.model.is_full)
            self.assertFalse(report.bound.coordinate_multiplicity_ok, f"n = {n}")
        for n in range(2, 7):
            for m in range(1, n):
                report = index_report(clifford_model(m, n))
                self.assertTrue(report.bound.coordinate_multiplicity_ok)
                self.assertLessEqual(report.bound.bound, report.morse_index)
