#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
from fractions import Fraction
from unittest import TestCase

import numpy as np

from spectral_index._internal.random_fields import random_potential, random_weight
from spectral_index.closed_form import laplace_spectrum
from spectral_index.comparison import (
    CertificationStatus,
    ComparisonBranch,
    certify_constantS,
    certify_rmin,
    certify_rstability,
    certify_Sbig,
    check_comparison,
    inf_ratio,
    laplacian_index_bound,
    strengthened_index_bound,
)
from spectral_index.discrete import (
    DISCRETE_MERGE_TOLERANCE,
    WeightField,
    add_potential,
    build_laplacian,
    weighted_eigenvalues,
)
from spectral_index.exceptions import CertifierInputError, NonPositiveWeightError, UncertifiedCountError
from spectral_index.spectra import Spectrum, shift
from tests.factories import great_sphere, make_clifford_laplace_spectrum, make_grid, make_rng, make_spectrum


class TestInfRatio(TestCase):
    def test_exact_constants_give_exact_ratio(self):
        ratio = inf_ratio(3, 2)

        self.assertEqual(ratio.value, Fraction(3, 2))
        self.assertTrue(ratio.constant)

    def test_float_constants(self):
        self.assertEqual(inf_ratio(1.0, 2).value, 0.5)

    def test_fields_report_their_minimum(self):
        ratio = inf_ratio(np.array([2.0, 6.0, 4.0]), np.array([1.0, 2.0, 1.0]))

        self.assertEqual(ratio.value, 2.0)
        self.assertFalse(ratio.constant)

    def test_proportional_fields_are_constant(self):
        p = np.array([0.5, 1.0, 1.5])

        ratio = inf_ratio(2.5 * p, WeightField(values=p))

        self.assertAlmostEqual(ratio.value, 2.5)
        self.assertTrue(ratio.constant)

    def test_rejects_non_positive_weight(self):
        with self.assertRaises(NonPositiveWeightError):
            inf_ratio(1, 0)
        with self.assertRaises(NonPositiveWeightError):
            inf_ratio(np.ones(2), np.array([1.0, -1.0]))


class TestCheckComparison(TestCase):
    def setUp(self):
        self.spec_l = make_clifford_laplace_spectrum()

    def test_nonconstant_branch_holds(self):
        spec_lhat = make_spectrum((-1, 1), (Fraction(1, 2), 4), (3, 4), cutoff=5)

        report = check_comparison(self.spec_l, spec_lhat, np.array([1.0, 2.0]), 1, 2)

        self.assertEqual(report.branch, ComparisonBranch.NONCONSTANT)
        self.assertEqual(report.a0, 1.0)
        self.assertEqual((report.lhs_count, report.rhs_count), (5, 5))
        self.assertTrue(report.verdict)
        self.assertEqual(report.margin, 0)

    def test_nonconstant_branch_reports_violation(self):
        spec_lhat = make_spectrum((-1, 1), (3, 8), cutoff=5)

        report = check_comparison(self.spec_l, spec_lhat, np.array([1.0, 2.0]), 1, 2)

        self.assertFalse(report.verdict)
        self.assertEqual(report.margin, -4)

    def test_constant_branch_requires_both_equalities(self):
        report = check_comparison(self.spec_l, shift(self.spec_l, 3), 3, 1, 4)

        self.assertEqual(report.branch, ComparisonBranch.CONSTANT)
        self.assertEqual((report.lhs_count, report.rhs_count), (9, 9))
        self.assertEqual((report.strict_lhs_count, report.strict_rhs_count), (5, 5))
        self.assertTrue(report.verdict)

    def test_constant_branch_detects_wrong_shift(self):
        report = check_comparison(self.spec_l, shift(self.spec_l, 2), 3, 1, 4)

        self.assertFalse(report.verdict)

    def test_threshold_beyond_cutoff_is_uncertified(self):
        with self.assertRaises(UncertifiedCountError):
            check_comparison(self.spec_l, shift(self.spec_l, 3), 3, 1, 9)

    def test_serialises_branch_and_counts(self):
        document = check_comparison(self.spec_l, shift(self.spec_l, 3), 3, 1, 4).to_dict()

        self.assertEqual(document["branch"], "constant")
        self.assertEqual(document["a0"], 3.0)
        self.assertTrue(document["verdict"])


class TestComparisonOnRandomPencils(TestCase):
    def test_nonconstant_potentials_at_every_threshold(self):
        grid = make_grid(6)
        laplacian = build_laplacian(grid)
        for seed in range(10):
            rng = make_rng(seed)
            q = random_potential(grid, rng)
            weight = random_weight(grid, rng)
            spec_l = Spectrum.from_values(weighted_eigenvalues(laplacian, weight), tolerance=DISCRETE_MERGE_TOLERANCE)
            spec_lhat = Spectrum.from_values(
                weighted_eigenvalues(add_potential(laplacian, q), weight), tolerance=DISCRETE_MERGE_TOLERANCE
            )
            for a in spec_l.values[:12]:
                report = check_comparison(spec_l, spec_lhat, q, weight, a)
                self.assertEqual(report.branch, ComparisonBranch.NONCONSTANT)
                self.assertTrue(report.verdict, f"seed {seed}, a = {a}")

    def test_constant_ratio_shifts_weighted_spectrum(self):
        grid = make_grid(6)
        laplacian = build_laplacian(grid)
        weight = random_weight(grid, make_rng(5))
        q = 2.0 * weight.values

        values = weighted_eigenvalues(laplacian, weight)
        hat_values = weighted_eigenvalues(add_potential(laplacian, q), weight)

        np.testing.assert_allclose(hat_values, values - 2.0, atol=1e-8)


class TestIndexBound(TestCase):
    def test_clifford_bound(self):
        report = laplacian_index_bound(make_clifford_laplace_spectrum(), 2)

        self.assertEqual(report.bound, 5)
        self.assertEqual(report.contributing, ((0, 1), (2, 4)))
        self.assertEqual(report.lambda1, 2)
        self.assertEqual(report.multiplicity_at_n, 4)
        self.assertTrue(report.coordinate_multiplicity_ok)
        self.assertFalse(report.lambda1_below_n)
        self.assertIsNone(strengthened_index_bound(make_clifford_laplace_spectrum(), 2))

    def test_small_first_eigenvalue_strengthens_bound(self):
        spec = make_spectrum((0, 1), (1, 3), (2, 5), cutoff=3)

        self.assertTrue(laplacian_index_bound(spec, 2).lambda1_below_n)
        self.assertEqual(strengthened_index_bound(spec, 2), 9)

    def test_large_multiplicity_at_n_strengthens_bound(self):
        spec = make_spectrum((0, 1), (2, 5), cutoff=3)

        self.assertTrue(laplacian_index_bound(spec, 2).multiplicity_exceeds_coordinates)
        self.assertEqual(strengthened_index_bound(spec, 2), 6)

    def test_strengthened_bound_is_the_spectral_count_on_non_full_spectra(self):
        spec = make_spectrum((0, 1), (1, 1), cutoff=3)

        with self.assertLogs("spectral_index.comparison", level="WARNING"):
            bound = strengthened_index_bound(spec, 2)

        self.assertEqual(bound, 2)
        self.assertEqual(bound, laplacian_index_bound(spec, 2).bound)

    def test_great_sphere_is_flagged_as_not_full(self):
        report = laplacian_index_bound(laplace_spectrum(great_sphere(3), 4), 3)

        self.assertEqual(report.bound, 5)
        self.assertFalse(report.coordinate_multiplicity_ok)

    def test_needs_spectrum_beyond_n(self):
        with self.assertRaises(UncertifiedCountError):
            laplacian_index_bound(make_spectrum((0, 1), cutoff=2), 2)


class TestCertifyConstantS(TestCase):
    def test_clifford_is_rigidity_regime(self):
        report = certify_constantS(make_clifford_laplace_spectrum(), 2, 2)

        self.assertEqual(report.status, CertificationStatus.RIGIDITY)
        self.assertEqual(report.bound, 5)
        self.assertTrue(report.holds)

    def test_large_norm_with_floors_met(self):
        spec = make_spectrum((0, 1), (1, 2), (2, 4), (3, 4), cutoff=6)

        report = certify_constantS(spec, 2, 3)

        self.assertEqual(report.status, CertificationStatus.CERTIFIED)
        self.assertEqual(report.bound, 11)
        self.assertEqual(report.guaranteed, 9)
        self.assertTrue(report.holds)

    def test_unmet_floor_is_a_hypothesis_failure(self):
        spec = make_spectrum((0, 1), (2, 4), (3, 2), cutoff=6)

        report = certify_constantS(spec, 2, 3)

        self.assertEqual(report.status, CertificationStatus.HYPOTHESIS_FAILURE)
        self.assertIsNone(report.bound)
        self.assertEqual(report.unmet_floors, ("multiplicity_at_S",))
        self.assertTrue(report.holds)

    def test_rejects_non_positive_norm(self):
        with self.assertRaises(CertifierInputError):
            certify_constantS(make_clifford_laplace_spectrum(), 2, 0)


class TestCertifySbig(TestCase):
    def test_floors_met(self):
        report = certify_Sbig(make_spectrum((-5, 5), (-2, 4), (0, 1), cutoff=1), 2)

        self.assertEqual(report.status, CertificationStatus.CERTIFIED)
        self.assertEqual(report.bound, 9)
        self.assertEqual(report.counts["index"], 9)

    def test_clifford_jacobi_spectrum_fails_floors(self):
        report = certify_Sbig(shift(make_clifford_laplace_spectrum(), 4), 2)

        self.assertEqual(report.status, CertificationStatus.HYPOTHESIS_FAILURE)
        self.assertIn("N_below_minus_n", report.unmet_floors)


class TestCertifyRmin(TestCase):
    def test_clifford_rigidity(self):
        report = certify_rmin(make_clifford_laplace_spectrum(), 2, 0, 1, Fraction(-1), weighted=True)

        self.assertEqual(report.status, CertificationStatus.RIGIDITY)
        self.assertEqual(report.bound, 5)
        self.assertEqual(report.counts["N_at_or_below_position"], 5)
        self.assertTrue(report.holds)

    def test_separated_eigenvalues(self):
        spec = make_spectrum((0, 1), (2, 4), (3, 4), cutoff=6)

        report = certify_rmin(spec, 2, 0, 1, Fraction(-3, 2))

        self.assertEqual(report.status, CertificationStatus.CERTIFIED)
        self.assertEqual(report.bound, 9)
        self.assertEqual(report.guaranteed, 9)

    def test_positive_higher_function_is_hypothesis_failure(self):
        report = certify_rmin(make_clifford_laplace_spectrum(), 2, 0, 1, Fraction(1, 2))

        self.assertEqual(report.status, CertificationStatus.HYPOTHESIS_FAILURE)
        self.assertIsNone(report.bound)

    def test_rejects_non_positive_first_function(self):
        with self.assertRaises(CertifierInputError):
            certify_rmin(make_clifford_laplace_spectrum(), 2, 0, 0, -1)


class TestCertifyRStability(TestCase):
    def test_clifford(self):
        report = certify_rstability(make_clifford_laplace_spectrum(), 2, 0, 1, Fraction(-1))

        self.assertEqual(report.status, CertificationStatus.CERTIFIED)
        self.assertEqual(
            report.counts,
            {"N_below_zero": 1, "multiplicity_at_zero": 4, "N_at_or_below_zero": 5, "r_index": 5},
        )
        self.assertEqual(report.guaranteed, 5)

    def test_vanishing_higher_function_is_hypothesis_failure(self):
        report = certify_rstability(make_clifford_laplace_spectrum(), 2, 0, 1, 0)

        self.assertEqual(report.status, CertificationStatus.HYPOTHESIS_FAILURE)
        self.assertEqual(report.to_dict()["status"], "hypothesis_failure")
