"""
Unit tests for the exact oracle
"""

import numpy as np
from django.test import SimpleTestCase

from bounds.benchmark import benchmark_joint
from bounds.events import JointDistribution, SSums, from_joint, independent_joint, random_joint, s_sums
from bounds.exceptions import DomainError
from bounds.oracle import (
    count_pmf,
    expected_binom_shifted,
    inclusion_exclusion_exact,
    moments,
    prob_at_least,
    remainder_decomposition,
)
from bounds.verification import inclusion_exclusion_suite, remainder_suite


def unit_mass(n, mask):
    mass = np.zeros(1 << n)
    mass[mask] = 1.0
    return JointDistribution(n=n, mass=mass)


class CountPmfTest(SimpleTestCase):
    """Test the distribution of the number of occurring events"""

    def test_unit_mass(self):
        self.assertEqual(count_pmf(unit_mass(4, 15)).probabilities, (0.0, 0.0, 0.0, 0.0, 1.0))

    def test_fair_coins(self):
        pmf = count_pmf(independent_joint([0.5, 0.5]))
        self.assertEqual(pmf.probabilities, (0.25, 0.5, 0.25))
        self.assertEqual(pmf.n, 2)

    def test_benchmark_none_occur(self):
        self.assertAlmostEqual(count_pmf(benchmark_joint()).probabilities[0], 0.233669, delta=1e-6)


class ProbAtLeastTest(SimpleTestCase):
    """Test exact P(X >= r)"""

    def setUp(self):
        """Set up a random four-event joint"""
        self.joint = random_joint(4, 5)

    def test_edges(self):
        self.assertEqual(prob_at_least(self.joint, 0), 1.0)
        self.assertEqual(prob_at_least(self.joint, 5), 0.0)
        with self.assertRaises(DomainError):
            prob_at_least(self.joint, 6)

    def test_decreasing_in_r(self):
        values = [prob_at_least(self.joint, r) for r in range(1, 6)]
        self.assertEqual(values, sorted(values, reverse=True))

    def test_benchmark(self):
        self.assertAlmostEqual(prob_at_least(benchmark_joint(), 1), 0.766331, delta=1e-6)


class ShiftedExpectationTest(SimpleTestCase):
    """Test E[C(X - i, m)]"""

    def test_unshifted_is_moment(self):
        joint = random_joint(5, 9)
        system = from_joint(joint, 5)
        s = s_sums(system)
        for j in range(1, 6):
            with self.subTest(j=j):
                self.assertAlmostEqual(expected_binom_shifted(joint, 0, j), s.value(j), delta=1e-12)
                self.assertAlmostEqual(moments(joint, 5).value(j), s.value(j), delta=1e-12)

    def test_benchmark_remainder(self):
        self.assertAlmostEqual(expected_binom_shifted(benchmark_joint(), 1, 2), 0.168831, delta=1e-6)

    def test_unit_mass(self):
        self.assertEqual(expected_binom_shifted(unit_mass(3, 7), 1, 2), 1.0)

    def test_moments_beyond_n_vanish(self):
        self.assertEqual(moments(random_joint(2, 1), 4).values[2:], (0.0, 0.0))

    def test_negative_arguments(self):
        with self.assertRaises(DomainError):
            expected_binom_shifted(random_joint(2, 1), -1, 2)


class InclusionExclusionTest(SimpleTestCase):
    """Test the complete alternating sum"""

    def test_two_fair_events(self):
        s = SSums((1.0, 0.25))
        self.assertAlmostEqual(inclusion_exclusion_exact(s, 1, 2), 0.75, places=15)
        self.assertAlmostEqual(inclusion_exclusion_exact(s, 2, 2), 0.25, places=15)

    def test_matches_oracle(self):
        for seed in range(20):
            joint = random_joint(1 + seed % 8, seed)
            s = s_sums(from_joint(joint, joint.n))
            for r in range(1, joint.n + 1):
                with self.subTest(seed=seed, r=r):
                    self.assertAlmostEqual(
                        inclusion_exclusion_exact(s, r, joint.n),
                        prob_at_least(joint, r),
                        delta=1e-9,
                    )

    def test_needs_full_depth(self):
        with self.assertRaises(DomainError):
            inclusion_exclusion_exact(SSums((1.0,)), 1, 2)


class RemainderDecompositionTest(SimpleTestCase):
    """Test the truncated-sum-plus-remainder split of P(X >= r)"""

    def test_benchmark(self):
        parts = remainder_decomposition(benchmark_joint(), 1, 2)
        self.assertAlmostEqual(parts.partial, 0.5975, delta=1e-12)
        self.assertAlmostEqual(parts.remainder, 0.168831, delta=1e-6)
        self.assertAlmostEqual(parts.reconstructed, 0.766331, delta=1e-6)
        self.assertEqual(parts.sign, 1)

    def test_empty_atom(self):
        parts = remainder_decomposition(unit_mass(3, 0), 1, 2)
        self.assertEqual((parts.partial, parts.remainder, parts.reconstructed), (0.0, 0.0, 0.0))

    def test_sign_follows_parity(self):
        joint = random_joint(4, 2)
        self.assertEqual(remainder_decomposition(joint, 1, 1).sign, -1)
        self.assertEqual(remainder_decomposition(joint, 1, 2).sign, 1)
        self.assertEqual(remainder_decomposition(joint, 2, 2).sign, -1)

    def test_reconstruction(self):
        for seed in range(15):
            joint = random_joint(2 + seed % 6, 100 + seed)
            n = joint.n
            for k in range(1, n + 1):
                for r in range(1, k + 1):
                    with self.subTest(seed=seed, r=r, k=k):
                        parts = remainder_decomposition(joint, r, k)
                        self.assertGreaterEqual(parts.remainder, -1e-12)
                        self.assertAlmostEqual(parts.reconstructed, prob_at_least(joint, r), delta=1e-9)

    def test_full_order(self):
        joint = random_joint(4, 8)
        parts = remainder_decomposition(joint, 4, 4)
        self.assertAlmostEqual(parts.partial, s_sums(from_joint(joint, 4)).value(4), delta=1e-12)
        self.assertAlmostEqual(parts.reconstructed, prob_at_least(joint, 4), delta=1e-12)

    def test_k_below_r(self):
        with self.assertRaises(DomainError):
            remainder_decomposition(random_joint(3, 0), 2, 1)


class OracleAgreementTest(SimpleTestCase):
    """Test inclusion-exclusion and the remainder decomposition on 200 joints with n up to 10"""

    def test_complete_inclusion_exclusion(self):
        suite = inclusion_exclusion_suite(max_n=10, trials=200, seed=42)
        self.assertEqual(suite.failures, [])
        self.assertGreater(suite.cases, 200)

    def test_remainder_decomposition(self):
        suite = remainder_suite(max_n=10, trials=200, seed=42)
        self.assertEqual(suite.failures, [])
