"""
Unit tests for the bound families, the numbering search and report assembly
"""

import itertools
import math

import numpy as np
from django.test import SimpleTestCase

from bounds.benchmark import benchmark_joint, benchmark_system
from bounds.engine import (
    BoundMethod,
    Direction,
    SearchMode,
    best_numbering_search,
    bounds_report,
    classical_bound,
    coefficient_bound,
    direction_for,
    mc_permutation_estimate,
    partial_sum,
    permutation_average_bound,
    permutation_average_correction,
    shifted_moment_floor,
    tail_max_bound,
    tail_max_correction,
    w_values,
)
from bounds.events import (
    EventSystem,
    SSums,
    from_independent,
    from_joint,
    random_joint,
    relabel,
    s_sums,
)
from bounds.exceptions import DomainError, InputValidationError, InsufficientDataError
from bounds.oracle import expected_binom_shifted, inclusion_exclusion_exact, prob_at_least

# Exact values for the six-event product-form system at r = 1, k = 2.
EXACT_P = 0.766331
EXACT_REMAINDER = 0.168831


def three_event_system(triple=0.05):
    table = {(1,): 0.4, (2,): 0.5, (3,): 0.3, (1, 2): 0.2, (1, 3): 0.1, (2, 3): 0.15, (1, 2, 3): triple}
    return EventSystem(n=3, depth=3, table=table)


class DirectionTest(SimpleTestCase):

    def test_parity_rule(self):
        self.assertEqual(direction_for(1, 2), Direction.LOWER)
        self.assertEqual(direction_for(1, 3), Direction.UPPER)
        self.assertEqual(direction_for(2, 2), Direction.UPPER)
        self.assertEqual(direction_for(2, 3), Direction.LOWER)


class ClassicalBoundTest(SimpleTestCase):
    """Test truncated inclusion-exclusion"""

    def setUp(self):
        """Set up the product-form reference moments"""
        self.s = s_sums(benchmark_system())

    def test_benchmark_truncations(self):
        self.assertAlmostEqual(partial_sum(self.s, 1, 2), 0.5975, delta=5e-5)
        self.assertAlmostEqual(partial_sum(self.s, 1, 3), 0.7955, delta=5e-5)
        lower = classical_bound(self.s, 1, 2)
        upper = classical_bound(self.s, 1, 3)
        self.assertEqual(lower.direction, Direction.LOWER)
        self.assertEqual(upper.direction, Direction.UPPER)
        self.assertEqual(lower.correction, 0.0)
        self.assertAlmostEqual(lower.value, 0.5975, delta=5e-5)
        self.assertAlmostEqual(upper.value, 0.7955, delta=5e-5)

    def test_single_term(self):
        for r in (1, 2, 3):
            with self.subTest(r=r):
                self.assertEqual(partial_sum(self.s, r, r), self.s.value(r))

    def test_errors(self):
        with self.assertRaises(InsufficientDataError):
            partial_sum(self.s, 1, 4)
        with self.assertRaises(DomainError):
            classical_bound(self.s, 3, 2)

    def test_full_depth_is_exact(self):
        joint = random_joint(2, 4)
        s = s_sums(from_joint(joint, 2))
        self.assertAlmostEqual(classical_bound(s, 1, 2).value, prob_at_least(joint, 1), delta=1e-12)
        for seed in range(5):
            joint = random_joint(5, seed)
            s = s_sums(from_joint(joint, 5))
            for r in range(1, 6):
                with self.subTest(seed=seed, r=r):
                    self.assertAlmostEqual(
                        classical_bound(s, r, 5).value,
                        inclusion_exclusion_exact(s, r, 5),
                        delta=1e-9,
                    )

    def test_clamped_value(self):
        s = SSums((3.0, 3.0, 1.0))
        result = classical_bound(s, 1, 2)
        self.assertEqual(result.value, 0.0)
        result = classical_bound(SSums((3.0, 1.0)), 1, 1)
        self.assertEqual(result.value, 3.0)
        self.assertEqual(result.clamped, 1.0)


class CoefficientBoundTest(SimpleTestCase):
    """Test the bound using the optimal multiple of S_{k+1}"""

    def test_benchmark(self):
        result = coefficient_bound(s_sums(benchmark_system()), 6, 1, 2)
        self.assertEqual(result.method, BoundMethod.COEFFICIENT)
        self.assertEqual(result.direction, Direction.LOWER)
        self.assertAlmostEqual(result.correction, 0.0990, delta=5e-5)
        self.assertAlmostEqual(result.value, 0.6965, delta=5e-5)
        self.assertAlmostEqual(result.correction, 0.0990075, places=12)
        self.assertLessEqual(result.value, EXACT_P)

    def test_shifted_moment_floor(self):
        s3 = s_sums(benchmark_system()).value(3)
        self.assertAlmostEqual(shifted_moment_floor(s3, 6, 2, 1), 0.0990, delta=5e-5)
        self.assertEqual(shifted_moment_floor(0.0, 6, 2, 1), 0.0)
        self.assertAlmostEqual(shifted_moment_floor(s3, 6, 2, 3), s3 / 20, places=15)
        with self.assertRaises(DomainError):
            shifted_moment_floor(s3, 6, 2, 4)

    def test_zero_top_moment_matches_classical(self):
        s = SSums((0.9, 0.2, 0.0))
        self.assertEqual(coefficient_bound(s, 4, 1, 2).value, classical_bound(s, 1, 2).value)

    def test_all_ones_system_is_tight(self):
        """Test the lower bound reaches 1 when every event is certain"""
        for n, r, k in [(4, 1, 2), (5, 2, 3), (6, 1, 4), (6, 3, 4)]:
            with self.subTest(n=n, r=r, k=k):
                s = s_sums(from_independent([1.0] * n, k + 1))
                result = coefficient_bound(s, n, r, k)
                self.assertEqual(result.direction, Direction.LOWER)
                self.assertLessEqual(result.value, 1.0 + 1e-12)
                self.assertAlmostEqual(result.value, 1.0, delta=1e-12)

    def test_shifted_moment_floor_holds(self):
        for seed in range(10):
            joint = random_joint(2 + seed % 5, seed)
            n = joint.n
            s = s_sums(from_joint(joint, n))
            for k in range(0, n):
                for i in range(1, k + 2):
                    with self.subTest(seed=seed, k=k, i=i):
                        self.assertGreaterEqual(
                            expected_binom_shifted(joint, i, k + 1 - i),
                            shifted_moment_floor(s.value(k + 1), n, k, i) - 1e-9,
                        )

    def test_errors(self):
        s = s_sums(benchmark_system())
        with self.assertRaises(InsufficientDataError):
            coefficient_bound(s, 6, 1, 3)
        with self.assertRaises(DomainError):
            coefficient_bound(SSums((1.0, 0.5)), 2, 1, 2)


class TailMaxBoundTest(SimpleTestCase):
    """Test the numbering-dependent maximal tail bound"""

    def test_benchmark_natural_order(self):
        result = tail_max_bound(benchmark_system(), 1, 2)
        self.assertEqual(result.labeling_note, 'natural order')
        self.assertAlmostEqual(result.correction, 0.1057, delta=5e-5)
        self.assertAlmostEqual(result.value, 0.7032, delta=5e-5)
        self.assertAlmostEqual(result.correction, 0.10572, places=12)
        self.assertAlmostEqual(result.value, 0.70322, places=12)

    def test_reversal_changes_correction(self):
        reversed_system = relabel(benchmark_system(), [6, 5, 4, 3, 2, 1])
        self.assertAlmostEqual(tail_max_correction(reversed_system, 1, 2), 0.097038, places=12)

    def test_three_events(self):
        system = three_event_system()
        self.assertEqual(tail_max_correction(system, 1, 2), 0.05)

    def test_dominates_single_tail_choice(self):
        """Test the max beats always extending by the first admissible tail"""
        system = from_joint(random_joint(6, 3), 4)
        for r, k in [(1, 2), (1, 3), (2, 3), (3, 3)]:
            terms = []
            for i in range(1, r + 1):
                weight = math.comb(k - i, r - i)
                for head in itertools.combinations(range(1, 7), k + 1 - i):
                    if head[-1] + i <= 6:
                        tail = tuple(range(head[-1] + 1, head[-1] + i + 1))
                        terms.append(weight * system.probability(head + tail))
            with self.subTest(r=r, k=k):
                self.assertLessEqual(math.fsum(terms), tail_max_correction(system, r, k) + 1e-15)

    def test_nonnegative_and_needs_depth(self):
        self.assertGreaterEqual(tail_max_correction(from_joint(random_joint(5, 1), 3), 2, 2), 0.0)
        with self.assertRaises(InsufficientDataError):
            tail_max_bound(benchmark_system(), 1, 3)


class PermutationAverageBoundTest(SimpleTestCase):
    """Test the averaged-numbering bound for r = 1"""

    def test_w_values(self):
        w = w_values(benchmark_system(), (5, 6))
        expected = (0.012144, 0.011592, 0.011040, 0.010488)
        for actual, value in zip(w.values, expected):
            self.assertAlmostEqual(actual, value, places=12)
        self.assertEqual(w.extensions, (4, 3, 2, 1))
        self.assertEqual(len(w_values(three_event_system(), (1, 2)).values), 1)

    def test_w_values_ties(self):
        system = from_independent([0.5] * 4, 2)
        self.assertEqual(w_values(system, (2,)).extensions, (1, 3, 4))

    def test_w_values_errors(self):
        with self.assertRaises(DomainError):
            w_values(benchmark_system(), (1, 1))
        with self.assertRaises(InsufficientDataError):
            w_values(benchmark_system(), (1, 2, 3))

    def test_three_events(self):
        self.assertAlmostEqual(permutation_average_correction(three_event_system(), 2), 0.05, places=15)

    def test_benchmark(self):
        result = permutation_average_bound(benchmark_system(), 2)
        self.assertEqual(result.direction, Direction.LOWER)
        self.assertAlmostEqual(result.correction, 0.103218, delta=2e-5)
        self.assertLessEqual(result.correction, EXACT_REMAINDER)
        self.assertLessEqual(result.value, EXACT_P)

    def test_labeling_invariant(self):
        system = from_joint(random_joint(5, 21), 3)
        base = permutation_average_correction(system, 2)
        rng = np.random.default_rng(0)
        for _ in range(5):
            perm = rng.permutation(5) + 1
            with self.subTest(perm=list(perm)):
                self.assertAlmostEqual(permutation_average_correction(relabel(system, perm), 2), base, delta=1e-12)

    def test_bounded_by_top_extension(self):
        system = from_joint(random_joint(6, 8), 4)
        for k in (1, 2, 3):
            ceiling = math.fsum((1 - k / 6) * w_values(system, subset).values[0] for subset in system.subsets(k))
            with self.subTest(k=k):
                self.assertLessEqual(permutation_average_correction(system, k), ceiling + 1e-15)

    def test_monte_carlo_agrees(self):
        system = benchmark_system()
        estimate = mc_permutation_estimate(system, 2, trials=10000, seed=42)
        direct = permutation_average_correction(system, 2)
        self.assertGreater(estimate.stderr, 0.0)
        self.assertLessEqual(abs(estimate.mean - direct), 4 * estimate.stderr)
        self.assertEqual(estimate, mc_permutation_estimate(system, 2, trials=10000, seed=42))

    def test_monte_carlo_single_subset(self):
        estimate = mc_permutation_estimate(three_event_system(), 2, trials=50, seed=3)
        self.assertAlmostEqual(estimate.mean, 0.05, places=15)
        self.assertAlmostEqual(estimate.stderr, 0.0, places=12)

    def test_monte_carlo_needs_two_trials(self):
        with self.assertRaises(DomainError):
            mc_permutation_estimate(benchmark_system(), 2, trials=1, seed=0)


class NumberingSearchTest(SimpleTestCase):
    """Test the search for the best event numbering"""

    def test_exhaustive_benchmark(self):
        search = best_numbering_search(benchmark_system(), 1, 2, mode=SearchMode.EXHAUSTIVE)
        self.assertEqual(search.examined, 720)
        self.assertGreaterEqual(search.result.correction, 0.10572 - 1e-12)
        self.assertLessEqual(search.result.value, EXACT_P)
        self.assertIn('exhaustive', search.result.labeling_note)

    def test_symmetric_three_events(self):
        search = best_numbering_search(three_event_system(), 1, 2)
        self.assertEqual(search.result.correction, 0.05)
        self.assertEqual(sorted(search.labeling), [1, 2, 3])

    def test_sampled_budget_is_monotone(self):
        system = from_joint(random_joint(6, 13), 3)
        small = best_numbering_search(system, 1, 2, mode=SearchMode.SAMPLED, budget=5, seed=7)
        large = best_numbering_search(system, 1, 2, mode=SearchMode.SAMPLED, budget=50, seed=7)
        self.assertEqual(large.examined, 50)
        self.assertGreaterEqual(large.result.correction, small.result.correction)

    def test_refusals(self):
        with self.assertRaises(DomainError):
            best_numbering_search(from_independent([0.1] * 9, 3), 1, 2, mode=SearchMode.EXHAUSTIVE)
        with self.assertRaises(DomainError):
            best_numbering_search(benchmark_system(), 1, 2, mode=SearchMode.SAMPLED, budget=0)


class BoundsReportTest(SimpleTestCase):
    """Test report assembly"""

    def test_benchmark_report(self):
        report = bounds_report(benchmark_system(), 1, 2, joint=benchmark_joint())
        self.assertEqual([str(row.method) for row in report.rows], BoundMethod.values)
        self.assertEqual(report.failures, [])
        self.assertAlmostEqual(report.exact, EXACT_P, delta=1e-6)
        self.assertAlmostEqual(report.exact_remainder, EXACT_REMAINDER, delta=1e-6)
        self.assertTrue(all(report.verdicts.values()))
        self.assertEqual(set(report.verdicts), set(BoundMethod.values) | {'companion'})
        self.assertEqual(report.companion.direction, Direction.UPPER)
        self.assertAlmostEqual(report.companion.value, 0.7955, delta=5e-5)
        for row in report.rows:
            with self.subTest(method=row.method):
                self.assertLessEqual(row.correction, report.exact_remainder)

    def test_r_two_drops_averaged_numbering(self):
        report = bounds_report(benchmark_system(), 2, 2)
        self.assertEqual(
            [str(row.method) for row in report.rows],
            ['classical', 'theorem3', 'theorem4'],
        )

    def test_shallow_system_aggregates_failures(self):
        report = bounds_report(from_independent([0.2, 0.3, 0.4, 0.5], 2), 1, 2)
        self.assertEqual([str(row.method) for row in report.rows], ['classical'])
        self.assertEqual(report.rows[0].k, 2)
        self.assertEqual(len(report.failures), 3)
        self.assertIsNone(report.companion)

    def test_classical_falls_back_to_depth(self):
        report = bounds_report(from_independent([0.2, 0.3, 0.4, 0.5], 2), 1, 3, methods=['classical'])
        self.assertEqual(report.rows[0].k, 2)

    def test_joint_mismatch(self):
        with self.assertRaises(InputValidationError):
            bounds_report(benchmark_system(), 1, 2, joint=random_joint(3, 0))

    def test_k_below_r(self):
        with self.assertRaises(DomainError):
            bounds_report(benchmark_system(), 3, 2)


class SandwichTest(SimpleTestCase):
    """Test every bound against exact enumeration"""

    def test_random_joints(self):
        rng = np.random.default_rng(5)
        for trial in range(30):
            n = 2 + trial % 5
            joint = random_joint(n, 1000 + trial)
            for k in range(1, n):
                system = from_joint(joint, k + 1)
                renumbered = relabel(system, rng.permutation(n) + 1)
                for r in range(1, k + 1):
                    exact = prob_at_least(joint, r)
                    s = s_sums(system)
                    rows = [
                        classical_bound(s, r, k),
                        coefficient_bound(s, n, r, k),
                        tail_max_bound(system, r, k),
                        tail_max_bound(renumbered, r, k),
                    ]
                    if r == 1:
                        rows.append(permutation_average_bound(system, k))
                    for row in rows:
                        with self.subTest(trial=trial, r=r, k=k, method=str(row.method)):
                            self.assertTrue(row.holds_against(exact))
                            self.assertGreaterEqual(row.correction, 0.0)
