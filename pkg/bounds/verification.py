"""
Property suites behind the verify command

Identity suites check the exact kernels over fixed grids; oracle and sandwich
suites draw seeded random joints and compare every bound with exact
enumeration. Each suite records the parameters of every failing case so a
failure can be reproduced.
"""

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import wraps

import numpy as np

from .combinatorics import (
    alternating_form_coefficient,
    binomial_table,
    enumerated_follow_probability,
    indicator_sum,
    optimal_coefficient,
    permutation_weight,
    tail_identity,
)
from .engine import (
    Direction,
    classical_bound,
    coefficient_bound,
    permutation_average_bound,
    shifted_moment_floor,
    tail_max_bound,
)
from .events import from_joint, random_joint, relabel, s_sums
from .oracle import (
    expected_binom_shifted,
    inclusion_exclusion_exact,
    moments,
    prob_at_least,
    remainder_decomposition,
)

logger = logging.getLogger(__name__)

ORACLE_TOLERANCE = 1e-9
REMAINDER_FLOOR = -1e-12
MAX_VERIFY_N = 10


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self):
        return not self.failures

    def check(self, ok, **params):
        self.cases += 1
        if not ok:
            self.failures.append(params)


def _timed(func):
    @wraps(func)
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = func(*args, **kwargs)
        result.seconds = time.perf_counter() - start
        logger.info('Suite %s: %d cases in %.2fs', result.name, result.cases, result.seconds)
        return result
    return wrapper


# ==================== Identity suites ====================

@_timed
def indicator_suite(limit=20):
    suite = SuiteResult('indicator identity')
    for m in range(0, limit + 1):
        for r in range(1, limit + 1):
            suite.check(indicator_sum(m, r) == (1 if m >= r else 0), m=m, r=r)
    return suite


@_timed
def tail_identity_suite(limit=20):
    suite = SuiteResult('tail identity')
    for m in range(0, limit + 1):
        for k in range(0, limit + 1):
            for r in range(0, k + 1):
                sides = tail_identity(m, k, r)
                suite.check(sides.lhs == sides.rhs, m=m, k=k, r=r)
    return suite


@_timed
def follow_probability_suite(cap=8):
    suite = SuiteResult('follow probability')
    for k in range(1, cap):
        for s in range(1, cap - k + 1):
            suite.check(enumerated_follow_probability(k, s) == permutation_weight(k, s), k=k, s=s)
    return suite


@_timed
def telescoping_suite(limit=12):
    suite = SuiteResult('weight telescoping')
    for n in range(2, limit + 1):
        for k in range(1, n):
            total = sum((permutation_weight(k, s) for s in range(1, n - k + 1)), Fraction(0))
            suite.check(total == 1 - Fraction(k, n), n=n, k=k)
    return suite


@_timed
def coefficient_suite(limit=15):
    suite = SuiteResult('coefficient equality')
    for n in range(2, limit + 1):
        for k in range(1, n):
            for r in range(1, k + 1):
                suite.check(
                    optimal_coefficient(n, k, r) == alternating_form_coefficient(n, k, r),
                    n=n, k=k, r=r,
                )
    return suite


@_timed
def pascal_suite():
    suite = SuiteResult('pascal recurrence')
    table = binomial_table()
    violations = table.pascal_violations()
    suite.cases = len(table.rows)
    suite.failures = [{'t': t, 's': s} for t, s in violations]
    return suite


# ==================== Oracle suites ====================

def _oracle_joints(max_n, trials, seed):
    for trial in range(trials):
        n = 1 + trial % max_n
        yield trial, random_joint(n, seed + trial)


@_timed
def inclusion_exclusion_suite(max_n, trials, seed):
    suite = SuiteResult('complete inclusion-exclusion')
    for trial, joint in _oracle_joints(max_n, trials, seed):
        s = s_sums(from_joint(joint, joint.n))
        direct = moments(joint, joint.n)
        for j in range(1, joint.n + 1):
            suite.check(
                abs(s.value(j) - direct.value(j)) <= ORACLE_TOLERANCE,
                trial=trial, n=joint.n, moment=j,
            )
        for r in range(1, joint.n + 1):
            error = abs(inclusion_exclusion_exact(s, r, joint.n) - prob_at_least(joint, r))
            suite.check(error <= ORACLE_TOLERANCE, trial=trial, n=joint.n, r=r, error=error)
    return suite


@_timed
def remainder_suite(max_n, trials, seed):
    suite = SuiteResult('remainder decomposition')
    for trial, joint in _oracle_joints(max_n, trials, seed):
        for k in range(1, joint.n + 1):
            for r in range(1, k + 1):
                parts = remainder_decomposition(joint, r, k)
                error = abs(parts.reconstructed - prob_at_least(joint, r))
                suite.check(
                    error <= ORACLE_TOLERANCE and parts.remainder >= REMAINDER_FLOOR,
                    trial=trial, n=joint.n, r=r, k=k, error=error, remainder=parts.remainder,
                )
    return suite


@_timed
def moment_floor_suite(max_n, trials, seed):
    suite = SuiteResult('shifted moment floor')
    for trial, joint in _oracle_joints(max_n, trials, seed):
        n = joint.n
        s_full = s_sums(from_joint(joint, n))
        for k in range(0, n):
            for i in range(1, k + 2):
                floor = shifted_moment_floor(s_full.value(k + 1), n, k, i)
                actual = expected_binom_shifted(joint, i, k + 1 - i)
                suite.check(actual >= floor - ORACLE_TOLERANCE, trial=trial, n=n, k=k, i=i)
    return suite


# ==================== Sandwich suites ====================

def _holds(row, exact, flip_parity):
    direction = row.direction
    if flip_parity:
        direction = Direction.UPPER if direction == Direction.LOWER else Direction.LOWER
    if direction == Direction.LOWER:
        return row.value <= exact + ORACLE_TOLERANCE
    return row.value >= exact - ORACLE_TOLERANCE


@_timed
def sandwich_suite(max_n, trials, seed, relabelings=5, flip_parity=False):
    """Every bound against exact P(X >= r) for all 1 <= r <= k <= n-1"""
    suite = SuiteResult('sandwich')
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        n = 2 + trial % max(1, max_n - 1)
        joint = random_joint(n, seed + trial)
        exact = {r: prob_at_least(joint, r) for r in range(1, n)}
        for k in range(1, n):
            system = from_joint(joint, k + 1)
            s = s_sums(system)
            renumbered = [relabel(system, rng.permutation(n) + 1) for _ in range(relabelings)]
            for r in range(1, k + 1):
                rows = [
                    classical_bound(s, r, k),
                    coefficient_bound(s, n, r, k),
                    tail_max_bound(system, r, k),
                ]
                if r == 1:
                    rows.append(permutation_average_bound(system, k))
                rows.extend(tail_max_bound(other, r, k, labeling_note='renumbered') for other in renumbered)
                for row in rows:
                    suite.check(
                        _holds(row, exact[r], flip_parity),
                        trial=trial, n=n, r=r, k=k, method=str(row.method),
                        note=row.labeling_note, value=row.value, exact=exact[r],
                    )
    return suite


def run_all(max_n=8, trials=500, seed=42, relabelings=5, flip_parity=False):
    return [
        indicator_suite(),
        tail_identity_suite(),
        follow_probability_suite(),
        telescoping_suite(),
        coefficient_suite(),
        pascal_suite(),
        inclusion_exclusion_suite(max_n, trials, seed),
        remainder_suite(max_n, trials, seed),
        moment_floor_suite(max_n, trials, seed),
        sandwich_suite(max_n, trials, seed, relabelings=relabelings, flip_parity=flip_parity),
    ]
