"""
Bound computation for Simple Bounds

Four families of bounds on P(X >= r) built from intersection probabilities
of order up to k+1:

    classical   truncated inclusion-exclusion to order k
    theorem3    truncation plus the optimal multiple of S_{k+1}
    theorem4    truncation plus, per subset, the largest extension by
                later-numbered events (depends on the numbering)
    theorem5    r = 1 only; the theorem4 correction averaged over all
                numberings, in closed form

A bound is a lower bound when r + k is odd and an upper bound when r + k is
even; corrections are added to or subtracted from the truncated sum
accordingly.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Optional

import numpy as np
from django.db import models

from .combinatorics import binom, optimal_coefficient, permutation_weight, signed_moment_sum
from .events import EventSystem, JointDistribution, SSums, relabel, s_sums
from .exceptions import BoundsError, DomainError, InputValidationError, InsufficientDataError
from .oracle import prob_at_least, remainder_decomposition

logger = logging.getLogger(__name__)

SANDWICH_TOLERANCE = 1e-9
EXHAUSTIVE_MAX_N = 8
NATURAL_ORDER = 'natural order'


class BoundMethod(models.TextChoices):
    """Bound families, in report order"""
    CLASSICAL = 'classical', 'Truncated inclusion-exclusion'
    COEFFICIENT = 'theorem3', 'Optimal S_{k+1} coefficient'
    TAIL_MAX = 'theorem4', 'Maximal tail extension'
    PERMUTATION_AVERAGE = 'theorem5', 'Averaged numbering'


class Direction(models.TextChoices):
    LOWER = 'lower', 'Lower bound'
    UPPER = 'upper', 'Upper bound'


class SearchMode(models.TextChoices):
    EXHAUSTIVE = 'exhaustive', 'Exhaustive'
    SAMPLED = 'sampled', 'Sampled'


def direction_for(r: int, k: int) -> Direction:
    return Direction.LOWER if (r + k) % 2 else Direction.UPPER


@dataclass(frozen=True)
class BoundResult:
    method: str
    r: int
    k: int
    direction: str
    partial: float
    correction: float
    value: float
    clamped: float
    labeling_note: str = ''

    def holds_against(self, exact: float, tolerance: float = SANDWICH_TOLERANCE) -> bool:
        """Sandwich verdict against an exact P(X >= r), on the raw value"""
        if self.direction == Direction.LOWER:
            return self.value <= exact + tolerance
        return self.value >= exact - tolerance


def _assemble(method, r, k, partial, correction, labeling_note='') -> BoundResult:
    direction = direction_for(r, k)
    if direction == Direction.LOWER:
        value = partial + correction
    else:
        value = partial - correction
    return BoundResult(
        method=method,
        r=r,
        k=k,
        direction=direction,
        partial=partial,
        correction=correction,
        value=value,
        clamped=min(1.0, max(0.0, value)),
        labeling_note=labeling_note,
    )


def _require_order(r: int, k: int) -> None:
    if r < 1:
        raise DomainError('Requires r >= 1', f'r={r}')
    if k < r:
        raise DomainError('requires k ≥ r', f'k={k}, r={r}')


def _require_depth(available: int, k: int) -> None:
    if k + 1 > available:
        raise InsufficientDataError(
            'Insufficient intersection depth',
            f'order {k + 1} intersections needed, depth is {available}',
        )


# ==================== Classical truncation ====================

def partial_sum(s: SSums, r: int, k: int) -> float:
    """
    Truncated inclusion-exclusion sum to order k

    Example:
        partial_sum(S, 1, 2) -> S_1 - S_2
    """
    _require_order(r, k)
    return signed_moment_sum(s.values, r, k)


def classical_bound(s: SSums, r: int, k: int) -> BoundResult:
    return _assemble(BoundMethod.CLASSICAL, r, k, partial_sum(s, r, k), 0.0)


# ==================== Optimal coefficient ====================

def shifted_moment_floor(s_kplus1: float, n: int, k: int, i: int) -> float:
    """Lower bound C(k+1, i) / C(n, i) * S_{k+1} on E[C(X-i, k+1-i)]"""
    if not 1 <= i <= k + 1 <= n:
        raise DomainError('Requires 1 <= i <= k+1 <= n', f'i={i}, k={k}, n={n}')
    return float(Fraction(binom(k + 1, i), binom(n, i))) * s_kplus1


def coefficient_bound(s: SSums, n: int, r: int, k: int) -> BoundResult:
    _require_order(r, k)
    if k >= n:
        raise DomainError('Requires k < n', f'k={k}, n={n}')
    _require_depth(s.depth, k)
    correction = float(optimal_coefficient(n, k, r)) * s.value(k + 1)
    return _assemble(BoundMethod.COEFFICIENT, r, k, partial_sum(s, r, k), correction)


# ==================== Maximal tail extension ====================

def _natural_lookup(system: EventSystem) -> Callable:
    return system.probability


def _relabeled_lookup(system: EventSystem, perm: tuple) -> Callable:
    def lookup(subset):
        return system.probability(tuple(perm[i - 1] for i in subset))
    return lookup


def _tail_max_correction(lookup: Callable, n: int, r: int, k: int) -> float:
    terms = []
    for i in range(1, r + 1):
        weight = binom(k - i, r - i)
        for head in itertools.combinations(range(1, n + 1), k + 1 - i):
            # an empty tail set contributes 0
            best = 0.0
            for tail in itertools.combinations(range(head[-1] + 1, n + 1), i):
                best = max(best, lookup(head + tail))
            terms.append(weight * best)
    return math.fsum(terms)


def tail_max_correction(system: EventSystem, r: int, k: int) -> float:
    """
    sum_{i=1}^{r} C(k-i, r-i) sum_{heads of size k+1-i} max_{tails} P(head + tail)

    Tails are i-subsets of indices all above the head's largest index, under
    the system's current numbering.
    """
    _require_order(r, k)
    _require_depth(system.depth, k)
    return _tail_max_correction(_natural_lookup(system), system.n, r, k)


def tail_max_bound(system: EventSystem, r: int, k: int, labeling_note: str = NATURAL_ORDER) -> BoundResult:
    correction = tail_max_correction(system, r, k)
    partial = partial_sum(s_sums(system), r, k)
    return _assemble(BoundMethod.TAIL_MAX, r, k, partial, correction, labeling_note)


# ==================== Averaged numbering (r = 1) ====================

class WValues(NamedTuple):
    subset: tuple
    values: tuple
    extensions: tuple


def w_values(system: EventSystem, subset) -> WValues:
    """
    The n-k probabilities P(subset + {j}), j outside subset, largest first

    Ties keep ascending extension index.
    """
    subset = tuple(sorted(subset))
    k = len(subset)
    if k < 1 or k >= system.n or len(set(subset)) != k or subset[0] < 1 or subset[-1] > system.n:
        raise DomainError('Subset must hold 1 <= k < n distinct indices', f'{list(subset)}')
    _require_depth(system.depth, k)
    pairs = [
        (system.probability(subset + (j,)), j)
        for j in range(1, system.n + 1)
        if j not in subset
    ]
    pairs.sort(key=lambda pair: (-pair[0], pair[1]))
    return WValues(
        subset=subset,
        values=tuple(p for p, _ in pairs),
        extensions=tuple(j for _, j in pairs),
    )


def permutation_average_correction(system: EventSystem, k: int) -> float:
    if not 1 <= k < system.n:
        raise DomainError('Requires 1 <= k < n', f'k={k}, n={system.n}')
    _require_depth(system.depth, k)
    weights = [float(permutation_weight(k, s)) for s in range(1, system.n - k + 1)]
    terms = []
    for subset in system.subsets(k):
        for w, weight in zip(w_values(system, subset).values, weights):
            terms.append(w * weight)
    return math.fsum(terms)


def permutation_average_bound(system: EventSystem, k: int) -> BoundResult:
    """Bound on P(X >= 1); lower when k is even, upper when k is odd"""
    correction = permutation_average_correction(system, k)
    partial = partial_sum(s_sums(system), 1, k)
    return _assemble(BoundMethod.PERMUTATION_AVERAGE, 1, k, partial, correction)


class MonteCarloEstimate(NamedTuple):
    mean: float
    stderr: float
    trials: int


def mc_permutation_estimate(system: EventSystem, k: int, trials: int, seed: int) -> MonteCarloEstimate:
    """
    Average the r = 1 theorem4 correction over seeded uniform renumberings

    An unbiased estimator of permutation_average_correction.
    """
    if trials < 2:
        raise DomainError('Requires at least 2 trials', f'trials={trials}')
    if not 1 <= k < system.n:
        raise DomainError('Requires 1 <= k < n', f'k={k}, n={system.n}')
    _require_depth(system.depth, k)
    rng = np.random.default_rng(seed)
    samples = np.empty(trials)
    for trial in range(trials):
        perm = tuple(int(p) for p in rng.permutation(system.n) + 1)
        samples[trial] = _tail_max_correction(_relabeled_lookup(system, perm), system.n, 1, k)
    mean = float(samples.mean())
    stderr = float(samples.std(ddof=1) / math.sqrt(trials))
    logger.debug('Permutation estimate k=%d over %d trials: %.6f ± %.6f', k, trials, mean, stderr)
    return MonteCarloEstimate(mean=mean, stderr=stderr, trials=trials)


# ==================== Numbering search ====================

class NumberingSearch(NamedTuple):
    labeling: tuple
    result: BoundResult
    examined: int


def _candidate_labelings(n: int, mode: str, budget: int, seed: int) -> Iterable[tuple]:
    if mode == SearchMode.EXHAUSTIVE:
        yield from itertools.permutations(range(1, n + 1))
        return
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        yield tuple(int(p) for p in rng.permutation(n) + 1)


def best_numbering_search(
    system: EventSystem,
    r: int,
    k: int,
    mode: str = SearchMode.EXHAUSTIVE,
    budget: int = 1000,
    seed: int = 0,
) -> NumberingSearch:
    """
    Find the numbering that maximizes the theorem4 correction

    Exhaustive mode walks all n! numberings (n <= 8); sampled mode examines
    `budget` seeded random numberings. The first maximizer found is kept.
    """
    _require_order(r, k)
    _require_depth(system.depth, k)
    if mode not in SearchMode.values:
        raise DomainError('Unknown search mode', f'{mode}')
    if mode == SearchMode.EXHAUSTIVE and system.n > EXHAUSTIVE_MAX_N:
        raise DomainError(
            f'Exhaustive search is limited to n <= {EXHAUSTIVE_MAX_N}',
            f'n={system.n}; use sampled mode with a budget instead',
        )
    if mode == SearchMode.SAMPLED and budget < 1:
        raise DomainError('budget must be positive', f'budget={budget}')

    best_labeling = None
    best_correction = -math.inf
    examined = 0
    for perm in _candidate_labelings(system.n, mode, budget, seed):
        examined += 1
        correction = _tail_max_correction(_relabeled_lookup(system, perm), system.n, r, k)
        if correction > best_correction:
            best_labeling, best_correction = perm, correction

    logger.info(
        'Numbering search (%s) examined %d labelings, best correction %.6f',
        mode, examined, best_correction,
    )
    note = f'best of {examined} {mode} labelings: {list(best_labeling)}'
    result = tail_max_bound(relabel(system, best_labeling), r, k, labeling_note=note)
    return NumberingSearch(labeling=best_labeling, result=result, examined=examined)


# ==================== Report assembly ====================

class MethodFailure(NamedTuple):
    method: str
    message: str


@dataclass
class BoundsReport:
    n: int
    depth: int
    digest: str
    r: int
    k: int
    s_values: tuple
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    companion: Optional[BoundResult] = None
    exact: Optional[float] = None
    exact_remainder: Optional[float] = None
    verdicts: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)


def _compute_row(system: EventSystem, s: SSums, method: str, r: int, k: int) -> BoundResult:
    if method == BoundMethod.CLASSICAL:
        order = min(k, system.depth)
        if order < r:
            raise InsufficientDataError(
                'Insufficient intersection depth', f'order {r} needed, depth is {system.depth}'
            )
        return classical_bound(s, r, order)
    if method == BoundMethod.COEFFICIENT:
        return coefficient_bound(s, system.n, r, k)
    if method == BoundMethod.TAIL_MAX:
        return tail_max_bound(system, r, k)
    if method == BoundMethod.PERMUTATION_AVERAGE:
        if r != 1:
            raise DomainError('Averaged numbering applies only to r = 1', f'r={r}')
        return permutation_average_bound(system, k)
    raise DomainError('Unknown bound method', f'{method}')


def bounds_report(
    system: EventSystem,
    r: int,
    k: int,
    joint: Optional[JointDistribution] = None,
    methods: Optional[Iterable[str]] = None,
    tolerance: float = SANDWICH_TOLERANCE,
) -> BoundsReport:
    """
    Compute every requested bound for (r, k), collecting per-method failures

    Without an explicit method list the averaged-numbering row is included
    only when r = 1. With a joint distribution the exact P(X >= r), the exact
    remainder and per-row sandwich verdicts are added.
    """
    _require_order(r, k)
    if methods is None:
        methods = [m for m in BoundMethod.values if r == 1 or m != BoundMethod.PERMUTATION_AVERAGE]
    s = s_sums(system)
    report = BoundsReport(
        n=system.n,
        depth=system.depth,
        digest=system.digest(),
        r=r,
        k=k,
        s_values=s.values,
    )

    for method in methods:
        try:
            report.rows.append(_compute_row(system, s, method, r, k))
        except BoundsError as exc:
            logger.info('Method %s skipped for r=%d, k=%d: %s', method, r, k, exc)
            report.failures.append(MethodFailure(method=str(method), message=str(exc)))

    if system.depth >= k + 1:
        report.companion = classical_bound(s, r, k + 1)

    if joint is not None:
        if joint.n != system.n:
            raise InputValidationError(
                'Joint distribution does not match the event system', f'n={joint.n} vs n={system.n}'
            )
        report.exact = prob_at_least(joint, r)
        report.exact_remainder = remainder_decomposition(joint, r, k).remainder
        for row in report.rows:
            report.verdicts[str(row.method)] = row.holds_against(report.exact, tolerance)
        if report.companion is not None:
            report.verdicts['companion'] = report.companion.holds_against(report.exact, tolerance)

    return report
