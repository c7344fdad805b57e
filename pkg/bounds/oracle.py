"""
Exact oracle over fully specified joint distributions

Enumerates the 2^n atoms to give the distribution of X, the number of events
that occur, and everything derived from it. All accumulation goes through
math.fsum in a fixed order, so results are bit-stable for a given input.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .combinatorics import binom, signed_moment_sum
from .events import JointDistribution, SSums
from .exceptions import DomainError

PMF_TOLERANCE = 1e-12


@dataclass(frozen=True)
class CountPmf:
    """P(X = x) for x = 0..n"""

    probabilities: tuple

    def __post_init__(self):
        probabilities = tuple(float(p) for p in self.probabilities)
        if any(p < 0 for p in probabilities):
            raise DomainError('Count probabilities must be nonnegative')
        if abs(math.fsum(probabilities) - 1.0) > PMF_TOLERANCE:
            raise DomainError('Count probabilities must sum to 1')
        object.__setattr__(self, 'probabilities', probabilities)

    @property
    def n(self) -> int:
        return len(self.probabilities) - 1


@functools.lru_cache(maxsize=None)
def _popcounts(n: int) -> np.ndarray:
    index = np.arange(1 << n, dtype=np.int64)
    counts = np.zeros(1 << n, dtype=np.int64)
    for bit in range(n):
        counts += (index >> bit) & 1
    counts.flags.writeable = False
    return counts


def count_pmf(joint: JointDistribution) -> CountPmf:
    counts = _popcounts(joint.n)
    return CountPmf(tuple(math.fsum(joint.mass[counts == x]) for x in range(joint.n + 1)))


def prob_at_least(joint: JointDistribution, r: int) -> float:
    """
    Exact P(X >= r)

    Example:
        prob_at_least(joint, 0) -> 1.0
        prob_at_least(joint, joint.n + 1) -> 0.0
    """
    if not 0 <= r <= joint.n + 1:
        raise DomainError('Requires 0 <= r <= n + 1', f'r={r}, n={joint.n}')
    if r == 0:
        return 1.0
    pmf = count_pmf(joint).probabilities
    return math.fsum(pmf[r:])


def expected_binom_shifted(joint: JointDistribution, i: int, m: int) -> float:
    """E[C(X - i, m)] under the extended binomial convention"""
    if i < 0 or m < 0:
        raise DomainError('Requires i >= 0 and m >= 0', f'i={i}, m={m}')
    return _shifted_expectation(count_pmf(joint).probabilities, i, m)


def _shifted_expectation(pmf: tuple, i: int, m: int) -> float:
    return math.fsum(p * binom(x - i, m) for x, p in enumerate(pmf))


def moments(joint: JointDistribution, depth: int) -> SSums:
    """S_1..S_depth as E[C(X, j)]; entries beyond n are 0"""
    pmf = count_pmf(joint).probabilities
    return SSums(tuple(_shifted_expectation(pmf, 0, j) for j in range(1, depth + 1)))


def inclusion_exclusion_exact(s: SSums, r: int, n: int) -> float:
    """
    Complete alternating sum sum_{j=r}^{n} (-1)^{r+j} C(j-1, r-1) S_j

    Equals P(X >= r) whenever S comes from a genuine joint distribution.
    """
    if s.depth < n:
        raise DomainError('Complete inclusion-exclusion needs S_1..S_n', f'depth={s.depth}, n={n}')
    if not 1 <= r <= n:
        raise DomainError('Requires 1 <= r <= n', f'r={r}, n={n}')
    return signed_moment_sum(s.values, r, n)


class RemainderDecomposition(NamedTuple):
    partial: float
    remainder: float
    sign: int
    reconstructed: float


def remainder_decomposition(joint: JointDistribution, r: int, k: int) -> RemainderDecomposition:
    """
    Split P(X >= r) into the truncated sum to order k and its remainder

        partial       = sum_{j=r}^{k} (-1)^{r+j} C(j-1, r-1) S_j
        remainder     = sum_{i=1}^{r} C(k-i, r-i) E[C(X-i, k-i+1)]  (>= 0)
        reconstructed = partial + (-1)^{r+k+1} remainder

    k > n is accepted; S_j and the remainder expectations vanish there.
    """
    if r < 1:
        raise DomainError('Requires r >= 1', f'r={r}')
    if k < r:
        raise DomainError('Requires k >= r', f'k={k}, r={r}')
    pmf = count_pmf(joint).probabilities
    s_values = [_shifted_expectation(pmf, 0, j) for j in range(1, k + 1)]
    partial = signed_moment_sum(s_values, r, k)
    remainder = math.fsum(
        binom(k - i, r - i) * _shifted_expectation(pmf, i, k - i + 1) for i in range(1, r + 1)
    )
    sign = 1 if (r + k + 1) % 2 == 0 else -1
    return RemainderDecomposition(
        partial=partial,
        remainder=remainder,
        sign=sign,
        reconstructed=partial + sign * remainder,
    )
