"""
Exact combinatorial kernels for Simple Bounds

Extended binomial coefficients, the alternating identity sums behind the
inclusion-exclusion remainder, the coefficients of the S_{k+1}-based bound and
the permutation weights of the averaged-numbering bound. Everything here is
integer or Fraction arithmetic; floats appear only in signed_moment_sum.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .exceptions import BinomialOverflowError, DomainError, InsufficientDataError


INT128_MAX = 2 ** 127 - 1

# Largest t for which every C(t, s) fits in a signed 128-bit integer.
TABLE_CAPACITY = 130

# m, k, r ceiling for the identity kernels; alternating sums of products of
# two table entries stay inside 128 bits below it.
KERNEL_CAP = 60

ENUMERATION_CAP = 8


def _checked(value: int) -> int:
    if abs(value) > INT128_MAX:
        raise BinomialOverflowError(
            'Integer overflow',
            f'{value} exceeds the 128-bit accumulation range',
        )
    return value


def _require_kernel_range(**params: int) -> None:
    for name, value in params.items():
        if abs(value) > KERNEL_CAP:
            raise BinomialOverflowError(
                'Kernel capacity exceeded',
                f'{name}={value} is above the cap of {KERNEL_CAP}',
            )


@dataclass(frozen=True)
class BinomialTable:
    """
    Dense Pascal triangle for 0 <= s <= t <= max_t

    Lookups outside the triangle follow the extended convention and return 0;
    lookups beyond max_t raise BinomialOverflowError.
    """

    max_t: int
    rows: tuple

    @classmethod
    def build(cls, max_t: int) -> 'BinomialTable':
        if max_t < 0:
            raise DomainError('Table size must be nonnegative', f'max_t={max_t}')
        rows = [(1,)]
        for t in range(1, max_t + 1):
            prev = rows[-1]
            middle = tuple(_checked(prev[s - 1] + prev[s]) for s in range(1, t))
            rows.append((1,) + middle + (1,))
        return cls(max_t=max_t, rows=tuple(rows))

    def entry(self, t: int, s: int) -> int:
        if abs(t) > self.max_t or abs(s) > self.max_t:
            raise BinomialOverflowError(
                'Binomial capacity exceeded',
                f'C({t}, {s}) is beyond the table limit t <= {self.max_t}',
            )
        if min(s, t) < 0 or s > t:
            return 0
        return self.rows[t][s]

    def pascal_violations(self) -> list:
        """Return every (t, s) where the Pascal recurrence or the unit edges fail"""
        bad = []
        for t, row in enumerate(self.rows):
            if len(row) != t + 1 or row[0] != 1 or row[t] != 1:
                bad.append((t, 0))
                continue
            for s in range(1, t):
                if row[s] != self.rows[t - 1][s - 1] + self.rows[t - 1][s]:
                    bad.append((t, s))
        return bad


@functools.lru_cache(maxsize=None)
def binomial_table(max_t: int = TABLE_CAPACITY) -> BinomialTable:
    return BinomialTable.build(max_t)


def binom(t: int, s: int) -> int:
    """
    Extended binomial coefficient

    Example:
        binom(6, 3) -> 20
        binom(3, 5) -> 0
        binom(-1, 2) -> 0
    """
    return binomial_table().entry(t, s)


def indicator_sum(m: int, r: int) -> int:
    """
    Evaluate sum_{j=r}^{m} (-1)^{r+j} C(j-1, r-1) C(m, j) term by term

    The value is the indicator of m >= r; callers test that rather than
    assume it.
    """
    if m < 0 or r < 1:
        raise DomainError('Requires m >= 0 and r >= 1', f'm={m}, r={r}')
    _require_kernel_range(m=m, r=r)
    total = 0
    for j in range(r, m + 1):
        sign = -1 if (r + j) % 2 else 1
        total = _checked(total + sign * binom(j - 1, r - 1) * binom(m, j))
    return total


class TailIdentity(NamedTuple):
    lhs: int
    rhs: int


def tail_identity(m: int, k: int, r: int) -> TailIdentity:
    """
    Evaluate both sides of the inclusion-exclusion tail identity

        lhs = sum_{j=k+1}^{m} (-1)^j C(j-1, r-1) C(m, j)
        rhs = (-1)^{k+1} sum_{i=1}^{r} C(k-i, r-i) C(m-i, k-i+1)
    """
    if min(m, k, r) < 0:
        raise DomainError('Requires nonnegative m, k, r', f'm={m}, k={k}, r={r}')
    if k < r:
        raise DomainError('Requires k >= r', f'k={k}, r={r}')
    _require_kernel_range(m=m, k=k, r=r)

    lhs = 0
    for j in range(k + 1, m + 1):
        sign = -1 if j % 2 else 1
        lhs = _checked(lhs + sign * binom(j - 1, r - 1) * binom(m, j))

    inner = 0
    for i in range(1, r + 1):
        inner = _checked(inner + binom(k - i, r - i) * binom(m - i, k - i + 1))
    rhs = inner if (k + 1) % 2 == 0 else -inner
    return TailIdentity(lhs=lhs, rhs=rhs)


def _require_coefficient_domain(n: int, k: int, r: int) -> None:
    if not 1 <= r <= k < n:
        raise DomainError('Requires 1 <= r <= k < n', f'n={n}, k={k}, r={r}')
    _require_kernel_range(k=k, r=r)


def optimal_coefficient(n: int, k: int, r: int) -> Fraction:
    """
    Coefficient of S_{k+1} in the sharpest bound of the partial-sum-plus-S_{k+1} form

        sum_{i=1}^{r} C(k-i, r-i) C(k+1, i) / C(n, i)

    Example:
        optimal_coefficient(6, 2, 1) -> Fraction(1, 2)
    """
    _require_coefficient_domain(n, k, r)
    return sum(
        (Fraction(binom(k - i, r - i) * binom(k + 1, i), binom(n, i)) for i in range(1, r + 1)),
        Fraction(0),
    )


def alternating_form_coefficient(n: int, k: int, r: int) -> Fraction:
    """
    The same coefficient written through the complement of the indicator sum

        (-1)^{r+k} (sum_{j=0}^{k-r} (-1)^j C(r+j-1, r-1) C(n, r+j) - 1) / C(n, k+1)

    The (-1)^{r+k} factor is required for agreement with optimal_coefficient;
    the bare expression is negative whenever r + k is odd.
    """
    _require_coefficient_domain(n, k, r)
    inner = 0
    for j in range(0, k - r + 1):
        sign = -1 if j % 2 else 1
        inner = _checked(inner + sign * binom(r + j - 1, r - 1) * binom(n, r + j))
    sign = -1 if (r + k) % 2 else 1
    return Fraction(sign * (inner - 1), binom(n, k + 1))


def permutation_weight(k: int, s: int) -> Fraction:
    """
    Probability that, of k + s distinct indices in a random order, the s-th
    extension index is the only extension following all k base indices
    """
    if k < 1 or s < 1:
        raise DomainError('Requires k >= 1 and s >= 1', f'k={k}, s={s}')
    return Fraction(k, (k + s) * (k + s - 1))


def enumerated_follow_probability(k: int, s: int, cap: int = ENUMERATION_CAP) -> Fraction:
    """
    Count the (k+s)! relative orders in which j_s follows every base index
    and no other j does
    """
    if k < 1 or s < 1:
        raise DomainError('Requires k >= 1 and s >= 1', f'k={k}, s={s}')
    if k + s > cap:
        raise DomainError('Enumeration cap exceeded', f'k+s={k + s} > {cap}')

    # positions 0..k-1 are base indices, k..k+s-1 are j_1..j_s
    last = k + s - 1
    hits = 0
    total = 0
    for order in itertools.permutations(range(k + s)):
        total += 1
        position = {item: place for place, item in enumerate(order)}
        base_end = max(position[i] for i in range(k))
        followers = [j for j in range(k, k + s) if position[j] > base_end]
        if followers == [last]:
            hits += 1
    return Fraction(hits, total)


def signed_moment_sum(s_values: Sequence[float], r: int, k: int) -> float:
    """
    Truncated inclusion-exclusion sum_{j=r}^{k} (-1)^{r+j} C(j-1, r-1) S_j

    s_values[j-1] holds S_j.
    """
    if r < 1:
        raise DomainError('Requires r >= 1', f'r={r}')
    if k < r:
        raise DomainError('Requires k >= r', f'k={k}, r={r}')
    if k > len(s_values):
        raise InsufficientDataError(
            'Insufficient intersection depth',
            f'S_{k} requested but only S_1..S_{len(s_values)} available',
        )
    terms = []
    for j in range(r, k + 1):
        sign = -1.0 if (r + j) % 2 else 1.0
        terms.append(sign * binom(j - 1, r - 1) * s_values[j - 1])
    return math.fsum(terms)
