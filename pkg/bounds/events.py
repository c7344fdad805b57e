"""
Event systems for Simple Bounds

An EventSystem carries the probability of every intersection of up to `depth`
of its n events; a JointDistribution carries the full mass over all 2^n
outcome atoms and is the ground truth the oracle works from. Subsets are
sorted tuples of 1-based event indices; atom bit i-1 is set when event i
occurs.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import logging
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterator, Mapping, NamedTuple, Sequence

import numpy as np

from .exceptions import DomainError, InputValidationError, InsufficientDataError

logger = logging.getLogger(__name__)

ORACLE_MAX_N = 20
MONOTONICITY_TOLERANCE = 1e-12
MASS_TOLERANCE = 1e-12


def canonical(subset) -> tuple:
    """Sorted tuple form used as the table key"""
    return tuple(sorted(int(i) for i in subset))


def subset_mask(subset) -> int:
    mask = 0
    for i in subset:
        mask |= 1 << (i - 1)
    return mask


@dataclass(frozen=True)
class EventSystem:
    """n events with intersection probabilities for every subset of size 1..depth"""

    n: int
    depth: int
    table: Mapping

    def __post_init__(self):
        if self.n < 1:
            raise DomainError('An event system needs at least one event', f'n={self.n}')
        if not 1 <= self.depth <= self.n:
            raise DomainError('Requires 1 <= depth <= n', f'depth={self.depth}, n={self.n}')
        table = {canonical(subset): float(p) for subset, p in self.table.items()}
        object.__setattr__(self, 'table', MappingProxyType(table))

    @property
    def expected_entries(self) -> int:
        return sum(math.comb(self.n, j) for j in range(1, self.depth + 1))

    def subsets(self, size: int) -> Iterator[tuple]:
        """Lexicographic iterator over all index subsets of the given size"""
        return itertools.combinations(range(1, self.n + 1), size)

    def probability(self, subset) -> float:
        key = canonical(subset)
        if len(key) > self.depth:
            raise InsufficientDataError(
                'Insufficient intersection depth',
                f'{len(key)}-way intersection requested, depth is {self.depth}',
            )
        try:
            return self.table[key]
        except KeyError:
            raise InputValidationError('Incomplete intersection table', f'missing subset {list(key)}')

    def digest(self) -> str:
        """Short content hash of the table, stable across runs and platforms"""
        payload = json.dumps(
            [self.n, self.depth, [[list(k), repr(v)] for k, v in sorted(self.table.items())]],
            separators=(',', ':'),
        )
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()[:16]


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Probability mass over the 2^n outcome atoms, indexed by bitmask"""

    n: int
    mass: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= ORACLE_MAX_N:
            raise DomainError('Joint distributions support 1 <= n <= 20', f'n={self.n}')
        mass = np.array(self.mass, dtype=np.float64)
        if mass.shape != (1 << self.n,):
            raise InputValidationError(
                'Atom count mismatch', f'expected {1 << self.n} atoms for n={self.n}, got {mass.size}'
            )
        if not np.all(np.isfinite(mass)) or np.any(mass < 0):
            raise InputValidationError('Atom masses must be finite and nonnegative')
        total = math.fsum(mass)
        if abs(total - 1.0) > MASS_TOLERANCE:
            raise InputValidationError('Atom masses must sum to 1', f'sum is {total!r}')
        mass.flags.writeable = False
        object.__setattr__(self, 'mass', mass)


@dataclass(frozen=True)
class SSums:
    """Binomial moments S_1..S_depth"""

    values: tuple

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if any(v < 0 for v in values):
            raise DomainError('Binomial moments must be nonnegative', f'{values}')
        object.__setattr__(self, 'values', values)

    @property
    def depth(self) -> int:
        return len(self.values)

    def value(self, j: int) -> float:
        """S_j, 1-based"""
        if not 1 <= j <= self.depth:
            raise InsufficientDataError('Insufficient intersection depth', f'S_{j} with depth {self.depth}')
        return self.values[j - 1]


class Violation(NamedTuple):
    kind: str
    subsets: tuple
    message: str


def s_sums(system: EventSystem) -> SSums:
    """S_j = sum of the table over all j-subsets, for j = 1..depth"""
    return SSums(tuple(
        math.fsum(system.probability(subset) for subset in system.subsets(j))
        for j in range(1, system.depth + 1)
    ))


def _require_probabilities(alphas: Sequence[float]) -> None:
    for index, alpha in enumerate(alphas, start=1):
        if not (math.isfinite(alpha) and 0.0 <= alpha <= 1.0):
            raise DomainError('Event probabilities must lie in [0, 1]', f'alpha_{index}={alpha}')


def from_independent(alphas: Sequence[float], depth: int) -> EventSystem:
    """
    Product-form system: P(A_{i_1}...A_{i_j}) = alpha_{i_1} ... alpha_{i_j}

    Example:
        from_independent([0.5, 0.5], 2).table[(1, 2)] -> 0.25
    """
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise DomainError('At least one event probability is required')
    _require_probabilities(alphas)
    n = len(alphas)
    if not 1 <= depth <= n:
        raise DomainError('Requires 1 <= depth <= n', f'depth={depth}, n={n}')
    table = {}
    for j in range(1, depth + 1):
        for subset in itertools.combinations(range(1, n + 1), j):
            table[subset] = math.prod(alphas[i - 1] for i in subset)
    return EventSystem(n=n, depth=depth, table=table)


def independent_joint(alphas: Sequence[float]) -> JointDistribution:
    """Product measure consistent with from_independent"""
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise DomainError('At least one event probability is required')
    _require_probabilities(alphas)
    mass = np.ones(1)
    for alpha in alphas:
        mass = np.concatenate([mass * (1.0 - alpha), mass * alpha])
    return JointDistribution(n=len(alphas), mass=mass)


def superset_sums(joint: JointDistribution) -> np.ndarray:
    """Entry at mask b holds the total mass of atoms containing every event of b"""
    sums = joint.mass.copy()
    for bit in range(joint.n):
        view = sums.reshape(-1, 2, 1 << bit)
        view[:, 0, :] += view[:, 1, :]
    return sums


def from_joint(joint: JointDistribution, depth: int) -> EventSystem:
    if not 1 <= depth <= joint.n:
        raise DomainError('Requires 1 <= depth <= n', f'depth={depth}, n={joint.n}')
    sums = superset_sums(joint)
    table = {}
    for j in range(1, depth + 1):
        for subset in itertools.combinations(range(1, joint.n + 1), j):
            table[subset] = float(sums[subset_mask(subset)])
    return EventSystem(n=joint.n, depth=depth, table=table)


def random_joint(n: int, seed: int) -> JointDistribution:
    """Seeded joint with 2^n strictly positive i.i.d. draws, normalized"""
    if not 1 <= n <= ORACLE_MAX_N:
        raise DomainError('random_joint supports 1 <= n <= 20', f'n={n}')
    rng = np.random.default_rng(seed)
    draws = 1.0 - rng.random(1 << n)
    return JointDistribution(n=n, mass=draws / math.fsum(draws))


def validate(system: EventSystem) -> list:
    """
    Check completeness, range and superset monotonicity of the table

    Returns a list of Violation; an empty list means the system is usable.
    Monotonicity deviations within MONOTONICITY_TOLERANCE are logged, not
    reported.
    """
    violations = []
    table = system.table
    well_formed = 0

    for key, p in table.items():
        if (
            not key
            or len(key) > system.depth
            or any(i < 1 or i > system.n for i in key)
            or len(set(key)) != len(key)
        ):
            violations.append(Violation('malformed', (key,), f'subset {list(key)} is not a valid index set'))
            continue
        well_formed += 1
        if not (math.isfinite(p) and 0.0 <= p <= 1.0):
            violations.append(Violation('range', (key,), f'P{list(key)}={p!r} is outside [0, 1]'))

    if well_formed < system.expected_entries:
        for j in range(1, system.depth + 1):
            for subset in system.subsets(j):
                if subset not in table:
                    violations.append(Violation('completeness', (subset,), f'subset {list(subset)} is missing'))

    for key, p in table.items():
        if len(key) < 2 or len(key) > system.depth:
            continue
        for drop in range(len(key)):
            smaller = key[:drop] + key[drop + 1:]
            if smaller not in table:
                continue
            excess = p - table[smaller]
            if excess > MONOTONICITY_TOLERANCE:
                violations.append(Violation(
                    'monotonicity',
                    (smaller, key),
                    f'P{list(key)}={p!r} exceeds P{list(smaller)}={table[smaller]!r}',
                ))
            elif excess > 0:
                logger.warning('P%s exceeds P%s by %.3g (within tolerance)', list(key), list(smaller), excess)

    return violations


def relabel(system: EventSystem, perm: Sequence[int]) -> EventSystem:
    """
    Renumber events: event i of the result is event perm[i-1] of the input

    The result's entry for S equals the input's entry for {perm(i) : i in S}.
    """
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(1, system.n + 1)):
        raise DomainError('Relabeling must be a permutation of 1..n', f'{list(perm)}')
    inverse = {target: source for source, target in enumerate(perm, start=1)}
    table = {canonical(inverse[i] for i in key): p for key, p in system.table.items()}
    return EventSystem(n=system.n, depth=system.depth, table=table)
