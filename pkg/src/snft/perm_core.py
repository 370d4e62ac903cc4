"""Permutations of {1..N}, subgroups and the dense indexing of S_N.

Positions are 1-based wherever a permutation is evaluated or printed
(particles are labelled 1..N); the stored one-line form is 0-based.
Composition follows `(s * t)(x) == s(t(x))`.
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
import logging
import math
import re

from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from snft import lib
from snft.partitions import Partition

logger: logging.Logger = logging.getLogger(__name__)

@dataclasses.dataclass(frozen=True)
class Permutation():
    """An element of S_N in one-line notation.

    Attributes:
        images: `images[x]` is the 0-based image of the 0-based point
            `x`.
    """
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(len(self.images))):
            raise lib.SnftInputError(
                    f'not a permutation: {tuple(x + 1 for x in self.images)}')

    @property
    def n(self) -> int:
        """The degree of the group."""
        return len(self.images)

    @staticmethod
    def identity(n: int) -> Permutation:
        """Return the identity of S_n."""
        return Permutation(tuple(range(n)))

    @staticmethod
    def from_one_line(images: Sequence[int]) -> Permutation:
        """Build a permutation from 1-based one-line notation."""
        return Permutation(tuple(int(x) - 1 for x in images))

    @staticmethod
    def transposition(a: int, b: int, n: int) -> Permutation:
        """Return the transposition `(a b)` of 1-based points."""
        images: list[int] = list(range(n))
        images[a - 1], images[b - 1] = images[b - 1], images[a - 1]
        return Permutation(tuple(images))

    @staticmethod
    def from_cycles(text: str, n: Optional[int] = None) -> Permutation:
        """Parse cycle notation such as `"(1 2 3)(4 5)"` or `"id"`.

        Args:
            text: The cycles; entries may be separated by blanks or
                commas.
            n: The degree. Defaults to the largest point mentioned.

        Raises:
            SnftInputError: If the text is malformed.
        """
        text = text.strip()
        cycles: list[list[int]] = []
        if text not in ('id', ''):
            if not re.fullmatch(r'(\(\s*\d+(?:[\s,]+\d+)*\s*\)\s*)+', text):
                raise lib.SnftInputError(f'malformed cycles "{text}"')
            cycles = [[int(x) for x in re.split(r'[\s,]+', body.strip())]
                      for body in re.findall(r'\(([^)]*)\)', text)]
        points: list[int] = [x for cycle in cycles for x in cycle]
        degree: int = n if n is not None else max(points, default=1)
        if len(points) != len(set(points)) or \
                any(x < 1 or x > degree for x in points):
            raise lib.SnftInputError(
                    f'cycles "{text}" do not describe a permutation of '
                    f'1..{degree}')
        images: list[int] = list(range(degree))
        for cycle in cycles:
            for position, point in enumerate(cycle):
                images[point - 1] = cycle[(position + 1) % len(cycle)] - 1
        return Permutation(tuple(images))

    @staticmethod
    def unrank(k: int, n: int) -> Permutation:
        """Return the permutation with Lehmer rank `k`.

        Raises:
            SnftInputError: If `k` is not in `0..n!-1`.
        """
        if not 0 <= k < math.factorial(n):
            raise lib.SnftInputError(f'rank {k} out of range for S_{n}')
        remaining: list[int] = list(range(n))
        images: list[int] = []
        for position in range(n):
            digit, k = divmod(k, math.factorial(n - 1 - position))
            images.append(remaining.pop(digit))
        return Permutation(tuple(images))

    def __call__(self, x: int) -> int:
        return self.images[x - 1] + 1

    def __mul__(self, other: Permutation) -> Permutation:
        return self.compose(other)

    def __str__(self) -> str:
        cycles: list[tuple[int, ...]] = [
                cycle for cycle in self.cycles() if len(cycle) > 1]
        if not cycles:
            return 'id'
        return ''.join('(' + ' '.join(str(x) for x in cycle) + ')'
                       for cycle in cycles)

    def compose(self, other: Permutation) -> Permutation:
        """Return `self ∘ other`.

        Raises:
            SnftInputError: If the degrees differ.
        """
        if self.n != other.n:
            raise lib.SnftInputError(
                    f'degree mismatch: S_{self.n} and S_{other.n}')
        return Permutation(tuple(self.images[x] for x in other.images))

    def inverse(self) -> Permutation:
        """Return the inverse permutation."""
        images: list[int] = [0] * self.n
        for x, y in enumerate(self.images):
            images[y] = x
        return Permutation(tuple(images))

    def power(self, exponent: int) -> Permutation:
        """Return `self` composed `exponent` times (may be negative)."""
        base: Permutation = self if exponent >= 0 else self.inverse()
        result: Permutation = Permutation.identity(self.n)
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def cycles(self) -> list[tuple[int, ...]]:
        """Return all cycles (fixed points included) with 1-based points.

        Each cycle starts with its smallest point; cycles are sorted by
        that point.
        """
        seen: set[int] = set()
        cycles: list[tuple[int, ...]] = []
        for start in range(self.n):
            if start in seen:
                continue
            cycle: list[int] = []
            x: int = start
            while x not in seen:
                seen.add(x)
                cycle.append(x + 1)
                x = self.images[x]
            cycles.append(tuple(cycle))
        return cycles

    def cycle_type(self) -> Partition:
        """Return the cycle lengths as a partition of `n`."""
        return Partition.from_parts(len(cycle) for cycle in self.cycles())

    def sign(self) -> int:
        """Return the parity character, `+1` or `-1`."""
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def order(self) -> int:
        """Return the order of the permutation in S_n."""
        return math.lcm(*(len(cycle) for cycle in self.cycles()))

    def fixed_points(self) -> int:
        """Return the number of fixed points."""
        return sum(1 for x, y in enumerate(self.images) if x == y)

    def rank(self) -> int:
        """Return the Lehmer rank (identity first)."""
        return int(SymmetricGroup.rank_array(
                np.asarray([self.images], dtype=np.int64))[0])

@dataclasses.dataclass(frozen=True)
class Subgroup():
    """An explicitly enumerated subgroup of S_n.

    Attributes:
        n: The degree.
        elements: The elements, sorted by rank.
        description: A human readable generator description.
    """
    n: int
    elements: tuple[Permutation, ...]
    description: str = ''
    members: frozenset[Permutation] = dataclasses.field(
            init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, 'members', frozenset(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.elements)

    def __contains__(self, item: object) -> bool:
        return item in self.members

    def __str__(self) -> str:
        return self.description or f'<subgroup of order {len(self)}>'

    def ranks(self) -> np.ndarray:
        """Return the ranks of all elements."""
        return SymmetricGroup.rank_array(
                np.asarray([g.images for g in self.elements], dtype=np.int64))

    def is_closed(self) -> bool:
        """Check identity, closure under composition and inverses."""
        members: frozenset[Permutation] = self.members
        return (Permutation.identity(self.n) in members and
                all(g.inverse() in members for g in members) and
                all(g * h in members for g in members for h in members))

    @staticmethod
    def generated(elements: Iterable[Permutation], n: int,
            description: str = '') -> Subgroup:
        """Wrap an element list, deduplicated and sorted by rank."""
        unique: list[Permutation] = sorted(set(elements),
                key=lambda g: g.rank())
        return Subgroup(n, tuple(unique), description)

    @staticmethod
    def young(blocks: Iterable[Sequence[int]], n: int,
            description: str = '') -> Subgroup:
        """Return the Young subgroup permuting each block of positions.

        Args:
            blocks: Disjoint lists of 1-based positions; positions that
                are not mentioned stay fixed.
            n: The degree.
            description: Optional display text.
        """
        blocks = [list(block) for block in blocks if len(block) > 1]
        factors: list[list[tuple[tuple[int, ...], tuple[int, ...]]]] = [
                [(tuple(block), tuple(image))
                 for image in itertools.permutations(block)]
                for block in blocks]
        elements: list[Permutation] = []
        for choice in itertools.product(*factors):
            images: list[int] = list(range(n))
            for sources, targets in choice:
                for source, target in zip(sources, targets):
                    images[source - 1] = target - 1
            elements.append(Permutation(tuple(images)))
        if not description:
            description = ' x '.join(
                    'S{' + ','.join(str(x) for x in block) + '}'
                    for block in blocks) or '{id}'
        return Subgroup.generated(elements, n, description)

    @staticmethod
    def stabilizer(modes: Sequence[int]) -> Subgroup:
        """Return the permutations fixing a mode list.

        Its elements `g` satisfy `modes[g⁻¹(α)] == modes[α]`; the order
        is the product of the factorials of the occupations.
        """
        blocks: dict[int, list[int]] = {}
        for position, mode in enumerate(modes, start=1):
            blocks.setdefault(mode, []).append(position)
        return Subgroup.young(blocks.values(), len(modes),
                'stab(' + ','.join(str(m) for m in modes) + ')')

    @staticmethod
    def cyclic(generator: Permutation) -> Subgroup:
        """Return the cyclic subgroup generated by a permutation."""
        powers: list[Permutation] = [Permutation.identity(generator.n)]
        current: Permutation = generator
        while current != powers[0]:
            powers.append(current)
            current = current * generator
        return Subgroup.generated(powers, generator.n, f'<{generator}>')

class SymmetricGroup:
    """Dense indexing of S_n by Lehmer rank.

    Attributes:
        n: The degree.
        order: `n!`.
        array: `(n!, n)` array of 0-based one-line forms in rank order.
    """

    def __init__(self, n: int) -> None:
        if n < 1:
            raise lib.SnftInputError(f'no symmetric group of degree {n}')
        self.n: int = n
        self.order: int = math.factorial(n)
        self.array: np.ndarray = np.asarray(
                list(itertools.permutations(range(n))), dtype=np.int64
                ).reshape(self.order, n)
        self._inverse: Optional[np.ndarray] = None
        self._cycle_types: Optional[list[Partition]] = None

    @staticmethod
    @functools.lru_cache(maxsize=None)
    def of(n: int) -> SymmetricGroup:
        """Return the shared instance for degree `n`."""
        logger.debug('indexing S_%d', n)
        return SymmetricGroup(n)

    @staticmethod
    def rank_array(array: np.ndarray) -> np.ndarray:
        """Return the Lehmer ranks of a `(k, n)` array of one-line forms."""
        n: int = array.shape[1]
        ranks: np.ndarray = np.zeros(array.shape[0], dtype=np.int64)
        for position in range(n - 1):
            digits: np.ndarray = np.sum(
                    array[:, position + 1:] < array[:, position:position + 1],
                    axis=1)
            ranks += digits * math.factorial(n - 1 - position)
        return ranks

    def element(self, rank: int) -> Permutation:
        """Return the permutation with the given rank."""
        return Permutation(tuple(int(x) for x in self.array[rank]))

    def elements(self) -> Iterator[Permutation]:
        """Iterate over S_n in rank order."""
        for rank in range(self.order):
            yield self.element(rank)

    def inverse_index(self) -> np.ndarray:
        """Return `r` with `r[rank(σ)] == rank(σ⁻¹)`."""
        if self._inverse is None:
            self._inverse = self.rank_array(np.argsort(self.array, axis=1))
        return self._inverse

    def left_index(self, t: Permutation) -> np.ndarray:
        """Return `r` with `r[rank(σ)] == rank(t ∘ σ)`."""
        return self.rank_array(np.asarray(t.images)[self.array])

    def right_index(self, t: Permutation) -> np.ndarray:
        """Return `r` with `r[rank(σ)] == rank(σ ∘ t)`."""
        return self.rank_array(self.array[:, list(t.images)])

    def cycle_types(self) -> list[Partition]:
        """Return the cycle type of every element in rank order."""
        if self._cycle_types is None:
            self._cycle_types = [g.cycle_type() for g in self.elements()]
        return self._cycle_types

    def signs(self) -> np.ndarray:
        """Return the sign of every element in rank order."""
        # sign(σ) = (-1)^(n - number of cycles)
        return np.asarray([(-1) ** (self.n - len(ct.parts))
                           for ct in self.cycle_types()], dtype=float)
