"""Integer partitions, Young diagrams and standard Young tableaux.

Partitions label the irreps of S_N. They are listed in
reverse-lexicographic order, `(N)` first and `(1, ..., 1)` last.
"""

from __future__ import annotations

import collections
import dataclasses
import functools
import itertools
import logging
import math
import re

from typing import Iterable, Optional, Sequence

from snft import lib

logger: logging.Logger = logging.getLogger(__name__)

@dataclasses.dataclass(frozen=True, order=True)
class Partition():
    """A weakly decreasing tuple of positive integers.

    Attributes:
        parts: The row lengths of the Young diagram.
    """
    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.parts or any(x <= 0 for x in self.parts) or \
                list(self.parts) != sorted(self.parts, reverse=True):
            raise lib.SnftInputError(f'not a partition: {self.parts}')

    def __str__(self) -> str:
        return '(' + ','.join(str(x) for x in self.parts) + ')'

    def __len__(self) -> int:
        return len(self.parts)

    @staticmethod
    def from_parts(parts: Iterable[int]) -> Partition:
        """Sort parts descending and drop zeros."""
        return Partition(tuple(sorted((int(x) for x in parts if x),
                                      reverse=True)))

    @staticmethod
    def from_string(text: str) -> Partition:
        """Parse `"(3,1,1)"`, `"3,1,1"` or `"3 1 1"`.

        Raises:
            SnftInputError: If the text is not a partition.
        """
        body: str = text.strip().strip('()[]')
        if not re.fullmatch(r'\s*\d+(\s*[,\s]\s*\d+)*\s*', body):
            raise lib.SnftInputError(f'malformed partition "{text}"')
        return Partition(tuple(int(x) for x in re.split(r'[,\s]+',
                                                       body.strip())))

    @property
    def n(self) -> int:
        """The number of boxes."""
        return sum(self.parts)

    def conjugate(self) -> Partition:
        """Return the transposed diagram (column lengths)."""
        return Partition(tuple(sum(1 for row in self.parts if row > column)
                               for column in range(self.parts[0])))

    def hook_lengths(self) -> list[list[int]]:
        """Return the hook length of every box, row by row."""
        columns: tuple[int, ...] = self.conjugate().parts
        return [[(row_length - column - 1) + (columns[column] - row - 1) + 1
                 for column in range(row_length)]
                for row, row_length in enumerate(self.parts)]

    def dimension(self) -> int:
        """Return d_λ by the hook-length formula."""
        product: int = math.prod(h for row in self.hook_lengths()
                                 for h in row)
        return math.factorial(self.n) // product

    def corners(self) -> list[int]:
        """Return the rows with a removable box, bottom row first."""
        return [row for row in reversed(range(len(self.parts)))
                if row == len(self.parts) - 1 or
                self.parts[row] > self.parts[row + 1]]

    def branch_down(self) -> list[Optional[Partition]]:
        """Return the shapes obtained by removing one corner.

        The order matches the block order of the tableau basis (the
        restriction of the irrep to S_{N-1}). For `(1)` the result is
        `[None]`.
        """
        shapes: list[Optional[Partition]] = []
        for row in self.corners():
            parts: list[int] = list(self.parts)
            parts[row] -= 1
            shapes.append(Partition.from_parts(parts) if sum(parts) else None)
        return shapes

    def dominates(self, other: Partition) -> bool:
        """Check `self ⊵ other` in dominance order."""
        if self.n != other.n:
            raise lib.SnftInputError(f'{self} and {other} differ in size')
        mine: list[int] = list(itertools.accumulate(self.parts))
        theirs: list[int] = list(itertools.accumulate(other.parts))
        return all(mine[min(k, len(mine) - 1)] >= partial
                   for k, partial in enumerate(theirs))

@dataclasses.dataclass(frozen=True)
class StandardTableau():
    """A standard filling of a Young diagram with 1..N.

    Attributes:
        shape: The diagram.
        rows: The entries row by row.
    """
    shape: Partition
    rows: tuple[tuple[int, ...], ...]

    def __str__(self) -> str:
        return '/'.join(' '.join(str(x) for x in row) for row in self.rows)

    def position(self, entry: int) -> tuple[int, int]:
        """Return the 0-based `(row, column)` of an entry."""
        for row, values in enumerate(self.rows):
            if entry in values:
                return row, values.index(entry)
        raise lib.SnftInputError(f'{entry} is not in tableau {self}')

    def content(self, entry: int) -> int:
        """Return column minus row of an entry."""
        row, column = self.position(entry)
        return column - row

    def axial_distance(self, k: int) -> int:
        """Return `content(k + 1) - content(k)`."""
        return self.content(k + 1) - self.content(k)

    def swap(self, k: int) -> StandardTableau:
        """Return the filling with `k` and `k + 1` exchanged.

        The result is standard whenever the axial distance is not ±1.
        """
        swapped: dict[int, int] = {k: k + 1, k + 1: k}
        return StandardTableau(self.shape, tuple(
                tuple(swapped.get(x, x) for x in row) for row in self.rows))

    def is_standard(self) -> bool:
        """Check that entries increase along rows and columns."""
        entries: list[int] = sorted(x for row in self.rows for x in row)
        if entries != list(range(1, self.shape.n + 1)):
            return False
        rows_ok: bool = all(list(row) == sorted(row) and
                            len(set(row)) == len(row) for row in self.rows)
        columns_ok: bool = all(
                self.rows[r][c] < self.rows[r + 1][c]
                for r in range(len(self.rows) - 1)
                for c in range(len(self.rows[r + 1])))
        return rows_ok and columns_ok

def partitions_of(n: int) -> list[Partition]:
    """Return all partitions of `n` in reverse-lexicographic order.

    Raises:
        SnftInputError: If `n < 1`.
    """
    if n < 1:
        raise lib.SnftInputError(f'cannot partition {n}')
    return [Partition(parts) for parts in _partitions(n, n)]

@functools.lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    return tuple((first,) + rest
                 for first in range(min(n, largest), 0, -1)
                 for rest in _partitions(n - first, first))

@functools.lru_cache(maxsize=None)
def standard_tableaux(shape: Partition) -> tuple[StandardTableau, ...]:
    """Return the standard tableaux of a shape in last-letter order.

    The largest entry runs over the corners bottom row first (the order
    of `Partition.branch_down()`); for each corner the smaller tableaux
    follow recursively in their own order. The basis of the Young
    orthogonal representation is therefore adapted to S_{N-1}.
    """
    if shape.n == 1:
        return (StandardTableau(shape, ((1,),)),)
    tableaux: list[StandardTableau] = []
    for row, smaller in zip(shape.corners(), shape.branch_down()):
        assert smaller is not None
        for tableau in standard_tableaux(smaller):
            rows: list[tuple[int, ...]] = list(tableau.rows)
            if row == len(rows):
                rows.append((shape.n,))
            else:
                rows[row] = rows[row] + (shape.n,)
            tableaux.append(StandardTableau(shape, tuple(rows)))
    return tuple(tableaux)

def multiplicity_partition(occupations: Sequence[int]) -> Partition:
    """Return the sorted multiplicities of the labels in a mode list."""
    return Partition.from_parts(collections.Counter(occupations).values())

def _check_occupations(shape: Partition, occupations: Sequence[int]) -> None:
    if len(occupations) != shape.n:
        raise lib.SnftInputError(
                f'{len(occupations)} labels cannot fill {shape}')

def gamas_admissible(shape: Partition, occupations: Sequence[int]) -> bool:
    """Decide whether projecting `|m⟩` onto sector `shape` is nonzero.

    Uses the character criterion `Σ_{σ ∈ stab(m)} χ^λ(σ) ≠ 0`.

    Args:
        shape: The irrep λ.
        occupations: The mode list `m` (only multiplicities matter).

    Raises:
        SnftInputError: If the sizes differ.
    """
    # irreps and perm_core depend on this module
    from snft import irreps
    from snft.perm_core import Subgroup

    _check_occupations(shape, occupations)
    table: irreps.CharacterTable = irreps.CharacterTable.of(shape.n)
    total: float = sum(table.value(shape, g.cycle_type())
                       for g in Subgroup.stabilizer(occupations))
    logger.debug('character sum of %s over stab(%s): %g', shape,
            ','.join(str(m) for m in occupations), total)
    return abs(total) > 0.5

def gamas_admissible_dominance(shape: Partition,
        occupations: Sequence[int]) -> bool:
    """Fast path of `gamas_admissible()`: multiplicities ⊴ shape."""
    _check_occupations(shape, occupations)
    return shape.dominates(multiplicity_partition(occupations))

def gamas_filling(shape: Partition, occupations: Sequence[int]
        ) -> Optional[tuple[tuple[int, ...], ...]]:
    """Fill the diagram with the labels, no label twice in a column.

    Returns:
        The filling row by row, or `None` if there is none.
    """
    _check_occupations(shape, occupations)
    heights: tuple[int, ...] = shape.conjugate().parts
    counts: collections.Counter = collections.Counter(occupations)

    def fill(column: int) -> Optional[list[tuple[int, ...]]]:
        if column == len(heights):
            return []
        available: list[int] = sorted(label for label, count in counts.items()
                                      if count > 0)
        for labels in itertools.combinations(available, heights[column]):
            for label in labels:
                counts[label] -= 1
            rest: Optional[list[tuple[int, ...]]] = fill(column + 1)
            for label in labels:
                counts[label] += 1
            if rest is not None:
                return [labels] + rest
        return None

    columns: Optional[list[tuple[int, ...]]] = fill(0)
    if columns is None:
        return None
    return tuple(tuple(columns[c][r] for c in range(length))
                 for r, length in enumerate(shape.parts))
