"""Young orthogonal representation (YOR) of S_N and its characters."""

from __future__ import annotations

import fractions
import functools
import logging
import math
import threading

from typing import Callable, Optional

import numpy as np

from snft import lib
from snft.partitions import Partition, partitions_of, standard_tableaux
from snft.perm_core import Permutation, SymmetricGroup

logger: logging.Logger = logging.getLogger(__name__)

Representation = Callable[[Permutation], np.ndarray]

class IrrepTable:
    """Real orthogonal irrep matrices for every partition of `n`.

    The matrices of the adjacent transpositions `(k k+1)` come from the
    axial distances of standard tableaux; any other permutation is
    assembled by peeling off its first descent, `σ = σ' ∘ (k k+1)`,
    where `σ'` has a smaller rank. Full matrix stacks over S_n are
    built lazily per partition and cached.

    Attributes:
        n: The degree.
        partitions: All partitions of `n`, `(n)` first.
        generators: For each partition the `n - 1` matrices of the
            adjacent transpositions.
    """

    def __init__(self, n: int) -> None:
        if not 1 <= n <= lib.MAX_TABLE_N:
            raise lib.SnftRangeError(
                    f'irrep tables are supported for 1 <= n <= '
                    f'{lib.MAX_TABLE_N}, not {n}')
        logger.info('building irrep table for S_%d', n)
        self.n: int = n
        self.group: SymmetricGroup = SymmetricGroup.of(n)
        self.partitions: list[Partition] = partitions_of(n)
        self.generators: dict[Partition, list[np.ndarray]] = {
                shape: [self._adjacent_matrix(shape, k) for k in range(1, n)]
                for shape in self.partitions}
        self._stacks: dict[Partition, np.ndarray] = {}
        self._lock: threading.Lock = threading.Lock()
        self._descent: Optional[np.ndarray] = None
        self._parent: Optional[np.ndarray] = None

    @staticmethod
    @functools.lru_cache(maxsize=None)
    def of(n: int) -> IrrepTable:
        """Return the shared table for degree `n`."""
        return IrrepTable(n)

    @staticmethod
    def _adjacent_matrix(shape: Partition, k: int) -> np.ndarray:
        basis = standard_tableaux(shape)
        index: dict = {tableau: position
                       for position, tableau in enumerate(basis)}
        matrix: np.ndarray = np.zeros((len(basis), len(basis)))
        for column, tableau in enumerate(basis):
            distance: int = tableau.axial_distance(k)
            matrix[column, column] = 1.0 / distance
            if abs(distance) > 1:
                matrix[index[tableau.swap(k)], column] = np.sqrt(
                        1.0 - 1.0 / distance ** 2)
        return matrix

    def dimension(self, shape: Partition) -> int:
        """Return d_λ."""
        return self.generators[shape][0].shape[0] if self.n > 1 else 1

    def _factorisation(self) -> tuple[np.ndarray, np.ndarray]:
        if self._descent is None or self._parent is None:
            array: np.ndarray = self.group.array
            descents: np.ndarray = array[:, :-1] > array[:, 1:]
            first: np.ndarray = np.argmax(descents, axis=1)
            rows: np.ndarray = np.arange(array.shape[0])
            parents: np.ndarray = array.copy()
            parents[rows, first] = array[rows, first + 1]
            parents[rows, first + 1] = array[rows, first]
            self._descent = first
            self._parent = SymmetricGroup.rank_array(parents)
        return self._descent, self._parent

    def stack(self, shape: Partition) -> np.ndarray:
        """Return the `(n!, d, d)` array of ρ̂^λ(σ) in rank order."""
        with self._lock:
            if shape not in self._stacks:
                if shape not in self.generators:
                    raise lib.SnftInputError(
                            f'{shape} is not a partition of {self.n}')
                logger.debug('assembling YOR stack for %s', shape)
                dimension: int = self.dimension(shape)
                stack: np.ndarray = np.empty(
                        (self.group.order, dimension, dimension))
                stack[0] = np.eye(dimension)
                if self.n > 1:
                    descent, parent = self._factorisation()
                    generators: list[np.ndarray] = self.generators[shape]
                    for rank in range(1, self.group.order):
                        stack[rank] = stack[parent[rank]] @ \
                                generators[descent[rank]]
                self._stacks[shape] = stack
            return self._stacks[shape]

    def precompute(self) -> IrrepTable:
        """Fill every stack (for sharing between threads)."""
        for shape in self.partitions:
            self.stack(shape)
        return self

    def matrix(self, shape: Partition, permutation: Permutation) -> np.ndarray:
        """Return ρ̂^λ(σ).

        Raises:
            SnftInputError: If the shape or the degree does not match.
        """
        if permutation.n != self.n:
            raise lib.SnftInputError(
                    f'S_{permutation.n} element given to the S_{self.n} table')
        if shape in self._stacks:
            return self._stacks[shape][permutation.rank()]
        if shape not in self.generators:
            raise lib.SnftInputError(f'{shape} is not a partition of {self.n}')
        # factor into adjacent transpositions by bubble sort
        result: np.ndarray = np.eye(self.dimension(shape))
        images: list[int] = list(permutation.images)
        factors: list[int] = []
        while True:
            descent: Optional[int] = next(
                    (k for k in range(self.n - 1) if images[k] > images[k + 1]),
                    None)
            if descent is None:
                break
            images[descent], images[descent + 1] = \
                    images[descent + 1], images[descent]
            factors.append(descent)
        for descent in reversed(factors):
            result = result @ self.generators[shape][descent]
        return result

class CharacterTable:
    """Irreducible characters of S_n, indexed by cycle type.

    Attributes:
        n: The degree.
        partitions: The irreps, `(n)` first.
        classes: The cycle types, in the same order.
        values: `values[(λ, c)]` is the (integer) character value.
    """

    def __init__(self, table: IrrepTable) -> None:
        self.n: int = table.n
        self.partitions: list[Partition] = table.partitions
        self.classes: list[Partition] = partitions_of(table.n)
        self.values: dict[tuple[Partition, Partition], int] = {}
        for cycle_type in self.classes:
            representative: Permutation = class_representative(cycle_type)
            for shape in self.partitions:
                trace: float = float(np.trace(table.matrix(shape,
                                                           representative)))
                if abs(trace - round(trace)) > 1e-8:
                    raise lib.SnftConsistencyError(
                            f'non-integral character {trace} for {shape} '
                            f'at {cycle_type}')
                self.values[(shape, cycle_type)] = int(round(trace))

    @staticmethod
    @functools.lru_cache(maxsize=None)
    def of(n: int) -> CharacterTable:
        """Return the shared character table for degree `n`."""
        return CharacterTable(IrrepTable.of(n))

    def value(self, shape: Partition, cycle_type: Partition) -> int:
        """Return χ^λ on a conjugacy class."""
        return self.values[(shape, cycle_type)]

    def character(self, shape: Partition, permutation: Permutation) -> int:
        """Return χ^λ(σ)."""
        return self.value(shape, permutation.cycle_type())

    def group_values(self, shape: Partition) -> np.ndarray:
        """Return χ^λ(σ) for every σ in rank order."""
        return np.asarray([self.value(shape, cycle_type) for cycle_type in
                           SymmetricGroup.of(self.n).cycle_types()],
                          dtype=float)

    def class_size(self, cycle_type: Partition) -> int:
        """Return the number of permutations with a cycle type."""
        centraliser: int = 1
        for length in set(cycle_type.parts):
            count: int = cycle_type.parts.count(length)
            centraliser *= length ** count * math.factorial(count)
        return math.factorial(self.n) // centraliser

    def conjugate_check(self, shape: Partition) -> bool:
        """Verify `χ^{λ̄}(σ) = sign(σ) χ^λ(σ)` on every class.

        Raises:
            SnftConsistencyError: Naming the first violating class.
        """
        conjugate: Partition = shape.conjugate()
        for cycle_type in self.classes:
            sign: int = (-1) ** (self.n - len(cycle_type))
            if self.value(conjugate, cycle_type) != \
                    sign * self.value(shape, cycle_type):
                raise lib.SnftConsistencyError(
                        f'χ^{conjugate} != sign·χ^{shape} on class '
                        f'{cycle_type}')
        return True

    def to_rows(self) -> list[list[str]]:
        """Return the table as CSV rows (header first)."""
        rows: list[list[str]] = [['partition', 'dimension'] +
                                 [str(c) for c in self.classes]]
        rows.append(['class_size', ''] +
                    [str(self.class_size(c)) for c in self.classes])
        for shape in self.partitions:
            rows.append([str(shape), str(shape.dimension())] +
                        [str(self.value(shape, c)) for c in self.classes])
        return rows

def class_representative(cycle_type: Partition) -> Permutation:
    """Return the permutation with consecutive cycles of given lengths."""
    images: list[int] = []
    start: int = 0
    for length in cycle_type.parts:
        images.extend(start + (x + 1) % length for x in range(length))
        start += length
    return Permutation(tuple(images))

def spectrum(shape: Partition, permutation: Permutation
        ) -> dict[fractions.Fraction, int]:
    """Return the exact eigenvalues of ρ̂^λ(σ) with multiplicities.

    An eigenvalue `exp(2iπ q)` is keyed by the fraction `q` in `[0, 1)`;
    multiplicities follow from the characters of the powers of `σ`.
    """
    table: CharacterTable = CharacterTable.of(permutation.n)
    order: int = permutation.order()
    characters: list[int] = [table.character(shape, permutation.power(j))
                             for j in range(order)]
    result: dict[fractions.Fraction, int] = {}
    for k in range(order):
        multiplicity: complex = sum(
                chi * np.exp(-2j * np.pi * k * j / order)
                for j, chi in enumerate(characters)) / order
        count: int = int(round(multiplicity.real))
        if count:
            result[fractions.Fraction(k, order)] = count
    return result

def permutation_representation(n: int) -> Representation:
    """Return `σ ↦ r(σ)` permuting coordinates, `r(σ) e_β = e_{σ(β)}`."""
    def evaluate(permutation: Permutation) -> np.ndarray:
        matrix: np.ndarray = np.zeros((n, n))
        matrix[list(permutation.images), np.arange(n)] = 1.0
        return matrix
    return evaluate

def regular_representation(n: int) -> Representation:
    """Return the left regular representation on the group algebra."""
    group: SymmetricGroup = SymmetricGroup.of(n)
    def evaluate(permutation: Permutation) -> np.ndarray:
        matrix: np.ndarray = np.zeros((group.order, group.order))
        matrix[group.left_index(permutation), np.arange(group.order)] = 1.0
        return matrix
    return evaluate
