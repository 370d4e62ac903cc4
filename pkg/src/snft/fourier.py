"""Fourier analysis over S_N.

A `GroupFunction` stores `f(σ)` densely in Lehmer-rank order; its
Fourier transform `f̂(λ) = Σ_σ f(σ) ρ̂^λ(σ)` is a `SpectralFunction`
with one `d_λ × d_λ` block per partition. With the real orthogonal YOR
the inverse reads `f(σ) = Σ_λ (d_λ/N!) Tr[ρ̂^λ(σ)ᵀ f̂(λ)]`.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import logging
import math
import numbers

from typing import Any, Callable, Optional, Sequence

import numpy as np
from scipy.linalg import block_diag

from snft import lib
from snft.irreps import CharacterTable, IrrepTable, Representation
from snft.partitions import Partition, partitions_of
from snft.perm_core import Permutation, Subgroup, SymmetricGroup

logger: logging.Logger = logging.getLogger(__name__)

@dataclasses.dataclass(frozen=True, eq=False)
class GroupFunction():
    """A complex function on S_n.

    Attributes:
        n: The degree.
        values: `values[rank(σ)] == f(σ)`, read-only.
    """
    n: int
    values: np.ndarray

    def __post_init__(self) -> None:
        values: np.ndarray = np.array(self.values)
        if values.shape != (math.factorial(self.n),):
            raise lib.SnftInputError(
                    f'a function on S_{self.n} needs {math.factorial(self.n)}'
                    f' values, got shape {values.shape}')
        values.flags.writeable = False
        object.__setattr__(self, 'values', values)

    @staticmethod
    def from_callable(n: int, function: Callable[[Permutation], Any]
            ) -> GroupFunction:
        """Tabulate a callable over S_n."""
        return GroupFunction(n, np.asarray(
                [function(g) for g in SymmetricGroup.of(n).elements()],
                dtype=complex))

    @staticmethod
    def delta(permutation: Permutation) -> GroupFunction:
        """Return δ_τ."""
        values: np.ndarray = np.zeros(math.factorial(permutation.n),
                                      dtype=complex)
        values[permutation.rank()] = 1.0
        return GroupFunction(permutation.n, values)

    @staticmethod
    def constant(n: int, value: complex = 1.0) -> GroupFunction:
        """Return the constant function."""
        return GroupFunction(n, np.full(math.factorial(n), value,
                                        dtype=complex))

    @staticmethod
    def sign_function(n: int) -> GroupFunction:
        """Return σ ↦ sign(σ)."""
        return GroupFunction(n, SymmetricGroup.of(n).signs().astype(complex))

    @staticmethod
    def character_function(shape: Partition) -> GroupFunction:
        """Return σ ↦ χ^λ(σ)."""
        return GroupFunction(shape.n, CharacterTable.of(shape.n).group_values(
                shape).astype(complex))

    @staticmethod
    def indicator(subgroup: Subgroup) -> GroupFunction:
        """Return the normalised indicator `I_H` (1/|H| on H)."""
        values: np.ndarray = np.zeros(math.factorial(subgroup.n),
                                      dtype=complex)
        values[subgroup.ranks()] = 1.0 / len(subgroup)
        return GroupFunction(subgroup.n, values)

    @staticmethod
    def random(n: int, rng: np.random.Generator) -> GroupFunction:
        """Return a function with standard complex Gaussian values."""
        size: int = math.factorial(n)
        return GroupFunction(n, rng.standard_normal(size) +
                             1j * rng.standard_normal(size))

    @staticmethod
    def from_rows(rows: Sequence[Sequence[str]]) -> GroupFunction:
        """Read the CSV rows written by `GroupFunction.to_rows()`.

        Raises:
            SnftInputError: If ranks are missing or malformed.
        """
        try:
            body: list[Sequence[str]] = [row for row in rows
                                         if row and row[0] != 'rank']
            entries: dict[int, complex] = {
                    int(row[0]): complex(float(row[2]), float(row[3]))
                    for row in body}
        except (IndexError, ValueError) as error:
            raise lib.SnftInputError('malformed group function rows') \
                    from error
        n: int = 1
        while math.factorial(n) < len(entries):
            n += 1
        if sorted(entries) != list(range(math.factorial(n))):
            raise lib.SnftInputError(
                    f'{len(entries)} ranks do not tabulate a symmetric group')
        return GroupFunction(n, np.asarray([entries[k] for k in
                                            range(len(entries))]))

    def to_rows(self) -> list[list[str]]:
        """Return CSV rows: rank, cycle notation, real and imaginary part."""
        group: SymmetricGroup = SymmetricGroup.of(self.n)
        return [['rank', 'permutation', 're', 'im']] + [
                [str(rank), str(group.element(rank)),
                 repr(float(np.real(value))), repr(float(np.imag(value)))]
                for rank, value in enumerate(self.values)]

    def __call__(self, permutation: Permutation) -> complex:
        return complex(self.values[permutation.rank()])

    def __add__(self, other: GroupFunction) -> GroupFunction:
        self._check_degree(other)
        return GroupFunction(self.n, self.values + other.values)

    def __sub__(self, other: GroupFunction) -> GroupFunction:
        self._check_degree(other)
        return GroupFunction(self.n, self.values - other.values)

    def __mul__(self, scalar: numbers.Number) -> GroupFunction:
        return GroupFunction(self.n, self.values * scalar)

    __rmul__ = __mul__

    def _check_degree(self, other: GroupFunction) -> None:
        if self.n != other.n:
            raise lib.SnftInputError(
                    f'degree mismatch: S_{self.n} and S_{other.n}')

    def allclose(self, other: GroupFunction,
            tolerance: float = lib.DEFAULT_TOLERANCES.math) -> bool:
        """Compare values entrywise with an absolute tolerance."""
        self._check_degree(other)
        return bool(np.max(np.abs(self.values - other.values),
                           initial=0.0) <= tolerance)

    def star(self) -> GroupFunction:
        """Return `f★(σ) = f(σ⁻¹)*`."""
        inverse: np.ndarray = SymmetricGroup.of(self.n).inverse_index()
        return GroupFunction(self.n, np.conj(self.values[inverse]))

    def shift_left(self, permutation: Permutation) -> GroupFunction:
        """Return `σ ↦ f(t⁻¹ ∘ σ)`, i.e. `δ_t * f`."""
        index: np.ndarray = SymmetricGroup.of(self.n).left_index(
                permutation.inverse())
        return GroupFunction(self.n, self.values[index])

    def shift_right(self, permutation: Permutation) -> GroupFunction:
        """Return `σ ↦ f(σ ∘ t⁻¹)`, i.e. `f * δ_t`."""
        index: np.ndarray = SymmetricGroup.of(self.n).right_index(
                permutation.inverse())
        return GroupFunction(self.n, self.values[index])

    def convolve(self, other: GroupFunction) -> GroupFunction:
        """Return `(f * g)(σ) = Σ_τ f(σ ∘ τ⁻¹) g(τ)`."""
        self._check_degree(other)
        group: SymmetricGroup = SymmetricGroup.of(self.n)
        result: np.ndarray = np.zeros(group.order, dtype=complex)
        for rank in np.flatnonzero(other.values):
            tau: Permutation = group.element(int(rank))
            result += other.values[rank] * self.values[
                    group.right_index(tau.inverse())]
        return GroupFunction(self.n, result)

    def scalar_product(self, other: GroupFunction) -> complex:
        """Return `(f, g) = Σ_σ f(σ⁻¹) g(σ)`."""
        self._check_degree(other)
        inverse: np.ndarray = SymmetricGroup.of(self.n).inverse_index()
        return complex(np.dot(self.values[inverse], other.values))

    def inner_product(self, other: GroupFunction) -> complex:
        """Return `{f, g} = (f★, g) = Σ_σ f(σ)* g(σ)`."""
        self._check_degree(other)
        return complex(np.vdot(self.values, other.values))

    def triple_product(self, middle: GroupFunction, last: GroupFunction
            ) -> complex:
        """Return `(f * g, h)` by direct summation."""
        return self.convolve(middle).scalar_product(last)

def indicator(subgroup: Subgroup, n: Optional[int] = None) -> GroupFunction:
    """Return the normalised indicator `I_H` of a subgroup of S_n.

    Raises:
        SnftInputError: If `n` differs from the subgroup's degree.
    """
    if n is not None and n != subgroup.n:
        raise lib.SnftInputError(
                f'subgroup of S_{subgroup.n} used as subgroup of S_{n}')
    return GroupFunction.indicator(subgroup)

@dataclasses.dataclass(frozen=True, eq=False)
class SpectralFunction():
    """One complex `d_λ × d_λ` block per partition of `n`.

    Attributes:
        n: The degree.
        blocks: The Fourier coefficients keyed by partition.
    """
    n: int
    blocks: dict[Partition, np.ndarray]

    def __post_init__(self) -> None:
        for shape in partitions_of(self.n):
            if shape not in self.blocks:
                raise lib.SnftInputError(f'missing block {shape}')
            dimension: int = shape.dimension()
            if np.shape(self.blocks[shape]) != (dimension, dimension):
                raise lib.SnftInputError(
                        f'block {shape} must be {dimension}x{dimension}, '
                        f'got {np.shape(self.blocks[shape])}')

    def __getitem__(self, shape: Partition) -> np.ndarray:
        return self.blocks[shape]

    def __matmul__(self, other: SpectralFunction) -> SpectralFunction:
        return SpectralFunction(self.n, {
                shape: block @ other.blocks[shape]
                for shape, block in self.blocks.items()})

    def __add__(self, other: SpectralFunction) -> SpectralFunction:
        return SpectralFunction(self.n, {
                shape: block + other.blocks[shape]
                for shape, block in self.blocks.items()})

    def adjoint(self) -> SpectralFunction:
        """Return the blockwise conjugate transpose."""
        return SpectralFunction(self.n, {
                shape: block.conj().T for shape, block in self.blocks.items()})

    def trace(self, shape: Partition) -> complex:
        """Return `Tr F(λ)`."""
        return complex(np.trace(self.blocks[shape]))

    def power(self) -> dict[Partition, float]:
        """Return `Tr[F(λ)† F(λ)]` per partition."""
        return {shape: float(np.sum(np.abs(block) ** 2))
                for shape, block in self.blocks.items()}

    def weighted_trace(self) -> complex:
        """Return `Σ_λ (d_λ/N!) Tr F(λ)`, the inverse transform at id."""
        order: int = math.factorial(self.n)
        return sum((shape.dimension() / order * self.trace(shape)
                    for shape in self.blocks), 0j)

    def allclose(self, other: SpectralFunction,
            tolerance: float = lib.DEFAULT_TOLERANCES.math) -> bool:
        """Compare all blocks entrywise with an absolute tolerance."""
        return all(np.max(np.abs(block - other.blocks[shape]),
                          initial=0.0) <= tolerance
                   for shape, block in self.blocks.items())

    def to_json(self) -> str:
        """Serialise with complex entries as `[re, im]` pairs."""
        return lib.Helper.dump_json({'n': self.n, 'blocks': {
                str(shape): lib.Helper.encode_matrix(block)
                for shape, block in self.blocks.items()}})

    @staticmethod
    def from_json(document: dict[str, Any]) -> SpectralFunction:
        """Read a document written by `SpectralFunction.to_json()`.

        Raises:
            SnftInputError: If keys are missing or blocks malformed.
        """
        try:
            return SpectralFunction(int(document['n']), {
                    Partition.from_string(key): lib.Helper.decode_matrix(value)
                    for key, value in document['blocks'].items()})
        except (KeyError, TypeError, ValueError) as error:
            raise lib.SnftInputError('malformed spectral function') \
                    from error

class Fourier:
    """Forward and inverse transforms over S_n."""

    @staticmethod
    def _map(function: Callable[[Partition], np.ndarray],
            shapes: list[Partition], workers: int) -> list[np.ndarray]:
        if workers <= 1:
            return [function(shape) for shape in shapes]
        with concurrent.futures.ThreadPoolExecutor(workers) as executor:
            return list(executor.map(function, shapes))

    @staticmethod
    def ft(function: GroupFunction, table: Optional[IrrepTable] = None,
            workers: int = 1) -> SpectralFunction:
        """Return `f̂(λ) = Σ_σ f(σ) ρ̂^λ(σ)` for every λ."""
        table = table or IrrepTable.of(function.n)
        if table.n != function.n:
            raise lib.SnftInputError(
                    f'S_{function.n} function given to the S_{table.n} table')
        if workers > 1:
            table.precompute()
        values: np.ndarray = function.values.astype(complex)
        blocks: list[np.ndarray] = Fourier._map(
                lambda shape: np.tensordot(values, table.stack(shape),
                                           axes=(0, 0)),
                table.partitions, workers)
        return SpectralFunction(function.n, dict(zip(table.partitions,
                                                     blocks)))

    @staticmethod
    def ift(spectrum: SpectralFunction, table: Optional[IrrepTable] = None
            ) -> GroupFunction:
        """Return `f(σ) = Σ_λ (d_λ/N!) Tr[ρ̂^λ(σ⁻¹) F(λ)]`."""
        table = table or IrrepTable.of(spectrum.n)
        order: int = math.factorial(spectrum.n)
        values: np.ndarray = np.zeros(order, dtype=complex)
        for shape in table.partitions:
            values += table.dimension(shape) / order * np.einsum(
                    'gij,ij->g', table.stack(shape), spectrum[shape])
        return GroupFunction(spectrum.n, values)

    @staticmethod
    def coset_representative(i: int, n: int) -> Permutation:
        """Return the cycle `(i i+1 ... n)`, which maps `n` to `i`."""
        images: list[int] = list(range(n))
        for x in range(i - 1, n - 1):
            images[x] = x + 1
        images[n - 1] = i - 1
        return Permutation(tuple(images))

    @staticmethod
    def embedded_ranks(n: int, representative: Permutation) -> np.ndarray:
        """Return `rank(σ_i ∘ τ)` for τ ∈ S_{n-1} (fixing `n`) in rank order."""
        small: np.ndarray = SymmetricGroup.of(n - 1).array
        embedded: np.ndarray = np.hstack(
                [small, np.full((small.shape[0], 1), n - 1, dtype=np.int64)])
        return SymmetricGroup.rank_array(
                np.asarray(representative.images)[embedded])

    @staticmethod
    def restrict(blocks: dict[Partition, np.ndarray], shape: Partition
            ) -> np.ndarray:
        """Assemble the S_{n-1} blocks of the branching of `shape`."""
        return block_diag(*[
                blocks[smaller] if smaller is not None else np.ones((1, 1))
                for smaller in shape.branch_down()]).astype(complex)

    @staticmethod
    def fast_ft(function: GroupFunction, table: Optional[IrrepTable] = None,
            workers: int = 1) -> SpectralFunction:
        """Transform by one level of left-coset recursion over S_{n-1}.

        With transversal `σ_i = (i i+1 ... n)`,
        `f̂(λ) = Σ_i ρ̂^λ(σ_i) ⊕_μ Σ_{τ ∈ S_{n-1}} f(σ_i ∘ τ) ρ̂^μ(τ)`,
        the inner sums being shared by every λ that branches to μ.
        """
        n: int = function.n
        table = table or IrrepTable.of(n)
        if n == 1:
            return Fourier.ft(function, table)
        small: IrrepTable = IrrepTable.of(n - 1)
        values: np.ndarray = function.values.astype(complex)
        representatives: list[Permutation] = [
                Fourier.coset_representative(i, n) for i in range(1, n + 1)]
        inner: list[dict[Partition, np.ndarray]] = []
        for representative in representatives:
            restricted: np.ndarray = values[
                    Fourier.embedded_ranks(n, representative)]
            inner.append({shape: np.tensordot(restricted, small.stack(shape),
                                              axes=(0, 0))
                          for shape in small.partitions})

        def block(shape: Partition) -> np.ndarray:
            result: np.ndarray = np.zeros(
                    (table.dimension(shape), table.dimension(shape)),
                    dtype=complex)
            for representative, sums in zip(representatives, inner):
                result += table.matrix(shape, representative) @ \
                        Fourier.restrict(sums, shape)
            return result

        blocks: list[np.ndarray] = Fourier._map(block, table.partitions,
                                                workers)
        return SpectralFunction(n, dict(zip(table.partitions, blocks)))

    @staticmethod
    def isotypic_projector(shape: Partition, representation: Representation
            ) -> np.ndarray:
        """Return `P̂^μ = (d_μ/N!) Σ_σ χ^μ(σ⁻¹) ρ(σ)` for a representation."""
        group: SymmetricGroup = SymmetricGroup.of(shape.n)
        characters: np.ndarray = CharacterTable.of(shape.n).group_values(shape)
        projector: Optional[np.ndarray] = None
        for rank, permutation in enumerate(group.elements()):
            if characters[rank] == 0:
                continue
            term: np.ndarray = characters[rank] * np.asarray(
                    representation(permutation), dtype=complex)
            projector = term if projector is None else projector + term
        assert projector is not None
        return shape.dimension() / group.order * projector

    @staticmethod
    def transition_superposition(amplitude: SpectralFunction,
            input_coefficients: SpectralFunction,
            output_coefficients: SpectralFunction) -> complex:
        """Return `Σ_λ (d_λ/N!) Tr[ĉ(λ) â(λ) d̂(λ)†]`."""
        order: int = math.factorial(amplitude.n)
        return sum((shape.dimension() / order * complex(np.trace(
                input_coefficients[shape] @ amplitude[shape] @
                output_coefficients[shape].conj().T))
                    for shape in amplitude.blocks), 0j)

    @staticmethod
    def triple_product(f: GroupFunction, g: GroupFunction, h: GroupFunction
            ) -> complex:
        """Return `(f * g, h)` evaluated spectrally, `Σ_λ (d_λ/N!) Tr[f̂ĝĥ]`."""
        product: SpectralFunction = Fourier.ft(f) @ Fourier.ft(g) @ \
                Fourier.ft(h)
        return product.weighted_trace()

    @staticmethod
    def parseval(f: GroupFunction, g: GroupFunction) -> complex:
        """Return `(f, g)` evaluated spectrally, `Σ_λ (d_λ/N!) Tr[f̂ĝ]`."""
        return (Fourier.ft(f) @ Fourier.ft(g)).weighted_trace()
