"""Transition amplitudes, counting statistics and partial distinguishability.

An `N`-particle transition from the input mode list `i` to the output
mode list `o` through an `M × M` unitary `U` is described by the
amplitude function `a(σ) = Π_α A[α][σ(α)]` with `A[α][β] = U[o_α, i_β]`.
It is invariant under `stab(i)` from the left and under `stab(o)` from
the right, so `â(λ) = Î_i(λ) â(λ) Î_o(λ)`.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import enum
import itertools
import logging
import math

from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.stats import unitary_group

from snft import lib
from snft.fourier import Fourier, GroupFunction, SpectralFunction
from snft.irreps import CharacterTable, IrrepTable, Representation
from snft.partitions import Partition, gamas_admissible
from snft.perm_core import Permutation, Subgroup, SymmetricGroup

logger: logging.Logger = logging.getLogger(__name__)

@dataclasses.dataclass(frozen=True)
class OutputEvent():
    """Occupation numbers of the output modes.

    Attributes:
        occupations: `occupations[m]` particles in mode `m`.
    """
    occupations: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.occupations or min(self.occupations) < 0 or \
                sum(self.occupations) == 0:
            raise lib.SnftInputError(
                    f'invalid occupation numbers {self.occupations}')

    def __str__(self) -> str:
        return '(' + ','.join(str(x) for x in self.occupations) + ')'

    @property
    def n(self) -> int:
        """The number of particles."""
        return sum(self.occupations)

    @property
    def m(self) -> int:
        """The number of modes."""
        return len(self.occupations)

    @staticmethod
    def from_modes(modes: Sequence[int], m: int) -> OutputEvent:
        """Count a mode list into occupations of `m` modes.

        Raises:
            SnftInputError: If a mode is out of range.
        """
        if any(not 0 <= mode < m for mode in modes):
            raise lib.SnftInputError(f'modes {tuple(modes)} exceed M={m}')
        return OutputEvent(tuple(list(modes).count(mode) for mode in range(m)))

    def modes(self) -> tuple[int, ...]:
        """Return the canonical (ascending) mode list."""
        return tuple(mode for mode, count in enumerate(self.occupations)
                     for _ in range(count))

    def stabilizer_order(self) -> int:
        """Return `|stab(o)| = Π_m n_m!`."""
        return math.prod(math.factorial(count) for count in self.occupations)

    @staticmethod
    def all_events(n: int, m: int) -> list[OutputEvent]:
        """Return all ways of placing `n` particles in `m` modes."""
        return [OutputEvent.from_modes(modes, m) for modes in
                itertools.combinations_with_replacement(range(m), n)]

@dataclasses.dataclass(frozen=True, eq=False)
class ScatteringSetup():
    """An interferometer with an input and an output mode list.

    Attributes:
        unitary: The `M × M` single-particle unitary.
        inputs: The input mode list `i`.
        outputs: The output mode list `o`.
        tolerance: Accepted deviation of `U U†` from the identity.
    """
    unitary: np.ndarray
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    tolerance: float = lib.DEFAULT_TOLERANCES.math

    def __post_init__(self) -> None:
        unitary: np.ndarray = np.array(self.unitary, dtype=complex)
        if unitary.ndim != 2 or unitary.shape[0] != unitary.shape[1]:
            raise lib.SnftInputError(
                    f'unitary must be square, got shape {unitary.shape}')
        residual: float = float(np.max(np.abs(
                unitary @ unitary.conj().T - np.eye(unitary.shape[0]))))
        if residual > self.tolerance:
            raise lib.SnftInputError(
                    f'matrix is not unitary (residual {residual:.3g} > '
                    f'{self.tolerance:.3g})')
        unitary.flags.writeable = False
        object.__setattr__(self, 'unitary', unitary)
        object.__setattr__(self, 'inputs', tuple(int(x) for x in self.inputs))
        object.__setattr__(self, 'outputs',
                           tuple(int(x) for x in self.outputs))
        if len(self.inputs) != len(self.outputs) or not self.inputs:
            raise lib.SnftInputError(
                    f'{len(self.inputs)} inputs and {len(self.outputs)} '
                    'outputs')
        if any(not 0 <= x < self.m for x in self.inputs + self.outputs):
            raise lib.SnftInputError(f'mode label exceeds M={self.m}')

    @property
    def n(self) -> int:
        """The number of particles."""
        return len(self.inputs)

    @property
    def m(self) -> int:
        """The number of modes."""
        return self.unitary.shape[0]

    def scattering_matrix(self) -> np.ndarray:
        """Return `A[α][β] = U[o_α, i_β]`."""
        return self.unitary[np.ix_(list(self.outputs), list(self.inputs))]

    def stab_i(self) -> Subgroup:
        """Return the stabiliser of the input mode list."""
        return Subgroup.stabilizer(self.inputs)

    def stab_o(self) -> Subgroup:
        """Return the stabiliser of the output mode list."""
        return Subgroup.stabilizer(self.outputs)

    def with_output(self, event: OutputEvent) -> ScatteringSetup:
        """Return the setup detecting `event` (canonical mode list).

        Raises:
            SnftInputError: If the event does not fit the setup.
        """
        if event.m != self.m or event.n != self.n:
            raise lib.SnftInputError(
                    f'event {event} does not fit N={self.n}, M={self.m}')
        return ScatteringSetup(self.unitary, self.inputs, event.modes(),
                               self.tolerance)

    def input_order(self) -> int:
        """Return `|stab(i)|`."""
        return OutputEvent.from_modes(self.inputs, self.m).stabilizer_order()

    def output_order(self) -> int:
        """Return `|stab(o)|`."""
        return OutputEvent.from_modes(self.outputs, self.m).stabilizer_order()

class ParticleStatistics(enum.Enum):
    """Exchange symmetry of identical particles."""
    BOSON = 'boson'
    FERMION = 'fermion'

    def epsilon(self, n: int) -> np.ndarray:
        """Return `ε(σ)` in rank order (1 or sign)."""
        if self is ParticleStatistics.FERMION:
            return SymmetricGroup.of(n).signs()
        return np.ones(math.factorial(n))

@dataclasses.dataclass(frozen=True, eq=False)
class DistinguishabilityModel():
    """Internal states of the particles.

    Exactly one of the fields is set.

    Attributes:
        gram: Overlaps `S[α][β] = ⟨φ_α|φ_β⟩` of the internal states.
        labels: Orthonormal internal basis labels, one per particle.
        explicit_j: A partial distinguishability function given directly.
    """
    gram: Optional[np.ndarray] = None
    labels: Optional[tuple[int, ...]] = None
    explicit_j: Optional[GroupFunction] = None

    def __post_init__(self) -> None:
        given: int = sum(x is not None for x in
                         (self.gram, self.labels, self.explicit_j))
        if given != 1:
            raise lib.SnftInputError(
                    'a distinguishability model needs exactly one of gram, '
                    'labels or explicit_j')

    @property
    def n(self) -> int:
        """The number of particles."""
        if self.gram is not None:
            return int(np.shape(self.gram)[0])
        if self.labels is not None:
            return len(self.labels)
        assert self.explicit_j is not None
        return self.explicit_j.n

    @staticmethod
    def indistinguishable(n: int) -> DistinguishabilityModel:
        """Return identical internal states."""
        return DistinguishabilityModel(labels=(0,) * n)

    @staticmethod
    def distinguishable(n: int) -> DistinguishabilityModel:
        """Return mutually orthogonal internal states."""
        return DistinguishabilityModel(labels=tuple(range(n)))

def validated_gram(gram: np.ndarray,
        tolerances: lib.Tolerances = lib.DEFAULT_TOLERANCES) -> np.ndarray:
    """Symmetrise and clip a Gram matrix.

    Raises:
        SnftInputError: If it is not square, has no unit diagonal or has
            an eigenvalue below `-gram_clip`.
    """
    matrix: np.ndarray = np.asarray(gram, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise lib.SnftInputError(f'Gram matrix must be square, got '
                                 f'{matrix.shape}')
    if np.max(np.abs(np.diag(matrix) - 1.0)) > tolerances.ingestion:
        raise lib.SnftInputError('Gram matrix needs a unit diagonal')
    matrix = (matrix + matrix.conj().T) / 2
    eigenvalues, vectors = np.linalg.eigh(matrix)
    if eigenvalues[0] < -tolerances.gram_clip:
        raise lib.SnftInputError(
                f'Gram matrix is not positive semidefinite '
                f'(eigenvalue {eigenvalues[0]:.3g})')
    if eigenvalues[0] < 0:
        logger.warning('clipping Gram eigenvalue %.3g to zero',
                       eigenvalues[0])
        eigenvalues = np.clip(eigenvalues, 0.0, None)
        matrix = (vectors * eigenvalues) @ vectors.conj().T
    return matrix

def amplitude_function(setup: ScatteringSetup,
        callback: Optional[Callable[[Permutation], complex]] = None
        ) -> GroupFunction:
    """Return `a(σ) = ⟨o|R(σ)† U^{⊗N}|i⟩ = Π_α A[α][σ(α)]`.

    Args:
        setup: The transition.
        callback: If given, evaluated at each σ instead of the product
            form; any amplitude of an operator commuting with particle
            permutations can be analysed this way.
    """
    if callback is not None:
        return GroupFunction.from_callable(setup.n, callback)
    matrix: np.ndarray = setup.scattering_matrix()
    array: np.ndarray = SymmetricGroup.of(setup.n).array
    return GroupFunction(setup.n, np.prod(
            matrix[np.arange(setup.n), array], axis=1))

def immanant(matrix: np.ndarray, shape: Partition) -> complex:
    """Return `Σ_σ χ^λ(σ) Π_α A[α][σ(α)]`.

    Raises:
        SnftInputError: If the matrix is not `|λ| × |λ|`.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (shape.n, shape.n):
        raise lib.SnftInputError(
                f'{matrix.shape} matrix has no {shape} immanant')
    array: np.ndarray = SymmetricGroup.of(shape.n).array
    products: np.ndarray = np.prod(matrix[np.arange(shape.n), array], axis=1)
    characters: np.ndarray = CharacterTable.of(shape.n).group_values(shape)
    return complex(np.dot(characters, products))

def permanent(matrix: np.ndarray) -> complex:
    """Return the permanent (immanant of the trivial irrep)."""
    n: int = np.shape(matrix)[0]
    return immanant(matrix, Partition((n,)))

def determinant(matrix: np.ndarray) -> complex:
    """Return the determinant (immanant of the sign irrep)."""
    n: int = np.shape(matrix)[0]
    return immanant(matrix, Partition((1,) * n))

def permanent_ryser(matrix: np.ndarray) -> complex:
    """Return the permanent by Ryser's inclusion-exclusion formula."""
    matrix = np.asarray(matrix, dtype=complex)
    n: int = matrix.shape[0]
    total: complex = 0j
    for size in range(1, n + 1):
        for columns in itertools.combinations(range(n), size):
            total += (-1) ** size * np.prod(
                    np.sum(matrix[:, list(columns)], axis=1))
    return complex((-1) ** n * total)

def amplitude_spectrum(setup: ScatteringSetup,
        table: Optional[IrrepTable] = None) -> SpectralFunction:
    """Return `â`."""
    return Fourier.ft(amplitude_function(setup), table)

def sector_amplitude(setup: ScatteringSetup, shape: Partition) -> complex:
    """Return `⟨o|U^{⊗N} P^λ|i⟩ = (d_λ/N!) Tr â(λ)`."""
    spectrum: SpectralFunction = amplitude_spectrum(setup)
    return shape.dimension() / math.factorial(setup.n) * spectrum.trace(shape)

def projected_amplitude(setup: ScatteringSetup, shape: Partition,
        input_coefficients: GroupFunction, output_coefficients: GroupFunction
        ) -> complex:
    """Return `⟨o|d̂† P^λ U^{⊗N} P^λ ĉ|i⟩ = (d_λ/N!) Tr[ĉ(λ) â(λ) d̂(λ)†]`."""
    a: np.ndarray = amplitude_spectrum(setup)[shape]
    c: np.ndarray = Fourier.ft(input_coefficients)[shape]
    d: np.ndarray = Fourier.ft(output_coefficients)[shape]
    return shape.dimension() / math.factorial(setup.n) * complex(
            np.trace(c @ a @ d.conj().T))

def _real(value: complex, what: str) -> float:
    if abs(value.imag) > 1e-8 * max(1.0, abs(value.real)):
        raise lib.SnftConsistencyError(
                f'{what} has imaginary part {value.imag:.3g}')
    if abs(value.imag) > 1e-12:
        logger.debug('%s: imaginary residue %.3g', what, value.imag)
    return float(value.real)

def _weighted_trace(n: int, blocks: dict[Partition, np.ndarray]) -> complex:
    return sum((shape.dimension() * complex(np.trace(block))
                for shape, block in blocks.items()), 0j)

def counting_superposition(setup: ScatteringSetup,
        coefficients: GroupFunction, event: OutputEvent,
        tolerances: lib.Tolerances = lib.DEFAULT_TOLERANCES) -> float:
    """Return the event probability for the input `Σ_σ c(σ) R(σ)|i⟩`.

    `P = Σ_λ d_λ Tr[â†ĉ†ĉâ] / (|stab_i||stab_o| Σ_λ d_λ Tr[Î_i ĉ†ĉ])`.

    Raises:
        SnftInputError: If the input state vanishes.
    """
    detected: ScatteringSetup = setup.with_output(event)
    a: SpectralFunction = amplitude_spectrum(detected)
    c: SpectralFunction = Fourier.ft(coefficients)
    indicator: SpectralFunction = Fourier.ft(
            GroupFunction.indicator(detected.stab_i()))
    gram: SpectralFunction = c.adjoint() @ c
    denominator: complex = _weighted_trace(setup.n, (indicator @ gram).blocks)
    if abs(denominator) <= tolerances.denominator:
        raise lib.SnftInputError('the coefficients annihilate the input state')
    numerator: complex = _weighted_trace(
            setup.n, (a.adjoint() @ gram @ a).blocks)
    return _real(numerator / (denominator * detected.input_order() *
                              detected.output_order()),
                 f'P{event} (superposition)')

@dataclasses.dataclass(frozen=True)
class SectorProbability():
    """Result of `counting_sector()`.

    Attributes:
        value: The probability.
        pauli_forbidden: The input has no component in the sector.
    """
    value: float
    pauli_forbidden: bool = False

def input_sector_trace(setup: ScatteringSetup, shape: Partition) -> float:
    """Return `Tr Î_i(λ) = (1/|stab_i|) Σ_{h ∈ stab_i} χ^λ(h)`."""
    table: CharacterTable = CharacterTable.of(setup.n)
    subgroup: Subgroup = setup.stab_i()
    return sum(table.character(shape, g) for g in subgroup) / len(subgroup)

def counting_sector(setup: ScatteringSetup, shape: Partition,
        event: OutputEvent) -> SectorProbability:
    """Return the event probability for `P^λ|i⟩`, normalised.

    `P = Tr[â(λ)†â(λ)] / (|stab_i||stab_o| Tr Î_i(λ))`; inputs without
    a component in the sector give 0 with the flag set.
    """
    detected: ScatteringSetup = setup.with_output(event)
    if not gamas_admissible(shape, setup.inputs):
        logger.warning('input %s has no component in sector %s',
                       setup.inputs, shape)
        return SectorProbability(0.0, pauli_forbidden=True)
    a: np.ndarray = amplitude_spectrum(detected)[shape]
    value: float = float(np.sum(np.abs(a) ** 2)) / (
            detected.input_order() * detected.output_order() *
            input_sector_trace(detected, shape))
    return SectorProbability(value)

def counting_sector_immanants(setup: ScatteringSetup, shape: Partition,
        event: OutputEvent) -> float:
    """Return `counting_sector()` as a sum of squared immanants.

    Uses `Tr[â(λ)†â(λ)] = (d_λ/N!) Σ_σ |imm^λ(A_σ)|²` with `A_σ` the
    scattering matrix with rows permuted by σ.
    """
    detected: ScatteringSetup = setup.with_output(event)
    if not gamas_admissible(shape, setup.inputs):
        return 0.0
    matrix: np.ndarray = detected.scattering_matrix()
    total: float = sum(abs(immanant(matrix[list(g.images)], shape)) ** 2
                       for g in SymmetricGroup.of(setup.n).elements())
    return shape.dimension() / math.factorial(setup.n) * total / (
            detected.input_order() * detected.output_order() *
            input_sector_trace(detected, shape))

def counting_distinguishable(setup: ScatteringSetup, event: OutputEvent
        ) -> float:
    """Return `perm(|A|²) / |stab_o|`."""
    detected: ScatteringSetup = setup.with_output(event)
    weights: np.ndarray = np.abs(detected.scattering_matrix()) ** 2
    return _real(permanent(weights), f'P{event} (distinguishable)') / \
            detected.output_order()

def counting_distinguishable_spectral(setup: ScatteringSetup,
        event: OutputEvent) -> float:
    """Return `(1/|stab_o|) Σ_λ (d_λ/N!) Tr[â†â]`, equal to `perm(|A|²)/|stab_o|`."""
    detected: ScatteringSetup = setup.with_output(event)
    power: dict[Partition, float] = amplitude_spectrum(detected).power()
    return sum(shape.dimension() * value for shape, value in power.items()) \
            / math.factorial(setup.n) / detected.output_order()

def counting_partial(setup: ScatteringSetup, j: GroupFunction,
        event: OutputEvent) -> float:
    """Return `(1/(|stab_i||stab_o|)) Σ_λ (d_λ/N!) Tr[â†ĵâ]`."""
    detected: ScatteringSetup = setup.with_output(event)
    a: SpectralFunction = amplitude_spectrum(detected)
    product: SpectralFunction = a.adjoint() @ Fourier.ft(j) @ a
    return _real(product.weighted_trace() / (
            detected.input_order() * detected.output_order()),
                 f'P{event} (partial)')

def counting_from_j_function(setup: ScatteringSetup, big_j: GroupFunction,
        event: OutputEvent,
        tolerances: lib.Tolerances = lib.DEFAULT_TOLERANCES) -> float:
    """Return the event probability for an internal-state function `J`.

    `P = Σ_λ d_λ Tr[â†Ĵâ] / (|stab_i||stab_o| Σ_λ d_λ Tr[Î_i Ĵ])`.

    Raises:
        SnftInputError: If the normalisation vanishes.
    """
    detected: ScatteringSetup = setup.with_output(event)
    a: SpectralFunction = amplitude_spectrum(detected)
    spectrum: SpectralFunction = Fourier.ft(big_j)
    indicator: SpectralFunction = Fourier.ft(
            GroupFunction.indicator(detected.stab_i()))
    denominator: complex = _weighted_trace(setup.n,
                                           (indicator @ spectrum).blocks)
    if abs(denominator) <= tolerances.denominator:
        raise lib.SnftInputError('J vanishes on the input stabiliser')
    numerator: complex = _weighted_trace(setup.n,
                                         (a.adjoint() @ spectrum @ a).blocks)
    return _real(numerator / (denominator * detected.input_order() *
                              detected.output_order()), f'P{event} (J)')

def event_distribution(setup: ScatteringSetup,
        probability: Callable[[OutputEvent], float],
        events: Optional[Iterable[OutputEvent]] = None, workers: int = 1
        ) -> dict[OutputEvent, float]:
    """Evaluate a probability on every event (all events by default)."""
    chosen: list[OutputEvent] = list(events) if events is not None else \
            OutputEvent.all_events(setup.n, setup.m)
    if workers > 1:
        IrrepTable.of(setup.n).precompute()
        with concurrent.futures.ThreadPoolExecutor(workers) as executor:
            values: list[float] = list(executor.map(probability, chosen))
    else:
        values = [probability(event) for event in chosen]
    return dict(zip(chosen, values))

def big_j_function(model: DistinguishabilityModel,
        statistics: ParticleStatistics,
        tolerances: lib.Tolerances = lib.DEFAULT_TOLERANCES
        ) -> GroupFunction:
    """Return `J(σ)` from the internal states.

    Gram model: `J(σ) = ε(σ) Π_α S[σ(α), α]`; label model:
    `J(σ) = ε(σ)` on `stab(s)` and zero elsewhere.

    Raises:
        SnftInputError: For an explicit `j` model, which has no `J`.
    """
    n: int = model.n
    epsilon: np.ndarray = statistics.epsilon(n)
    array: np.ndarray = SymmetricGroup.of(n).array
    if model.gram is not None:
        gram: np.ndarray = validated_gram(model.gram, tolerances)
        return GroupFunction(n, epsilon * np.prod(
                gram[array, np.arange(n)], axis=1))
    if model.labels is not None:
        values: np.ndarray = np.zeros(math.factorial(n), dtype=complex)
        ranks: np.ndarray = Subgroup.stabilizer(model.labels).ranks()
        values[ranks] = epsilon[ranks]
        return GroupFunction(n, values)
    raise lib.SnftInputError('an explicit j model has no J function')

def j_from_model(model: DistinguishabilityModel,
        statistics: ParticleStatistics, inputs: Sequence[int],
        tolerances: lib.Tolerances = lib.DEFAULT_TOLERANCES
        ) -> GroupFunction:
    """Return the partial distinguishability function `j`.

    `j = I_i * J * I_i / (I_i, J)`, which gives `j(id) = 1` and thus
    `Σ_λ p_λ = 1`. An explicit `j` is only rescaled to `j(id) = 1`.

    Raises:
        SnftInputError: If the model is invalid or `J` vanishes on
            `stab(i)`.
    """
    if len(inputs) != model.n:
        raise lib.SnftInputError(
                f'{len(inputs)} inputs for a {model.n}-particle model')
    if model.explicit_j is not None:
        scale: complex = model.explicit_j.values[0]
        if abs(scale) <= tolerances.denominator:
            raise lib.SnftInputError('explicit j vanishes at the identity')
        return model.explicit_j * (1.0 / scale)
    big_j: GroupFunction = big_j_function(model, statistics, tolerances)
    indicator: GroupFunction = GroupFunction.indicator(
            Subgroup.stabilizer(inputs))
    norm: complex = indicator.scalar_product(big_j)
    if abs(norm) <= tolerances.denominator:
        raise lib.SnftInputError('J vanishes on the input stabiliser')
    return indicator.convolve(big_j).convolve(indicator) * (1.0 / norm)

def sector_weights(j: GroupFunction) -> dict[Partition, float]:
    """Return `p_λ = (d_λ/N!) Tr ĵ(λ)`."""
    spectrum: SpectralFunction = Fourier.ft(j)
    order: int = math.factorial(j.n)
    return {shape: _real(shape.dimension() / order * spectrum.trace(shape),
                         f'p{shape}')
            for shape in spectrum.blocks}

def state_purity(j: GroupFunction) -> float:
    """Return `Tr ϱ² = (1/N!) Σ_λ (d_λ/N!) Tr[ĵ(λ)²]`."""
    spectrum: SpectralFunction = Fourier.ft(j)
    return _real((spectrum @ spectrum).weighted_trace() /
                 math.factorial(j.n), 'purity')

@dataclasses.dataclass(frozen=True)
class PositivityReport():
    """Per-sector positivity diagnostics of `ĵ`.

    Attributes:
        minimum_eigenvalues: Smallest eigenvalue of `(ĵ + ĵ†)/2`.
        hermiticity_residuals: `max |ĵ - ĵ†|`.
        passed: All sectors within tolerance.
    """
    minimum_eigenvalues: dict[Partition, float]
    hermiticity_residuals: dict[Partition, float]
    passed: bool

def positivity_check(j: GroupFunction,
        tolerances: lib.Tolerances = lib.DEFAULT_TOLERANCES
        ) -> PositivityReport:
    """Check that every `ĵ(λ)` is Hermitian positive semidefinite."""
    spectrum: SpectralFunction = Fourier.ft(j)
    minima: dict[Partition, float] = {}
    residuals: dict[Partition, float] = {}
    for shape, block in spectrum.blocks.items():
        minima[shape] = float(np.linalg.eigvalsh(
                (block + block.conj().T) / 2)[0])
        residuals[shape] = float(np.max(np.abs(block - block.conj().T)))
        logger.debug('ĵ%s: min eigenvalue %.3g, residual %.3g', shape,
                     minima[shape], residuals[shape])
    passed: bool = all(value >= -tolerances.positivity
                       for value in minima.values()) and \
            all(value <= tolerances.positivity for value in residuals.values())
    return PositivityReport(minima, residuals, passed)

def emulate_pure(j: GroupFunction,
        tolerances: lib.Tolerances = lib.DEFAULT_TOLERANCES
        ) -> GroupFunction:
    """Return `c` with `ĉ(λ)†ĉ(λ) = ĵ(λ)` (Hermitian square roots).

    Raises:
        SnftInputError: If some `ĵ(λ)` is not positive semidefinite.
    """
    report: PositivityReport = positivity_check(j, tolerances)
    if not report.passed:
        raise lib.SnftInputError('j is not positive; no pure emulation')
    spectrum: SpectralFunction = Fourier.ft(j)
    roots: dict[Partition, np.ndarray] = {}
    for shape, block in spectrum.blocks.items():
        eigenvalues, vectors = np.linalg.eigh((block + block.conj().T) / 2)
        roots[shape] = (vectors * np.sqrt(np.clip(eigenvalues, 0.0, None))) \
                @ vectors.conj().T
    return Fourier.ift(SpectralFunction(j.n, roots))

def duality_residual(gram: np.ndarray,
        tolerances: lib.Tolerances = lib.DEFAULT_TOLERANCES) -> float:
    """Compare `Ĵ_bosons(λ)` with `Ĵ_fermions(λ̄)` through their spectra.

    Returns:
        The largest eigenvalue difference over all sectors.
    """
    model: DistinguishabilityModel = DistinguishabilityModel(gram=gram)
    bosons: SpectralFunction = Fourier.ft(big_j_function(
            model, ParticleStatistics.BOSON, tolerances))
    fermions: SpectralFunction = Fourier.ft(big_j_function(
            model, ParticleStatistics.FERMION, tolerances))
    return max(float(np.max(np.abs(
            np.linalg.eigvalsh(block) -
            np.linalg.eigvalsh(fermions[shape.conjugate()]))))
               for shape, block in bosons.blocks.items())

def _basis_index(modes: Sequence[int], m: int) -> int:
    index: int = 0
    for mode in modes:
        index = index * m + mode
    return index

def tensor_representation(n: int, m: int) -> Representation:
    """Return `σ ↦ R(σ)` on `(C^M)^{⊗N}`, `R(σ)|m⟩ = |m ∘ σ⁻¹⟩`."""
    configurations: list[tuple[int, ...]] = list(
            itertools.product(range(m), repeat=n))

    def evaluate(permutation: Permutation) -> np.ndarray:
        inverse: tuple[int, ...] = permutation.inverse().images
        matrix: np.ndarray = np.zeros((m ** n, m ** n))
        for column, modes in enumerate(configurations):
            matrix[_basis_index([modes[inverse[a]] for a in range(n)], m),
                   column] = 1.0
        return matrix
    return evaluate

def reconstruct_state(j: GroupFunction, inputs: Sequence[int], m: int
        ) -> np.ndarray:
    """Return the dense external state `ϱ` on `(C^M)^{⊗N}`.

    `ϱ = (1/(N!|stab_i|)) Σ_{σ,τ} j(τ⁻¹σ) R(σ)|i⟩⟨i|R(τ)†`.
    """
    n: int = j.n
    lib.check_size(n, m)
    group: SymmetricGroup = SymmetricGroup.of(n)
    vectors: np.ndarray = np.zeros((group.order, m ** n), dtype=complex)
    for rank, permutation in enumerate(group.elements()):
        inverse: tuple[int, ...] = permutation.inverse().images
        vectors[rank, _basis_index([inputs[inverse[a]] for a in range(n)],
                                   m)] = 1.0
    inverse_ranks: np.ndarray = group.inverse_index()
    kernel: np.ndarray = np.empty((group.order, group.order), dtype=complex)
    for tau_rank in range(group.order):
        tau_inverse: Permutation = group.element(int(inverse_ranks[tau_rank]))
        kernel[:, tau_rank] = j.values[group.left_index(tau_inverse)]
    order: int = OutputEvent.from_modes(inputs, m).stabilizer_order()
    return vectors.T @ kernel @ vectors.conj() / (group.order * order)

def random_unitary(m: int, rng: np.random.Generator) -> np.ndarray:
    """Return a Haar random `m x m` unitary."""
    if m == 1:
        # unitary_group needs at least two dimensions
        return np.exp(2j * np.pi * rng.random((1, 1)))
    return unitary_group.rvs(m, random_state=rng)

def random_gram(n: int, rng: np.random.Generator,
        rank: Optional[int] = None) -> np.ndarray:
    """Return the Gram matrix of `n` random unit vectors in `C^rank`."""
    vectors: np.ndarray = rng.standard_normal((n, rank or n)) + \
            1j * rng.standard_normal((n, rank or n))
    vectors /= np.linalg.norm(vectors, axis=1, keepdims=True)
    gram: np.ndarray = vectors.conj() @ vectors.T
    np.fill_diagonal(gram, 1.0)
    return gram

def fourier_unitary(m: int) -> np.ndarray:
    """Return `U[l, k] = M^{-1/2} exp(2iπ lk/M)`."""
    indices: np.ndarray = np.arange(m)
    return np.exp(2j * np.pi * np.outer(indices, indices) / m) / np.sqrt(m)

def beamsplitter() -> np.ndarray:
    """Return the balanced beamsplitter `(1/√2)[[1, 1], [1, -1]]`."""
    return np.asarray([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)

