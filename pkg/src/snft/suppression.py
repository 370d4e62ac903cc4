"""Completely destructive interference: detection and classification.

A transition is suppressed in sector λ when `â(λ)` vanishes. Besides
the generalised Pauli principle three mechanisms are recognised:

* symmetry: a permutation `τ` with `ρ̂(τ) â = Λ â` (or acting from the
  right, or on both sides) while `Λ` is not an eigenvalue of `ρ̂^λ(τ)`
  on the relevant invariant subspace;
* Pauli-like: `a` is invariant under a subgroup `H` whose character sum
  `Σ_{h ∈ H} χ^λ(h)` vanishes;
* numerics: the sector weight `Tr[â(λ)†â(λ)]` is below tolerance
  without an explanation.
"""

from __future__ import annotations

import collections
import concurrent.futures
import dataclasses
import enum
import fractions
import functools
import itertools
import logging
import math

from typing import Iterable, Optional, Sequence

import numpy as np

from snft import lib
from snft.fourier import GroupFunction
from snft.interference import (OutputEvent, ScatteringSetup,
                               amplitude_function, fourier_unitary)
from snft.irreps import CharacterTable, IrrepTable, spectrum
from snft.partitions import Partition, gamas_admissible
from snft.perm_core import Permutation, Subgroup, SymmetricGroup

logger: logging.Logger = logging.getLogger(__name__)

class Status(enum.Enum):
    """Suppression status of a sector, by precedence."""
    PAULI_FORBIDDEN = 'pauli_forbidden'
    SYMMETRY_SUPPRESSED = 'symmetry_suppressed'
    PAULI_LIKE_SUPPRESSED = 'pauli_like_suppressed'
    NUMERICALLY_SUPPRESSED = 'numerically_suppressed'
    ALLOWED = 'allowed'

@dataclasses.dataclass(frozen=True)
class SuppressionVerdict():
    """Classification of one sector of one transition.

    Attributes:
        sector: The irrep λ.
        weight: `Tr[â(λ)†â(λ)]`.
        status: The mechanism (or `ALLOWED`).
        witness: Human readable justification.
    """
    sector: Partition
    weight: float
    status: Status
    witness: str = ''

    @property
    def suppressed(self) -> bool:
        """Whether the sector vanishes."""
        return self.status is not Status.ALLOWED

@dataclasses.dataclass(frozen=True)
class DihedralSymmetry():
    """A mode relabelling of the ring that a particle permutation undoes.

    `R(τ)|m⟩ = Π_p^{⊗N}|m⟩` for a translation `m ↦ m + p` and
    `R(τ)|m⟩ = Σ_p^{⊗N}|m⟩` for a reflection `m ↦ p - m` (mod M).

    Attributes:
        kind: `'translation'` or `'reflection'`.
        p: The parameter modulo M.
        tau: A witness permutation.
    """
    kind: str
    p: int
    tau: Permutation

    def __str__(self) -> str:
        symbol: str = 'Π' if self.kind == 'translation' else 'Σ'
        return f'{symbol}_{self.p} τ={self.tau}'

    def mode_map(self, mode: int, m: int) -> int:
        """Apply the relabelling to one mode."""
        if self.kind == 'translation':
            return (mode + self.p) % m
        return (self.p - mode) % m

    def holds(self, modes: Sequence[int], m: int) -> bool:
        """Check `modes[τ⁻¹(α)] == π(modes[α])` for every α."""
        inverse: tuple[int, ...] = self.tau.inverse().images
        return all(modes[inverse[alpha]] == self.mode_map(modes[alpha], m)
                   for alpha in range(len(modes)))

    def witnesses(self, modes: Sequence[int]) -> list[Permutation]:
        """Return every witness, the coset `τ ∘ stab(modes)`."""
        return [self.tau * h for h in Subgroup.stabilizer(modes)]

def _mode_maps(m: int) -> list[tuple[str, int]]:
    return [(kind, p) for kind in ('translation', 'reflection')
            for p in range(m)]

def find_state_symmetries(modes: Sequence[int], m: int
        ) -> list[DihedralSymmetry]:
    """Return the dihedral relabellings that permute a mode list.

    The witness matches each position to the next unused position
    holding the relabelled mode.

    Raises:
        SnftInputError: If a mode is out of range.
    """
    return list(_state_symmetries(tuple(modes), m))

@functools.lru_cache(maxsize=None)
def _state_symmetries(modes: tuple[int, ...], m: int
        ) -> tuple[DihedralSymmetry, ...]:
    if any(not 0 <= mode < m for mode in modes):
        raise lib.SnftInputError(f'modes {modes} exceed M={m}')
    n: int = len(modes)
    found: list[DihedralSymmetry] = []
    for kind, p in _mode_maps(m):
        relabelling: DihedralSymmetry = DihedralSymmetry(
                kind, p, Permutation.identity(n))
        mapped: list[int] = [relabelling.mode_map(mode, m) for mode in modes]
        if sorted(mapped) != sorted(modes):
            continue
        # τ⁻¹(α) is the next unused β with modes[β] == π(modes[α])
        unused: dict[int, list[int]] = collections.defaultdict(list)
        for beta, mode in enumerate(modes):
            unused[mode].append(beta)
        inverse: list[int] = [unused[target].pop(0) for target in mapped]
        symmetry: DihedralSymmetry = DihedralSymmetry(
                kind, p, Permutation(tuple(inverse)).inverse())
        if not symmetry.holds(modes, m):
            raise lib.SnftConsistencyError(f'witness of {symmetry} fails')
        found.append(symmetry)
    return tuple(found)

def sector_weights_table(setup: ScatteringSetup) -> dict[Partition, float]:
    """Return `Tr[â(λ)†â(λ)]` for every λ."""
    return _weights(amplitude_function(setup).values, setup.n)

def _weights(values: np.ndarray, n: int) -> dict[Partition, float]:
    table: IrrepTable = IrrepTable.of(n)
    result: dict[Partition, float] = {}
    for shape in table.partitions:
        block: np.ndarray = np.tensordot(values, table.stack(shape),
                                         axes=(0, 0))
        result[shape] = float(np.sum(np.abs(block) ** 2))
    return result

def restricted_spectrum(permutation: Permutation, subgroup: Subgroup
        ) -> dict[Partition, dict[fractions.Fraction, int]]:
    """Return the spectrum of `ρ̂^λ(τ)` on the range of `Î_H`, for all λ.

    `τ` must normalise `H`. The multiplicity of `exp(2iπ k/r)` is
    `(1/(r|H|)) Σ_j Σ_{h ∈ H} χ^λ(τ^j h) exp(-2iπ kj/r)`; with `H`
    trivial this is `irreps.spectrum()`.

    Raises:
        SnftConsistencyError: If a multiplicity is not integral.
    """
    return _restricted_spectrum(permutation, subgroup)

@functools.lru_cache(maxsize=4096)
def _restricted_spectrum(permutation: Permutation, subgroup: Subgroup
        ) -> dict[Partition, dict[fractions.Fraction, int]]:
    table: CharacterTable = CharacterTable.of(permutation.n)
    order: int = permutation.order()
    classes: list[collections.Counter] = []
    power: Permutation = Permutation.identity(permutation.n)
    for _ in range(order):
        classes.append(collections.Counter(
                (power * h).cycle_type() for h in subgroup))
        power = power * permutation
    result: dict[Partition, dict[fractions.Fraction, int]] = {}
    for shape in table.partitions:
        sums: list[int] = [sum(count * table.value(shape, cycle_type)
                               for cycle_type, count in counter.items())
                           for counter in classes]
        multiplicities: dict[fractions.Fraction, int] = {}
        for k in range(order):
            value: complex = sum(total * np.exp(-2j * np.pi * k * j / order)
                                 for j, total in enumerate(sums)) / (
                    order * len(subgroup))
            count: int = int(round(value.real))
            if abs(value - count) > 1e-6:
                raise lib.SnftConsistencyError(
                        f'non-integral multiplicity {value} in {shape}')
            if count:
                multiplicities[fractions.Fraction(k, order)] = count
        result[shape] = multiplicities
    return result

@functools.lru_cache(maxsize=None)
def _character_sums(subgroup: Subgroup) -> dict[Partition, int]:
    table: CharacterTable = CharacterTable.of(subgroup.n)
    counter: collections.Counter = collections.Counter(
            h.cycle_type() for h in subgroup)
    return {shape: sum(count * table.value(shape, cycle_type)
                       for cycle_type, count in counter.items())
            for shape in table.partitions}

@functools.lru_cache(maxsize=None)
def _left_index(permutation: Permutation) -> np.ndarray:
    return SymmetricGroup.of(permutation.n).left_index(permutation)

@functools.lru_cache(maxsize=None)
def _right_index(permutation: Permutation) -> np.ndarray:
    return SymmetricGroup.of(permutation.n).right_index(permutation)

@functools.lru_cache(maxsize=None)
def _stabilizer(modes: tuple[int, ...]) -> Subgroup:
    return Subgroup.stabilizer(modes)

@functools.lru_cache(maxsize=None)
def _young(blocks: tuple[tuple[int, ...], ...], n: int) -> Subgroup:
    return Subgroup.young(blocks, n)

@functools.lru_cache(maxsize=None)
def _cyclic(generator: Permutation) -> Subgroup:
    return Subgroup.cyclic(generator)

@functools.lru_cache(maxsize=None)
def _admissible(shape: Partition, modes: tuple[int, ...]) -> bool:
    return gamas_admissible(shape, modes)

def verify_spectral_facts(permutation: Permutation) -> bool:
    """Check that `ρ̂^{(N-1,1)}(τ)` has eigenvalue 1 (#cycles - 1) times.

    Both the exact character count and the numerical eigenvalues of
    the matrix are checked.

    Raises:
        SnftConsistencyError: If either count differs.
    """
    n: int = permutation.n
    if n < 2:
        return True
    shape: Partition = Partition((n - 1, 1))
    expected: int = len(permutation.cycles()) - 1
    exact: int = spectrum(shape, permutation).get(fractions.Fraction(0), 0)
    eigenvalues: np.ndarray = np.linalg.eigvals(
            IrrepTable.of(n).matrix(shape, permutation))
    numeric: int = int(np.sum(np.abs(eigenvalues - 1.0) < 1e-8))
    if exact != expected or numeric != expected:
        raise lib.SnftConsistencyError(
                f'ρ{shape}({permutation}) has eigenvalue 1 with multiplicity '
                f'{exact} (numerically {numeric}), expected {expected}')
    return True

def is_fourier(unitary: np.ndarray) -> bool:
    """Check whether a unitary is the Fourier interferometer."""
    unitary = np.asarray(unitary)
    return bool(np.allclose(unitary, fourier_unitary(unitary.shape[0]),
                            atol=1e-12))

def phase_profile(setup: ScatteringSetup) -> GroupFunction:
    """Return `k(σ) = Σ_α o_α i_{σ(α)} mod M`.

    For the Fourier interferometer `a(σ) = M^{-N/2} exp(2iπ k(σ)/M)`.

    Raises:
        SnftInputError: If the unitary is not the Fourier matrix.
    """
    if not is_fourier(setup.unitary):
        raise lib.SnftInputError('phase profiles need the Fourier unitary')
    array: np.ndarray = SymmetricGroup.of(setup.n).array
    inputs: np.ndarray = np.asarray(setup.inputs)
    outputs: np.ndarray = np.asarray(setup.outputs)
    return GroupFunction(setup.n, (inputs[array] @ outputs) % setup.m)

def amplitude_cloud(setup: ScatteringSetup, decimals: int = 9
        ) -> list[tuple[float, float, int]]:
    """Return the distinct values of `a(σ)` with multiplicities."""
    values: np.ndarray = amplitude_function(setup).values
    counter: collections.Counter = collections.Counter(
            (float(np.round(v.real, decimals)) + 0.0,
             float(np.round(v.imag, decimals)) + 0.0) for v in values)
    return sorted((re, im, count) for (re, im), count in counter.items())

def is_point_symmetric(setup: ScatteringSetup, decimals: int = 9) -> bool:
    """Check that the amplitude multiset is invariant under `a ↦ -a`.

    The Fourier interferometer is decided exactly on the phase profile
    (`k ↦ k + M/2`).
    """
    if is_fourier(setup.unitary):
        if setup.m % 2:
            return False
        counts: np.ndarray = np.bincount(
                phase_profile(setup).values.real.astype(int),
                minlength=setup.m)
        return bool(np.array_equal(counts, np.roll(counts, setup.m // 2)))
    cloud: list[tuple[float, float, int]] = amplitude_cloud(setup, decimals)
    mirrored: list[tuple[float, float, int]] = sorted(
            (-re + 0.0, -im + 0.0, count) for re, im, count in cloud)
    return cloud == mirrored

def single_offperiod_bosonic(setup: ScatteringSetup) -> complex:
    """Return `â((N))` when all but one output share a mode.

    With `o = (c, ..., c, q)` the amplitude only depends on where the
    odd particle comes from, and
    `â((N)) = M^{-N/2} (N-1)! ω^{cΣi} Σ_m n_m ω^{(q-c)m}`.

    Raises:
        SnftInputError: If the unitary is not the Fourier matrix or the
            outputs do not have that form.
    """
    if not is_fourier(setup.unitary):
        raise lib.SnftInputError('closed form needs the Fourier unitary')
    counts: collections.Counter = collections.Counter(setup.outputs)
    if setup.n < 2 or sorted(counts.values()) != [1, setup.n - 1]:
        raise lib.SnftInputError(
                f'outputs {setup.outputs} are not (c, ..., c, q)')
    common: int = next(mode for mode, count in counts.items() if count > 1)
    odd: int = next(mode for mode, count in counts.items() if count == 1)
    m: int = setup.m
    occupations: np.ndarray = np.bincount(setup.inputs, minlength=m)
    omega: complex = np.exp(2j * np.pi / m)
    transform: complex = complex(np.sum(
            occupations * omega ** ((odd - common) * np.arange(m))))
    return complex(m ** (-setup.n / 2) * math.factorial(setup.n - 1) *
                   omega ** (common * sum(setup.inputs)) * transform)

def invariance_subgroups(a: GroupFunction,
        tolerances: lib.Tolerances = lib.DEFAULT_TOLERANCES
        ) -> tuple[Subgroup, Subgroup]:
    """Return the Young subgroups leaving `a` invariant on each side.

    Transpositions `t` with `a(t ∘ σ) = a(σ)` (left) or `a(σ ∘ t) = a(σ)`
    (right) for all σ are joined into blocks of positions.
    """
    return _invariance_subgroups(a.values, a.n, tolerances)

def _invariance_subgroups(values: np.ndarray, n: int,
        tolerances: lib.Tolerances) -> tuple[Subgroup, Subgroup]:
    scale: float = float(np.max(np.abs(values), initial=0.0))
    result: list[Subgroup] = []
    for index in (_left_index, _right_index):
        parent: list[int] = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                x = parent[x]
            return x

        for a, b in itertools.combinations(range(1, n + 1), 2):
            if find(a - 1) == find(b - 1):
                continue
            t: Permutation = Permutation.transposition(a, b, n)
            if np.allclose(values[index(t)], values, rtol=0.0,
                           atol=tolerances.phase * max(scale, 1e-300)):
                parent[find(b - 1)] = find(a - 1)
        blocks: dict[int, list[int]] = collections.defaultdict(list)
        for x in range(n):
            blocks[find(x)].append(x + 1)
        result.append(_young(tuple(tuple(b) for b in blocks.values()), n))
    return result[0], result[1]

def _is_invariant(values: np.ndarray, generators: Iterable[Permutation],
        left: bool, tolerance: float) -> bool:
    index = _left_index if left else _right_index
    return all(np.allclose(values[index(h)], values, rtol=0.0,
                           atol=tolerance) for h in generators)

def _proportionality(values: np.ndarray, index: np.ndarray,
        tolerances: lib.Tolerances) -> Optional[complex]:
    """Return `c` with `values[index] == c * values`, if there is one."""
    scale: float = float(np.max(np.abs(values), initial=0.0))
    if scale == 0.0:
        return None
    pivot: int = int(np.argmax(np.abs(values)))
    factor: complex = complex(values[index][pivot] / values[pivot])
    if abs(abs(factor) - 1.0) > tolerances.phase or not np.allclose(
            values[index], factor * values, rtol=0.0,
            atol=tolerances.phase * scale):
        return None
    return factor

def _phase_fraction(value: complex, tolerances: lib.Tolerances
        ) -> Optional[fractions.Fraction]:
    """Return `q` with `value == exp(2iπ q)` for a small denominator."""
    angle: float = float(np.angle(value) / (2 * np.pi)) % 1.0
    candidate: fractions.Fraction = fractions.Fraction(angle).limit_denominator(
            5040)
    if abs(float(candidate) - angle) > tolerances.phase:
        return None
    return candidate % 1

def _in_spectrum(phase: fractions.Fraction,
        eigenvalues: Iterable[fractions.Fraction]) -> bool:
    return any((phase - e) % 1 == 0 for e in eigenvalues)

def _sum_spectrum(first: dict[fractions.Fraction, int],
        second: dict[fractions.Fraction, int]) -> set[fractions.Fraction]:
    return {(x + y) % 1 for x in first for y in second}

@dataclasses.dataclass
class _Predictions():
    forbidden: dict[Partition, str] = dataclasses.field(default_factory=dict)
    symmetric: dict[Partition, str] = dataclasses.field(default_factory=dict)
    pauli_like: dict[Partition, str] = dataclasses.field(default_factory=dict)

class Classifier:
    """Predict and confirm suppressions of transitions through one unitary.

    Symmetry relations are looked for among the dihedral relabellings
    of the input and output mode lists. For the Fourier interferometer
    the scaling `Λ` is known exactly and every relation found
    numerically must agree with it.

    Attributes:
        unitary: The interferometer.
        exact: Whether the unitary is the Fourier matrix.
        tolerances: Thresholds.
    """

    def __init__(self, unitary: np.ndarray,
            tolerances: lib.Tolerances = lib.DEFAULT_TOLERANCES) -> None:
        self.unitary: np.ndarray = np.asarray(unitary, dtype=complex)
        self.m: int = self.unitary.shape[0]
        self.exact: bool = is_fourier(self.unitary)
        self.tolerances: lib.Tolerances = tolerances

    def threshold(self, weights: dict[Partition, float]) -> float:
        """Return the weight below which a sector counts as vanishing."""
        return max(self.tolerances.suppression_relative * max(weights.values()),
                   self.tolerances.suppression_floor)

    def forbidden(self, inputs: Sequence[int], outputs: Sequence[int],
            predictions: _Predictions) -> None:
        """Record sectors excluded by the generalised Pauli principle."""
        for shape in IrrepTable.of(len(inputs)).partitions:
            sides: list[str] = [
                    side for side, modes in (('input', inputs),
                                             ('output', outputs))
                    if not _admissible(shape, tuple(modes))]
            if sides:
                predictions.forbidden[shape] = ' and '.join(sides) + \
                        ' not admissible'

    def _exact_factor(self, kind: str, symmetry: DihedralSymmetry,
            other: Optional[DihedralSymmetry], inputs: Sequence[int],
            outputs: Sequence[int]) -> fractions.Fraction:
        n: int = len(inputs)
        if kind == 'input':
            return fractions.Fraction(-symmetry.p * sum(outputs) % self.m,
                                      self.m)
        if kind == 'output':
            return fractions.Fraction(-symmetry.p * sum(inputs) % self.m,
                                      self.m)
        assert other is not None
        return fractions.Fraction(
                (n * symmetry.p * other.p - other.p * sum(inputs) -
                 symmetry.p * sum(outputs)) % self.m, self.m)

    def _factor(self, values: np.ndarray, index: np.ndarray, kind: str,
            symmetry: DihedralSymmetry, other: Optional[DihedralSymmetry],
            inputs: Sequence[int], outputs: Sequence[int]
            ) -> Optional[fractions.Fraction]:
        factor: Optional[complex] = _proportionality(values, index,
                                                     self.tolerances)
        if not self.exact:
            return None if factor is None else _phase_fraction(
                    factor, self.tolerances)
        expected: fractions.Fraction = self._exact_factor(
                kind, symmetry, other, inputs, outputs)
        if factor is not None and abs(factor - np.exp(
                2j * np.pi * float(expected))) > self.tolerances.phase * 10:
            raise lib.SnftConsistencyError(
                    f'{kind} relation {symmetry} scales by {factor:.6g}, '
                    f'predicted exp(2iπ·{expected})')
        if factor is None:
            raise lib.SnftConsistencyError(
                    f'{kind} relation {symmetry} does not hold for '
                    f'i={tuple(inputs)}, o={tuple(outputs)}')
        return expected

    def symmetric(self, inputs: Sequence[int], outputs: Sequence[int],
            values: np.ndarray, predictions: _Predictions) -> None:
        """Record sectors whose spectrum misses a scaling factor.

        The spectra of real orthogonal matrices are closed under
        conjugation, so `Λ` and `Λ⁻¹` give the same criterion.
        """
        stab_i: Subgroup = _stabilizer(tuple(inputs))
        stab_o: Subgroup = _stabilizer(tuple(outputs))
        shapes: list[Partition] = IrrepTable.of(len(inputs)).partitions
        input_symmetries = _state_symmetries(tuple(inputs), self.m)
        output_symmetries = _state_symmetries(tuple(outputs), self.m)
        for symmetry in input_symmetries:
            if symmetry.kind != 'translation' or symmetry.p == 0:
                continue
            phase = self._factor(values, _left_index(symmetry.tau),
                                 'input', symmetry, None, inputs, outputs)
            if phase is None:
                continue
            spectra = _restricted_spectrum(symmetry.tau, stab_i)
            for shape in shapes:
                if not _in_spectrum(phase, spectra[shape]):
                    predictions.symmetric.setdefault(
                            shape, f'input {symmetry} Λ=exp(2iπ·{phase})')
        for symmetry in output_symmetries:
            if symmetry.kind != 'translation' or symmetry.p == 0:
                continue
            phase = self._factor(values,
                                 _right_index(symmetry.tau.inverse()),
                                 'output', symmetry, None, inputs, outputs)
            if phase is None:
                continue
            spectra = _restricted_spectrum(symmetry.tau, stab_o)
            for shape in shapes:
                if not _in_spectrum(phase, spectra[shape]):
                    predictions.symmetric.setdefault(
                            shape, f'output {symmetry} Λ=exp(2iπ·{phase})')
        for first in input_symmetries:
            if first.kind != 'reflection':
                continue
            for second in output_symmetries:
                if second.kind != 'reflection':
                    continue
                index: np.ndarray = _right_index(second.tau.inverse())[
                        _left_index(first.tau)]
                phase = self._factor(values, index, 'joint', first, second,
                                     inputs, outputs)
                if phase is None:
                    continue
                left = _restricted_spectrum(first.tau, stab_i)
                right = _restricted_spectrum(second.tau, stab_o)
                for shape in shapes:
                    if not _in_spectrum(phase, _sum_spectrum(left[shape],
                                                             right[shape])):
                        predictions.symmetric.setdefault(
                                shape, f'input {first}, output {second} '
                                f'Λ=exp(2iπ·{phase})')

    def pauli_like(self, inputs: Sequence[int], outputs: Sequence[int],
            values: np.ndarray, predictions: _Predictions,
            candidates: Optional[Iterable[Subgroup]] = None) -> None:
        """Record sectors killed by an invariance subgroup.

        Args:
            inputs: The input mode list.
            outputs: The output mode list.
            values: The amplitude function.
            predictions: Filled in place.
            candidates: Subgroups to test on both sides; by default the
                stabilisers, the cyclic groups of the dihedral witnesses
                and the invariance Young subgroups of `a`.
        """
        n: int = len(inputs)
        scale: float = float(np.max(np.abs(values), initial=0.0))
        tolerance: float = self.tolerances.phase * max(scale, 1e-300)
        # (subgroup, acts from the left, generators to check)
        tests: list[tuple[Subgroup, bool, Sequence[Permutation]]] = []
        if candidates is None:
            left, right = _invariance_subgroups(values, n, self.tolerances)
            stab_i: Subgroup = _stabilizer(tuple(inputs))
            stab_o: Subgroup = _stabilizer(tuple(outputs))
            tests = [(stab_i, True, ()), (stab_o, False, ()),
                     (left, True, ()), (right, False, ())]
            tests += [(_cyclic(symmetry.tau), True, (symmetry.tau,))
                      for symmetry in _state_symmetries(tuple(inputs), self.m)
                      if symmetry.tau != Permutation.identity(n)]
            tests += [(_cyclic(symmetry.tau), False, (symmetry.tau,))
                      for symmetry in _state_symmetries(tuple(outputs), self.m)
                      if symmetry.tau != Permutation.identity(n)]
        else:
            tests = [(subgroup, side, subgroup.elements)
                     for subgroup in candidates for side in (True, False)]
        for subgroup, left_side, generators in tests:
            if len(subgroup) == 1:
                continue
            sums: dict[Partition, int] = _character_sums(subgroup)
            killed: list[Partition] = [
                    shape for shape, total in sums.items()
                    if total == 0 and shape not in predictions.pauli_like and
                    shape not in predictions.forbidden]
            if not killed or not _is_invariant(values, generators, left_side,
                                               tolerance):
                continue
            side: str = 'I_H * a = a' if left_side else 'a * I_H = a'
            for shape in killed:
                predictions.pauli_like[shape] = f'H={subgroup}, {side}'

    def verdicts(self, inputs: Sequence[int], outputs: Sequence[int],
            values: np.ndarray, weights: dict[Partition, float],
            mechanisms: Sequence[str] = ('symmetry', 'pauli_like'),
            candidates: Optional[Iterable[Subgroup]] = None
            ) -> list[SuppressionVerdict]:
        """Classify every sector and confirm each prediction numerically.

        Raises:
            SnftConsistencyError: If a predicted suppression has a
                weight above the threshold.
        """
        predictions: _Predictions = _Predictions()
        self.forbidden(inputs, outputs, predictions)
        if 'symmetry' in mechanisms:
            self.symmetric(inputs, outputs, values, predictions)
        if 'pauli_like' in mechanisms:
            self.pauli_like(inputs, outputs, values, predictions, candidates)
        threshold: float = self.threshold(weights)
        result: list[SuppressionVerdict] = []
        for shape, weight in weights.items():
            status: Status
            witness: str
            for status, table in (
                    (Status.PAULI_FORBIDDEN, predictions.forbidden),
                    (Status.SYMMETRY_SUPPRESSED, predictions.symmetric),
                    (Status.PAULI_LIKE_SUPPRESSED, predictions.pauli_like)):
                if shape in table:
                    witness = table[shape]
                    break
            else:
                status = Status.NUMERICALLY_SUPPRESSED \
                        if weight < threshold else Status.ALLOWED
                witness = ''
            if status not in (Status.ALLOWED,
                              Status.NUMERICALLY_SUPPRESSED) and \
                    weight >= threshold:
                raise lib.SnftConsistencyError(
                        f'{status.value} predicted for {shape} '
                        f'(i={tuple(inputs)}, o={tuple(outputs)}, {witness}) '
                        f'but the weight is {weight:.3g}')
            logger.debug('i=%s o=%s %s: %s %.3g', inputs, outputs, shape,
                         status.value, weight)
            result.append(SuppressionVerdict(shape, weight, status, witness))
        return result

    def classify(self, setup: ScatteringSetup,
            mechanisms: Sequence[str] = ('symmetry', 'pauli_like'),
            candidates: Optional[Iterable[Subgroup]] = None
            ) -> list[SuppressionVerdict]:
        """Classify the sectors of one transition."""
        values: np.ndarray = amplitude_function(setup).values
        return self.verdicts(setup.inputs, setup.outputs, values,
                             _weights(values, setup.n), mechanisms,
                             candidates)

def symmetry_suppression_verdicts(setup: ScatteringSetup,
        tolerances: lib.Tolerances = lib.DEFAULT_TOLERANCES
        ) -> list[SuppressionVerdict]:
    """Classify sectors by the Pauli principle and symmetry relations."""
    return Classifier(setup.unitary, tolerances).classify(setup,
                                                          ('symmetry',))

def pauli_like_verdicts(setup: ScatteringSetup,
        candidates: Optional[Iterable[Subgroup]] = None,
        tolerances: lib.Tolerances = lib.DEFAULT_TOLERANCES
        ) -> list[SuppressionVerdict]:
    """Classify sectors by the Pauli principle and invariance subgroups."""
    return Classifier(setup.unitary, tolerances).classify(
            setup, ('pauli_like',), candidates)

def classify(setup: ScatteringSetup,
        tolerances: lib.Tolerances = lib.DEFAULT_TOLERANCES
        ) -> list[SuppressionVerdict]:
    """Classify sectors with every mechanism."""
    return Classifier(setup.unitary, tolerances).classify(setup)

def _relabel(occupations: tuple[int, ...], kind: str, p: int
        ) -> tuple[int, ...]:
    m: int = len(occupations)
    result: list[int] = [0] * m
    for mode, count in enumerate(occupations):
        target: int = (mode + p) % m if kind == 'translation' \
                else (p - mode) % m
        result[target] = count
    return tuple(result)

def dihedral_orbit(inputs: tuple[int, ...], outputs: tuple[int, ...]
        ) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Return the pairs of occupations reachable by D_M and exchange."""
    orbit: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
    for kind, p in _mode_maps(len(inputs)):
        first: tuple[int, ...] = _relabel(inputs, kind, p)
        second: tuple[int, ...] = _relabel(outputs, kind, p)
        orbit.add((first, second))
        orbit.add((second, first))
    return orbit

def _sort_key(occupations: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-x for x in occupations)

@dataclasses.dataclass(frozen=True)
class ScanCell():
    """One (input, output) pair of a scan.

    Attributes:
        inputs: Input occupations.
        outputs: Output occupations.
        class_size: Raw pairs represented by this cell.
        verdicts: One verdict per sector.
    """
    inputs: OutputEvent
    outputs: OutputEvent
    class_size: int
    verdicts: tuple[SuppressionVerdict, ...]

    def verdict(self, shape: Partition) -> SuppressionVerdict:
        """Return the verdict of one sector."""
        return next(v for v in self.verdicts if v.sector == shape)

@dataclasses.dataclass(frozen=True)
class ScanTable():
    """The verdicts of all transitions of a scan.

    Attributes:
        n: Number of particles.
        m: Number of modes.
        dedupe: `'none'` or `'dihedral'`.
        cells: Sorted by input, then output occupations.
        threshold_relative: The relative suppression tolerance used.
    """
    n: int
    m: int
    dedupe: str
    cells: tuple[ScanCell, ...]
    threshold_relative: float

    def summary(self) -> dict[Partition, dict[Status, int]]:
        """Count raw pairs per sector and status."""
        result: dict[Partition, dict[Status, int]] = {
                shape: {status: 0 for status in Status}
                for shape in IrrepTable.of(self.n).partitions}
        for cell in self.cells:
            for verdict in cell.verdicts:
                result[verdict.sector][verdict.status] += cell.class_size
        return result

    def to_rows(self) -> list[list[str]]:
        """Return the table as CSV rows (header first)."""
        rows: list[list[str]] = [['input', 'output', 'class_size', 'sector',
                                  'weight', 'status', 'witness']]
        for cell in self.cells:
            for verdict in cell.verdicts:
                rows.append([str(cell.inputs), str(cell.outputs),
                             str(cell.class_size), str(verdict.sector),
                             repr(verdict.weight), verdict.status.value,
                             verdict.witness])
        return rows

    def summary_rows(self) -> list[list[str]]:
        """Return the summary counts as CSV rows (header first)."""
        rows: list[list[str]] = [['sector'] + [s.value for s in Status]]
        for shape, counts in self.summary().items():
            rows.append([str(shape)] + [str(counts[s]) for s in Status])
        return rows

    def residual_report(self) -> list[str]:
        """List the suppressions no mechanism explains.

        These are the numerically suppressed cells and the inputs with a
        cyclic translation witness where both `(N)` and `(N-1,1)` vanish
        although the scaling factor decides between them.
        """
        lines: list[str] = []
        if self.n < 2:
            return lines
        trivial: Partition = Partition((self.n,))
        standard: Partition = Partition((self.n - 1, 1))
        for cell in self.cells:
            pair: str = f'{cell.inputs} -> {cell.outputs}'
            for verdict in cell.verdicts:
                if verdict.status is Status.NUMERICALLY_SUPPRESSED:
                    lines.append(f'{pair} {verdict.sector}: unexplained zero '
                                 f'(weight {verdict.weight:.3g})')
            cyclic: bool = any(
                    symmetry.kind == 'translation' and
                    symmetry.tau.cycle_type() == Partition((self.n,))
                    for symmetry in _state_symmetries(
                            cell.inputs.modes(), self.m))
            if cyclic and cell.verdict(trivial).suppressed and \
                    cell.verdict(standard).suppressed:
                lines.append(f'{pair}: both {trivial} and {standard} vanish '
                             '(inherited zero)')
        return lines

def scan(n: int, m: int, unitary: np.ndarray, dedupe: str = 'none',
        workers: int = 1,
        tolerances: lib.Tolerances = lib.DEFAULT_TOLERANCES,
        unsafe_large: bool = False) -> ScanTable:
    """Classify every (input, output) pair of occupations.

    Amplitudes of all outputs of one input are evaluated at once and
    transformed by a matrix product against the stacked irreps.

    Args:
        n: Number of particles.
        m: Number of modes.
        unitary: The interferometer.
        dedupe: `'none'`, or `'dihedral'` to keep one pair per orbit of
            simultaneous ring relabellings and input/output exchange
            (Fourier unitary only).
        workers: Threads over inputs.
        tolerances: Thresholds.
        unsafe_large: Lift the resource guard.

    Raises:
        SnftInputError: For an unknown or inapplicable dedupe policy.
        SnftRangeError: If the sizes exceed the resource guard.
        SnftConsistencyError: If a prediction is contradicted.
    """
    lib.check_size(n, m, unsafe_large)
    classifier: Classifier = Classifier(unitary, tolerances)
    if classifier.unitary.shape != (m, m):
        raise lib.SnftInputError(f'unitary is not {m}x{m}')
    if dedupe not in ('none', 'dihedral'):
        raise lib.SnftInputError(f'unknown dedupe policy "{dedupe}"')
    if dedupe == 'dihedral' and not classifier.exact:
        raise lib.SnftInputError('dihedral dedupe needs the Fourier unitary')
    events: list[OutputEvent] = sorted(
            OutputEvent.all_events(n, m),
            key=lambda event: _sort_key(event.occupations))
    pairs: dict[OutputEvent, list[tuple[OutputEvent, int]]] = {
            event: [] for event in events}
    if dedupe == 'dihedral':
        seen: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
        for first in events:
            for second in events:
                key = (first.occupations, second.occupations)
                if key in seen:
                    continue
                orbit = dihedral_orbit(*key)
                seen |= orbit
                pairs[first].append((second, len(orbit)))
    else:
        for first in events:
            pairs[first] = [(second, 1) for second in events]
    table: IrrepTable = IrrepTable.of(n).precompute()
    for symmetry in {s for event in events
                     for s in _state_symmetries(event.modes(), m)}:
        verify_spectral_facts(symmetry.tau)
    flattened: dict[Partition, np.ndarray] = {
            shape: table.stack(shape).reshape(table.group.order, -1)
            for shape in table.partitions}

    def run(event: OutputEvent) -> list[ScanCell]:
        chosen: list[tuple[OutputEvent, int]] = pairs[event]
        if not chosen:
            return []
        logger.info('scanning input %s (%d outputs)', event, len(chosen))
        inputs: tuple[int, ...] = event.modes()
        outputs: np.ndarray = np.asarray([o.modes() for o, _ in chosen])
        sources: np.ndarray = np.asarray(inputs)[table.group.array]
        amplitudes: np.ndarray = np.prod(
                classifier.unitary[outputs[:, None, :], sources[None, :, :]],
                axis=2)
        weights: dict[Partition, np.ndarray] = {
                shape: np.sum(np.abs(amplitudes @ stack) ** 2, axis=1)
                for shape, stack in flattened.items()}
        cells: list[ScanCell] = []
        for row, (output, size) in enumerate(chosen):
            verdicts: list[SuppressionVerdict] = classifier.verdicts(
                    inputs, output.modes(), amplitudes[row],
                    {shape: float(values[row])
                     for shape, values in weights.items()})
            cells.append(ScanCell(event, output, size, tuple(verdicts)))
        return cells

    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(workers) as executor:
            results: list[list[ScanCell]] = list(executor.map(run, events))
    else:
        results = [run(event) for event in events]
    return ScanTable(n, m, dedupe, tuple(itertools.chain(*results)),
                     tolerances.suppression_relative)
