"""Self-verification suite run by `snft verify`."""

from __future__ import annotations

import dataclasses
import functools
import itertools
import logging
import math
import time

from typing import Callable

import numpy as np

from snft import interference as ifr
from snft import lib
from snft import suppression
from snft.fourier import Fourier, GroupFunction, SpectralFunction
from snft.irreps import CharacterTable, IrrepTable
from snft.partitions import (Partition, gamas_admissible,
                             gamas_admissible_dominance, gamas_filling,
                             partitions_of)
from snft.perm_core import Permutation, Subgroup, SymmetricGroup

logger: logging.Logger = logging.getLogger(__name__)

# random (s, t) pairs for the sampled irrep checks above S_4
SAMPLED_PAIRS: int = 1000

@dataclasses.dataclass(frozen=True)
class CheckResult():
    """Outcome of one check.

    Attributes:
        name: Short identifier.
        passed: Whether the check passed.
        detail: Largest residual or a message.
        seconds: Wall-clock time.
    """
    name: str
    passed: bool
    detail: str
    seconds: float

    def __str__(self) -> str:
        return (f'{"ok  " if self.passed else "FAIL"} {self.name:<28} '
                f'{self.detail} ({self.seconds:.2f}s)')

class Verifier:
    """Run the invariant checks for one degree.

    Attributes:
        n: The degree.
        rng: Random source for sampled checks.
        tolerances: Thresholds.
        samples: Number of random functions / pairs per check.
    """

    def __init__(self, n: int, seed: int = 0, samples: int = 20,
            tolerances: lib.Tolerances = lib.DEFAULT_TOLERANCES) -> None:
        lib.check_size(n)
        self.n: int = n
        self.rng: np.random.Generator = np.random.default_rng(seed)
        self.samples: int = samples
        self.tolerances: lib.Tolerances = tolerances

    def run(self) -> list[CheckResult]:
        """Run every check, catching consistency errors as failures."""
        checks: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
                ('irreps.homomorphism', self.check_homomorphism),
                ('irreps.orthogonality', self.check_orthogonality),
                ('irreps.dimensions', self.check_dimensions),
                ('irreps.conjugates', self.check_conjugates),
                ('fourier.inversion', self.check_inversion),
                ('fourier.parseval', self.check_parseval),
                ('fourier.convolution', self.check_convolution),
                ('fourier.shift', self.check_shift),
                ('fourier.fast_ft', self.check_fast_ft),
                ('partitions.gamas', self.check_gamas),
                ('interference.hom', self.check_hom),
                ('interference.normalisation', self.check_normalisation),
                ('interference.distinguishability',
                 self.check_distinguishability),
                ('suppression.scan', self.check_scan)]
        results: list[CheckResult] = []
        for name, check in checks:
            start: float = time.perf_counter()
            try:
                passed, detail = check()
            except lib.SnftConsistencyError as error:
                passed, detail = False, str(error)
            result: CheckResult = CheckResult(
                    name, passed, detail, time.perf_counter() - start)
            logger.info('%s', result)
            results.append(result)
        return results

    def _verdict(self, residual: float) -> tuple[bool, str]:
        return residual <= self.tolerances.math, f'max residual {residual:.2e}'

    def _pairs(self) -> list[tuple[Permutation, Permutation]]:
        group: SymmetricGroup = SymmetricGroup.of(self.n)
        if self.n <= 4:
            return list(itertools.product(group.elements(), repeat=2))
        ranks: np.ndarray = self.rng.integers(group.order,
                                              size=(SAMPLED_PAIRS, 2))
        return [(group.element(int(a)), group.element(int(b)))
                for a, b in ranks]

    def check_homomorphism(self) -> tuple[bool, str]:
        """ρ(s ∘ t) == ρ(s) ρ(t)."""
        table: IrrepTable = IrrepTable.of(self.n)
        residual: float = max(
                float(np.max(np.abs(table.matrix(shape, s * t) -
                                    table.matrix(shape, s) @
                                    table.matrix(shape, t))))
                for s, t in self._pairs() for shape in table.partitions)
        return self._verdict(residual)

    def check_orthogonality(self) -> tuple[bool, str]:
        """ρ(σ) ρ(σ)ᵀ == I."""
        table: IrrepTable = IrrepTable.of(self.n)
        residual: float = 0.0
        sampled: list[Permutation] = [s for s, _ in self._pairs()] \
                if self.n > 5 else []
        for shape in table.partitions:
            # sampled above S_5
            stack: np.ndarray = table.stack(shape) if self.n <= 5 else \
                    np.asarray([table.matrix(shape, s) for s in sampled])
            products: np.ndarray = np.einsum('gij,gkj->gik', stack, stack)
            residual = max(residual, float(np.max(np.abs(
                    products - np.eye(stack.shape[1])))))
        return self._verdict(residual)

    def check_dimensions(self) -> tuple[bool, str]:
        """Σ_λ d_λ² == N!."""
        total: int = sum(shape.dimension() ** 2
                         for shape in partitions_of(self.n))
        return total == math.factorial(self.n), f'Σ d² = {total}'

    def check_conjugates(self) -> tuple[bool, str]:
        """χ^{λ̄} == sign · χ^λ."""
        table: CharacterTable = CharacterTable.of(self.n)
        for shape in table.partitions:
            table.conjugate_check(shape)
        return True, f'{len(table.partitions)} partitions'

    def _functions(self) -> list[GroupFunction]:
        return [GroupFunction.random(self.n, self.rng)
                for _ in range(self.samples)]

    def check_inversion(self) -> tuple[bool, str]:
        """ift(ft(f)) == f."""
        return self._verdict(max(
                float(np.max(np.abs(Fourier.ift(Fourier.ft(f)).values -
                                    f.values)))
                for f in self._functions()))

    def check_parseval(self) -> tuple[bool, str]:
        """(f, g) == Σ_λ (d_λ/N!) Tr[f̂ĝ]."""
        functions: list[GroupFunction] = self._functions()
        return self._verdict(max(
                abs(f.scalar_product(g) - Fourier.parseval(f, g))
                for f, g in zip(functions, functions[1:])))

    def check_convolution(self) -> tuple[bool, str]:
        """FT(f * g) == f̂ ĝ and the triple product is cyclic."""
        functions: list[GroupFunction] = self._functions()
        residual: float = 0.0
        for f, g, h in zip(functions, functions[1:], functions[2:]):
            product: SpectralFunction = Fourier.ft(f) @ Fourier.ft(g)
            transformed: SpectralFunction = Fourier.ft(f.convolve(g))
            residual = max(residual, max(
                    float(np.max(np.abs(block - product[shape])))
                    for shape, block in transformed.blocks.items()))
            residual = max(residual,
                           abs(Fourier.triple_product(f, g, h) -
                               Fourier.triple_product(g, h, f)))
        return self._verdict(residual)

    def check_shift(self) -> tuple[bool, str]:
        """FT(f(t⁻¹ ∘ ·)) == ρ(t) f̂."""
        table: IrrepTable = IrrepTable.of(self.n)
        group: SymmetricGroup = SymmetricGroup.of(self.n)
        residual: float = 0.0
        for f in self._functions():
            t: Permutation = group.element(int(self.rng.integers(group.order)))
            shifted: SpectralFunction = Fourier.ft(f.shift_left(t))
            original: SpectralFunction = Fourier.ft(f)
            residual = max(residual, max(
                    float(np.max(np.abs(shifted[shape] -
                                        table.matrix(shape, t) @
                                        original[shape])))
                    for shape in table.partitions))
        return self._verdict(residual)

    def check_fast_ft(self) -> tuple[bool, str]:
        """fast_ft == ft."""
        residual: float = 0.0
        for f in self._functions():
            slow: SpectralFunction = Fourier.ft(f)
            fast: SpectralFunction = Fourier.fast_ft(f)
            residual = max(residual, max(
                    float(np.max(np.abs(block - fast[shape])))
                    for shape, block in slow.blocks.items()))
        return self._verdict(residual)

    def check_gamas(self) -> tuple[bool, str]:
        """Character sums, dominance and fillings agree."""
        count: int = 0
        for shape in partitions_of(self.n):
            for modes in itertools.combinations_with_replacement(
                    range(min(self.n, 5)), self.n):
                by_characters: bool = gamas_admissible(shape, modes)
                if by_characters != gamas_admissible_dominance(shape, modes) \
                        or by_characters != (gamas_filling(shape, modes)
                                             is not None):
                    return False, f'{shape} with {modes} disagrees'
                count += 1
        return True, f'{count} cases'

    def check_hom(self) -> tuple[bool, str]:
        """The two-particle beamsplitter benchmark."""
        setup: ifr.ScatteringSetup = ifr.ScatteringSetup(
                ifr.beamsplitter(), (0, 1), (0, 1))
        event: ifr.OutputEvent = ifr.OutputEvent((1, 1))
        values: dict[str, tuple[float, float]] = {
                'boson': (ifr.counting_superposition(
                        setup, GroupFunction.constant(2), event), 0.0),
                'fermion': (ifr.counting_superposition(
                        setup, GroupFunction.sign_function(2), event), 1.0),
                'distinguishable': (ifr.counting_distinguishable(
                        setup, event), 0.5)}
        for overlap in (0.0, 0.5, 1.0):
            j: GroupFunction = ifr.j_from_model(
                    ifr.DistinguishabilityModel(gram=np.asarray(
                            [[1.0, overlap], [overlap, 1.0]])),
                    ifr.ParticleStatistics.BOSON, (0, 1))
            values[f'c={overlap}'] = (ifr.counting_partial(setup, j, event),
                                      (1 - overlap ** 2) / 2)
        residual: float = max(abs(got - want) for got, want in values.values())
        return residual <= 1e-12, f'max deviation {residual:.2e}'

    def _models(self, setup: ifr.ScatteringSetup
            ) -> dict[str, Callable[[ifr.OutputEvent], float]]:
        n: int = setup.n
        models: dict[str, Callable[[ifr.OutputEvent], float]] = {
                'boson': lambda e: ifr.counting_superposition(
                        setup, GroupFunction.constant(n), e),
                'fermion': lambda e: ifr.counting_superposition(
                        setup, GroupFunction.sign_function(n), e),
                'distinguishable': lambda e: ifr.counting_distinguishable(
                        setup, e)}
        for shape in partitions_of(n):
            if gamas_admissible(shape, setup.inputs):
                models[f'sector{shape}'] = (
                        lambda e, s=shape: ifr.counting_sector(
                                setup, s, e).value)
        for k in range(3):
            j: GroupFunction = ifr.j_from_model(
                    ifr.DistinguishabilityModel(
                            gram=ifr.random_gram(n, self.rng)),
                    ifr.ParticleStatistics.BOSON, setup.inputs)
            models[f'gram{k}'] = lambda e, j=j: ifr.counting_partial(
                    setup, j, e)
        return models

    def check_normalisation(self) -> tuple[bool, str]:
        """Probabilities of all events sum to one (M = N)."""
        if self.n > 4:
            return True, 'skipped for N > 4'
        m: int = self.n
        setup: ifr.ScatteringSetup = ifr.ScatteringSetup(
                ifr.random_unitary(m, self.rng), tuple(range(m))[:self.n],
                tuple(range(self.n)))
        residual: float = 0.0
        for name, model in self._models(setup).items():
            total: float = sum(ifr.event_distribution(setup, model).values())
            logger.debug('normalisation of %s: %.15f', name, total)
            residual = max(residual, abs(total - 1.0))
        return self._verdict(residual)

    def check_distinguishability(self) -> tuple[bool, str]:
        """Weights, positivity and pure emulation of random Gram models."""
        if self.n > 5:
            return True, 'skipped for N > 5'
        residual: float = 0.0
        inputs: tuple[int, ...] = tuple(range(self.n))
        for _ in range(3):
            j: GroupFunction = ifr.j_from_model(
                    ifr.DistinguishabilityModel(
                            gram=ifr.random_gram(self.n, self.rng)),
                    ifr.ParticleStatistics.BOSON, inputs)
            weights: dict[Partition, float] = ifr.sector_weights(j)
            residual = max(residual, abs(sum(weights.values()) - 1.0))
            if min(weights.values()) < -1e-12:
                return False, f'negative weight {min(weights.values()):.2e}'
            if not ifr.positivity_check(j, self.tolerances).passed:
                return False, 'ĵ not positive'
            root: SpectralFunction = Fourier.ft(ifr.emulate_pure(j))
            target: SpectralFunction = Fourier.ft(j)
            residual = max([residual] + [float(np.max(np.abs(
                    (root.adjoint() @ root)[shape] - target[shape])))
                                         for shape in weights])
        return self._verdict(residual)

    def check_scan(self) -> tuple[bool, str]:
        """Forbidden cells of a Fourier scan match the character sums.

        A sector is Pauli forbidden exactly when `Σ_{σ ∈ stab(m)} χ^λ(σ)`
        vanishes on the input or the output side, and every suppressed
        sector carries a weight below the threshold.
        """
        if self.n > 4:
            return True, 'skipped for N > 4'
        table: suppression.ScanTable = suppression.scan(
                self.n, self.n, ifr.fourier_unitary(self.n),
                tolerances=self.tolerances)
        characters: CharacterTable = CharacterTable.of(self.n)

        @functools.lru_cache(maxsize=None)
        def admissible(shape: Partition, modes: tuple[int, ...]) -> bool:
            return sum(characters.character(shape, g)
                       for g in Subgroup.stabilizer(modes)) != 0

        for cell in table.cells:
            largest: float = max(v.weight for v in cell.verdicts)
            threshold: float = max(
                    self.tolerances.suppression_relative * largest,
                    self.tolerances.suppression_floor)
            for verdict in cell.verdicts:
                expected: bool = not (
                        admissible(verdict.sector, cell.inputs.modes()) and
                        admissible(verdict.sector, cell.outputs.modes()))
                forbidden: bool = \
                        verdict.status is suppression.Status.PAULI_FORBIDDEN
                if forbidden != expected:
                    return False, (f'{cell.inputs} -> {cell.outputs} '
                                   f'{verdict.sector}: {verdict.status.value}')
                if verdict.suppressed and verdict.weight >= threshold:
                    return False, (f'{cell.inputs} -> {cell.outputs} '
                                   f'{verdict.sector}: weight '
                                   f'{verdict.weight:.2e}')
        return True, (f'{len(table.cells)} cells, '
                      f'{len(table.residual_report())} residual lines')
