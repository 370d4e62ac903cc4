"""Test suppression."""

import fractions
import logging
import logging.config
import os
import unittest

import numpy as np

from snft import interference as ifr
from snft import lib
from snft import suppression as sup
from snft.irreps import spectrum
from snft.partitions import Partition, gamas_admissible
from snft.perm_core import Permutation, Subgroup

# create console handler and set level to debug
logging_handler: logging.StreamHandler = logging.StreamHandler()
logging_handler.setLevel(logging.DEBUG)
formatter = logging.Formatter('%(levelname)s %(name)s %(message)s')
logging_handler.setFormatter(formatter)
root_logger: logging.Logger = logging.getLogger()
root_logger.setLevel(logging.ERROR)
root_logger.addHandler(logging_handler)
logger: logging.Logger = logging.getLogger(__name__)

levels: list[str] = ['ERROR', 'WARNING', 'INFO', 'DEBUG']
# there are only levels 0 to 3
# everything else will cause the index to be out of bounds
root_logger.setLevel(
        levels[min(int(os.environ.get('SNFT_VERBOSITY', 1)), 3)])
# enable scans that take minutes
run_slow: bool = bool(int(os.environ.get('SNFT_SLOW', 0)))

def fourier_setup(inputs: tuple[int, ...], outputs: tuple[int, ...],
        m: int) -> ifr.ScatteringSetup:
    """Return a transition through the Fourier interferometer."""
    return ifr.ScatteringSetup(ifr.fourier_unitary(m), inputs, outputs)

def statuses(verdicts: list[sup.SuppressionVerdict]
        ) -> dict[Partition, sup.Status]:
    """Key the statuses by sector."""
    return {verdict.sector: verdict.status for verdict in verdicts}

class TestStateSymmetries(unittest.TestCase):
    """Test the dihedral symmetries of mode lists from suppression."""

    def test_cyclic_input(self) -> None:
        """One particle per mode is invariant under every relabelling."""
        modes: tuple[int, ...] = (0, 1, 2, 3, 4, 5)
        found: list[sup.DihedralSymmetry] = sup.find_state_symmetries(modes,
                                                                      6)
        self.assertEqual(len(found), 12)
        shift: sup.DihedralSymmetry = next(
                s for s in found if s.kind == 'translation' and s.p == 1)
        self.assertEqual(shift.tau.cycle_type(), Partition((6,)))
        # the inverse labelling convention gives the inverse witness
        other: sup.DihedralSymmetry = sup.DihedralSymmetry(
                'translation', 1,
                Permutation.from_cycles('(1 2 3 4 5 6)').inverse())
        self.assertTrue(other.holds(modes, 6))

    def test_periodic_input(self) -> None:
        """(0,0,2,2,4,4) is shifted by 2 through a (3,3) cycle type."""
        modes: tuple[int, ...] = (0, 0, 2, 2, 4, 4)
        found: list[sup.DihedralSymmetry] = sup.find_state_symmetries(modes,
                                                                      6)
        shift: sup.DihedralSymmetry = next(
                s for s in found if s.kind == 'translation' and s.p == 2)
        self.assertEqual(shift.tau.cycle_type(), Partition((3, 3)))
        self.assertEqual(str(shift.tau), '(1 5 3)(2 6 4)')
        self.assertEqual(len(shift.witnesses(modes)), 8)
        for witness in shift.witnesses(modes):
            self.assertTrue(sup.DihedralSymmetry(
                    'translation', 2, witness).holds(modes, 6))
        opposite: Permutation = Permutation.from_cycles('(1 3 6 2 4 5)')
        self.assertTrue(sup.DihedralSymmetry(
                'translation', 2, opposite.inverse()).holds(modes, 6))

    def test_reflection(self) -> None:
        """(0,0,0,1,3,5) is reflected about 0 by (4 6)."""
        found: list[sup.DihedralSymmetry] = sup.find_state_symmetries(
                (0, 0, 0, 1, 3, 5), 6)
        self.assertEqual([(s.kind, s.p) for s in found],
                         [('translation', 0), ('reflection', 0)])
        self.assertEqual(str(found[1].tau), '(4 6)')
        self.assertEqual(str(found[1]), 'Σ_0 τ=(4 6)')

    def test_no_symmetry(self) -> None:
        """Only the identity relabelling fixes (0,0,1,2,5)."""
        found: list[sup.DihedralSymmetry] = sup.find_state_symmetries(
                (0, 0, 1, 2, 5), 6)
        self.assertEqual([(s.kind, s.p) for s in found],
                         [('translation', 0)])

    def test_out_of_range(self) -> None:
        """Modes must lie below M."""
        with self.assertRaises(lib.SnftInputError):
            sup.find_state_symmetries((0, 6), 6)

class TestSpectra(unittest.TestCase):
    """Test restricted spectra from suppression."""

    def test_trivial_subgroup(self) -> None:
        """Without a subgroup the full spectrum is returned."""
        tau: Permutation = Permutation.from_cycles('(1 2 3)(4 5)')
        spectra = sup.restricted_spectrum(tau, Subgroup.stabilizer(
                (0, 1, 2, 3, 4)))
        shape: Partition = Partition((3, 2))
        self.assertEqual(spectra[shape], spectrum(shape, tau))

    def test_multiplicities_add_up(self) -> None:
        """Multiplicities add up to Tr Î_H(λ)."""
        modes: tuple[int, ...] = (0, 0, 2, 2, 4, 4)
        subgroup: Subgroup = Subgroup.stabilizer(modes)
        tau: Permutation = next(
                s.tau for s in sup.find_state_symmetries(modes, 6)
                if s.kind == 'translation' and s.p == 4)
        spectra = sup.restricted_spectrum(tau, subgroup)
        self.assertEqual(spectra[Partition((6,))], {fractions.Fraction(0): 1})
        self.assertEqual(sum(spectra[Partition((2, 2, 2))].values()), 1)
        self.assertEqual(spectra[Partition((1, 1, 1, 1, 1, 1))], {})

    def test_standard_irrep_fact(self) -> None:
        """Eigenvalue 1 of ρ̂^{(N-1,1)}(τ) appears #cycles - 1 times."""
        for text in ('(1 2 3 4 5 6)', '(1 5 3)(2 6 4)', '(4 6)', 'id'):
            self.assertTrue(sup.verify_spectral_facts(
                    Permutation.from_cycles(text, 6)))

class TestFourierStructure(unittest.TestCase):
    """Test the Fourier helpers from suppression."""

    def test_is_fourier(self) -> None:
        """The beamsplitter is the two-mode Fourier matrix."""
        self.assertTrue(sup.is_fourier(ifr.beamsplitter()))
        self.assertFalse(sup.is_fourier(np.eye(3)))

    def test_phase_profile(self) -> None:
        """k(id) = 1 and k((1 2)) = 0 for two modes."""
        profile = sup.phase_profile(fourier_setup((0, 1), (0, 1), 2))
        self.assertEqual(profile(Permutation.identity(2)), 1)
        self.assertEqual(profile(Permutation.transposition(1, 2, 2)), 0)
        with self.assertRaises(lib.SnftInputError):
            sup.phase_profile(ifr.ScatteringSetup(np.eye(2), (0, 1), (0, 1)))

    def test_cloud(self) -> None:
        """The HOM amplitudes are ±1/2."""
        setup: ifr.ScatteringSetup = fourier_setup((0, 1), (0, 1), 2)
        self.assertEqual(sup.amplitude_cloud(setup),
                         [(-0.5, 0.0, 1), (0.5, 0.0, 1)])
        self.assertTrue(sup.is_point_symmetric(setup))

    def test_point_symmetry(self) -> None:
        """A joint reflection with Λ = -1 makes the cloud point symmetric."""
        setup: ifr.ScatteringSetup = fourier_setup(
                (0, 0, 0, 1, 3, 5), (0, 0, 1, 2, 3, 3), 6)
        self.assertTrue(sup.is_point_symmetric(setup))
        self.assertFalse(sup.is_point_symmetric(fourier_setup(
                (0, 1, 2), (0, 1, 2), 3)))

    def test_single_offperiod(self) -> None:
        """The closed form matches the permanent."""
        for outputs in ((0, 0, 0, 1), (1, 2, 2, 2)):
            setup: ifr.ScatteringSetup = fourier_setup((0, 1, 1, 3), outputs,
                                                       4)
            self.assertAlmostEqual(sup.single_offperiod_bosonic(setup),
                                   ifr.permanent(setup.scattering_matrix()))
            weights: dict[Partition, float] = sup.sector_weights_table(setup)
            threshold: float = 1e-10 * max(weights.values())
            self.assertEqual({shape for shape, weight in weights.items()
                              if weight > threshold} -
                             {Partition((4,)), Partition((3, 1))}, set())
        with self.assertRaises(lib.SnftInputError):
            sup.single_offperiod_bosonic(fourier_setup(
                    (0, 1, 1, 3), (0, 0, 1, 1), 4))

class TestClassifier(unittest.TestCase):
    """Test the suppression verdicts from suppression."""

    def test_hom(self) -> None:
        """The bosonic HOM dip is a symmetry suppression."""
        setup: ifr.ScatteringSetup = fourier_setup((0, 1), (0, 1), 2)
        weights: dict[Partition, float] = sup.sector_weights_table(setup)
        self.assertLess(weights[Partition((2,))], 1e-20)
        self.assertAlmostEqual(weights[Partition((1, 1))], 1.0)
        result = statuses(sup.symmetry_suppression_verdicts(setup))
        self.assertEqual(result[Partition((2,))],
                         sup.Status.SYMMETRY_SUPPRESSED)
        self.assertEqual(result[Partition((1, 1))], sup.Status.ALLOWED)

    def test_periodic_transition(self) -> None:
        """(0,0,2,2,4,4) → (0,0,0,1,3,3) only populates (5,1)."""
        setup: ifr.ScatteringSetup = fourier_setup(
                (0, 0, 2, 2, 4, 4), (0, 0, 0, 1, 3, 3), 6)
        weights: dict[Partition, float] = sup.sector_weights_table(setup)
        largest: float = max(weights.values())
        self.assertEqual(weights[Partition((5, 1))], largest)
        for shape, weight in weights.items():
            if shape != Partition((5, 1)):
                self.assertLess(weight, 1e-10 * largest)
        result = statuses(sup.classify(setup))
        self.assertEqual(result[Partition((5, 1))], sup.Status.ALLOWED)
        self.assertEqual(result[Partition((6,))],
                         sup.Status.SYMMETRY_SUPPRESSED)
        self.assertEqual(result[Partition((1, 1, 1, 1, 1, 1))],
                         sup.Status.PAULI_FORBIDDEN)

    def test_joint_reflection(self) -> None:
        """(0,0,0,1,3,5) → (0,0,1,2,3,3) has no bosonic component."""
        setup: ifr.ScatteringSetup = fourier_setup(
                (0, 0, 0, 1, 3, 5), (0, 0, 1, 2, 3, 3), 6)
        weights: dict[Partition, float] = sup.sector_weights_table(setup)
        self.assertLess(weights[Partition((6,))],
                        1e-10 * max(weights.values()))
        verdicts: list[sup.SuppressionVerdict] = \
                sup.symmetry_suppression_verdicts(setup)
        bosonic: sup.SuppressionVerdict = next(
                v for v in verdicts if v.sector == Partition((6,)))
        self.assertEqual(bosonic.status, sup.Status.SYMMETRY_SUPPRESSED)
        self.assertIn('Σ_0', bosonic.witness)
        self.assertIn('Σ_3', bosonic.witness)
        self.assertTrue(bosonic.suppressed)

    def test_cyclic_input_rule(self) -> None:
        """Bosons from one-per-mode inputs need Σo ≡ 0 (mod 6)."""
        for event in ifr.OutputEvent.all_events(6, 6):
            outputs: tuple[int, ...] = event.modes()
            setup: ifr.ScatteringSetup = fourier_setup((0, 1, 2, 3, 4, 5),
                                                       outputs, 6)
            result = statuses(sup.symmetry_suppression_verdicts(setup))
            with self.subTest(outputs=outputs):
                if sum(outputs) % 6:
                    self.assertEqual(result[Partition((6,))],
                                     sup.Status.SYMMETRY_SUPPRESSED)
                else:
                    self.assertNotEqual(result[Partition((6,))],
                                        sup.Status.SYMMETRY_SUPPRESSED)
                    self.assertTrue(result[Partition((5, 1))] in (
                            sup.Status.SYMMETRY_SUPPRESSED,
                            sup.Status.PAULI_FORBIDDEN))

    def test_pauli_like(self) -> None:
        """A constant amplitude is killed by the full invariance group."""
        setup: ifr.ScatteringSetup = fourier_setup((0, 0, 2, 2), (0, 0, 2, 2),
                                                   4)
        a = ifr.amplitude_function(setup)
        self.assertTrue(np.allclose(a.values, 1 / 16))
        left, right = sup.invariance_subgroups(a)
        self.assertEqual((len(left), len(right)), (24, 24))
        result = statuses(sup.pauli_like_verdicts(setup))
        self.assertEqual(result[Partition((4,))], sup.Status.ALLOWED)
        for parts in ((3, 1), (2, 2)):
            self.assertEqual(result[Partition(parts)],
                             sup.Status.PAULI_LIKE_SUPPRESSED)
        for parts in ((2, 1, 1), (1, 1, 1, 1)):
            self.assertEqual(result[Partition(parts)],
                             sup.Status.PAULI_FORBIDDEN)

    def test_pauli_like_candidates(self) -> None:
        """Explicit candidate subgroups are tested on both sides."""
        setup: ifr.ScatteringSetup = fourier_setup((0, 0, 2, 2), (0, 0, 2, 2),
                                                   4)
        candidate: Subgroup = Subgroup.young([(1, 2, 3, 4)], 4)
        result = statuses(sup.pauli_like_verdicts(setup, [candidate]))
        self.assertEqual(result[Partition((3, 1))],
                         sup.Status.PAULI_LIKE_SUPPRESSED)

    def test_generic_unitary(self) -> None:
        """A random interferometer only obeys the Pauli principle."""
        unitary: np.ndarray = ifr.random_unitary(4,
                                                 np.random.default_rng(3))
        setup: ifr.ScatteringSetup = ifr.ScatteringSetup(
                unitary, (0, 1, 1, 2), (0, 2, 3, 3))
        for verdict in sup.classify(setup):
            expected: sup.Status = sup.Status.ALLOWED
            if not (gamas_admissible(verdict.sector, setup.inputs) and
                    gamas_admissible(verdict.sector, setup.outputs)):
                expected = sup.Status.PAULI_FORBIDDEN
            self.assertEqual(verdict.status, expected)

class TestScan(unittest.TestCase):
    """Test scans over all transitions from suppression."""

    def test_two_modes(self) -> None:
        """The 3x3 table of the beamsplitter."""
        table: sup.ScanTable = sup.scan(2, 2, ifr.fourier_unitary(2))
        self.assertEqual(len(table.cells), 9)
        self.assertEqual(table.cells[0].inputs, ifr.OutputEvent((2, 0)))
        cell: sup.ScanCell = next(
                c for c in table.cells
                if c.inputs == ifr.OutputEvent((1, 1)) and
                c.outputs == ifr.OutputEvent((1, 1)))
        self.assertEqual(cell.verdict(Partition((2,))).status,
                         sup.Status.SYMMETRY_SUPPRESSED)
        self.assertEqual(cell.verdict(Partition((1, 1))).status,
                         sup.Status.ALLOWED)
        rows: list[list[str]] = table.to_rows()
        self.assertEqual(rows[0], ['input', 'output', 'class_size', 'sector',
                                   'weight', 'status', 'witness'])
        self.assertEqual(len(rows), 1 + 9 * 2)

    def test_dedupe(self) -> None:
        """Dihedral classes cover every pair exactly once."""
        full: sup.ScanTable = sup.scan(3, 3, ifr.fourier_unitary(3))
        reduced: sup.ScanTable = sup.scan(3, 3, ifr.fourier_unitary(3),
                                          dedupe='dihedral', workers=2)
        self.assertLess(len(reduced.cells), len(full.cells))
        self.assertEqual(sum(c.class_size for c in reduced.cells), 100)
        for summary in (full.summary(), reduced.summary()):
            for counts in summary.values():
                self.assertEqual(sum(counts.values()), 100)
        self.assertEqual(full.summary_rows()[0][0], 'sector')

    def test_soundness(self) -> None:
        """Every N=M=4 prediction is confirmed and matches the Pauli rule."""
        table: sup.ScanTable = sup.scan(4, 4, ifr.fourier_unitary(4),
                                        dedupe='dihedral')
        for cell in table.cells:
            inputs: tuple[int, ...] = cell.inputs.modes()
            outputs: tuple[int, ...] = cell.outputs.modes()
            for verdict in cell.verdicts:
                forbidden: bool = not (
                        gamas_admissible(verdict.sector, inputs) and
                        gamas_admissible(verdict.sector, outputs))
                self.assertEqual(
                        verdict.status is sup.Status.PAULI_FORBIDDEN,
                        forbidden)
            if inputs == (0, 1, 2, 3) and sum(outputs) % 4:
                self.assertEqual(cell.verdict(Partition((4,))).status,
                                 sup.Status.SYMMETRY_SUPPRESSED)
        self.assertIsInstance(table.residual_report(), list)

    def test_invalid(self) -> None:
        """Unknown policies and oversized scans are refused."""
        with self.assertRaises(lib.SnftInputError):
            sup.scan(2, 2, ifr.fourier_unitary(2), dedupe='mirror')
        with self.assertRaises(lib.SnftInputError):
            sup.scan(2, 2, np.eye(2), dedupe='dihedral')
        with self.assertRaises(lib.SnftRangeError):
            sup.scan(lib.MAX_N + 1, 2, ifr.fourier_unitary(2))
        with self.assertRaises(lib.SnftInputError):
            sup.scan(2, 3, ifr.fourier_unitary(2))

    @unittest.skipUnless(run_slow, 'set SNFT_SLOW=1 to scan N=M=6')
    def test_six_modes(self) -> None:
        """The full N=M=6 scan completes without contradiction."""
        table: sup.ScanTable = sup.scan(6, 6, ifr.fourier_unitary(6),
                                        dedupe='dihedral', workers=4)
        self.assertEqual(sum(c.class_size for c in table.cells), 462 ** 2)
        report: list[str] = table.residual_report()
        logger.info('%d residual lines', len(report))
