"""Test snft."""

import argparse
import contextlib
import csv
import dataclasses
import io
import json
import logging
import logging.config
import os
import pathlib
import unittest

from unittest import mock

import numpy as np

from snft import interference as ifr
from snft import lib
from snft import snft
from snft import suppression
from snft import verify

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

class TestIngestUnitary(unittest.TestCase):
    """Test ingest_unitary from snft."""

    def setUp(self) -> None:
        """Add test directory."""
        self._base_dir: pathlib.Path = pathlib.Path('tests/tmp')
        try:
            self._base_dir.mkdir()
        except OSError:
            logger.debug('could not create "%s"', self._base_dir)

    def tearDown(self) -> None:
        """Remove files."""
        for file in self._base_dir.glob('*'):
            try:
                file.unlink()
            except OSError:
                logger.debug('could not remove "%s"', file)
        try:
            self._base_dir.rmdir()
        except OSError:
            logger.debug('could not remove "%s"', self._base_dir)

    def test_builtins(self) -> None:
        """Builtin names with and without a mode count."""
        np.testing.assert_allclose(snft.ingest_unitary('fourier:3'),
                                   ifr.fourier_unitary(3))
        np.testing.assert_allclose(snft.ingest_unitary('fourier', 4),
                                   ifr.fourier_unitary(4))
        np.testing.assert_array_equal(snft.ingest_unitary('identity:2'),
                                      np.eye(2))
        np.testing.assert_allclose(snft.ingest_unitary('beamsplitter'),
                                   ifr.beamsplitter())

    def test_builtin_fail(self) -> None:
        """Fail on missing or malformed mode counts."""
        for source in ('fourier', 'fourier:x'):
            with self.assertRaises(lib.SnftInputError):
                snft.ingest_unitary(source)
        with self.assertRaises(lib.SnftRangeError):
            snft.ingest_unitary('identity:99')

    def test_file(self) -> None:
        """Read a matrix bare or under "unitary"."""
        encoded = lib.Helper.encode_matrix(ifr.fourier_unitary(2))
        bare: pathlib.Path = self._base_dir / 'bare.json'
        bare.write_text(json.dumps(encoded), encoding='utf-8')
        keyed: pathlib.Path = self._base_dir / 'keyed.json'
        keyed.write_text(json.dumps({'unitary': encoded}), encoding='utf-8')
        for path in (bare, keyed):
            np.testing.assert_allclose(snft.ingest_unitary(str(path)),
                                       ifr.fourier_unitary(2))

    def test_file_fail(self) -> None:
        """Fail on missing files, keys or unitarity."""
        with self.assertRaises(lib.SnftInputError):
            snft.ingest_unitary(str(self._base_dir / 'missing.json'))
        other: pathlib.Path = self._base_dir / 'other.json'
        other.write_text(json.dumps({'gram': []}), encoding='utf-8')
        with self.assertRaises(lib.SnftInputError):
            snft.ingest_unitary(str(other))
        scaled: pathlib.Path = self._base_dir / 'scaled.json'
        scaled.write_text(json.dumps(lib.Helper.encode_matrix(
                2 * np.eye(2))), encoding='utf-8')
        with self.assertRaises(lib.SnftInputError):
            snft.ingest_unitary(str(scaled))

class TestRunConfig(unittest.TestCase):
    """Test RunConfig from snft."""

    def setUp(self) -> None:
        """Add test directory."""
        self._base_dir: pathlib.Path = pathlib.Path('tests/tmp')
        try:
            self._base_dir.mkdir()
        except OSError:
            logger.debug('could not create "%s"', self._base_dir)

    def tearDown(self) -> None:
        """Remove files."""
        for file in self._base_dir.glob('*'):
            try:
                file.unlink()
            except OSError:
                logger.debug('could not remove "%s"', file)
        try:
            self._base_dir.rmdir()
        except OSError:
            logger.debug('could not remove "%s"', self._base_dir)

    def parse(self, argv: list[str]) -> argparse.Namespace:
        """Parse a command line without running it."""
        return snft._parser().parse_args(argv)

    def test_input_paths(self) -> None:
        """Files are collected from every reading option, builtins are not."""
        self.assertEqual(snft.RunConfig.input_paths(self.parse(
                ['counting', '--in', '0,1', '--unitary', 'fourier:2'])), [])
        self.assertEqual(snft.RunConfig.input_paths(self.parse(
                ['counting', '--in', '0,1', '--unitary', 'u.json',
                 '--model', 'gram:g.json'])), ['u.json', 'g.json'])
        self.assertEqual(snft.RunConfig.input_paths(self.parse(
                ['ft', '--inverse', 's.json'])), ['s.json'])

    def test_missing_files(self) -> None:
        """Missing input files are refused before any work is done."""
        missing: str = str(self._base_dir / 'missing.json')
        for argv in (['counting', '--in', '0,1', '--unitary', missing],
                     ['distinguishability', '--in', '0,1', '--model',
                      'gram:' + missing],
                     ['ft', '--inverse', missing],
                     ['ft', '--function', missing]):
            with self.subTest(argv=argv):
                with self.assertRaises(lib.SnftInputError):
                    snft.RunConfig.from_args(self.parse(argv))

    def test_existing_file(self) -> None:
        """An existing unitary file passes validation."""
        path: pathlib.Path = self._base_dir / 'unitary.json'
        path.write_text(json.dumps(lib.Helper.encode_matrix(
                ifr.beamsplitter())), encoding='utf-8')
        config: snft.RunConfig = snft.RunConfig.from_args(self.parse(
                ['counting', '--in', '0,1', '--unitary', str(path)]))
        self.assertEqual(config.unitary, str(path))

class TestMain(unittest.TestCase):
    """Test the command line from snft."""

    def setUp(self) -> None:
        """Add test directory."""
        self._base_dir: pathlib.Path = pathlib.Path('tests/tmp')
        try:
            self._base_dir.mkdir()
        except OSError:
            logger.debug('could not create "%s"', self._base_dir)

    def tearDown(self) -> None:
        """Remove files."""
        for file in self._base_dir.glob('*'):
            try:
                file.unlink()
            except OSError:
                logger.debug('could not remove "%s"', file)
        try:
            self._base_dir.rmdir()
        except OSError:
            logger.debug('could not remove "%s"', self._base_dir)

    def run_main(self, argv: list[str]) -> tuple[int, str]:
        """Run the command line and return the exit status and stdout."""
        buffer: io.StringIO = io.StringIO()
        with contextlib.redirect_stdout(buffer):
            with self.assertRaises(SystemExit) as context:
                snft.main(argv)
        return int(context.exception.code or 0), buffer.getvalue()

    def read_rows(self, name: str) -> list[list[str]]:
        """Read a CSV file from the test directory."""
        with open(self._base_dir / name, encoding='utf-8') as handle:
            return list(csv.reader(handle))

    def test_irreps(self) -> None:
        """Print the character table of S_3."""
        status, output = self.run_main(['irreps', '3'])
        self.assertEqual(status, 0)
        self.assertEqual(output.splitlines()[0],
                         'partition,dimension,(3),"(2,1)","(1,1,1)"')

    def test_irreps_matrices(self) -> None:
        """Write every ρ(σ) of a transposition."""
        path: pathlib.Path = self._base_dir / 'irreps.json'
        status, _ = self.run_main(['irreps', '3', '--permutation', '(1 2)',
                                   '--output', str(path)])
        self.assertEqual(status, 0)
        document = lib.Helper.read_json(path)
        self.assertEqual(document['schema'], lib.SCHEMA)
        np.testing.assert_allclose(
                lib.Helper.decode_matrix(document['matrices']['(2,1)']),
                np.diag([1.0, -1.0]), atol=1e-12)

    def test_ft_round_trip(self) -> None:
        """Transform a random function and invert the spectrum."""
        spectrum: pathlib.Path = self._base_dir / 'spectrum.json'
        function: pathlib.Path = self._base_dir / 'function.csv'
        status, _ = self.run_main(['ft', '--n', '3', '--fast', '--output',
                                   str(spectrum)])
        self.assertEqual(status, 0)
        status, _ = self.run_main(['ft', '--inverse', str(spectrum),
                                   '--output', str(function)])
        self.assertEqual(status, 0)
        rows: list[list[str]] = self.read_rows('function.csv')
        self.assertEqual(rows[0], ['rank', 'permutation', 're', 'im'])
        self.assertEqual(len(rows), 7)

    def test_amplitude(self) -> None:
        """The HOM transition has no bosonic weight."""
        path: pathlib.Path = self._base_dir / 'amplitude.json'
        status, _ = self.run_main(['amplitude', '--in', '0,1', '--fourier',
                                   '--file', str(path)])
        self.assertEqual(status, 0)
        weights: dict[str, float] = lib.Helper.read_json(path)['weights']
        self.assertAlmostEqual(weights['(2)'], 0.0)
        self.assertAlmostEqual(weights['(1,1)'], 1.0)

    def test_counting(self) -> None:
        """Bosons bunch at a balanced beamsplitter."""
        status, _ = self.run_main(['counting', '--in', '0,1', '--unitary',
                                   'beamsplitter', '--file',
                                   str(self._base_dir / 'counts.csv')])
        self.assertEqual(status, 0)
        rows: dict[str, float] = {
                row[0]: float(row[1])
                for row in self.read_rows('counts.csv')[1:]}
        self.assertAlmostEqual(rows['(1,1)'], 0.0)
        self.assertAlmostEqual(rows['(2,0)'], 0.5)
        self.assertAlmostEqual(rows['total'], 1.0)

    def test_counting_distinguishable(self) -> None:
        """Distinguishable particles show no dip."""
        status, _ = self.run_main(['counting', '--in', '0,1', '--fourier',
                                   '--model', 'dist', '--event', '1,1',
                                   '--file',
                                   str(self._base_dir / 'counts.csv')])
        self.assertEqual(status, 0)
        rows: list[list[str]] = self.read_rows('counts.csv')
        self.assertEqual(len(rows), 2)
        self.assertAlmostEqual(float(rows[1][1]), 0.5)

    def test_distinguishability(self) -> None:
        """Orthogonal labels give a pure distinguishable state."""
        path: pathlib.Path = self._base_dir / 'weights.json'
        status, _ = self.run_main(['distinguishability', '--in', '0,1',
                                   '--model', 'labels:0,1', '--file',
                                   str(path)])
        self.assertEqual(status, 0)
        document = lib.Helper.read_json(path)
        self.assertAlmostEqual(document['weights']['(2)'], 0.5)
        self.assertAlmostEqual(document['weights']['(1,1)'], 0.5)
        self.assertTrue(document['positive'])

    def test_scan(self) -> None:
        """Write the verdict table and the summary."""
        summary: pathlib.Path = self._base_dir / 'summary.csv'
        status, _ = self.run_main(['scan', '--n', '2', '--m', '2',
                                   '--fourier', '--out',
                                   str(self._base_dir / 'scan.csv'),
                                   '--summary', str(summary)])
        self.assertEqual(status, 0)
        self.assertEqual(len(self.read_rows('scan.csv')), 1 + 9 * 2)
        self.assertEqual(self.read_rows('summary.csv')[0][0], 'sector')

    def test_input_errors(self) -> None:
        """Invalid input exits with status 2."""
        for argv in (['counting', '--in', '0,1', '--fourier', '--model',
                      'bogus'],
                     ['amplitude', '--in', '0,5', '--fourier'],
                     ['scan', '--n', '9', '--m', '2', '--fourier'],
                     ['scan', '--n', '2', '--m', '2', '--unitary',
                      'identity:2', '--dedupe', 'dihedral'],
                     ['irreps', '3', '--tolerance', 'slack=1'],
                     ['irreps', '3', '--tolerance', 'math=x'],
                     ['ft', '--function',
                      str(self._base_dir / 'missing.csv')],
                     ['counting', '--in', '0,1', '--unitary',
                      str(self._base_dir / 'missing.json')]):
            with self.subTest(argv=argv):
                status, _ = self.run_main(argv)
                self.assertEqual(status, 2)

    def test_verify(self) -> None:
        """The invariant suite passes for S_3."""
        status, output = self.run_main(['verify', '--n', '3', '--samples',
                                        '3'])
        self.assertEqual(status, 0)
        self.assertNotIn('FAIL', output)

class TestVerifier(unittest.TestCase):
    """Test Verifier from verify."""

    def test_all_checks_pass(self) -> None:
        """Every check passes for S_4."""
        results: list[verify.CheckResult] = verify.Verifier(4, samples=3).run()
        self.assertEqual([r.name for r in results if not r.passed], [])
        self.assertTrue(str(results[0]).startswith('ok'))

    def test_sampled_checks(self) -> None:
        """Above S_4 the irrep checks draw the full number of pairs."""
        verifier: verify.Verifier = verify.Verifier(6, samples=1)
        self.assertEqual(len(verifier._pairs()), verify.SAMPLED_PAIRS)
        self.assertEqual(verify.SAMPLED_PAIRS, 1000)
        for check in (verifier.check_homomorphism,
                      verifier.check_orthogonality):
            passed, detail = check()
            self.assertTrue(passed, detail)

    def test_scan_check(self) -> None:
        """The scan check passes for S_3 and catches a wrong status."""
        passed, detail = verify.Verifier(3).check_scan()
        self.assertTrue(passed, detail)
        table: suppression.ScanTable = suppression.scan(
                2, 2, ifr.fourier_unitary(2))
        first: suppression.ScanCell = table.cells[0]
        relabelled: suppression.ScanCell = dataclasses.replace(
                first, verdicts=tuple(
                        dataclasses.replace(
                                v, status=suppression.Status.PAULI_FORBIDDEN)
                        for v in first.verdicts))
        broken: suppression.ScanTable = dataclasses.replace(
                table, cells=(relabelled,) + table.cells[1:])
        with mock.patch.object(suppression, 'scan', return_value=broken):
            passed, detail = verify.Verifier(2).check_scan()
        self.assertFalse(passed)
        self.assertIn('pauli_forbidden', detail)
