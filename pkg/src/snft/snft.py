#!/usr/bin/env python3
"""Fourier analysis of many-particle interference on the command line."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import logging
import os
import pathlib
import sys
import time

from typing import Any, Callable, Optional

import numpy as np

from snft import interference as ifr
from snft import lib
from snft import suppression
from snft import verify
from snft.fourier import Fourier, GroupFunction, SpectralFunction
from snft.irreps import CharacterTable, IrrepTable
from snft.partitions import Partition
from snft.perm_core import Permutation, SymmetricGroup

logger: logging.Logger = logging.getLogger(__name__)

BUILTIN_UNITARIES: tuple[str, ...] = ('fourier', 'identity', 'beamsplitter')

@dataclasses.dataclass
class RunConfig():
    """Everything a subcommand needs.

    Attributes:
        command: The subcommand.
        n: Number of particles / group degree (0 if not given).
        m: Number of modes (0 if not given).
        unitary: Builtin name (`fourier:M`, `identity:M`,
            `beamsplitter`) or path to a JSON matrix.
        threads: Worker threads.
        tolerances: Numeric thresholds.
        unsafe_large: Lift the size guard.
        seed: Seed for random inputs.
        options: The remaining subcommand specific arguments.
    """
    command: str
    n: int = 0
    m: int = 0
    unitary: str = ''
    threads: int = 1
    tolerances: lib.Tolerances = lib.DEFAULT_TOLERANCES
    unsafe_large: bool = False
    seed: int = 0
    options: argparse.Namespace = dataclasses.field(
            default_factory=argparse.Namespace)

    @staticmethod
    def from_args(args: argparse.Namespace) -> RunConfig:
        """Build and validate the configuration from parsed arguments.

        Raises:
            SnftInputError: For malformed tolerance overrides or thread
                counts, or input files that do not exist.
            SnftRangeError: If N or M exceed the guard.
        """
        overrides: dict[str, float] = {}
        for item in getattr(args, 'tolerance', None) or []:
            name, _, value = item.partition('=')
            try:
                overrides[name.strip()] = float(value)
            except ValueError as error:
                raise lib.SnftInputError(
                        f'malformed tolerance "{item}"') from error
        threads_text: str = str(args.threads) if args.threads is not None \
                else os.environ.get('SNFT_THREADS', '1')
        try:
            threads: int = max(1, int(threads_text))
        except ValueError as error:
            raise lib.SnftInputError(
                    f'malformed thread count "{threads_text}"') from error
        config: RunConfig = RunConfig(
                command=args.command,
                n=getattr(args, 'n', None) or 0,
                m=getattr(args, 'm', None) or 0,
                unitary=getattr(args, 'unitary', None) or '',
                threads=threads,
                tolerances=lib.DEFAULT_TOLERANCES.replace(overrides),
                unsafe_large=args.unsafe_large,
                seed=args.seed,
                options=args)
        for path in RunConfig.input_paths(args):
            if not pathlib.Path(path).is_file():
                raise lib.SnftInputError(f'input file "{path}" not found')
        if config.n or config.m:
            lib.check_size(config.n or 1, config.m or 1, config.unsafe_large)
        return config

    @staticmethod
    def input_paths(args: argparse.Namespace) -> list[str]:
        """Return the files the parsed arguments read from."""
        paths: list[str] = [
                getattr(args, name) for name in ('function', 'inverse')
                if getattr(args, name, None)]
        unitary: str = getattr(args, 'unitary', None) or ''
        if unitary and unitary.partition(':')[0] not in BUILTIN_UNITARIES:
            paths.append(unitary)
        kind, _, argument = (getattr(args, 'model', None) or '').partition(':')
        if kind == 'gram' and argument:
            paths.append(argument)
        return paths

def ingest_unitary(source: str, m: int = 0,
        tolerances: lib.Tolerances = lib.DEFAULT_TOLERANCES) -> np.ndarray:
    """Return a builtin unitary or read one from a JSON file.

    Files hold the matrix row-major as `[re, im]` pairs, either bare or
    under the key `"unitary"`.

    Args:
        source: `fourier:M`, `identity:M`, `beamsplitter` or a path.
        m: Mode count used when a builtin omits it.
        tolerances: The ingestion tolerance applies to files.

    Raises:
        SnftInputError: If the source is unknown, unreadable or not
            unitary within the ingestion tolerance.
    """
    name, _, size = source.partition(':')
    if name in ('fourier', 'identity'):
        try:
            dimension: int = int(size) if size else m
        except ValueError as error:
            raise lib.SnftInputError(f'malformed unitary "{source}"') \
                    from error
        if dimension < 1:
            raise lib.SnftInputError(f'"{source}" needs a mode count')
        lib.check_size(1, dimension)
        return ifr.fourier_unitary(dimension) if name == 'fourier' \
                else np.eye(dimension, dtype=complex)
    if name == 'beamsplitter':
        return ifr.beamsplitter().astype(complex)
    document: Any = lib.Helper.read_json(pathlib.Path(source))
    if isinstance(document, dict):
        if 'unitary' not in document:
            raise lib.SnftInputError(f'"{source}" has no "unitary" entry')
        document = document['unitary']
    matrix: np.ndarray = lib.Helper.decode_matrix(document)
    residual: float = float(np.max(np.abs(
            matrix @ matrix.conj().T - np.eye(matrix.shape[0]))))
    logger.info('unitarity residual of "%s": %.3g', source, residual)
    if residual > tolerances.ingestion:
        raise lib.SnftInputError(
                f'"{source}" is not unitary (max deviation {residual:.3g})')
    return matrix

def _ingest_gram(path: str) -> np.ndarray:
    document: Any = lib.Helper.read_json(pathlib.Path(path))
    if isinstance(document, dict):
        if 'gram' not in document:
            raise lib.SnftInputError(f'"{path}" has no "gram" entry')
        document = document['gram']
    return lib.Helper.decode_matrix(document)

def _rows_to_text(rows: list[list[str]]) -> str:
    buffer: io.StringIO = io.StringIO()
    csv.writer(buffer, lineterminator='\n').writerows(rows)
    return buffer.getvalue()

def _emit(text: str, path: Optional[str]) -> None:
    if path:
        lib.Helper.write_text(pathlib.Path(path), text)
    else:
        sys.stdout.write(text if text.endswith('\n') else text + '\n')

class Snft:
    """Dispatch the subcommands.

    Attributes:
        config: The run configuration.
    """

    def __init__(self, config: RunConfig) -> None:
        self.config: RunConfig = config

    def run(self) -> int:
        """Run the configured subcommand and return the exit status."""
        handler = getattr(self, 'command_' + self.config.command)
        return handler()

    def _unitary(self) -> np.ndarray:
        options: argparse.Namespace = self.config.options
        source: str = self.config.unitary
        if getattr(options, 'fourier', False):
            source = 'fourier'
        if not source:
            raise lib.SnftInputError('no unitary given (--unitary/--fourier)')
        # M defaults to the number of particles
        m: int = self.config.m or self.config.n
        if not m and getattr(options, 'inputs', None):
            m = len(lib.Helper.parse_modes(options.inputs))
        return ingest_unitary(source, m, self.config.tolerances)

    def _setup(self) -> ifr.ScatteringSetup:
        options: argparse.Namespace = self.config.options
        unitary: np.ndarray = self._unitary()
        inputs: tuple[int, ...] = lib.Helper.parse_modes(options.inputs)
        lib.check_size(len(inputs), unitary.shape[0],
                       self.config.unsafe_large)
        outputs: tuple[int, ...] = lib.Helper.parse_modes(options.outputs) \
                if getattr(options, 'outputs', None) else inputs
        return ifr.ScatteringSetup(unitary, inputs, outputs,
                                   self.config.tolerances.ingestion)

    def command_irreps(self) -> int:
        """Print the character table or the matrices of one permutation."""
        options: argparse.Namespace = self.config.options
        n: int = options.degree
        table: IrrepTable = IrrepTable.of(n)
        if options.permutation:
            permutation: Permutation = Permutation.from_cycles(
                    options.permutation, n)
            _emit(lib.Helper.dump_json({
                    'n': n, 'permutation': str(permutation),
                    'matrices': {str(shape): lib.Helper.encode_matrix(
                            table.matrix(shape, permutation))
                                 for shape in table.partitions}}),
                  options.output)
        else:
            _emit(_rows_to_text(CharacterTable.of(n).to_rows()),
                  options.output)
        return 0

    def command_ft(self) -> int:
        """Transform a group function (CSV) or invert a spectrum (JSON)."""
        options: argparse.Namespace = self.config.options
        if options.inverse:
            document: Any = lib.Helper.read_json(pathlib.Path(options.inverse))
            function: GroupFunction = Fourier.ift(
                    SpectralFunction.from_json(document))
            _emit(_rows_to_text(function.to_rows()), options.output)
            return 0
        if options.function:
            try:
                with open(options.function, encoding='utf-8') as handle:
                    function = GroupFunction.from_rows(list(csv.reader(handle)))
            except OSError as error:
                raise lib.SnftInputError(
                        f'could not read "{options.function}"') from error
        else:
            if not self.config.n:
                raise lib.SnftInputError('--n is needed for a random function')
            function = GroupFunction.random(
                    self.config.n, np.random.default_rng(self.config.seed))
        transform = Fourier.fast_ft if options.fast else Fourier.ft
        _emit(transform(function, workers=self.config.threads).to_json(),
              options.output)
        return 0

    def command_amplitude(self) -> int:
        """Print `a(σ)` and all `â(λ)` of a transition."""
        options: argparse.Namespace = self.config.options
        setup: ifr.ScatteringSetup = self._setup()
        amplitude: GroupFunction = ifr.amplitude_function(setup)
        spectrum: SpectralFunction = Fourier.ft(amplitude)
        group: SymmetricGroup = SymmetricGroup.of(setup.n)
        _emit(lib.Helper.dump_json({
                'n': setup.n, 'm': setup.m,
                'inputs': list(setup.inputs), 'outputs': list(setup.outputs),
                'amplitude': [[str(group.element(rank)),
                               lib.Helper.encode_complex(value)]
                              for rank, value in enumerate(amplitude.values)],
                'blocks': {str(shape): lib.Helper.encode_matrix(block)
                           for shape, block in spectrum.blocks.items()},
                'weights': {str(shape): value for shape, value in
                            spectrum.power().items()}}), options.file)
        return 0

    def _model(self, setup: ifr.ScatteringSetup, text: str
            ) -> Callable[[ifr.OutputEvent], float]:
        kind, _, argument = text.partition(':')
        if kind == 'boson':
            coefficients: GroupFunction = GroupFunction.constant(setup.n)
            return lambda e: ifr.counting_superposition(
                    setup, coefficients, e, self.config.tolerances)
        if kind == 'fermion':
            signs: GroupFunction = GroupFunction.sign_function(setup.n)
            return lambda e: ifr.counting_superposition(
                    setup, signs, e, self.config.tolerances)
        if kind == 'sector':
            shape: Partition = Partition.from_string(argument)
            if shape.n != setup.n:
                raise lib.SnftInputError(f'{shape} is not a sector of '
                                         f'S_{setup.n}')
            return lambda e: ifr.counting_sector(setup, shape, e).value
        if kind == 'dist':
            return lambda e: ifr.counting_distinguishable(setup, e)
        if kind in ('gram', 'labels'):
            model: ifr.DistinguishabilityModel = \
                    ifr.DistinguishabilityModel(gram=_ingest_gram(argument)) \
                    if kind == 'gram' else ifr.DistinguishabilityModel(
                            labels=lib.Helper.parse_modes(argument))
            j: GroupFunction = ifr.j_from_model(
                    model, self._statistics(), setup.inputs,
                    self.config.tolerances)
            return lambda e: ifr.counting_partial(setup, j, e)
        raise lib.SnftInputError(f'unknown model "{text}"')

    def _statistics(self) -> ifr.ParticleStatistics:
        return ifr.ParticleStatistics(
                getattr(self.config.options, 'statistics', 'boson'))

    def command_counting(self) -> int:
        """Print event probabilities for a statistics model."""
        options: argparse.Namespace = self.config.options
        setup: ifr.ScatteringSetup = self._setup()
        probability = self._model(setup, options.model)
        events: Optional[list[ifr.OutputEvent]] = None
        if options.event:
            events = [ifr.OutputEvent(lib.Helper.parse_modes(options.event))]
        distribution: dict[ifr.OutputEvent, float] = ifr.event_distribution(
                setup, probability, events, self.config.threads)
        rows: list[list[str]] = [['event', 'probability']] + [
                [str(event), repr(value)]
                for event, value in distribution.items()]
        if events is None:
            rows.append(['total', repr(sum(distribution.values()))])
        _emit(_rows_to_text(rows), options.file)
        return 0

    def command_distinguishability(self) -> int:
        """Print sector weights, purity and positivity of a j function."""
        options: argparse.Namespace = self.config.options
        inputs: tuple[int, ...] = lib.Helper.parse_modes(options.inputs)
        lib.check_size(len(inputs), 1, self.config.unsafe_large)
        kind, _, argument = options.model.partition(':')
        if kind == 'gram':
            model: ifr.DistinguishabilityModel = ifr.DistinguishabilityModel(
                    gram=_ingest_gram(argument))
        elif kind == 'labels':
            model = ifr.DistinguishabilityModel(
                    labels=lib.Helper.parse_modes(argument))
        elif kind == 'random':
            model = ifr.DistinguishabilityModel(gram=ifr.random_gram(
                    len(inputs), np.random.default_rng(self.config.seed),
                    int(argument) if argument else None))
        else:
            raise lib.SnftInputError(f'unknown model "{options.model}"')
        j: GroupFunction = ifr.j_from_model(model, self._statistics(), inputs,
                                            self.config.tolerances)
        report: ifr.PositivityReport = ifr.positivity_check(
                j, self.config.tolerances)
        _emit(lib.Helper.dump_json({
                'n': j.n, 'inputs': list(inputs),
                'weights': {str(shape): value for shape, value in
                            ifr.sector_weights(j).items()},
                'purity': ifr.state_purity(j),
                'positive': report.passed,
                'minimum_eigenvalues': {
                        str(shape): value for shape, value in
                        report.minimum_eigenvalues.items()}}), options.file)
        return 0

    def command_scan(self) -> int:
        """Classify every transition and write the verdict table."""
        options: argparse.Namespace = self.config.options
        if not self.config.n or not self.config.m:
            raise lib.SnftInputError('scan needs --n and --m')
        start: float = time.perf_counter()
        table: suppression.ScanTable = suppression.scan(
                self.config.n, self.config.m, self._unitary(),
                options.dedupe, self.config.threads, self.config.tolerances,
                self.config.unsafe_large)
        logger.info('scan finished in %.1fs', time.perf_counter() - start)
        _emit(_rows_to_text(table.to_rows()), options.out)
        if options.summary:
            lib.Helper.write_text(pathlib.Path(options.summary),
                                  _rows_to_text(table.summary_rows()))
        if options.residuals:
            lib.Helper.write_text(pathlib.Path(options.residuals),
                                  '\n'.join(table.residual_report()) + '\n')
        return 0

    def command_cloud(self) -> int:
        """Write the amplitude multiset `(re, im, multiplicity)`."""
        options: argparse.Namespace = self.config.options
        setup: ifr.ScatteringSetup = self._setup()
        rows: list[list[str]] = [['re', 'im', 'multiplicity']] + [
                [repr(re), repr(im), str(count)] for re, im, count in
                suppression.amplitude_cloud(setup, options.decimals)]
        logger.info('point symmetric: %s',
                    suppression.is_point_symmetric(setup, options.decimals))
        _emit(_rows_to_text(rows), options.file)
        return 0

    def command_verify(self) -> int:
        """Run the invariant suite; exit 3 if a check fails."""
        results: list[verify.CheckResult] = verify.Verifier(
                self.config.n or 3, self.config.seed,
                self.config.options.samples, self.config.tolerances).run()
        for result in results:
            sys.stdout.write(f'{result}\n')
        failed: list[str] = [r.name for r in results if not r.passed]
        if failed:
            raise lib.SnftConsistencyError(
                    'failed checks: ' + ', '.join(failed))
        return 0

    def command_bench(self) -> int:
        """Compare the wall-clock times of ft and fast_ft."""
        options: argparse.Namespace = self.config.options
        n: int = self.config.n or 5
        IrrepTable.of(n).precompute()
        IrrepTable.of(max(n - 1, 1)).precompute()
        rng: np.random.Generator = np.random.default_rng(self.config.seed)
        rows: list[list[str]] = [['transform', 'n', 'seconds']]
        for name, transform in (('ft', Fourier.ft),
                                ('fast_ft', Fourier.fast_ft)):
            functions: list[GroupFunction] = [
                    GroupFunction.random(n, rng)
                    for _ in range(options.repeat)]
            start: float = time.perf_counter()
            for function in functions:
                transform(function, workers=self.config.threads)
            rows.append([name, str(n), f'{time.perf_counter() - start:.4f}'])
        _emit(_rows_to_text(rows), None)
        return 0

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-v',
            '--verbosity',
            help='increase verbosity',
            action='count',
            default=0)
    common.add_argument('--threads',
            help='worker threads (default: $SNFT_THREADS or 1)',
            type=int,
            default=None)
    common.add_argument('--tolerance',
            help='override a tolerance, e.g. math=1e-9 (repeatable)',
            action='append',
            default=[])
    common.add_argument('--unsafe-large',
            help='allow N > 7 or M > 8',
            action='store_true')
    common.add_argument('--seed',
            help='seed for random inputs',
            type=int,
            default=0)

    sizes = argparse.ArgumentParser(add_help=False)
    sizes.add_argument('--n', help='number of particles', type=int)
    sizes.add_argument('--m', help='number of modes', type=int)
    sizes.add_argument('--unitary',
            help='fourier:M, identity:M, beamsplitter or a JSON file')
    sizes.add_argument('--fourier',
            help='use the M-mode Fourier unitary',
            action='store_true')

    parser = argparse.ArgumentParser(allow_abbrev=False)
    commands = parser.add_subparsers(dest='command', required=True)

    irreps = commands.add_parser('irreps', parents=[common],
            help='character table or irrep matrices')
    irreps.add_argument('degree', type=int, help='the degree N')
    irreps.add_argument('--permutation',
            help='print all ρ(σ) for a permutation in cycle notation')
    irreps.add_argument('--output', help='file to write')

    ft = commands.add_parser('ft', parents=[common, sizes],
            help='Fourier transform of a group function')
    ft.add_argument('--function', help='CSV group function')
    ft.add_argument('--inverse', help='JSON spectrum to invert')
    ft.add_argument('--fast', help='use the coset transform',
            action='store_true')
    ft.add_argument('--output', help='file to write')

    for name, text in (('amplitude', 'amplitude function and its transform'),
                       ('cloud', 'amplitude multiset in the complex plane')):
        sub = commands.add_parser(name, parents=[common, sizes], help=text)
        sub.add_argument('--in', dest='inputs', required=True,
                help='input modes, e.g. 0,1')
        sub.add_argument('--out', dest='outputs',
                help='output modes (default: the input modes)')
        sub.add_argument('--file', help='file to write')
        if name == 'cloud':
            sub.add_argument('--decimals', type=int, default=9,
                    help='rounding used to merge amplitudes')

    counting = commands.add_parser('counting', parents=[common, sizes],
            help='event probabilities')
    counting.add_argument('--in', dest='inputs', required=True,
            help='input modes, e.g. 0,1')
    counting.add_argument('--model', default='boson',
            help='boson, fermion, sector:(λ), dist, gram:FILE or labels:s')
    counting.add_argument('--statistics', default='boson',
            choices=['boson', 'fermion'],
            help='statistics for gram/labels models')
    counting.add_argument('--event',
            help='output occupations, e.g. 1,1 (default: all events)')
    counting.add_argument('--file', help='file to write')

    distinguishability = commands.add_parser('distinguishability',
            parents=[common], help='sector weights and purity')
    distinguishability.add_argument('--in', dest='inputs', required=True,
            help='input modes, e.g. 0,1,2')
    distinguishability.add_argument('--model', required=True,
            help='gram:FILE, labels:s or random[:rank]')
    distinguishability.add_argument('--statistics', default='boson',
            choices=['boson', 'fermion'])
    distinguishability.add_argument('--file', help='file to write')

    scan = commands.add_parser('scan', parents=[common, sizes],
            help='suppression verdicts of all transitions')
    scan.add_argument('--dedupe', default='none',
            choices=['none', 'dihedral'])
    scan.add_argument('--out', help='CSV verdict table (default: stdout)')
    scan.add_argument('--summary', help='CSV summary counts')
    scan.add_argument('--residuals', help='text residual report')

    verify_parser = commands.add_parser('verify', parents=[common, sizes],
            help='run the invariant suite')
    verify_parser.add_argument('--samples', type=int, default=20)

    bench = commands.add_parser('bench', parents=[common, sizes],
            help='time ft against fast_ft')
    bench.add_argument('--repeat', type=int, default=10)
    return parser

def main(argv: Optional[list[str]] = None) -> None:
    """Reads cli arguments and runs the subcommand."""
    args = _parser().parse_args(argv)

    levels: list[str] = ['ERROR', 'WARNING', 'INFO', 'DEBUG']
    # there are only levels 0 to 3
    # everything else will cause the index to be out of bounds
    verbosity_level: int = min(args.verbosity, 3)
    logging_handler: logging.StreamHandler = logging.StreamHandler()
    logging_handler.setLevel(logging.DEBUG)
    logging_formatter = logging.Formatter('%(levelname)s %(name)s %(message)s')
    logging_handler.setFormatter(logging_formatter)
    root_logger: logging.Logger = logging.getLogger()
    root_logger.setLevel(logging.ERROR)
    root_logger.addHandler(logging_handler)
    root_logger.setLevel(levels[verbosity_level])

    status: int
    try:
        status = Snft(RunConfig.from_args(args)).run()
    except lib.SnftInputError as error:
        logger.error('%s', error)
        status = 2
    except lib.SnftConsistencyError as error:
        logger.error('%s', error)
        status = 3
    except KeyboardInterrupt:
        logger.warning('interrupted')
        status = 130
    finally:
        root_logger.removeHandler(logging_handler)
    sys.exit(status)

if __name__ == '__main__':
    main()
