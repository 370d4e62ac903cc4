"""Library providing errors, tolerances and (de)serialisation helpers."""

import dataclasses
import json
import logging
import pathlib

from typing import Any

import numpy as np

logger: logging.Logger = logging.getLogger()
logger.addHandler(logging.NullHandler())

SCHEMA: str = 'snft/1'

# resource guards
MAX_N: int = 7
MAX_M: int = 8
MAX_TABLE_N: int = 8

class SnftError(Exception):
    """Custom exception."""

class SnftInputError(SnftError):
    """Error for invalid input (CLI exit status 2)."""

class SnftRangeError(SnftInputError):
    """Error for resource guard violations."""

class SnftConsistencyError(SnftError):
    """Error for internal consistency failures (CLI exit status 3)."""

@dataclasses.dataclass(frozen=True)
class Tolerances():
    """Numeric thresholds used throughout the package.

    Attributes:
        math: Absolute entrywise tolerance for matrix identities.
        ingestion: Unitarity tolerance for matrices read from files.
        gram_clip: Eigenvalues of a Gram matrix above `-gram_clip` are
            clipped to zero, below are rejected.
        suppression_relative: A sector weight counts as vanishing if it
            is below this fraction of the largest sector weight.
        suppression_floor: Absolute floor used when all sectors vanish.
        phase: Phase tolerance when matching eigenvalues that are not
            exact roots of unity.
        denominator: Smallest accepted norm of an input superposition.
        positivity: Smallest accepted eigenvalue of a Hermitian part.
    """
    math: float = 1e-10
    ingestion: float = 1e-8
    gram_clip: float = 1e-10
    suppression_relative: float = 1e-10
    suppression_floor: float = 1e-24
    phase: float = 1e-9
    denominator: float = 1e-14
    positivity: float = 1e-10

    def replace(self, overrides: dict[str, float]) -> 'Tolerances':
        """Return a copy with some fields replaced.

        Args:
            overrides: Field names mapped to new values.

        Raises:
            SnftInputError: If a field does not exist.
        """
        names: set[str] = {field.name for field in dataclasses.fields(self)}
        unknown: set[str] = set(overrides) - names
        if unknown:
            raise SnftInputError(
                    f'unknown tolerance(s) "{", ".join(sorted(unknown))}"')
        return dataclasses.replace(self, **overrides)

DEFAULT_TOLERANCES: Tolerances = Tolerances()

def check_size(n: int, m: int = 1, unsafe_large: bool = False) -> None:
    """Enforce the desk-scale resource guard.

    Args:
        n: Number of particles / group degree.
        m: Number of modes.
        unsafe_large: Skip the guard.

    Raises:
        SnftRangeError: If the sizes are out of range.
    """
    if n < 1 or m < 1:
        raise SnftRangeError(f'N and M must be positive (N={n}, M={m})')
    if unsafe_large:
        logger.warning('resource guard lifted for N=%d, M=%d', n, m)
        return
    if n > MAX_N or m > MAX_M:
        raise SnftRangeError(
                f'N={n}, M={m} exceeds N <= {MAX_N}, M <= {MAX_M} '
                '(use --unsafe-large to override)')

class Helper:
    """Provide (de)serialisation functions."""

    @staticmethod
    def parse_modes(text: str) -> tuple[int, ...]:
        """Parse a comma separated list of 0-based mode labels.

        Args:
            text: The list, e.g. `"0,0,1,3"`.

        Returns:
            The modes in the given order.

        Raises:
            SnftInputError: If an entry is not a non-negative integer.
        """
        try:
            modes: tuple[int, ...] = tuple(
                    int(part) for part in text.split(',') if part.strip())
        except ValueError as error:
            raise SnftInputError(f'malformed mode list "{text}"') from error
        if not modes or min(modes) < 0:
            raise SnftInputError(f'malformed mode list "{text}"')
        return modes

    @staticmethod
    def encode_complex(value: complex) -> list[float]:
        """Encode a complex number as `[re, im]`."""
        return [float(np.real(value)), float(np.imag(value))]

    @staticmethod
    def encode_matrix(matrix: np.ndarray) -> list[list[list[float]]]:
        """Encode a complex matrix row-major as nested `[re, im]` pairs."""
        return [[Helper.encode_complex(entry) for entry in row]
                for row in np.atleast_2d(matrix)]

    @staticmethod
    def decode_matrix(data: Any) -> np.ndarray:
        """Decode a complex matrix written by `Helper.encode_matrix()`.

        A flat list of `[re, im]` pairs is accepted as well if its
        length is a perfect square.

        Args:
            data: Nested lists.

        Returns:
            The complex matrix.

        Raises:
            SnftInputError: If the data has the wrong shape.
        """
        try:
            array: np.ndarray = np.asarray(data, dtype=float)
        except (TypeError, ValueError) as error:
            raise SnftInputError('matrix entries must be [re, im]') from error
        if array.ndim == 2 and array.shape[1] == 2:
            side: int = int(round(np.sqrt(array.shape[0])))
            if side * side != array.shape[0]:
                raise SnftInputError('flat matrix length is not a square')
            array = array.reshape(side, side, 2)
        if array.ndim != 3 or array.shape[2] != 2 or \
                array.shape[0] != array.shape[1]:
            raise SnftInputError(
                    f'expected a square matrix of [re, im], got {array.shape}')
        return array[..., 0] + 1j * array[..., 1]

    @staticmethod
    def read_json(path: pathlib.Path) -> Any:
        """Read a JSON document.

        Args:
            path: The path to the file.

        Raises:
            SnftInputError: If the file cannot be read or parsed.
        """
        logger.info('reading "%s"', str(path))
        try:
            return json.loads(path.read_text(encoding='utf-8'))
        except OSError as error:
            raise SnftInputError(f'could not read "{path}"') from error
        except json.JSONDecodeError as error:
            raise SnftInputError(f'could not parse "{path}"') from error

    @staticmethod
    def dump_json(data: dict[str, Any]) -> str:
        """Serialise a document with the schema tag."""
        return json.dumps({'schema': SCHEMA, **data}, ensure_ascii=False)

    @staticmethod
    def write_text(path: pathlib.Path, text: str) -> None:
        """Write text to a file.

        Raises:
            SnftInputError: If the file cannot be written.
        """
        logger.info('writing "%s"', str(path))
        try:
            path.write_text(text, encoding='utf-8')
        except OSError as error:
            raise SnftInputError(f'could not write "{path}"') from error
