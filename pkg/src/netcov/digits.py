"""Exact base-b digit representation of points in [0,1)^s.

Points are stored as digit arrays, never floats: the common-prefix function
gamma is ill-conditioned in floating point near cell boundaries, so every
comparison here happens on exact integer digits.  Conversion to float is
deferred to function-evaluation time.

A point coordinate x = sum_j d_j * b^(-j) is kept as the tuple (d_1, ..., d_P)
with d_1 the most significant digit.  The finite representation is canonical:
constructors never produce trailing-(b-1) tails, so digit equality is value
equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class ConfigurationError(ValueError):
    """Inputs disagree on base, precision, or dimension."""


class PrecisionError(ConfigurationError):
    """An operation needs more stored digits than the point carries."""


class _AtLeastP:
    """Sentinel: the two digit arrays agree on every stored digit.

    Stands in for an unbounded common prefix.  Deliberately unorderable so
    arithmetic on it fails loudly instead of silently treating it as a number.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "AT_LEAST_P"


AT_LEAST_P = _AtLeastP()

# A per-coordinate common-prefix count: an int, or AT_LEAST_P when the
# coordinates agree on all stored digits.
GammaValue = "int | _AtLeastP"

# Digit characters for the text format, covering digit values 0..61
# (bases up to 53 need at most 52).
DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
_CHAR_TO_DIGIT = {c: v for v, c in enumerate(DIGIT_CHARS)}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def validate_base(b: int) -> None:
    if not isinstance(b, int) or not is_prime(b):
        raise ConfigurationError(f"base must be a prime integer, got {b!r}")


@dataclass(frozen=True)
class DigitPoint:
    """A point of [0,1)^s as s arrays of P exact base-b digits."""

    base: int
    coords: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        validate_base(self.base)
        if not self.coords:
            raise ConfigurationError("a point needs at least one coordinate")
        p = len(self.coords[0])
        if p < 1:
            raise ConfigurationError("precision must be at least 1 digit")
        for coord in self.coords:
            if len(coord) != p:
                raise ConfigurationError(
                    "all coordinates must share the same precision"
                )
            for d in coord:
                if not 0 <= d < self.base:
                    raise ConfigurationError(
                        f"digit {d} out of range for base {self.base}"
                    )

    @property
    def s(self) -> int:
        return len(self.coords)

    @property
    def precision(self) -> int:
        return len(self.coords[0])

    @classmethod
    def from_fractions(
        cls,
        values: Iterable[Fraction | int | str],
        base: int,
        precision: int,
    ) -> "DigitPoint":
        """Expand exact rational coordinates to digits, truncating at
        ``precision`` digits (no rounding control; that is out of scope)."""
        coords = []
        for v in values:
            x = Fraction(v)
            if not 0 <= x < 1:
                raise ConfigurationError(f"coordinate {x} outside [0,1)")
            digits = []
            for _ in range(precision):
                x *= base
                d = int(x)
                digits.append(d)
                x -= d
            coords.append(tuple(digits))
        return cls(base, tuple(coords))

    def to_fractions(self) -> tuple[Fraction, ...]:
        out = []
        for coord in self.coords:
            acc = Fraction(0)
            scale = Fraction(1, self.base)
            for d in coord:
                acc += d * scale
                scale /= self.base
            out.append(acc)
        return tuple(out)

    def to_floats(self) -> tuple[float, ...]:
        return tuple(float(f) for f in self.to_fractions())


def gamma_scalar(x: Sequence[int], y: Sequence[int]):
    """Number of initial common digits of two same-precision digit arrays.

    Returns the smallest i such that the length-i prefixes agree and the
    digits at position i+1 differ, or AT_LEAST_P when all stored digits agree.
    """
    if len(x) != len(y):
        raise ConfigurationError(
            f"precision mismatch: {len(x)} vs {len(y)} digits"
        )
    for i, (dx, dy) in enumerate(zip(x, y)):
        if dx != dy:
            return i
    return AT_LEAST_P


def gamma_vector(x: DigitPoint, y: DigitPoint):
    """Componentwise gamma of two points plus the total.

    Returns (per-coordinate values, total) where the total is the plain sum,
    or AT_LEAST_P as soon as any component is AT_LEAST_P.
    """
    if x.base != y.base:
        raise ConfigurationError(f"base mismatch: {x.base} vs {y.base}")
    if x.s != y.s:
        raise ConfigurationError(f"dimension mismatch: {x.s} vs {y.s}")
    parts = tuple(gamma_scalar(cx, cy) for cx, cy in zip(x.coords, y.coords))
    if any(p is AT_LEAST_P for p in parts):
        return parts, AT_LEAST_P
    return parts, sum(parts)


def volume_prefix_ge(b: int, k: Sequence[int]) -> Fraction:
    """Volume of the pair region where every coordinate shares a digit
    prefix of length at least k_j: exactly b^(-sum k)."""
    _check_nonnegative(k)
    return Fraction(1, b ** sum(k))


def volume_prefix_eq(b: int, i: Sequence[int]) -> Fraction:
    """Volume of the pair region with per-coordinate common prefix exactly
    i_j: (b-1)^s / b^(s + sum i)."""
    _check_nonnegative(i)
    s = len(i)
    return Fraction((b - 1) ** s, b ** (s + sum(i)))


def _check_nonnegative(vec: Sequence[int]) -> None:
    if any(v < 0 for v in vec):
        raise ConfigurationError(f"vector components must be >= 0, got {tuple(vec)}")


def digits_to_str(digits: Sequence[int]) -> str:
    return "".join(DIGIT_CHARS[d] for d in digits)


def str_to_digits(text: str, base: int) -> tuple[int, ...]:
    out = []
    for c in text:
        d = _CHAR_TO_DIGIT.get(c)
        if d is None or d >= base:
            raise ConfigurationError(f"invalid digit character {c!r} for base {base}")
        out.append(d)
    return tuple(out)
