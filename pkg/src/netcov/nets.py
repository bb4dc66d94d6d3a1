"""Digital (0,m,s)-net construction in prime bases and exhaustive
equidistribution checking.

The generator is the classical power-of-Pascal construction: coordinate j
uses the (j-1)-th power of the upper-triangular Pascal matrix modulo b,
which yields a (0,m,s)-net whenever s <= b.  The verifier is
construction-agnostic and counts points in every elementary interval by
exact digit-prefix arithmetic, so externally supplied point sets can be
checked as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .digits import (
    ConfigurationError,
    DigitPoint,
    digits_to_str,
    str_to_digits,
    validate_base,
)


class UnsupportedConstructionError(ConfigurationError):
    """The requested parameters fall outside what this generator covers."""


@dataclass(frozen=True)
class GeneratingMatrices:
    """s generating matrices of shape (precision, m) over the field Z_b."""

    b: int
    m: int
    mats: tuple[np.ndarray, ...]

    def __post_init__(self):
        validate_base(self.b)
        for mat in self.mats:
            if mat.shape[1] != self.m:
                raise ConfigurationError("matrix column count must equal m")
            mat.flags.writeable = False

    @property
    def s(self) -> int:
        return len(self.mats)

    @property
    def precision(self) -> int:
        return self.mats[0].shape[0]


@dataclass(frozen=True)
class PointSet:
    """n = b^m points as an (n, s, precision) array of exact digits."""

    b: int
    m: int
    s: int
    t: int
    digits: np.ndarray

    def __post_init__(self):
        validate_base(self.b)
        n, s, _ = self.digits.shape
        if s != self.s:
            raise ConfigurationError("digit array dimension does not match s")
        if n != self.b ** self.m:
            raise ConfigurationError(
                f"point count {n} is not b^m = {self.b ** self.m}"
            )
        if self.digits.size and int(self.digits.max()) >= self.b:
            raise ConfigurationError("digit value out of range for base")
        self.digits.flags.writeable = False

    @property
    def n(self) -> int:
        return self.digits.shape[0]

    @property
    def precision(self) -> int:
        return self.digits.shape[2]

    def __len__(self) -> int:
        return self.n

    def point(self, i: int) -> DigitPoint:
        coords = tuple(tuple(int(d) for d in self.digits[i, j]) for j in range(self.s))
        return DigitPoint(self.b, coords)

    def __iter__(self) -> Iterator[DigitPoint]:
        return (self.point(i) for i in range(self.n))


def pascal_matrix_power(b: int, m: int, power: int) -> np.ndarray:
    """The power-th power, mod b, of the m x m upper-triangular matrix with
    entries binom(col, row)."""
    pascal = np.zeros((m, m), dtype=np.int64)
    for r in range(m):
        for c in range(r, m):
            pascal[r, c] = math.comb(c, r) % b
    out = np.eye(m, dtype=np.int64)
    for _ in range(power):
        out = (out @ pascal) % b
    return out


def faure_matrices(b: int, m: int, s: int, precision: int | None = None) -> GeneratingMatrices:
    """Generating matrices for a (0,m,s)-net in prime base b, s <= b.

    Matrix j is the (j-1)-th Pascal power; rows beyond m (when a larger
    precision is requested) are zero, matching the canonical finite digit
    expansion of the generated points.
    """
    validate_base(b)
    if m < 0:
        raise ConfigurationError(f"m must be >= 0, got {m}")
    if s < 1:
        raise ConfigurationError(f"s must be >= 1, got {s}")
    if s > b:
        raise UnsupportedConstructionError(
            f"this construction needs s <= b, got s={s} > b={b}"
        )
    p = m if precision is None else precision
    if p < m:
        raise ConfigurationError(f"precision {p} smaller than m={m}")
    mats = []
    for j in range(s):
        top = pascal_matrix_power(b, m, j)
        mat = np.zeros((p, m), dtype=np.int64)
        mat[:m, :] = top
        mats.append(mat)
    return GeneratingMatrices(b, m, tuple(mats))


def index_digit_matrix(b: int, m: int) -> np.ndarray:
    """Base-b digits (least significant first) of 0..b^m-1, shape (m, n)."""
    n = b ** m
    idx = np.arange(n, dtype=np.int64)
    rows = []
    for _ in range(m):
        rows.append(idx % b)
        idx //= b
    return np.array(rows, dtype=np.int64).reshape(m, n)


def generate_points(g: GeneratingMatrices, b: int, m: int) -> PointSet:
    """All b^m points of the digital net defined by the matrices.

    Point i has coordinate-j digits M_j . digits(i) mod b, with digits(i)
    the least-significant-first expansion of the index.
    """
    if b != g.b or m != g.m:
        raise ConfigurationError("matrices built for different (b, m)")
    n = b ** m
    dmat = index_digit_matrix(b, m)  # (m, n)
    out = np.empty((n, g.s, g.precision), dtype=np.uint8)
    for j, mat in enumerate(g.mats):
        out[:, j, :] = ((mat @ dmat) % b).T
    return PointSet(b=b, m=m, s=g.s, t=0, digits=out)


def faure_net(b: int, m: int, s: int, precision: int | None = None) -> PointSet:
    """Convenience: generate the (0,m,s)-net straight from parameters."""
    return generate_points(faure_matrices(b, m, s, precision), b, m)


@dataclass(frozen=True)
class IntervalFailure:
    k: tuple[int, ...]
    interval: int
    expected: int
    got: int


@dataclass(frozen=True)
class NetReport:
    passed: bool
    t: int
    intervals_checked: int
    shapes_checked: int
    failure: IntervalFailure | None

    def to_dict(self) -> dict:
        d = {
            "passed": self.passed,
            "t": self.t,
            "intervals_checked": self.intervals_checked,
            "shapes_checked": self.shapes_checked,
        }
        if self.failure is not None:
            d["failure"] = {
                "k": list(self.failure.k),
                "interval": self.failure.interval,
                "expected": self.failure.expected,
                "got": self.failure.got,
            }
        return d


def _k_vectors(s: int, budget: int):
    """All k in N^s with k_1 + ... + k_s <= budget."""
    if s == 0:
        yield ()
        return
    for first in range(budget + 1):
        for rest in _k_vectors(s - 1, budget - first):
            yield (first,) + rest


def verify_net(ps: PointSet, t: int) -> NetReport:
    """Exhaustively check the (t,m,s) equidistribution property.

    For every shape k with |k| <= m - t, every elementary interval
    prod [a_j b^(-k_j), (a_j+1) b^(-k_j)) must hold exactly b^(m-|k|)
    points.  Counting uses digit prefixes, so the check is exact.
    """
    b, m, s = ps.b, ps.m, ps.s
    budget = m - t
    if budget < 0:
        budget = 0
    if b ** min(budget, m) > 2 ** 40:
        raise ConfigurationError("interval count too large for exhaustive check")
    # prefix codes per coordinate and depth: codes[j][d] maps each point to
    # the integer value of its first d digits in coordinate j
    max_depth = min(budget, ps.precision)
    codes = []
    for j in range(s):
        per_depth = [np.zeros(ps.n, dtype=np.int64)]
        for d in range(max_depth):
            per_depth.append(per_depth[-1] * b + ps.digits[:, j, d].astype(np.int64))
        codes.append(per_depth)

    intervals = 0
    shapes = 0
    for k in _k_vectors(s, budget):
        if max(k, default=0) > ps.precision:
            raise ConfigurationError(
                f"shape {k} needs more digits than the stored precision {ps.precision}"
            )
        shapes += 1
        total = sum(k)
        idx = np.zeros(ps.n, dtype=np.int64)
        for j, kj in enumerate(k):
            idx = idx * (b ** kj) + codes[j][kj]
        n_cells = b ** total
        counts = np.bincount(idx, minlength=n_cells)
        intervals += n_cells
        expected = b ** (m - total)
        bad = np.nonzero(counts != expected)[0]
        if bad.size:
            cell = int(bad[0])
            return NetReport(
                passed=False,
                t=t,
                intervals_checked=intervals,
                shapes_checked=shapes,
                failure=IntervalFailure(k, cell, expected, int(counts[cell])),
            )
    return NetReport(passed=True, t=t, intervals_checked=intervals,
                     shapes_checked=shapes, failure=None)


def save_point_set(ps: PointSet, fh) -> None:
    """Text format: header line ``b m s t P`` then one point per line,
    coordinates as base-b digit strings separated by spaces."""
    fh.write(f"{ps.b} {ps.m} {ps.s} {ps.t} {ps.precision}\n")
    for i in range(ps.n):
        line = " ".join(digits_to_str(ps.digits[i, j]) for j in range(ps.s))
        fh.write(line + "\n")


def load_point_set(fh) -> PointSet:
    header = fh.readline().split()
    if len(header) != 5:
        raise ConfigurationError("expected header line 'b m s t P'")
    b, m, s, t, p = (int(x) for x in header)
    rows = []
    for line in fh:
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != s:
            raise ConfigurationError(f"expected {s} coordinates, got {len(parts)}")
        row = []
        for part in parts:
            if len(part) != p:
                raise ConfigurationError(
                    f"expected {p} digits per coordinate, got {len(part)}"
                )
            row.append(str_to_digits(part, b))
        rows.append(row)
    digits = np.array(rows, dtype=np.uint8).reshape(len(rows), s, p)
    return PointSet(b=b, m=m, s=s, t=t, digits=digits)
