"""Pair-coincidence counting for digital point sets.

For an ordered pair of distinct points, the per-coordinate count of leading
common digits locates the pair in a disjoint family of product regions.  The
number of pairs per region is what the joint pair density is made of, and for
t = 0 nets those counts collapse to closed forms in the scalar digit total.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

import numpy as np

from .digits import (
    AT_LEAST_P,
    ConfigurationError,
    DigitPoint,
    PrecisionError,
    gamma_vector,
    validate_base,
    volume_prefix_eq,
)
from .nets import PointSet


@dataclass(frozen=True)
class PairProfile:
    """Counts of ordered distinct pairs by per-coordinate common-digit vector.

    Components of a key are capped at the stored precision: a component equal
    to the precision means every stored digit of that coordinate agrees, so
    the true count is only known to be at least that large.
    """

    b: int
    m: int
    s: int
    precision: int
    counts: Mapping[tuple[int, ...], int]

    @property
    def n(self) -> int:
        return self.b ** self.m

    @property
    def total_pairs(self) -> int:
        return self.n * (self.n - 1)

    @property
    def saturated_pairs(self) -> int:
        """Pairs with some coordinate agreeing through all stored digits."""
        return sum(
            cnt for vec, cnt in self.counts.items()
            if any(v >= self.precision for v in vec)
        )

    def exact_count(self, i: Sequence[int]) -> int:
        """Pairs whose common-digit vector equals i exactly."""
        i = tuple(i)
        if len(i) != self.s:
            raise ConfigurationError(f"vector {i} has wrong dimension")
        if any(c < 0 for c in i):
            return 0
        if any(c >= self.precision for c in i):
            raise PrecisionError(
                f"components of {i} reach the stored precision {self.precision}; "
                "exact equality there is not observable"
            )
        return self.counts.get(i, 0)

    def at_least_count(self, k: Sequence[int]) -> int:
        """Pairs whose common-digit vector dominates k componentwise.
        Negative components are clamped to 0."""
        k = tuple(max(c, 0) for c in k)
        if len(k) != self.s:
            raise ConfigurationError(f"vector {k} has wrong dimension")
        if any(c > self.precision for c in k):
            raise PrecisionError(
                f"components of {k} exceed the stored precision {self.precision}"
            )
        return sum(
            cnt for vec, cnt in self.counts.items()
            if all(v >= c for v, c in zip(vec, k))
        )

    def to_dict(self) -> dict:
        return {
            "b": self.b, "m": self.m, "s": self.s,
            "precision": self.precision,
            "total_pairs": self.total_pairs,
            "saturated_pairs": self.saturated_pairs,
            "counts": {
                ",".join(str(v) for v in vec): cnt
                for vec, cnt in sorted(self.counts.items())
            },
        }


def _gamma_matrix(digits_j: np.ndarray) -> np.ndarray:
    """Leading-common-digit counts between all rows of one coordinate."""
    n, p = digits_j.shape
    gam = np.zeros((n, n), dtype=np.int64)
    alive = np.ones((n, n), dtype=bool)
    for d in range(p):
        col = digits_j[:, d]
        alive &= col[:, None] == col[None, :]
        gam += alive
    return gam


def profile_bruteforce(ps: PointSet) -> PairProfile:
    """Exhaustive profile over all ordered distinct pairs of a point set.

    A component equal to the stored precision records a pair whose coordinate
    agrees through every stored digit (the observable cap).
    """
    mats = [_gamma_matrix(ps.digits[:, j, :]) for j in range(ps.s)]
    off_diag = ~np.eye(ps.n, dtype=bool)
    vecs = np.stack([g[off_diag] for g in mats], axis=1)
    uniq, cnt = np.unique(vecs, axis=0, return_counts=True)
    counts = {tuple(int(v) for v in row): int(c) for row, c in zip(uniq, cnt)}
    return PairProfile(b=ps.b, m=ps.m, s=ps.s, precision=ps.precision,
                       counts=counts)


def M_closed_form(b: int, m: int, k: Sequence[int]) -> int:
    """Ordered distinct pairs of a t = 0 net whose common-digit vector
    dominates k componentwise.  Negative components are clamped to 0."""
    validate_base(b)
    total = sum(max(c, 0) for c in k)
    if total > m:
        return 0
    return b ** m * (b ** (m - total) - 1)


def N_closed_form(b: int, m: int, s: int, i: Sequence[int]) -> int:
    """Ordered distinct pairs of a t = 0 net whose common-digit vector equals
    i exactly.  Zero if any component is negative; otherwise a function of
    the component sum alone."""
    validate_base(b)
    i = tuple(i)
    if len(i) != s:
        raise ConfigurationError(f"vector {i} has wrong dimension")
    if any(c < 0 for c in i):
        return 0
    q = sum(i)
    total = 0
    for k in range(s + 1):
        term = comb(s, k) * max(b ** (m - q - k), 1)
        total += -term if k % 2 else term
    return b ** m * total


def joint_pdf_closed_form(b: int, m: int, s: int, i: Sequence[int]) -> Fraction:
    """Density of the pair distribution of a scrambled t = 0 net on the
    region where the common-digit vector equals i.  Piecewise constant; zero
    once the component sum reaches m."""
    n = b ** m
    if n < 2:
        raise ConfigurationError("pair density needs at least two points")
    count = N_closed_form(b, m, s, i)
    if count == 0:
        return Fraction(0)
    q = sum(i)
    return Fraction(count, n * (n - 1)) * Fraction(b ** (s + q), (b - 1) ** s)


def joint_pdf(profile: PairProfile, x: DigitPoint, y: DigitPoint) -> Fraction:
    """Density of the scrambled pair distribution at (x, y), read off the
    measured profile: count of the pair's region, normalized by pair count
    and region volume.  Zero when some coordinate agrees through all stored
    digits (the two-distinct-points density vanishes there in the limit)."""
    if x.base != profile.b:
        raise ConfigurationError(f"base mismatch: {x.base} vs {profile.b}")
    if x.s != profile.s:
        raise ConfigurationError(f"dimension mismatch: {x.s} vs {profile.s}")
    n = profile.n
    if n < 2:
        raise ConfigurationError("pair density needs at least two points")
    parts, total = gamma_vector(x, y)
    if total is AT_LEAST_P or any(p is AT_LEAST_P for p in parts):
        return Fraction(0)
    count = profile.exact_count(parts)
    if count == 0:
        return Fraction(0)
    q = sum(parts)
    return Fraction(count, n * (n - 1)) * Fraction(
        profile.b ** (profile.s + q), (profile.b - 1) ** profile.s
    )


def _bounded_sum_counts(s: int, cap: int) -> list[int]:
    """counts[q] = number of vectors in [0, cap]^s with component sum q."""
    counts = [1]
    for _ in range(s):
        nxt = [0] * (len(counts) + cap)
        for q, c in enumerate(counts):
            for d in range(cap + 1):
                nxt[q + d] += c
        counts = nxt
    return counts


def _spread(q: int, s: int) -> tuple[int, ...]:
    """Any vector with component sum q; counting functions only see the sum."""
    out = [0] * s
    j = 0
    while q > 0:
        out[j] += 1
        q -= 1
        j = (j + 1) % s
    return tuple(out)


def pdf_normalization(b: int, m: int, s: int) -> Fraction:
    """Exact integral of the closed-form pair density over the two cubes.

    The density is constant on each common-digit region, so the integral is a
    finite sum of region volume times density; a correct density makes it 1.
    """
    validate_base(b)
    if m < 1:
        raise ConfigurationError("need m >= 1")
    total = Fraction(0)
    counts = _bounded_sum_counts(s, m - 1)
    for q, mult in enumerate(counts):
        if mult == 0:
            continue
        rep = _spread(q, s)
        total += mult * joint_pdf_closed_form(b, m, s, rep) * volume_prefix_eq(b, rep)
    return total
