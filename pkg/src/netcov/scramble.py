"""Nested uniform digit scrambling of point sets, reproducibly.

Each coordinate gets an independent random permutation tree: the permutation
applied to the digit at depth d depends on the input digits at depths
1..d-1.  Pairs of points therefore keep their exact common-prefix profile
while each point becomes marginally uniform on [0,1)^s.

Randomness is counter-mode hashing: every tree node (coordinate, input digit
prefix) keys a blake2b digest of the seed, and the node's permutation is
drawn from that digest.  This gives bit-reproducible output for a given
(master seed, replication index), O(nodes visited) memory, and safe parallel
replication, with no dependence on any global RNG state.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .digits import ConfigurationError
from .nets import PointSet

# Default number of uniform guard digits appended past the input precision.
GUARD_DIGITS = 31


@dataclass(frozen=True)
class ScrambleSeed:
    """(64-bit master seed, replication index) uniquely fix the scramble."""

    master: int
    replication: int = 0

    def __post_init__(self):
        if not 0 <= self.master < 2 ** 64:
            raise ConfigurationError("master seed must fit in 64 bits")
        if self.replication < 0:
            raise ConfigurationError("replication index must be >= 0")

    def key(self) -> bytes:
        return self.master.to_bytes(8, "big") + self.replication.to_bytes(8, "big")


def default_precision(b: int, m: int) -> int:
    """Input precision plus guard digits, capped so prefix codes stay inside
    exact 62-bit integer arithmetic per coordinate."""
    cap = int(62 / math.log2(b))
    return max(m, min(m + GUARD_DIGITS, cap))


def _byte_stream(key: bytes, node: bytes) -> Iterator[int]:
    counter = 0
    while True:
        digest = hashlib.blake2b(
            node + counter.to_bytes(4, "big"), key=key, digest_size=32
        ).digest()
        yield from digest
        counter += 1


def _permutation(b: int, key: bytes, node: bytes) -> np.ndarray:
    """A permutation of {0..b-1} drawn from the node's digest stream via
    Fisher-Yates with rejection sampling (stable across platforms)."""
    stream = _byte_stream(key, node)
    perm = list(range(b))
    for i in range(b - 1, 0, -1):
        bound = i + 1
        limit = 256 - 256 % bound
        while True:
            r = next(stream)
            if r < limit:
                break
        j = r % bound
        perm[i], perm[j] = perm[j], perm[i]
    return np.array(perm, dtype=np.uint8)


def owen_scramble(ps: PointSet, seed: ScrambleSeed, precision: int | None = None) -> PointSet:
    """Scramble every coordinate through a fresh random permutation tree.

    Output digits beyond the input precision are i.i.d. uniform (each comes
    from a permutation keyed by a prefix that already distinguishes the
    points).  The result is again a valid point set with the same claimed t.
    """
    b, m = ps.b, ps.m
    p_out = default_precision(b, m) if precision is None else precision
    if p_out < m:
        raise ConfigurationError(f"output precision {p_out} must be >= m = {m}")
    n = ps.n
    p_in = ps.precision
    key = seed.key()
    out = np.empty((n, ps.s, p_out), dtype=np.uint8)
    zeros = np.zeros(n, dtype=np.int64)
    for j in range(ps.s):
        coord_tag = j.to_bytes(2, "big")
        # group_of[i] = index of the tree node point i sits at; node_prefix
        # holds that node's input digit prefix as raw bytes
        group_of = np.zeros(n, dtype=np.int64)
        node_prefix = [b""]
        for d in range(p_out):
            digit_in = ps.digits[:, j, d].astype(np.int64) if d < p_in else zeros
            perms = np.stack(
                [_permutation(b, key, coord_tag + pre) for pre in node_prefix]
            )
            out[:, j, d] = perms[group_of, digit_in]
            child = group_of * b + digit_in
            uniq, group_of = np.unique(child, return_inverse=True)
            node_prefix = [
                node_prefix[int(u) // b] + bytes([int(u) % b]) for u in uniq
            ]
    return PointSet(b=b, m=m, s=ps.s, t=ps.t, digits=out)


def replicate(ps: PointSet, master_seed: int, count: int,
              precision: int | None = None) -> Iterator[PointSet]:
    """Stream of independent scrambles; replication r uses
    (master_seed, r), so any prefix of the stream is run-length independent."""
    if count < 1:
        raise ConfigurationError(f"replication count must be >= 1, got {count}")
    for r in range(count):
        yield owen_scramble(ps, ScrambleSeed(master_seed, r), precision)
