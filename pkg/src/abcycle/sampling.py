"""Uniform samplers for (a,b)-partitions, t-matchings and product matchings.

All samplers use shuffle-then-chunk.  A uniform permutation of the ground set
is cut into consecutive chunks; every target object is hit by the same number
of permutations (t! (l!)^t (m-tl)! for an unordered t-matching, a!^t b!^t for
an ordered (a,b)-partition), so the induced distribution is exactly uniform.

Randomness comes from numpy's PCG64 seeded through ``SeedSequence`` with the
trial index as spawn key, which is reproducible across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hypergraph import VertexSet

U64 = (1 << 64) - 1


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    trial_index: int = 0

    def rng(self, *stream: int) -> np.random.Generator:
        return derive_seed(self.master_seed, self.trial_index, *stream)


def derive_seed(master: int, trial: int, *stream: int) -> np.random.Generator:
    """Generator for trial ``trial`` of an experiment seeded with ``master``.

    ``stream`` optionally separates independent sub-streams of one trial.
    """
    if trial < 0:
        raise ValueError(f"trial index must be nonnegative, got {trial}")
    ss = np.random.SeedSequence(entropy=master & U64, spawn_key=(trial, *stream))
    return np.random.Generator(np.random.PCG64(ss))


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, SeedSpec):
        return seed.rng()
    if isinstance(seed, int):
        return derive_seed(seed, 0)
    raise TypeError(f"unsupported seed {seed!r}")


@dataclass(frozen=True)
class ABPartition:
    a: int
    b: int
    A_blocks: tuple[VertexSet, ...]
    B_blocks: tuple[VertexSet, ...]

    @property
    def t(self) -> int:
        return len(self.A_blocks)

    @property
    def n(self) -> int:
        return self.t * (self.a + self.b)

    def check(self) -> None:
        """Raise ``ValueError`` unless this is an (a,b)-partition of [n]."""
        if len(self.B_blocks) != self.t:
            raise ValueError("unequal numbers of A- and B-blocks")
        seen: list[int] = []
        for blk in self.A_blocks:
            if len(blk) != self.a:
                raise ValueError(f"A-block {blk} does not have size {self.a}")
            seen.extend(blk)
        for blk in self.B_blocks:
            if len(blk) != self.b:
                raise ValueError(f"B-block {blk} does not have size {self.b}")
            seen.extend(blk)
        if sorted(seen) != list(range(1, self.n + 1)):
            raise ValueError("blocks are not a partition of [n]")


@dataclass(frozen=True)
class Matching:
    """Disjoint equal-size blocks, canonically ordered by minimum element."""

    blocks: tuple[VertexSet, ...]

    def __len__(self) -> int:
        return len(self.blocks)


def _chunks(perm: Sequence[int], size: int, count: int, offset: int = 0) -> list[VertexSet]:
    return [
        tuple(sorted(int(v) for v in perm[offset + i * size: offset + (i + 1) * size]))
        for i in range(count)
    ]


def sample_ab_partition(n: int, a: int, b: int, seed) -> ABPartition:
    """Uniform element of the set of ordered (a,b)-partitions of [n]."""
    if a < 1 or b < 1:
        raise ValueError(f"block sizes must be positive, got a={a}, b={b}")
    if n % (a + b):
        raise ValueError(f"n={n} not divisible by a+b={a + b}")
    t = n // (a + b)
    perm = _rng(seed).permutation(n) + 1
    return ABPartition(
        a, b,
        tuple(_chunks(perm, a, t)),
        tuple(_chunks(perm, b, t, offset=a * t)),
    )


def sample_ab_partition_given(
    ground: Sequence[int], a: int, b: int, fixed_a: Sequence[int], seed
) -> ABPartition:
    """Uniform (a,b)-partition of ``ground`` conditioned on ``A_1 = fixed_a``.

    Samples t-1 further A-blocks and t B-blocks from ``ground`` minus ``fixed_a``.
    ``ground`` need not be [n]; the result is not ``check()``-able in that case.
    """
    fixed = tuple(sorted(fixed_a))
    if len(fixed) != a:
        raise ValueError(f"fixed block {fixed} does not have size {a}")
    rest = np.array(sorted(set(ground) - set(fixed)), dtype=np.int64)
    if len(rest) + a != len(ground) or len(ground) % (a + b):
        raise ValueError("fixed block must lie in ground and |ground| must be divisible by a+b")
    t = len(ground) // (a + b)
    perm = _rng(seed).permutation(rest)
    A = [fixed] + _chunks(perm, a, t - 1)
    B = _chunks(perm, b, t, offset=a * (t - 1))
    return ABPartition(a, b, tuple(A), tuple(B))


def sample_matching(m: int, l: int, t: int, seed, ground: Sequence[int] | None = None) -> Matching:
    """Uniform unordered t-matching of l-subsets of ``ground`` (default [m])."""
    if l < 1 or t < 0:
        raise ValueError(f"need l >= 1 and t >= 0, got l={l}, t={t}")
    if t * l > m:
        raise ValueError(f"t*l = {t * l} exceeds m = {m}")
    pool = np.arange(1, m + 1) if ground is None else np.asarray(ground)
    if len(pool) != m:
        raise ValueError("ground set size differs from m")
    perm = _rng(seed).permutation(pool)
    return Matching(tuple(sorted(_chunks(perm, l, t))))


def sample_product_matchings(n1: int, n2: int, a: int, b: int, seed) -> tuple[Matching, Matching]:
    """Independent uniform perfect matchings of a-sets of V1 and b-sets of V2."""
    if a < 1 or b < 1 or n1 % a or n2 % b or n1 // a != n2 // b:
        raise ValueError(f"parts {n1}, {n2} do not split into equally many {a}- and {b}-blocks")
    t = n1 // a
    rng = _rng(seed)
    X = sample_matching(n1, a, t, rng)
    Y = sample_matching(n2, b, t, rng, ground=range(n1 + 1, n1 + n2 + 1))
    return X, Y
