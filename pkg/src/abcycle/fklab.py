"""Monte Carlo checks of the random-matching concentration inequality.

For a fixed family G of l-subsets of [m] with density theta and a uniform
random t-matching M, eta = |G n M| has mean theta*t and
Pr[|eta - theta*t| >= 2*gamma*sqrt(t)] <= 2*exp(-gamma^2/2).

Trials are processed in fixed-size chunks; chunk c draws from
``derive_seed(seed, c)``, so results do not depend on ``jobs``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from itertools import combinations
from typing import Callable, Iterable, Sequence

import numpy as np

from .hypergraph import Hypergraph, binom, degree, mask_of
from .sampling import derive_seed, sample_ab_partition_given

CHUNK = 2000
DEFAULT_GAMMAS = (0.5, 1.0, 1.5, 2.0, 2.5)


def parallel_map(fn: Callable, items: Iterable, jobs: int = 1) -> list:
    """Ordered map; ``jobs > 1`` fans out to worker processes."""
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


@dataclass
class TrialStats:
    trials: int
    mean_eta: float
    expected_eta: float | None
    tail_freq: dict[float, float]
    bound: dict[float, float]
    events: dict[str, float] = field(default_factory=dict)
    records: list = field(default_factory=list, repr=False)


@dataclass(frozen=True)
class FKInstance:
    m: int
    l: int
    t: int
    family: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.l < 1 or self.t < 0:
            raise ValueError(f"need l >= 1 and t >= 0, got l={self.l}, t={self.t}")
        if self.m < self.t * self.l:
            raise ValueError(f"m={self.m} < t*l={self.t * self.l}")

    @property
    def theta(self) -> float:
        return len(self.family) / binom(self.m, self.l)


def make_instance(m: int, l: int, t: int, theta: float, seed: int) -> FKInstance:
    """Seeded family of round(theta * C(m,l)) distinct l-subsets of [m]."""
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta={theta} outside [0, 1]")
    total = binom(m, l)
    size = int(round(theta * total))
    rng = derive_seed(seed, 0, 1)
    chosen = np.sort(rng.choice(total, size=size, replace=False))
    combos = combinations(range(1, m + 1), l)
    fam, want, idx = [], iter(chosen.tolist()), 0
    nxt = next(want, None)
    for idx, c in enumerate(combos):
        if nxt is None:
            break
        if idx == nxt:
            fam.append(c)
            nxt = next(want, None)
    return FKInstance(m, l, t, tuple(fam))


def fk_bound(gamma: float) -> float:
    """``2 exp(-gamma^2 / 2)`` clamped to 1."""
    if gamma < 0:
        raise ValueError(f"gamma={gamma} < 0")
    return min(1.0, 2.0 * math.exp(-gamma * gamma / 2.0))


def _eta_chunk(inst: FKInstance, seed: int, sizes: tuple[int, int]) -> np.ndarray:
    chunk, count = sizes
    rng = derive_seed(seed, chunk)
    m, l, t = inst.m, inst.l, inst.t
    if t == 0 or not inst.family:
        return np.zeros(count, dtype=np.int64)
    perms = rng.permuted(np.tile(np.arange(1, m + 1, dtype=np.int64), (count, 1)), axis=1)
    blocks = perms[:, : t * l].reshape(count, t, l)
    if m <= 62:
        fam = np.fromiter((mask_of(f) for f in inst.family), dtype=np.int64)
        masks = np.bitwise_or.reduce(np.left_shift(np.int64(1), blocks), axis=2)
        return np.isin(masks, fam).sum(axis=1)
    fam_set = {frozenset(f) for f in inst.family}
    return np.array(
        [sum(frozenset(blk.tolist()) in fam_set for blk in row) for row in blocks], dtype=np.int64
    )


def sample_etas(inst: FKInstance, trials: int, seed: int, jobs: int = 1) -> np.ndarray:
    chunks = [(c, min(CHUNK, trials - c * CHUNK)) for c in range(math.ceil(trials / CHUNK))]
    parts = parallel_map(partial(_eta_chunk, inst, seed), chunks, jobs)
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def tail_stats(etas: np.ndarray, center: float, radius_of: Callable[[float], float], gammas):
    return {g: float(np.mean(np.abs(etas - center) >= radius_of(g))) if len(etas) else 0.0 for g in gammas}


def run_fk(
    inst: FKInstance,
    gammas: Sequence[float] = DEFAULT_GAMMAS,
    trials: int = 10_000,
    seed: int = 0,
    jobs: int = 1,
) -> TrialStats:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    etas = sample_etas(inst, trials, seed, jobs)
    center = inst.theta * inst.t
    root = math.sqrt(inst.t)
    # tiny slack so eta exactly on the radius counts as a deviation despite rounding
    tails = tail_stats(etas, center, lambda g: 2 * g * root - 1e-9, gammas)
    return TrialStats(
        trials=trials,
        mean_eta=float(etas.mean()),
        expected_eta=center,
        tail_freq=tails,
        bound={g: fk_bound(g) for g in gammas},
    )


def binomial_se(p: float, trials: int) -> float:
    return math.sqrt(p * (1.0 - p) / trials)


# ---------------------------------------------------------------------------
# link-degree concentration inside the (a,b)-partition


def _link_chunk(H: Hypergraph, fixed, a: int, b: int, seed: int, sizes) -> np.ndarray:
    chunk, count = sizes
    rng = derive_seed(seed, chunk)
    fm = mask_of(fixed)
    out = np.empty(count, dtype=np.int64)
    ground = range(1, H.n + 1)
    for r in range(count):
        P = sample_ab_partition_given(ground, a, b, fixed, rng)
        out[r] = sum(H.has_mask(fm | mask_of(blk)) for blk in P.B_blocks)
    return out


def link_concentration_experiment(
    H: Hypergraph,
    a: int,
    alpha_ref: float,
    trials: int,
    seed: int = 0,
    fixed: Sequence[int] | None = None,
    side: str = "A",
    gammas: Sequence[float] = DEFAULT_GAMMAS,
    jobs: int = 1,
) -> TrialStats:
    """Distribution of the row degree of a fixed a-set in the auxiliary graph.

    Conditions on ``A_1 = fixed`` (default ``{1..a}``) and counts the B-blocks
    ``B_j`` with ``fixed u B_j`` an edge.  ``side="B"`` swaps the roles of the
    two block sizes, giving the column-degree version.

    ``events`` holds:
      * ``deviation``: frequency of |eta - alpha_fixed*t| >= 4 sqrt(t ln t)
      * ``deviation_bound``: 2/t^2
      * ``below_alpha``: frequency of eta <= alpha_ref * t
      * ``alpha_fixed``: degree(H, fixed) / C(n-a, b)
    ``tail_freq`` holds the tails at the smaller radii 2*gamma*sqrt(t).
    """
    b = H.k - a
    if side == "B":
        a, b = b, a
    elif side != "A":
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    if a < 1 or b < 1 or H.n % H.k:
        raise ValueError(f"invalid block sizes a={a}, b={b} for {H!r}")
    t = H.n // H.k
    fixed = tuple(range(1, a + 1)) if fixed is None else tuple(sorted(fixed))
    if len(fixed) != a:
        raise ValueError(f"fixed set {fixed} must have {a} vertices")
    alpha_fixed = degree(H, fixed) / binom(H.n - a, b)
    chunks = [(c, min(CHUNK, trials - c * CHUNK)) for c in range(math.ceil(trials / CHUNK))]
    etas = np.concatenate(parallel_map(partial(_link_chunk, H, fixed, a, b, seed), chunks, jobs))
    center = alpha_fixed * t
    radius = 4.0 * math.sqrt(t * math.log(t))
    root = math.sqrt(t)
    return TrialStats(
        trials=trials,
        mean_eta=float(etas.mean()),
        expected_eta=center,
        tail_freq=tail_stats(etas, center, lambda g: 2 * g * root - 1e-9, gammas),
        bound={g: fk_bound(g) for g in gammas},
        events={
            "deviation": float(np.mean(np.abs(etas - center) >= radius - 1e-9)),
            "deviation_bound": 2.0 / t**2,
            "radius": radius,
            "below_alpha": float(np.mean(etas <= alpha_ref * t)),
            "alpha_fixed": alpha_fixed,
        },
    )
