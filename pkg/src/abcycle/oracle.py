"""Exhaustive Hamilton (a,b)-cycle search and instance generators.

The oracle walks block sequences A_0, B_0, A_1, ... directly, choosing each
next block from the link of the previous one, so it shares no code path with
the auxiliary-graph finder.  Symmetry breaking: A_0 holds the smallest vertex
used by any A-block (by any block at all when a == b), and
min(B_0) < min(B_{t-1}).  Every cycle is therefore
visited exactly once, in the same canonical form ``ABCycleCert.canonical``
produces.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .abfinder import ABCycleCert
from .bihamilton import BudgetExceeded
from .hypergraph import Hypergraph, VertexSet, binom, mask_of
from .sampling import _rng, sample_ab_partition


@dataclass(frozen=True)
class OracleResult:
    exists: bool
    cert: ABCycleCert | None
    nodes_explored: int
    count: int | None = None


def _links(H: Hypergraph, size: int) -> dict[int, list[tuple[int, VertexSet]]]:
    """Map mask(S) -> [(mask(T), T)] over edges S u T with |S| = size."""
    out: dict[int, list[tuple[int, VertexSet]]] = {}
    for e in H.edges:
        for S in combinations(e, size):
            T = tuple(v for v in e if v not in S)
            out.setdefault(mask_of(S), []).append((mask_of(T), T))
    return out


def exhaustive_ab_cycle(
    H: Hypergraph, a: int, b: int, node_budget: int = 10_000_000, count: bool = False
) -> OracleResult:
    """Decide whether ``H`` has a Hamilton (a,b)-cycle; ``exists=False`` is a proof.

    With ``count=True`` the search continues past the first hit and
    ``count`` reports the number of distinct cycles (up to rotation and
    reflection).  Raises :class:`BudgetExceeded` after ``node_budget`` nodes.
    """
    if a < 1 or b < 1 or a + b != H.k or H.n % H.k:
        raise ValueError(f"invalid (a,b)=({a},{b}) for {H!r}")
    t = H.n // H.k
    if t < 2:
        raise ValueError(f"t={t} < 2")
    full = mask_of(range(1, H.n + 1))
    if len(H.edges) < 2 * t:
        return OracleResult(False, None, 0, 0 if count else None)
    from_a = _links(H, a)  # A-block -> B-blocks
    from_b = _links(H, b)  # B-block -> A-blocks
    nodes = 0
    found: list[ABCycleCert] = []
    total = 0
    A_seq: list[VertexSet] = []
    B_seq: list[VertexSet] = []

    def lowest(mask: int) -> int:
        return (mask & -mask).bit_length() - 1

    def rec(used: int, a0_min: int, a0_mask: int) -> bool:
        # state: A_seq has one more element than B_seq
        nonlocal nodes, total
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(node_budget)
        last_a = A_seq[-1]
        for bm, B in from_a.get(mask_of(last_a), ()):
            if bm & used:
                continue
            if len(B_seq) == t - 1:
                if used | bm != full:
                    continue
                if not H.has_mask(bm | a0_mask):
                    continue
                if min(B_seq[0]) > min(B):  # reflection
                    continue
                if a == b and lowest(bm) < a0_min:
                    continue
                B_seq.append(B)
                total += 1
                if not found:
                    found.append(ABCycleCert(a, b, tuple(A_seq), tuple(B_seq)))
                B_seq.pop()
                if not count:
                    return True
                continue
            if a == b and lowest(bm) < a0_min:
                continue
            B_seq.append(B)
            u2 = used | bm
            for am, A in from_b.get(bm, ()):
                if am & u2 or lowest(am) <= a0_min:
                    continue
                A_seq.append(A)
                if rec(u2 | am, a0_min, a0_mask):
                    return True
                A_seq.pop()
            B_seq.pop()
        return False

    for A0 in sorted({S for e in H.edges for S in combinations(e, a)}):
        m0 = mask_of(A0)
        A_seq[:] = [A0]
        B_seq[:] = []
        if rec(m0, A0[0], m0) and not count:
            break
    cert = found[0] if found else None
    return OracleResult(bool(found), cert, nodes, total if count else None)


# ---------------------------------------------------------------------------
# generators


def complete_hypergraph(n: int, k: int) -> Hypergraph:
    return Hypergraph(n, k, combinations(range(1, n + 1), k))


def random_hypergraph(n: int, k: int, p: float, seed) -> Hypergraph:
    """Each k-subset of [n] kept independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    keep = _rng(seed).random(binom(n, k)) < p
    return Hypergraph(n, k, (e for e, kept in zip(combinations(range(1, n + 1), k), keep) if kept))


def parity_family(n: int, k: int, D, parity: str = "even") -> Hypergraph:
    """All k-sets meeting ``D`` in an even (or odd) number of vertices."""
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    Dset = set(D)
    if any(not 1 <= v <= n for v in Dset):
        raise ValueError(f"D={sorted(Dset)} not inside [1, {n}]")
    want = 0 if parity == "even" else 1
    return Hypergraph(
        n, k, (e for e in combinations(range(1, n + 1), k) if len(Dset.intersection(e)) % 2 == want)
    )


def planted_cycle(n: int, a: int, b: int, seed) -> tuple[Hypergraph, ABCycleCert]:
    """Uniformly random Hamilton (a,b)-cycle and the hypergraph of exactly its 2t edges."""
    if n % (a + b) or n // (a + b) < 2:
        raise ValueError(f"need (a+b) | n and t >= 2, got n={n}, a={a}, b={b}")
    P = sample_ab_partition(n, a, b, seed)
    cert = ABCycleCert(a, b, P.A_blocks, P.B_blocks).canonical()
    return Hypergraph(n, a + b, cert.witness_edges), cert


def random_product(n1: int, n2: int, a: int, b: int, p: float, seed):
    from .hypergraph import ProductHypergraph

    V1 = range(1, n1 + 1)
    V2 = range(n1 + 1, n1 + n2 + 1)
    cand = [x + y for x in combinations(V1, a) for y in combinations(V2, b)]
    keep = _rng(seed).random(len(cand)) < p
    return ProductHypergraph(n1, n2, a, b, (e for e, k in zip(cand, keep) if k))


def complete_product(n1: int, n2: int, a: int, b: int):
    from .hypergraph import ProductHypergraph

    return ProductHypergraph(
        n1, n2, a, b,
        (x + y for x in combinations(range(1, n1 + 1), a)
         for y in combinations(range(n1 + 1, n1 + n2 + 1), b)),
    )
