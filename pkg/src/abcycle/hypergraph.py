"""k-uniform hypergraphs, bipartite-product families, degrees and threshold arithmetic.

Vertices are 1-based integers.  A vertex set is stored as a sorted tuple;
each edge additionally gets a vertex bitmask (bit ``v`` set for vertex ``v``)
so membership tests for unions of blocks are a single set lookup, and each
vertex keeps a packed bitset over edge indices so ``degree`` is an AND plus a
popcount.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

VertexSet = tuple[int, ...]


class ParseError(ValueError):
    """Malformed hypergraph, certificate or adjacency text."""


def vset(members: Iterable[int]) -> VertexSet:
    """Canonical vertex set: sorted tuple, duplicates rejected."""
    out = tuple(sorted(members))
    if len(set(out)) != len(out):
        raise ValueError(f"repeated vertex in {out}")
    return out


def mask_of(members: Iterable[int]) -> int:
    m = 0
    for v in members:
        m |= 1 << v
    return m


def binom(n: int, k: int) -> int:
    """Exact binomial coefficient; rejects ``k > n`` and negatives."""
    if n < 0 or k < 0:
        raise ValueError(f"binom({n}, {k}): negative argument")
    if k > n:
        raise ValueError(f"binom({n}, {k}): k > n")
    return math.comb(n, k)


class Hypergraph:
    """Immutable k-uniform hypergraph on ``[n]``.

    ``edges`` is kept in sorted order.  Duplicate edges are an error, since the
    edge family is a set.
    """

    def __init__(self, n: int, k: int, edges: Iterable[Iterable[int]] = ()):
        if n < 1 or k < 1 or k > n:
            raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
        canon = []
        for e in edges:
            s = vset(e)
            if len(s) != k:
                raise ValueError(f"edge {s} does not have {k} vertices")
            if s[0] < 1 or s[-1] > n:
                raise ValueError(f"edge {s} has vertices outside [1, {n}]")
            canon.append(s)
        canon.sort()
        for prev, cur in zip(canon, canon[1:]):
            if prev == cur:
                raise ValueError(f"duplicate edge {cur}")
        incidence = [0] * (n + 1)
        for idx, e in enumerate(canon):
            bit = 1 << idx
            for v in e:
                incidence[v] |= bit
        self.n = n
        self.k = k
        self.edges: tuple[VertexSet, ...] = tuple(canon)
        self._masks = frozenset(mask_of(e) for e in canon)
        self._incidence = tuple(incidence)

    def __len__(self) -> int:
        return len(self.edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.n, self.k, self.edges) == (other.n, other.k, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.k, self.edges))

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, k={self.k}, |E|={len(self.edges)})"

    def has_edge(self, members: Iterable[int]) -> bool:
        return mask_of(members) in self._masks

    def has_mask(self, mask: int) -> bool:
        return mask in self._masks

    def without(self, edge: Iterable[int]) -> "Hypergraph":
        e = vset(edge)
        return type(self)._rebuild(self, [f for f in self.edges if f != e])

    def with_edges(self, extra: Iterable[Iterable[int]]) -> "Hypergraph":
        return type(self)._rebuild(self, list(self.edges) + [vset(e) for e in extra])

    @classmethod
    def _rebuild(cls, like: "Hypergraph", edges):
        return cls(like.n, like.k, edges)

    def _check_subset(self, S: Sequence[int]) -> VertexSet:
        s = vset(S)
        if s and (s[0] < 1 or s[-1] > self.n):
            raise ValueError(f"{s} has vertices outside [1, {self.n}]")
        if len(s) > self.k:
            raise ValueError(f"|S|={len(s)} exceeds k={self.k}")
        return s


def degree(H: Hypergraph, S: Iterable[int]) -> int:
    """Number of edges of ``H`` containing ``S``."""
    s = H._check_subset(tuple(S))
    if not s:
        return len(H.edges)
    acc = H._incidence[s[0]]
    for v in s[1:]:
        acc &= H._incidence[v]
    return acc.bit_count()


def min_degree(H: Hypergraph, d: int) -> int:
    """Minimum of ``degree(H, S)`` over all d-subsets ``S`` of ``[n]``."""
    if not 1 <= d <= H.k:
        raise ValueError(f"d={d} outside [1, {H.k}]")
    counts: Counter = Counter()
    for e in H.edges:
        counts.update(combinations(e, d))
    if len(counts) < binom(H.n, d):
        return 0
    return min(counts.values())


def link(H: Hypergraph, S: Iterable[int]) -> list[VertexSet]:
    """The family ``{T : T u S in H}`` of (k-|S|)-sets disjoint from S."""
    s = H._check_subset(tuple(S))
    ss = set(s)
    return [tuple(v for v in e if v not in ss) for e in H.edges if ss.issubset(e)]


# ---------------------------------------------------------------------------
# Product families


class ProductHypergraph(Hypergraph):
    """Subfamily of the direct product of a-subsets of V1 and b-subsets of V2.

    ``V1 = {1..n1}`` and ``V2 = {n1+1..n1+n2}``.  Being a ``Hypergraph`` on
    ``n1 + n2`` vertices, every hypergraph operation applies unchanged.
    """

    def __init__(self, n1: int, n2: int, a: int, b: int, edges: Iterable[Iterable[int]] = ()):
        if a < 1 or b < 1 or a > n1 or b > n2:
            raise ValueError(f"need 1 <= a <= n1 and 1 <= b <= n2, got {n1=}, {n2=}, {a=}, {b=}")
        edges = [vset(e) for e in edges]
        for e in edges:
            inside = sum(1 for v in e if v <= n1)
            if inside != a:
                raise ValueError(f"edge {e} meets V1 in {inside} vertices, expected {a}")
        super().__init__(n1 + n2, a + b, edges)
        self.n1, self.n2, self.a, self.b = n1, n2, a, b

    @classmethod
    def _rebuild(cls, like, edges):
        return cls(like.n1, like.n2, like.a, like.b, edges)

    @property
    def V1(self) -> range:
        return range(1, self.n1 + 1)

    @property
    def V2(self) -> range:
        return range(self.n1 + 1, self.n1 + self.n2 + 1)

    @property
    def block_count(self) -> int:
        """The common n with ``n1 = a*n`` and ``n2 = b*n``."""
        if self.n1 % self.a or self.n2 % self.b or self.n1 // self.a != self.n2 // self.b:
            raise ValueError(
                f"product parts {self.n1}, {self.n2} are not a*n, b*n for a common n"
            )
        return self.n1 // self.a

    def __repr__(self) -> str:
        return (
            f"ProductHypergraph(n1={self.n1}, n2={self.n2}, a={self.a}, b={self.b}, "
            f"|E|={len(self.edges)})"
        )


def product_min_degrees(PH: ProductHypergraph) -> tuple[int, int]:
    """(min over a-subsets of V1, min over b-subsets of V2) of the degree."""
    cnt_a: Counter = Counter()
    cnt_b: Counter = Counter()
    for e in PH.edges:
        cnt_a[e[: PH.a]] += 1
        cnt_b[e[PH.a :]] += 1
    da = 0 if len(cnt_a) < binom(PH.n1, PH.a) else min(cnt_a.values())
    db = 0 if len(cnt_b) < binom(PH.n2, PH.b) else min(cnt_b.values())
    return da, db


# ---------------------------------------------------------------------------
# Threshold arithmetic


@dataclass(frozen=True)
class ThresholdReport:
    alpha: float
    error_term: float
    required_delta_a: float
    required_delta_b: float
    actual_delta_a: int | None = None
    actual_delta_b: int | None = None

    @property
    def hypothesis_holds(self) -> bool:
        if self.actual_delta_a is None or self.actual_delta_b is None:
            return False
        # non-strict, no epsilon
        return (
            self.actual_delta_a >= self.required_delta_a
            and self.actual_delta_b >= self.required_delta_b
        )

    @property
    def margins(self) -> tuple[float, float] | None:
        if self.actual_delta_a is None or self.actual_delta_b is None:
            return None
        return (
            self.actual_delta_a - self.required_delta_a,
            self.actual_delta_b - self.required_delta_b,
        )


def error_term_main1(n: int, k: int) -> float:
    """``4*sqrt(k ln n / n)``.

    The proof itself only needs ``4*sqrt(ln t / t)`` with ``t = n/k``, which is
    smaller; see :func:`error_term_proof`.
    """
    return 4.0 * math.sqrt(k * math.log(n) / n)


def error_term_proof(t: int) -> float:
    return 4.0 * math.sqrt(math.log(t) / t)


def _validate_nkab(n: int, k: int, a: int, b: int) -> None:
    if a < 1 or b < 1 or a + b != k:
        raise ValueError(f"need positive a, b with a+b=k, got a={a}, b={b}, k={k}")
    if n % k:
        raise ValueError(f"n={n} is not divisible by k={k}")


def threshold_main1(n: int, k: int, a: int, b: int, alpha: float) -> ThresholdReport:
    """Required minimum a- and b-degrees for the plain Hamilton (a,b)-cycle theorem."""
    _validate_nkab(n, k, a, b)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha={alpha} outside (0, 1)")
    e = error_term_main1(n, k)
    return ThresholdReport(
        alpha=alpha,
        error_term=e,
        required_delta_a=(alpha + e) * binom(n - a, b),
        required_delta_b=(1.0 - alpha + e) * binom(n - b, a),
    )


def check_main1_hypothesis(H: Hypergraph, a: int, alpha: float) -> ThresholdReport:
    b = H.k - a
    r = threshold_main1(H.n, H.k, a, b, alpha)
    return ThresholdReport(
        alpha=r.alpha,
        error_term=r.error_term,
        required_delta_a=r.required_delta_a,
        required_delta_b=r.required_delta_b,
        actual_delta_a=min_degree(H, a),
        actual_delta_b=min_degree(H, b),
    )


def threshold_main2(n: int, a: int, b: int, alpha: float) -> ThresholdReport:
    """Product version: V1 of size a*n, V2 of size b*n, error term 4*sqrt(ln n / n)."""
    if n < 2 or a < 1 or b < 1:
        raise ValueError(f"need n >= 2 and positive a, b, got n={n}, a={a}, b={b}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha={alpha} outside (0, 1)")
    e = 4.0 * math.sqrt(math.log(n) / n)
    return ThresholdReport(
        alpha=alpha,
        error_term=e,
        required_delta_a=(alpha + e) * binom(b * n, b),
        required_delta_b=(1.0 - alpha + e) * binom(a * n, a),
    )


def check_main2_hypothesis(PH: ProductHypergraph, alpha: float) -> ThresholdReport:
    r = threshold_main2(PH.block_count, PH.a, PH.b, alpha)
    da, db = product_min_degrees(PH)
    return ThresholdReport(r.alpha, r.error_term, r.required_delta_a, r.required_delta_b, da, db)


def infer_delta_a_lower(n: int, k: int, a: int, b: int, delta_b: int) -> float:
    """Lower bound on the minimum a-degree implied by a minimum b-degree, a <= b.

    Every b-set through a fixed a-set A contributes its degree, and each edge
    through A is counted once per b-subset of it containing A.
    """
    if a < 1 or b < 1 or a + b != k:
        raise ValueError(f"need positive a, b with a+b=k, got a={a}, b={b}, k={k}")
    if a > b:
        raise ValueError(f"requires a <= b, got a={a}, b={b}")
    return binom(n - a, b - a) * delta_b / binom(b, b - a)


# ---------------------------------------------------------------------------
# Text format (.uhg)


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_uhg(text: str) -> Hypergraph:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty hypergraph file")
    lineno, header = lines[0]
    toks = header.split()
    try:
        if toks[0] == "product":
            if len(toks) != 5:
                raise ParseError(f"line {lineno}: expected 'product n1 n2 a b'")
            n1, n2, a, b = map(int, toks[1:])
            ctor = lambda edges: ProductHypergraph(n1, n2, a, b, edges)  # noqa: E731
            k = a + b
        else:
            if len(toks) != 2:
                raise ParseError(f"line {lineno}: expected header 'n k'")
            n, k = map(int, toks)
            ctor = lambda edges: Hypergraph(n, k, edges)  # noqa: E731
        edges = []
        seen = set()
        for lineno, line in lines[1:]:
            e = tuple(int(x) for x in line.split())
            if len(e) != k:
                raise ParseError(f"line {lineno}: expected {k} vertex ids, got {len(e)}")
            key = tuple(sorted(e))
            if key in seen:
                raise ParseError(f"line {lineno}: duplicate edge {key}")
            seen.add(key)
            edges.append(e)
        return ctor(edges)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def format_uhg(H: Hypergraph) -> str:
    if isinstance(H, ProductHypergraph):
        head = f"product {H.n1} {H.n2} {H.a} {H.b}"
    else:
        head = f"{H.n} {H.k}"
    return "\n".join([head] + [" ".join(map(str, e)) for e in H.edges]) + "\n"


def load_uhg(path) -> Hypergraph:
    with open(path) as fh:
        return parse_uhg(fh.read())


def save_uhg(H: Hypergraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_uhg(H))
