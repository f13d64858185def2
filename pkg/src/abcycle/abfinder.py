"""Las Vegas search for Hamilton (a,b)-cycles.

Each attempt draws a uniform (a,b)-partition (A_1..A_t, B_1..B_t), builds the
t x t bipartite graph with A_i ~ B_j iff A_i u B_j is an edge, and looks for a
Hamilton cycle in it.  A cycle x_i1 y_j1 x_i2 y_j2 ... translates directly to
the block sequence A_i1, B_j1, A_i2, B_j2, ... .  Every returned certificate is
checked by :func:`verify_ab_cycle` before it leaves this module.

The retry policy and the behaviour below the degree threshold (solve even if
the Moon-Moser condition fails) are extensions of the existence argument.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .bihamilton import BipartiteGraph, CycleCert, find_hamilton, ore_check
from .hypergraph import (
    Hypergraph,
    ParseError,
    ProductHypergraph,
    VertexSet,
    _content_lines,
    mask_of,
)
from .sampling import ABPartition, derive_seed, sample_ab_partition, sample_product_matchings


@dataclass(frozen=True)
class ABCycleCert:
    """Cyclic block sequence A_0, B_0, ..., A_{t-1}, B_{t-1}."""

    a: int
    b: int
    A: tuple[VertexSet, ...]
    B: tuple[VertexSet, ...]

    @property
    def t(self) -> int:
        return len(self.A)

    @property
    def blocks(self) -> list[VertexSet]:
        out = []
        for x, y in zip(self.A, self.B):
            out += [x, y]
        return out

    @property
    def witness_edges(self) -> list[VertexSet]:
        t = self.t
        return [tuple(sorted(self.A[i] + self.B[i])) for i in range(t)] + [
            tuple(sorted(self.B[i] + self.A[(i + 1) % t])) for i in range(t)
        ]

    def canonical(self) -> "ABCycleCert":
        """Rotate so A_0 holds the smallest A-vertex; reflect so min B_0 < min B_{t-1}.

        When a == b the A/B labelling is itself a symmetry (shift by one
        block), and it is fixed by putting the smallest vertex overall in A_0.
        """
        t = self.t
        if t == 0:
            return self
        if self.a == self.b and self.B and min(map(min, self.B)) < min(map(min, self.A)):
            shifted = ABCycleCert(self.a, self.b, self.B, self.A[1:] + self.A[:1])
            return shifted.canonical()
        p = min(range(t), key=lambda i: min(self.A[i]))
        A = self.A[p:] + self.A[:p]
        B = self.B[p:] + self.B[:p]
        if t > 1 and min(B[-1]) < min(B[0]):
            A = (A[0],) + tuple(reversed(A[1:]))
            B = tuple(reversed(B))
        return ABCycleCert(self.a, self.b, A, B)


@dataclass
class RunReport:
    attempts: int = 0
    ore_failures: int = 0
    solver_failures: int = 0
    succeeded: bool = False
    master_seed: int = 0
    success_trial: int | None = None
    elapsed: dict[str, float] = field(default_factory=lambda: {"sample": 0.0, "build": 0.0, "solve": 0.0})

    CSV_COLUMNS = (
        "attempts", "ore_failures", "solver_failures", "succeeded", "master_seed", "success_trial",
    )

    def csv_row(self) -> list:
        return [
            self.attempts, self.ore_failures, self.solver_failures, int(self.succeeded),
            self.master_seed, "" if self.success_trial is None else self.success_trial,
        ]


@dataclass(frozen=True)
class FindResult:
    cert: ABCycleCert | None
    report: RunReport

    @property
    def found(self) -> bool:
        return self.cert is not None


def build_auxiliary(H: Hypergraph, P: ABPartition) -> BipartiteGraph:
    if P.n != H.n or P.a + P.b != H.k:
        raise ValueError(f"partition of {P.n} vertices into ({P.a},{P.b}) blocks does not fit {H!r}")
    return _auxiliary(H, P.A_blocks, P.B_blocks)


def _auxiliary(H: Hypergraph, A_blocks, B_blocks) -> BipartiteGraph:
    bm = [mask_of(blk) for blk in B_blocks]
    rows = []
    for blk in A_blocks:
        am = mask_of(blk)
        rows.append(sum(1 << j for j, m in enumerate(bm) if H.has_mask(am | m)))
    return BipartiteGraph(rows)


def cert_from_cycle(cyc: CycleCert, a: int, b: int, A_blocks, B_blocks) -> ABCycleCert:
    return ABCycleCert(
        a, b,
        tuple(A_blocks[i] for i in cyc.xs),
        tuple(B_blocks[j] for j in cyc.ys),
    ).canonical()


def verify_ab_cycle(H: Hypergraph, cert: ABCycleCert) -> list[str]:
    """All violations of ``cert`` as a Hamilton (a,b)-cycle of ``H``; empty means valid."""
    out = []
    if cert.a + cert.b != H.k:
        out.append(f"block sizes a={cert.a}, b={cert.b} do not sum to k={H.k}")
    if len(cert.A) != len(cert.B):
        out.append(f"unequal block counts: {len(cert.A)} A-blocks, {len(cert.B)} B-blocks")
    if cert.t < 2:
        out.append(f"t={cert.t} < 2")
    for i, blk in enumerate(cert.A):
        if len(blk) != cert.a:
            out.append(f"block size: A_{i}={list(blk)} has {len(blk)} vertices, expected {cert.a}")
    for i, blk in enumerate(cert.B):
        if len(blk) != cert.b:
            out.append(f"block size: B_{i}={list(blk)} has {len(blk)} vertices, expected {cert.b}")
    seen: dict[int, int] = {}
    for blk in cert.A + cert.B:
        for v in blk:
            seen[v] = seen.get(v, 0) + 1
    repeated = sorted(v for v, c in seen.items() if c > 1)
    if repeated:
        out.append(f"disjointness: vertices {repeated} appear in more than one block")
    outside = sorted(v for v in seen if not 1 <= v <= H.n)
    if outside:
        out.append(f"range: vertices {outside} outside [1, {H.n}]")
    missing = sorted(set(range(1, H.n + 1)) - set(seen))
    if missing:
        out.append(f"cover: vertices {missing} are not covered")
    if len(cert.A) == len(cert.B) and cert.t >= 1:
        for e in cert.witness_edges:
            if not H.has_edge(e):
                out.append(f"missing edge: {list(e)} is not an edge of the hypergraph")
    return out


def _check_ab(H: Hypergraph, a: int, b: int) -> int:
    if a < 1 or b < 1 or a + b != H.k:
        raise ValueError(f"need positive a, b with a+b=k={H.k}, got a={a}, b={b}")
    if H.n % H.k:
        raise ValueError(f"n={H.n} not divisible by k={H.k}")
    t = H.n // H.k
    if t < 2:
        raise ValueError(f"t = n/k = {t} < 2: the two witness edges of a block pair coincide")
    return t


def default_attempts(t: int) -> int:
    return max(10, 4 * t)


def _run(H, a, b, t, seed, max_attempts, sampler) -> FindResult:
    report = RunReport(master_seed=seed)
    for trial in range(max_attempts):
        report.attempts += 1
        t0 = time.perf_counter()
        A_blocks, B_blocks = sampler(derive_seed(seed, trial))
        t1 = time.perf_counter()
        G = _auxiliary(H, A_blocks, B_blocks)
        ore = ore_check(G)
        t2 = time.perf_counter()
        cyc = find_hamilton(G)
        t3 = time.perf_counter()
        report.elapsed["sample"] += t1 - t0
        report.elapsed["build"] += t2 - t1
        report.elapsed["solve"] += t3 - t2
        if cyc is not None:
            cert = cert_from_cycle(cyc, a, b, A_blocks, B_blocks)
            problems = verify_ab_cycle(H, cert)
            if problems:
                raise AssertionError(f"internal error, invalid certificate: {problems}")
            report.succeeded = True
            report.success_trial = trial
            return FindResult(cert, report)
        if ore.holds:
            report.solver_failures += 1
        else:
            report.ore_failures += 1
    return FindResult(None, report)


def find_ab_cycle(
    H: Hypergraph, a: int, b: int, max_attempts: int | None = None, seed: int = 0
) -> FindResult:
    t = _check_ab(H, a, b)
    if max_attempts is None:
        max_attempts = default_attempts(t)

    def sampler(rng):
        P = sample_ab_partition(H.n, a, b, rng)
        return P.A_blocks, P.B_blocks

    return _run(H, a, b, t, seed, max_attempts, sampler)


def find_in_product(
    PH: ProductHypergraph, max_attempts: int | None = None, seed: int = 0
) -> FindResult:
    """Same pipeline with independent perfect matchings of V1 and V2."""
    t = PH.block_count
    if t < 2:
        raise ValueError(f"common block count {t} < 2")
    if max_attempts is None:
        max_attempts = default_attempts(t)

    def sampler(rng):
        X, Y = sample_product_matchings(PH.n1, PH.n2, PH.a, PH.b, rng)
        return X.blocks, Y.blocks

    return _run(PH, PH.a, PH.b, t, seed, max_attempts, sampler)


def decompose_to_matchings(cert: ABCycleCert) -> tuple[list[VertexSet], list[VertexSet]]:
    """Split the witness edges into {A_i u B_i} and {B_i u A_(i+1)}; both are perfect matchings."""
    t = cert.t
    if t < 2 or len(cert.B) != t:
        raise ValueError("decomposition needs a certificate with t >= 2 block pairs")
    if any(len(x) != cert.a for x in cert.A) or any(len(y) != cert.b for y in cert.B):
        raise ValueError("certificate has blocks of the wrong size")
    allv = [v for blk in cert.A + cert.B for v in blk]
    if len(set(allv)) != len(allv):
        raise ValueError("certificate blocks are not disjoint")
    edges = cert.witness_edges
    return edges[:t], edges[t:]


# ---------------------------------------------------------------------------
# success-probability experiment


@dataclass(frozen=True)
class OreTrialRecord:
    trial_index: int
    min_row_degree: int
    min_col_degree: int
    degree_ok: bool
    ore_ok: bool


def ore_trial(H: Hypergraph, a: int, b: int, alpha: float, seed: int, trial: int) -> OreTrialRecord:
    t = H.n // H.k
    P = sample_ab_partition(H.n, a, b, derive_seed(seed, trial))
    G = build_auxiliary(H, P)
    rmin = min(G.row_degree(i) for i in range(t))
    cmin = min(G.col_degree(j) for j in range(t))
    return OreTrialRecord(
        trial,
        rmin,
        cmin,
        rmin > alpha * t and cmin > (1.0 - alpha) * t,
        ore_check(G).holds,
    )


def ore_success_probability(
    H: Hypergraph, a: int, b: int, alpha: float, trials: int, seed: int = 0, jobs: int = 1
):
    """Frequency of (i) the degree event and (ii) the Moon-Moser condition on the sampled graph.

    Returns a :class:`abcycle.fklab.TrialStats` whose ``events`` hold
    ``degree`` and ``ore`` frequencies.  ``mean_eta`` is the mean of the
    smallest row degree per trial.
    """
    from .fklab import TrialStats, parallel_map
    from functools import partial

    t = _check_ab(H, a, b)
    recs = parallel_map(partial(ore_trial, H, a, b, alpha, seed), range(trials), jobs)
    k = max(trials, 1)
    return TrialStats(
        trials=trials,
        mean_eta=sum(r.min_row_degree for r in recs) / k,
        expected_eta=float(t),
        tail_freq={},
        bound={},
        events={
            "degree": sum(r.degree_ok for r in recs) / k,
            "ore": sum(r.ore_ok for r in recs) / k,
        },
        records=recs,
    )


# ---------------------------------------------------------------------------
# certificate text format


def format_cert(cert: ABCycleCert) -> str:
    lines = [f"{cert.t} {cert.a} {cert.b}"]
    for x, y in zip(cert.A, cert.B):
        lines.append("A: " + " ".join(map(str, x)))
        lines.append("B: " + " ".join(map(str, y)))
    return "\n".join(lines) + "\n"


def parse_cert(text: str) -> ABCycleCert:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty certificate file")
    try:
        t, a, b = map(int, lines[0][1].split())
    except ValueError as exc:
        raise ParseError(f"line {lines[0][0]}: expected 't a b'") from exc
    A, B = [], []
    for pos, (lineno, line) in enumerate(lines[1:]):
        tag, _, rest = line.partition(":")
        want = "A" if pos % 2 == 0 else "B"
        if tag.strip() != want:
            raise ParseError(f"line {lineno}: expected '{want}:' line")
        try:
            ids = tuple(sorted(int(v) for v in rest.split()))
        except ValueError as exc:
            raise ParseError(f"line {lineno}: non-integer vertex id") from exc
        (A if want == "A" else B).append(ids)
    if len(A) != t or len(B) != t:
        raise ParseError(f"header says t={t} but found {len(A)} A-lines and {len(B)} B-lines")
    return ABCycleCert(a, b, tuple(A), tuple(B))


def load_cert(path) -> ABCycleCert:
    with open(path) as fh:
        return parse_cert(fh.read())


def save_cert(cert: ABCycleCert, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_cert(cert))
