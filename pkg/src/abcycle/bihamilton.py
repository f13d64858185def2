"""Hamilton cycles in balanced bipartite graphs.

``find_hamilton`` is constructive under the Moon-Moser condition (every
non-edge xy has deg(x) + deg(y) > t).  It starts from a Hamilton cycle of the
complete bipartite graph and deletes the added non-edges one at a time.  When
the cycle uses a deleted edge xy, the remainder is a Hamilton path
x = v1, ..., v2t = y, and the degree condition forces a crossing pair
v1 ~ v(j+1), vj ~ v2t which reroutes the path into a cycle.  Each repair is
O(t), so the whole construction is O(t^3).

Below the condition the repair may get stuck; we then fall back to Posa
rotation-extension from several start vertices.  ``exact_hamilton`` is a plain
backtracking oracle used for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Vertex = tuple[str, int]  # ("x", i) or ("y", j), 0-based


class BudgetExceeded(RuntimeError):
    def __init__(self, nodes: int):
        super().__init__(f"search exceeded budget of {nodes} nodes")
        self.nodes = nodes


class BipartiteGraph:
    """Balanced bipartite graph; rows are part X, columns part Y."""

    def __init__(self, rows: Sequence[Sequence[bool]] | Sequence[int]):
        t = len(rows)
        masks = []
        for r in rows:
            if isinstance(r, int):
                if r >> t:
                    raise ValueError("row bitmask has bits beyond t")
                masks.append(r)
            else:
                if len(r) != t:
                    raise ValueError("adjacency must be t x t")
                masks.append(sum(1 << j for j, v in enumerate(r) if v))
        self.t = t
        self.row = tuple(masks)
        self.col = tuple(
            sum(1 << i for i in range(t) if masks[i] >> j & 1) for j in range(t)
        )

    @classmethod
    def complete(cls, t: int) -> "BipartiteGraph":
        return cls([(1 << t) - 1] * t)

    @classmethod
    def from_edges(cls, t: int, edges: Iterable[tuple[int, int]]) -> "BipartiteGraph":
        rows = [0] * t
        for i, j in edges:
            rows[i] |= 1 << j
        return cls(rows)

    def has(self, i: int, j: int) -> bool:
        return bool(self.row[i] >> j & 1)

    def row_degree(self, i: int) -> int:
        return self.row[i].bit_count()

    def col_degree(self, j: int) -> int:
        return self.col[j].bit_count()

    def matrix(self) -> list[list[int]]:
        return [[self.row[i] >> j & 1 for j in range(self.t)] for i in range(self.t)]

    def __eq__(self, other):
        return isinstance(other, BipartiteGraph) and self.row == other.row

    def __repr__(self):
        return f"BipartiteGraph(t={self.t}, edges={sum(r.bit_count() for r in self.row)})"


@dataclass(frozen=True)
class CycleCert:
    """Hamilton cycle as the alternating index sequence x_i1, y_j1, x_i2, y_j2, ..."""

    xs: tuple[int, ...]
    ys: tuple[int, ...]

    @property
    def order(self) -> list[Vertex]:
        out: list[Vertex] = []
        for i, j in zip(self.xs, self.ys):
            out += [("x", i), ("y", j)]
        return out

    def edges(self) -> list[tuple[int, int]]:
        t = len(self.xs)
        return [(self.xs[p], self.ys[p]) for p in range(t)] + [
            (self.xs[(p + 1) % t], self.ys[p]) for p in range(t)
        ]

    def violations(self, G: BipartiteGraph) -> list[str]:
        t = G.t
        out = []
        if sorted(self.xs) != list(range(t)):
            out.append(f"row indices {self.xs} are not a permutation of 0..{t - 1}")
        if sorted(self.ys) != list(range(t)):
            out.append(f"column indices {self.ys} are not a permutation of 0..{t - 1}")
        if not out:
            for i, j in self.edges():
                if not G.has(i, j):
                    out.append(f"x{i}-y{j} is not an edge")
        return out

    def is_valid(self, G: BipartiteGraph) -> bool:
        return not self.violations(G)

    def canonical(self) -> "CycleCert":
        """Rotate to start at x0 and reflect so the first column is the smaller neighbour."""
        t = len(self.xs)
        p = self.xs.index(0)
        xs = self.xs[p:] + self.xs[:p]
        ys = self.ys[p:] + self.ys[:p]
        # reflection: x0, y_{t-1}, x_{t-1}, y_{t-2}, ...
        rx = (xs[0],) + tuple(reversed(xs[1:]))
        ry = tuple(reversed(ys))
        if t > 1 and ry[0] < ys[0]:
            return CycleCert(rx, ry)
        return CycleCert(xs, ys)


@dataclass(frozen=True)
class OreResult:
    holds: bool
    witness: tuple[int, int] | None = None
    witness_sum: int | None = None

    def __bool__(self) -> bool:
        return self.holds


def ore_check(G: BipartiteGraph) -> OreResult:
    """Moon-Moser condition; on failure report a non-edge with minimum degree sum."""
    if G.t < 2:
        raise ValueError(f"t={G.t} < 2")
    rdeg = [G.row_degree(i) for i in range(G.t)]
    cdeg = [G.col_degree(j) for j in range(G.t)]
    best = None
    for i in range(G.t):
        for j in range(G.t):
            if not G.has(i, j):
                s = rdeg[i] + cdeg[j]
                if best is None or s < best[0]:
                    best = (s, i, j)
    if best is None or best[0] > G.t:
        return OreResult(True)
    return OreResult(False, (best[1], best[2]), best[0])


# ---------------------------------------------------------------------------
# constructive finder

# Paths are lists of vertex codes: x_i -> i, y_j -> t + j.


def _adjacent(G: BipartiteGraph, u: int, v: int, adj: list[int]) -> bool:
    return bool(adj[u] >> v & 1)


def _full_adjacency(G: BipartiteGraph) -> list[int]:
    t = G.t
    adj = [G.row[i] << t for i in range(t)]
    adj += [G.col[j] for j in range(t)]
    return adj


def _cert_from_cycle(cycle: list[int], t: int) -> CycleCert:
    p = cycle.index(0)
    cyc = cycle[p:] + cycle[:p]
    if cyc[1] < t:  # starts x, x: impossible in a bipartite cycle
        raise AssertionError("cycle does not alternate")
    return CycleCert(tuple(cyc[0::2]), tuple(v - t for v in cyc[1::2])).canonical()


def _reroute(path: list[int], adj: list[int]) -> list[int] | None:
    """Close a Hamilton path whose ends are non-adjacent via a crossing pair."""
    first, last = path[0], path[-1]
    for j in range(1, len(path) - 2):
        # first ~ path[j+1] and path[j] ~ last gives first..path[j], last..path[j+1], first
        if adj[first] >> path[j + 1] & 1 and adj[path[j]] >> last & 1:
            return path[: j + 1] + path[j + 1:][::-1]
    return None


def _unwind(G: BipartiteGraph) -> list[int] | None:
    """Delete the non-edges from K_{t,t} one by one, repairing the cycle each time."""
    t = G.t
    adj = [((1 << t) - 1) << t] * t + [(1 << t) - 1] * t
    cycle = []
    for i in range(t):
        cycle += [i, t + i]
    non_edges = [(i, j) for i in range(t) for j in range(t) if not G.has(i, j)]
    for i, j in non_edges:
        x, y = i, t + j
        adj[x] &= ~(1 << y)
        adj[y] &= ~(1 << x)
        pos = {v: p for p, v in enumerate(cycle)}
        px, py = pos[x], pos[y]
        if (px - py) % len(cycle) not in (1, len(cycle) - 1):
            continue
        # open the cycle at the removed edge: path from x around to y
        if (py - px) % len(cycle) == 1:
            path = [cycle[(px - s) % len(cycle)] for s in range(len(cycle))]
        else:
            path = [cycle[(px + s) % len(cycle)] for s in range(len(cycle))]
        new = _reroute(path, adj)
        if new is None:
            return None
        cycle = new
    return cycle


def _posa(adj: list[int], nverts: int, start: int, max_rotations: int) -> list[int] | None:
    """Rotation-extension search from ``start``; smallest-index choices first."""
    path = [start]
    on = 1 << start
    rotations = 0
    seen_ends: set[tuple[int, int]] = set()
    while True:
        end = path[-1]
        free = adj[end] & ~on
        if free:
            v = (free & -free).bit_length() - 1
            path.append(v)
            on |= 1 << v
            seen_ends.clear()
            continue
        if len(path) == nverts and adj[end] >> path[0] & 1:
            return path
        # rotate: end ~ path[j] turns path into path[:j+1] + reversed(path[j+1:])
        if rotations >= max_rotations:
            return None
        pos = {v: p for p, v in enumerate(path)}
        options = []
        nb = adj[end] & on
        while nb:
            v = (nb & -nb).bit_length() - 1
            nb &= nb - 1
            j = pos[v]
            if j < len(path) - 2:
                new_end = path[j + 1]
                options.append((new_end, j))
        options.sort()
        # prefer a fresh endpoint that can extend or close
        chosen = None
        for new_end, j in options:
            key = (len(path), new_end)
            if key in seen_ends:
                continue
            if adj[new_end] & ~on or (len(path) == nverts and adj[new_end] >> path[0] & 1):
                chosen = j
                break
        if chosen is None:
            for new_end, j in options:
                if (len(path), new_end) not in seen_ends:
                    chosen = j
                    break
        if chosen is None:
            return None
        seen_ends.add((len(path), end))
        path = path[: chosen + 1] + path[chosen + 1:][::-1]
        rotations += 1


def find_hamilton(G: BipartiteGraph, restarts: int | None = None) -> CycleCert | None:
    """Hamilton cycle of ``G`` or ``None``.

    Always succeeds when :func:`ore_check` holds.  Otherwise this is a
    best-effort search with ``restarts`` (default 2t) Posa runs.
    """
    t = G.t
    if t < 2:
        raise ValueError(f"t={t} < 2")
    if any(r == 0 for r in G.row) or any(c == 0 for c in G.col):
        return None
    cycle = _unwind(G)
    if cycle is not None:
        return _cert_from_cycle(cycle, t)
    adj = _full_adjacency(G)
    for start in range(restarts if restarts is not None else 2 * t):
        path = _posa(adj, 2 * t, start % (2 * t), max_rotations=4 * t * t)
        if path is not None:
            return _cert_from_cycle(path, t)
    return None


# ---------------------------------------------------------------------------
# backtracking oracle


def exact_hamilton(
    G: BipartiteGraph, node_budget: int = 1_000_000, count: bool = False
) -> CycleCert | None | int:
    """Exhaustive search starting at x0; each cycle is found once (y_first < y_last).

    Returns a cert, or ``None`` as a proof that no Hamilton cycle exists.  With
    ``count=True`` returns the number of distinct Hamilton cycles instead.
    Raises :class:`BudgetExceeded` after ``node_budget`` search nodes.
    """
    t = G.t
    if t < 2:
        raise ValueError(f"t={t} < 2")
    adj = _full_adjacency(G)
    nverts = 2 * t
    path = [0]
    nodes = 0
    found = 0
    result: list[int] | None = None

    def rec(on: int) -> bool:
        nonlocal nodes, found, result
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(node_budget)
        end = path[-1]
        if len(path) == nverts:
            if adj[end] >> 0 & 1 and path[1] < path[-1]:
                found += 1
                if result is None:
                    result = list(path)
                return not count
            return False
        cand = adj[end] & ~on
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            path.append(v)
            if rec(on | 1 << v):
                return True
            path.pop()
        return False

    rec(1)
    if count:
        return found
    return None if result is None else _cert_from_cycle(result, t)


# ---------------------------------------------------------------------------
# adjacency text format


def parse_adjacency(text: str) -> BipartiteGraph:
    from .hypergraph import ParseError, _content_lines

    lines = [line for _, line in _content_lines(text)]
    if not lines:
        raise ParseError("empty adjacency file")
    try:
        t = int(lines[0])
    except ValueError as exc:
        raise ParseError(f"bad size line {lines[0]!r}") from exc
    rows = lines[1:]
    if len(rows) != t or any(len(r) != t or set(r) - {"0", "1"} for r in rows):
        raise ParseError(f"expected {t} rows of {t} characters from {{0,1}}")
    return BipartiteGraph([[c == "1" for c in r] for r in rows])


def format_adjacency(G: BipartiteGraph) -> str:
    return "\n".join([str(G.t)] + ["".join(map(str, r)) for r in G.matrix()]) + "\n"
