"""F-distances, root stratification, extreme sets and primality.

``dist`` is computed from minimum join sizes:
``dist(x, y) = nu(G, T ^ {x, y}) - nu(G, T)``, which does not depend on the
minimum join.  ``dist_via_paths`` is the definitional minimum of w_F over
simple x-y paths, enumerated exhaustively; the two are checked against
each other across the test corpus.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ._bits import bits, to_mask
from .errors import DisconnectedError, SizeError
from .graft_core import Graft, Graph
from .join_solver import min_join, nu_of_mask

PATH_VERTEX_BOUND = 15
PATH_COUNT_BOUND = 2_000_000


def distance_matrix(graft: Graft) -> list[list[int | None]]:
    """All-pairs F-distances; ``None`` for pairs in different components."""
    hit = graft._cache.get("dist")
    if hit is not None:
        return hit
    g = graft.graph
    t = graft.tmask
    base = nu_of_mask(g, t)
    n = g.n
    D: list[list[int | None]] = [[None] * n for _ in range(n)]
    for comp in g.component_masks:
        members = list(bits(comp))
        for a, x in enumerate(members):
            D[x][x] = 0
            for y in members[a + 1:]:
                d = nu_of_mask(g, t ^ (1 << x) ^ (1 << y)) - base
                D[x][y] = D[y][x] = d
    graft._cache["dist"] = D
    return D


def dist(graft: Graft, x: int | str, y: int | str) -> int:
    x, y = graft.vertex(x), graft.vertex(y)
    d = distance_matrix(graft)[x][y]
    if d is None:
        raise DisconnectedError(
            f"{graft.graph.labels[x]!r} and {graft.graph.labels[y]!r} lie in different components"
        )
    return d


@dataclass(frozen=True)
class DistanceTable:
    graft: Graft
    join: frozenset[int]
    dist: list[list[int | None]]

    def __call__(self, x: int, y: int) -> int:
        d = self.dist[x][y]
        if d is None:
            raise DisconnectedError(f"{x} and {y} lie in different components")
        return d


def distance_table(graft: Graft, F: Iterable[int] | None = None) -> DistanceTable:
    if F is None:
        F = min_join(graft).join
    return DistanceTable(graft, frozenset(F), distance_matrix(graft))


@dataclass(frozen=True)
class PathTable:
    """Every simple path with at least one edge, once per orientation.

    Arrays are sorted by ``(start, end)``; ``pair_starts`` and ``pairs`` give
    the segment boundaries for per-pair reductions.
    """

    start: np.ndarray
    end: np.ndarray
    vmask: np.ndarray
    emask: np.ndarray
    startbit: np.ndarray
    endbit: np.ndarray
    pair_starts: np.ndarray
    pairs: list[tuple[int, int]]

    def __len__(self) -> int:
        return len(self.start)

    def weights(self, fmask: int) -> np.ndarray:
        e = self.emask
        return np.bitwise_count(e).astype(np.int64) - 2 * np.bitwise_count(e & fmask).astype(np.int64)


def path_table(graph: Graph, vertex_bound: int = PATH_VERTEX_BOUND) -> PathTable:
    hit = graph._cache.get("paths")
    if hit is not None:
        return hit
    if graph.n > vertex_bound:
        raise SizeError(f"{graph.n} vertices exceed path-enumeration bound {vertex_bound}")
    edge_of = {}
    for e, (u, v) in enumerate(graph.edges):
        edge_of[(u, v)] = edge_of[(v, u)] = e
    adj = graph.adj
    rows = []
    for s in range(graph.n):
        stack = [(s, 1 << s, 0)]
        while stack:
            v, vis, em = stack.pop()
            for w in bits(adj[v] & ~vis):
                nv, ne = vis | 1 << w, em | 1 << edge_of[(v, w)]
                rows.append((s, w, nv, ne))
                stack.append((w, nv, ne))
            if len(rows) > PATH_COUNT_BOUND:
                raise SizeError(f"more than {PATH_COUNT_BOUND} simple paths")
    rows.sort(key=lambda r: (r[0], r[1]))
    arr = np.array(rows, dtype=np.int64).reshape(-1, 4)
    start, end = arr[:, 0], arr[:, 1]
    key = start * graph.n + end
    if len(key):
        cuts = np.flatnonzero(np.diff(key)) + 1
        pair_starts = np.concatenate([[0], cuts])
    else:
        pair_starts = np.zeros(0, dtype=np.int64)
    pairs = [(int(start[i]), int(end[i])) for i in pair_starts]
    table = PathTable(
        start=start,
        end=end,
        vmask=arr[:, 2].copy(),
        emask=arr[:, 3].copy(),
        startbit=np.left_shift(1, start),
        endbit=np.left_shift(1, end),
        pair_starts=pair_starts,
        pairs=pairs,
    )
    graph._cache["paths"] = table
    return table


def path_distance_matrix(graft: Graft, F: Iterable[int] | int) -> list[list[int | None]]:
    """Definitional all-pairs minimum path weight under w_F."""
    g = graft.graph
    fmask = F if isinstance(F, int) else to_mask(F)
    table = path_table(g)
    D: list[list[int | None]] = [[None] * g.n for _ in range(g.n)]
    for v in range(g.n):
        D[v][v] = 0
    if len(table):
        mins = np.minimum.reduceat(table.weights(fmask), table.pair_starts)
        for (x, y), d in zip(table.pairs, mins.tolist()):
            D[x][y] = d
    return D


def dist_via_paths(graft: Graft, F: Iterable[int], x: int | str, y: int | str) -> int:
    """Minimum w_F over all simple x-y paths (exhaustive)."""
    x, y = graft.vertex(x), graft.vertex(y)
    if x == y:
        return 0
    d = path_distance_matrix(graft, F)[x][y]
    if d is None:
        raise DisconnectedError(f"{x} and {y} lie in different components")
    return d


@dataclass(frozen=True)
class Stratification:
    root: int
    interval: tuple[int, ...]
    levels: dict[int, frozenset[int]]
    lower_sets: dict[int, frozenset[int]]
    level_masks: dict[int, int]
    lower_masks: dict[int, int]


def stratify(graft: Graft, r: int | str) -> Stratification:
    """Levels and lower sets of r's component by distance from ``r``."""
    r = graft.vertex(r)
    memo = graft._cache.setdefault("strata", {})
    hit = memo.get(r)
    if hit is not None:
        return hit
    row = distance_matrix(graft)[r]
    level_masks: dict[int, int] = {}
    for x, d in enumerate(row):
        if d is not None:
            level_masks[d] = level_masks.get(d, 0) | 1 << x
    interval = tuple(sorted(level_masks))
    lower_masks = {}
    acc = 0
    for i in interval:
        acc |= level_masks[i]
        lower_masks[i] = acc
    out = Stratification(
        root=r,
        interval=interval,
        levels={i: frozenset(bits(m)) for i, m in level_masks.items()},
        lower_sets={i: frozenset(bits(m)) for i, m in lower_masks.items()},
        level_masks=level_masks,
        lower_masks=lower_masks,
    )
    memo[r] = out
    return out


def is_extreme(graft: Graft, X: Iterable[int | str]) -> bool:
    """Pairwise non-negative F-distances within X."""
    xs = [graft.vertex(x) for x in X]
    D = distance_matrix(graft)
    for a in xs:
        for b in xs:
            d = D[a][b]
            if d is None:
                raise DisconnectedError(f"{a} and {b} lie in different components")
            if d < 0:
                return False
    return True


def is_primal(graft: Graft, r: int | str) -> bool:
    """Every vertex of r's component is at distance <= 0 from r."""
    row = distance_matrix(graft)[graft.vertex(r)]
    return all(d <= 0 for d in row if d is not None)
