"""Minimum joins: exact matching solver, brute-force oracle, enumeration.

The exact solver pairs up terminals: within each connected component a
minimum join is the symmetric difference of shortest paths realizing a
minimum-weight perfect matching of the terminals under hop distance.  The
matching is solved by dynamic programming over terminal subsets, memoized
per graph so that every terminal set of the same graph shares one table.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ._bits import bits, lowest, to_mask, to_set
from .errors import CapExceeded, InternalInvariantError, SizeError
from .graft_core import Graft, Graph, mask_weight

MATCHING_BOUND = 20
BRUTE_FORCE_BOUND = 20
PARITY_TABLE_EDGES = 16
CYCLE_BOUND = 100_000
ENUMERATION_CAP = 200

_INF = float("inf")


@dataclass(frozen=True)
class MinJoinResult:
    join: frozenset[int]
    nu: int
    method: str  # "exact_matching" | "brute_force"


def hop_distances(graph: Graph) -> list[list[float]]:
    """All-pairs BFS distances; ``inf`` across components."""
    hit = graph._cache.get("hops")
    if hit is not None:
        return hit
    out = []
    adj = graph.adj
    for s in range(graph.n):
        d = [_INF] * graph.n
        d[s] = 0
        seen = 1 << s
        frontier = 1 << s
        k = 0
        while frontier:
            k += 1
            nxt = 0
            for v in bits(frontier):
                nxt |= adj[v]
            nxt &= ~seen
            for v in bits(nxt):
                d[v] = k
            seen |= nxt
            frontier = nxt
        out.append(d)
    graph._cache["hops"] = out
    return out


def _match_cost(graph: Graph, U: int, memo: dict, hops: list) -> float:
    hit = memo.get(U)
    if hit is not None:
        return hit
    i = lowest(U)
    rest = U ^ (1 << i)
    row = hops[i]
    best = _INF
    for j in bits(rest):
        sub = rest ^ (1 << j)
        c = row[j] + (memo[sub] if sub in memo else _match_cost(graph, sub, memo, hops))
        if c < best:
            best = c
    memo[U] = best
    return best


def nu_of_mask(graph: Graph, tmask: int, bound: int = MATCHING_BOUND) -> int:
    """Minimum join size for terminal mask ``tmask`` (parity assumed per component)."""
    memo = graph._cache.get("match")
    if memo is None:
        memo = graph._cache["match"] = {0: 0}
    hit = memo.get(tmask)
    if hit is not None and len(graph.component_masks) == 1:
        return int(hit)
    hops = hop_distances(graph)
    total = 0
    for comp in graph.component_masks:
        part = tmask & comp
        if not part:
            continue
        if part.bit_count() > bound:
            raise SizeError(f"{part.bit_count()} terminals in one component exceed bound {bound}")
        if part.bit_count() % 2:
            raise InternalInvariantError("odd terminal count in a component")
        total += _match_cost(graph, part, memo, hops)
    return int(total)


def nu(graft: Graft, bound: int = MATCHING_BOUND) -> int:
    return nu_of_mask(graft.graph, graft.tmask, bound)


def _shortest_path_edges(graph: Graph, s: int, t: int) -> int:
    parent = {s: None}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        if v == t:
            break
        for w in bits(graph.adj[v]):
            if w not in parent:
                parent[w] = v
                queue.append(w)
    edge_of = {}
    for e, (u, v) in enumerate(graph.edges):
        edge_of[(u, v)] = edge_of[(v, u)] = e
    out = 0
    v = t
    while parent[v] is not None:
        out |= 1 << edge_of[(parent[v], v)]
        v = parent[v]
    return out


def min_join(graft: Graft, bound: int = MATCHING_BOUND) -> MinJoinResult:
    """A minimum join via exact terminal matching."""
    graph = graft.graph
    hops = hop_distances(graph)
    target = nu(graft, bound)
    memo = graph._cache["match"]
    fmask = 0
    for comp in graph.component_masks:
        U = graft.tmask & comp
        while U:
            i = lowest(U)
            rest = U ^ (1 << i)
            want = memo[U]
            for j in bits(rest):
                sub = rest ^ (1 << j)
                if hops[i][j] + _match_cost(graph, sub, memo, hops) == want:
                    break
            fmask ^= _shortest_path_edges(graph, i, j)
            U = sub
    if fmask.bit_count() != target or graph.odd_set(fmask) != graft.tmask:
        raise InternalInvariantError("matching realization is not a minimum join")
    return MinJoinResult(to_set(fmask), target, "exact_matching")


def _parity_table(graph: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Odd-vertex set and size of every edge subset, indexed by edge mask."""
    hit = graph._cache.get("parity")
    if hit is not None:
        return hit
    odd = np.zeros(1, dtype=np.int64)
    size = np.zeros(1, dtype=np.int64)
    for em in graph.ends:
        odd = np.concatenate([odd, odd ^ em])
        size = np.concatenate([size, size + 1])
    graph._cache["parity"] = (odd, size)
    return odd, size


def _lex_key(emask: int) -> tuple[int, ...]:
    return tuple(bits(emask))


def _joins_by_table(graph: Graph, tmask: int) -> tuple[int, list[int]]:
    """(nu, sorted minimum join masks) by scanning every edge subset."""
    memo = graph._cache.setdefault("minjoins", {})
    hit = memo.get(tmask)
    if hit is not None:
        return hit
    odd, size = _parity_table(graph)
    idx = np.flatnonzero(odd == tmask)
    sizes = size[idx]
    best = int(sizes.min())
    masks = sorted((int(i) for i in idx[sizes == best]), key=_lex_key)
    memo[tmask] = (best, masks)
    return best, masks


def brute_force_min_join(graft: Graft, bound: int = BRUTE_FORCE_BOUND) -> MinJoinResult:
    """Exhaustive scan of edge subsets by increasing size; first join wins."""
    graph = graft.graph
    if graph.m > bound:
        raise SizeError(f"{graph.m} edges exceed brute-force bound {bound}")
    if graph.m <= PARITY_TABLE_EDGES:
        k, masks = _joins_by_table(graph, graft.tmask)
        return MinJoinResult(to_set(masks[0]), k, "brute_force")
    ends = graph.ends
    for k in range(graph.m + 1):
        for combo in combinations(range(graph.m), k):
            odd = 0
            for e in combo:
                odd ^= ends[e]
            if odd == graft.tmask:
                return MinJoinResult(frozenset(combo), k, "brute_force")
    raise InternalInvariantError("no join found; graft parity was not validated")


def simple_cycles(graph: Graph, bound: int = CYCLE_BOUND) -> list[int]:
    """Edge masks of all circuits, each listed once."""
    hit = graph._cache.get("cycles")
    if hit is not None:
        return hit
    edge_of = {}
    for e, (u, v) in enumerate(graph.edges):
        edge_of[(u, v)] = edge_of[(v, u)] = e
    adj = graph.adj
    out: list[int] = []
    for s in range(graph.n):
        allowed = ~((1 << (s + 1)) - 1)
        # DFS over vertices above s; close back to s
        stack = [(s, 1 << s, 0, -1)]
        while stack:
            v, vis, em, second = stack.pop()
            for w in bits(adj[v] & allowed & ~vis):
                e = edge_of[(v, w)]
                stack.append((w, vis | 1 << w, em | 1 << e, w if second < 0 else second))
            if v != s and second >= 0 and adj[v] >> s & 1 and em.bit_count() >= 2 and v > second:
                out.append(em | 1 << edge_of[(v, s)])
                if len(out) > bound:
                    raise SizeError(f"more than {bound} circuits")
    graph._cache["cycles"] = out
    return out


def is_conservative(graft: Graft, F, cycle_bound: int = CYCLE_BOUND) -> bool:
    """No circuit has negative weight under w_F."""
    graph = graft.graph
    fmask = to_mask(F)
    try:
        cycles = simple_cycles(graph, cycle_bound)
    except SizeError:
        # F is a join of (G, odd(F)); conservative exactly when it is a minimum one
        return fmask.bit_count() == nu_of_mask(graph, graph.odd_set(fmask))
    return all(mask_weight(c, fmask) >= 0 for c in cycles)


def enumerate_min_joins(
    graft: Graft, cap: int = ENUMERATION_CAP, method: str = "scan"
) -> list[frozenset[int]]:
    """All minimum joins, lexicographically ordered by sorted edge ids.

    ``method="scan"`` tests every edge subset of size nu; ``"closure"`` starts
    from one minimum join and toggles zero-weight circuits to a fixed point.
    Raises :class:`CapExceeded` (carrying the first ``cap``) on truncation.
    """
    if method == "scan":
        masks = _scan_min_joins(graft)
    elif method == "closure":
        masks = _closure_min_joins(graft, cap)
    else:
        raise ValueError(f"unknown method {method!r}")
    joins = [to_set(f) for f in masks]
    if len(joins) > cap:
        raise CapExceeded(f"more than {cap} minimum joins", joins[:cap])
    return joins


def min_join_masks(graft: Graft) -> list[int]:
    return _scan_min_joins(graft)


def _scan_min_joins(graft: Graft) -> list[int]:
    graph = graft.graph
    if graph.m <= PARITY_TABLE_EDGES:
        return _joins_by_table(graph, graft.tmask)[1]
    if graph.m > BRUTE_FORCE_BOUND:
        raise SizeError(f"{graph.m} edges exceed scan bound {BRUTE_FORCE_BOUND}")
    k = nu(graft)
    ends = graph.ends
    out = []
    for combo in combinations(range(graph.m), k):
        odd = 0
        for e in combo:
            odd ^= ends[e]
        if odd == graft.tmask:
            out.append(to_mask(combo))
    return out


def _closure_min_joins(graft: Graft, cap: int) -> list[int]:
    graph = graft.graph
    zero_cycles = simple_cycles(graph)
    start = to_mask(min_join(graft).join)
    seen = {start}
    queue = deque([start])
    while queue:
        f = queue.popleft()
        for c in zero_cycles:
            if mask_weight(c, f) == 0:
                g = f ^ c
                if g not in seen:
                    seen.add(g)
                    queue.append(g)
                    if len(seen) > cap:
                        return sorted(seen, key=_lex_key)
    return sorted(seen, key=_lex_key)


def canonical_min_join(graft: Graft) -> frozenset[int]:
    """Lexicographically smallest minimum join (deterministic representative)."""
    try:
        return enumerate_min_joins(graft, cap=10**9)[0]
    except SizeError:
        return min_join(graft).join


def allowed_edges(graft: Graft) -> frozenset[int]:
    """Edges lying in some minimum join, via the F-distance -1 criterion."""
    from .distance import distance_matrix  # distance imports this module

    D = distance_matrix(graft)
    return frozenset(
        e for e, (u, v) in enumerate(graft.graph.edges) if D[u][v] == -1
    )


def allowed_edges_by_membership(graft: Graft) -> frozenset[int]:
    """Union of all minimum joins (exhaustive)."""
    out = 0
    for f in _scan_min_joins(graft):
        out |= f
    return to_set(out)
