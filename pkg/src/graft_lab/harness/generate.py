"""Graft corpora: exhaustive labeled enumeration and seeded random sampling."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from .._bits import bits
from ..errors import SizeError
from ..graft_core import Graft, Graph, new_graft

CLASSES = ("general_bipartite", "trees", "even_cycles", "grids")
EXHAUSTIVE_LIMIT = 7
RANDOM_LIMIT = 64


@dataclass(frozen=True)
class CorpusSpec:
    mode: str = "exhaustive"  # "exhaustive" | "random"
    max_vertices: int = 6
    min_vertices: int = 1
    max_edges: int | None = None
    count: int = 100
    seed: int = 0
    classes: tuple[str, ...] = ("general_bipartite",)


def _labels(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


def _connected_bipartite(n: int, edges: list[tuple[int, int]]) -> bool:
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    color = [-1] * n
    color[0] = 0
    stack = [0]
    seen = 1
    while stack:
        v = stack.pop()
        for w in bits(adj[v]):
            if color[w] < 0:
                color[w] = 1 - color[v]
                seen |= 1 << w
                stack.append(w)
            elif color[w] == color[v]:
                return False
    return seen == (1 << n) - 1


def labeled_bipartite_graphs(n: int, max_edges: int | None = None) -> Iterator[Graph]:
    """Every connected bipartite graph on vertices 0..n-1, by edge-subset mask."""
    pairs = list(combinations(range(n), 2))
    labels = _labels(n)
    for mask in range(1 << len(pairs)):
        k = mask.bit_count()
        if k < n - 1 or (max_edges is not None and k > max_edges):
            continue
        edges = [pairs[i] for i in bits(mask)]
        if _connected_bipartite(n, edges):
            yield Graph(labels, tuple(edges))


def cycle_graph(n: int) -> Graph:
    return Graph(_labels(n), tuple((i, (i + 1) % n) for i in range(n)))


def grid_graph(a: int, b: int) -> Graph:
    edges = []
    for i in range(a):
        for j in range(b):
            v = i * b + j
            if j + 1 < b:
                edges.append((v, v + 1))
            if i + 1 < a:
                edges.append((v, v + b))
    return Graph(_labels(a * b), tuple(sorted(edges)))


def even_terminal_sets(graph: Graph) -> Iterator[int]:
    """All terminal masks with even intersection with every component."""
    comps = graph.component_masks
    for t in range(1 << graph.n):
        if all((t & c).bit_count() % 2 == 0 for c in comps):
            yield t


def _grafts_of(graph: Graph) -> Iterator[Graft]:
    for t in even_terminal_sets(graph):
        yield new_graft(graph, list(bits(t)))


def _exhaustive_graphs(spec: CorpusSpec, cls: str) -> Iterator[Graph]:
    lo, hi = spec.min_vertices, spec.max_vertices
    if cls == "general_bipartite":
        for n in range(lo, hi + 1):
            yield from labeled_bipartite_graphs(n, spec.max_edges)
    elif cls == "trees":
        for n in range(lo, hi + 1):
            for g in labeled_bipartite_graphs(n, n - 1):
                yield g
    elif cls == "even_cycles":
        for n in range(max(lo, 4), hi + 1):
            if n % 2 == 0:
                yield cycle_graph(n)
    elif cls == "grids":
        for a in range(2, hi + 1):
            for b in range(a, hi // a + 1):
                if a * b >= lo:
                    yield grid_graph(a, b)
    else:
        raise ValueError(f"unknown graph class {cls!r}")


def _random_tree(rng: random.Random, n: int) -> list[tuple[int, int]]:
    return [(rng.randrange(v), v) for v in range(1, n)]


def _random_general(rng: random.Random, n: int, max_edges: int | None) -> list[tuple[int, int]]:
    side = [rng.randrange(2) for _ in range(n)]
    side[0] = 0
    if n > 1 and all(s == 0 for s in side):
        side[rng.randrange(1, n)] = 1
    edges = set()
    # spanning tree respecting the colouring
    order = list(range(n))
    rng.shuffle(order)
    placed = [order[0]]
    for v in order[1:]:
        cands = [u for u in placed if side[u] != side[v]]
        if not cands:
            side[v] = 1 - side[v]
            cands = [u for u in placed if side[u] != side[v]]
        u = rng.choice(cands)
        edges.add((min(u, v), max(u, v)))
        placed.append(v)
    cross = [(u, v) for u, v in combinations(range(n), 2) if side[u] != side[v] and (u, v) not in edges]
    extra = rng.randint(0, min(len(cross), max(n // 2, 1)))
    if max_edges is not None:
        extra = max(0, min(extra, max_edges - len(edges)))
    edges.update(rng.sample(cross, extra))
    return sorted(edges)


def _random_terminals(rng: random.Random, graph: Graph) -> list[int]:
    out = []
    for comp in graph.component_masks:
        vs = list(bits(comp))
        chosen = [v for v in vs[:-1] if rng.randrange(2)]
        if len(chosen) % 2:
            chosen.append(vs[-1])
        out.extend(chosen)
    return out


def random_graft(rng: random.Random, spec: CorpusSpec) -> Graft:
    cls = rng.choice(spec.classes)
    lo, hi = max(spec.min_vertices, 2), spec.max_vertices
    if cls == "trees":
        n = rng.randint(lo, hi)
        graph = Graph(_labels(n), tuple(_random_tree(rng, n)))
    elif cls == "even_cycles":
        sizes = [k for k in range(max(lo, 4), hi + 1) if k % 2 == 0]
        graph = cycle_graph(rng.choice(sizes))
    elif cls == "grids":
        shapes = [(a, b) for a in range(2, hi + 1) for b in range(a, hi // a + 1) if a * b >= lo]
        graph = grid_graph(*rng.choice(shapes))
    elif cls == "general_bipartite":
        n = rng.randint(lo, hi)
        graph = Graph(_labels(n), tuple(_random_general(rng, n, spec.max_edges)))
    else:
        raise ValueError(f"unknown graph class {cls!r}")
    return new_graft(graph, _random_terminals(rng, graph))


def generate(spec: CorpusSpec) -> Iterator[Graft]:
    """Deterministic stream of grafts for ``spec``.

    Exhaustive grafts of one graph share the same Graph object, so per-graph
    caches are reused across its terminal sets.
    """
    if spec.mode == "exhaustive":
        if spec.max_vertices > EXHAUSTIVE_LIMIT or spec.min_vertices < 0:
            raise SizeError(f"exhaustive enumeration is limited to {EXHAUSTIVE_LIMIT} vertices")
        for cls in spec.classes:
            for graph in _exhaustive_graphs(spec, cls):
                yield from _grafts_of(graph)
    elif spec.mode == "random":
        if spec.max_vertices > RANDOM_LIMIT or spec.max_vertices < 2 or spec.count < 0:
            raise SizeError(f"random grafts need 2..{RANDOM_LIMIT} vertices")
        rng = random.Random(spec.seed)
        for _ in range(spec.count):
            yield random_graft(rng, spec)
    else:
        raise ValueError(f"unknown corpus mode {spec.mode!r}")
