"""Graphs, grafts, joins and the +/-1 join weighting.

Vertices are dense integers ``0..n-1`` internally; every graph keeps the
external string label of each vertex so that serialized output stays stable.
Vertex and edge sets travel through the public API as ``frozenset[int]``;
the hot paths work on integer bitmasks (bit ``i`` set means index ``i``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from ._bits import bits, lowest, to_mask, to_set
from .errors import FormatError, InternalInvariantError, ParityError, PreconditionError


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with stable edge ids ``0..m-1``."""

    labels: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self) -> None:
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise FormatError("duplicate vertex labels")
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise FormatError(f"edge ({u}, {v}) has an endpoint outside the vertex set")
            if u == v:
                raise FormatError(f"self-loop at {self.labels[u]!r}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise FormatError(
                    f"parallel edge between {self.labels[u]!r} and {self.labels[v]!r}"
                )
            seen.add(key)

    @classmethod
    def from_labeled_edges(
        cls, vertices: Sequence, edges: Iterable[Sequence]
    ) -> "Graph":
        labels = tuple(str(v) for v in vertices)
        index = {lab: i for i, lab in enumerate(labels)}
        if len(index) != len(labels):
            raise FormatError("duplicate vertex labels")
        out = []
        for e in edges:
            if len(e) != 2:
                raise FormatError(f"edge {e!r} is not a pair")
            try:
                out.append((index[str(e[0])], index[str(e[1])]))
            except KeyError as exc:
                raise FormatError(f"edge {e!r} names an unknown vertex") from exc
        return cls(labels, tuple(out))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def adj(self) -> tuple[int, ...]:
        """Neighbourhood bitmask per vertex."""
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    @cached_property
    def incident(self) -> tuple[int, ...]:
        """Incident-edge bitmask per vertex."""
        inc = [0] * self.n
        for e, (u, v) in enumerate(self.edges):
            inc[u] |= 1 << e
            inc[v] |= 1 << e
        return tuple(inc)

    @cached_property
    def ends(self) -> tuple[int, ...]:
        """Endpoint vertex bitmask per edge."""
        return tuple((1 << u) | (1 << v) for u, v in self.edges)

    @cached_property
    def all_vertices(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def all_edges(self) -> int:
        return (1 << self.m) - 1

    def odd_set(self, emask: int) -> int:
        """Vertices of odd degree in the edge subset ``emask``."""
        out = 0
        ends = self.ends
        for e in bits(emask):
            out ^= ends[e]
        return out

    def components_of(self, vmask: int) -> tuple[int, ...]:
        """Connected components of ``G[vmask]`` as vertex masks, by lowest vertex."""
        memo = self._cache.setdefault("components", {})
        hit = memo.get(vmask)
        if hit is not None:
            return hit
        adj = self.adj
        rest = vmask
        comps = []
        while rest:
            seed = rest & -rest
            comp = seed
            frontier = seed
            while frontier:
                v = lowest(frontier)
                frontier ^= 1 << v
                new = adj[v] & vmask & ~comp
                comp |= new
                frontier |= new
            comps.append(comp)
            rest &= ~comp
        out = tuple(comps)
        memo[vmask] = out
        return out

    @cached_property
    def component_masks(self) -> tuple[int, ...]:
        return self.components_of(self.all_vertices)

    def component_of(self, v: int) -> int:
        for c in self.component_masks:
            if c >> v & 1:
                return c
        raise PreconditionError(f"vertex {v} not in graph")

    def cut(self, vmask: int) -> int:
        """Edges with exactly one endpoint in ``vmask``."""
        memo = self._cache.setdefault("cut", {})
        hit = memo.get(vmask)
        if hit is None:
            hit = 0
            for e, em in enumerate(self.ends):
                if (em & vmask).bit_count() == 1:
                    hit |= 1 << e
            memo[vmask] = hit
        return hit

    def inner(self, vmask: int) -> int:
        """Edges with both endpoints in ``vmask``."""
        memo = self._cache.setdefault("inner", {})
        hit = memo.get(vmask)
        if hit is None:
            hit = 0
            for e, em in enumerate(self.ends):
                if em & vmask == em:
                    hit |= 1 << e
            memo[vmask] = hit
        return hit

    def neighbours(self, vmask: int) -> int:
        """Vertices outside ``vmask`` adjacent to some vertex of it."""
        out = 0
        for v in bits(vmask):
            out |= self.adj[v]
        return out & ~vmask

    @cached_property
    def bipartition(self) -> tuple[int, int] | None:
        """Two-colouring as a pair of vertex masks, or None if an odd cycle exists."""
        color = [-1] * self.n
        for start in range(self.n):
            if color[start] >= 0:
                continue
            color[start] = 0
            stack = [start]
            while stack:
                v = stack.pop()
                for w in bits(self.adj[v]):
                    if color[w] < 0:
                        color[w] = 1 - color[v]
                        stack.append(w)
                    elif color[w] == color[v]:
                        return None
        side = to_mask(v for v in range(self.n) if color[v] == 0)
        return side, self.all_vertices & ~side

    def subgraph(self, vmask: int) -> tuple["Graph", dict[int, int], dict[int, int]]:
        """Induced subgraph plus old->new maps for vertices and edges.

        Vertices and edges keep their relative order, so labels carry over.
        """
        memo = self._cache.setdefault("subgraph", {})
        hit = memo.get(vmask)
        if hit is not None:
            return hit
        vmap = {v: i for i, v in enumerate(bits(vmask))}
        emap = {}
        sub_edges = []
        for e, (u, v) in enumerate(self.edges):
            if u in vmap and v in vmap:
                emap[e] = len(sub_edges)
                sub_edges.append((vmap[u], vmap[v]))
        labels = tuple(self.labels[v] for v in vmap)
        out = memo[vmask] = (Graph(labels, tuple(sub_edges)), vmap, emap)
        return out

    def vertex_names(self, vs: Iterable[int]) -> list[str]:
        return [self.labels[v] for v in sorted(vs)]

    def edge_names(self, es: Iterable[int]) -> list[list[str]]:
        return [[self.labels[self.edges[e][0]], self.labels[self.edges[e][1]]] for e in sorted(es)]


@dataclass(frozen=True)
class Graft:
    """A graph with terminal set ``terminals`` of even size in every component.

    Build through :func:`new_graft`, which validates parity.
    """

    graph: Graph
    terminals: frozenset[int]
    bipartition: tuple[frozenset[int], frozenset[int]] | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @cached_property
    def tmask(self) -> int:
        return to_mask(self.terminals)

    @property
    def is_bipartite(self) -> bool:
        return self.bipartition is not None

    def vertex(self, v: int | str) -> int:
        """Resolve an external label (or pass through an index)."""
        if isinstance(v, str):
            try:
                return self.graph.index[v]
            except KeyError as exc:
                raise PreconditionError(f"unknown vertex {v!r}") from exc
        if not 0 <= v < self.graph.n:
            raise PreconditionError(f"vertex index {v} out of range")
        return v

    def to_json(self) -> dict:
        g = self.graph
        return {
            "vertices": list(g.labels),
            "edges": [[g.labels[u], g.labels[v]] for u, v in g.edges],
            "terminals": [g.labels[v] for v in sorted(self.terminals)],
        }

    def __str__(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def new_graft(graph: Graph, terminals: Iterable[int | str]) -> Graft:
    """Validate per-component terminal parity and attach a bipartition witness."""
    tset = set()
    for t in terminals:
        if isinstance(t, str):
            if t not in graph.index:
                raise FormatError(f"terminal {t!r} is not a vertex")
            tset.add(graph.index[t])
        else:
            if not 0 <= t < graph.n:
                raise FormatError(f"terminal index {t} out of range")
            tset.add(t)
    tmask = to_mask(tset)
    for comp in graph.component_masks:
        if (comp & tmask).bit_count() % 2:
            names = graph.vertex_names(bits(comp))
            raise ParityError(
                f"component {{{', '.join(names)}}} holds an odd number of terminals",
                component=to_set(comp),
            )
    bip = graph.bipartition
    witness = None if bip is None else (to_set(bip[0]), to_set(bip[1]))
    return Graft(graph, frozenset(tset), witness)


def graft_from_json(data: dict | str) -> Graft:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        vertices = data["vertices"]
        edges = data["edges"]
        terminals = data.get("terminals", [])
    except (KeyError, TypeError) as exc:
        raise FormatError("graft JSON needs 'vertices' and 'edges'") from exc
    graph = Graph.from_labeled_edges(vertices, edges)
    return new_graft(graph, [str(t) for t in terminals])


def load_graft(path: str) -> Graft:
    with open(path) as fh:
        return graft_from_json(json.load(fh))


def is_join(graft: Graft, F: Iterable[int]) -> bool:
    """True iff exactly the terminals have odd degree in ``F``."""
    return graft.graph.odd_set(to_mask(F)) == graft.tmask


@dataclass(frozen=True)
class WeightFn:
    """w_F: -1 on edges of ``join``, +1 elsewhere."""

    join: frozenset[int]

    def __call__(self, e: int) -> int:
        return -1 if e in self.join else 1


def weight(w: WeightFn, S: Iterable[int]) -> int:
    S = set(S)
    return len(S - w.join) - len(S & w.join)


def mask_weight(emask: int, fmask: int) -> int:
    return emask.bit_count() - 2 * (emask & fmask).bit_count()


def induced_graft(graft: Graft, F: Iterable[int], X: Iterable[int]) -> Graft:
    """The graft on ``G[X]`` whose terminals are the odd vertices of F inside X."""
    return induced_with_join(graft, to_mask(F), to_mask(X))[0]


def induced_with_join(graft: Graft, fmask: int, xmask: int) -> tuple[Graft, dict[int, int], dict[int, int]]:
    g = graft.graph
    sub, vmap, emap = g.subgraph(xmask)
    odd = g.odd_set(fmask & g.inner(xmask))
    memo = g._cache.setdefault("induced", {})
    hit = memo.get((xmask, odd))
    if hit is None:
        terms = frozenset(vmap[v] for v in bits(odd))
        try:
            hit = memo[(xmask, odd)] = new_graft(sub, terms)
        except ParityError as exc:
            raise InternalInvariantError(f"induced graft broke parity: {exc}") from exc
    return hit, vmap, emap
