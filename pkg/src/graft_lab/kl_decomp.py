"""Factor-components and the Kotzig-Lovasz partition of a graft.

Two vertices are equivalent when they coincide, or when they share a
factor-component and removing/adding both from T leaves the minimum join
size unchanged (F-distance zero).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from ._bits import bits, lowest, to_mask, to_set
from .decomposition import DistanceComponent
from .distance import distance_matrix
from .errors import PreconditionError, PropertyViolation
from .graft_core import Graft, Graph
from .join_solver import allowed_edges


def _edge_components(graph: Graph, emask: int) -> list[int]:
    """Components of (V, emask); isolated vertices are singletons."""
    parent = list(range(graph.n))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in bits(emask):
        u, v = graph.edges[e]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, int] = {}
    for v in range(graph.n):
        groups[find(v)] = groups.get(find(v), 0) | 1 << v
    return sorted(groups.values(), key=lowest)


@dataclass(frozen=True)
class KLDecomposition:
    graft: Graft
    allowed: int
    fc_masks: tuple[int, ...]
    class_masks: tuple[int, ...]
    class_index: tuple[int, ...]  # vertex -> position in class_masks
    fc_index: tuple[int, ...]  # vertex -> position in fc_masks

    @property
    def factor_components(self) -> list[frozenset[int]]:
        return [to_set(m) for m in self.fc_masks]

    @property
    def classes(self) -> list[frozenset[int]]:
        return [to_set(m) for m in self.class_masks]

    def class_id(self, c: int) -> str:
        """Canonical id of class ``c``: its smallest external label."""
        return min(self.graft.graph.labels[v] for v in bits(self.class_masks[c]))

    @cached_property
    def class_of(self) -> dict[int, str]:
        return {v: self.class_id(self.class_index[v]) for v in range(self.graft.graph.n)}

    @cached_property
    def per_component(self) -> dict[int, list[int]]:
        """factor-component position -> class positions inside it."""
        out: dict[int, list[int]] = {i: [] for i in range(len(self.fc_masks))}
        for c, m in enumerate(self.class_masks):
            out[self.fc_index[lowest(m)]].append(c)
        return out

    def class_mask_of(self, v: int) -> int:
        return self.class_masks[self.class_index[v]]


def kl_decomposition(graft: Graft) -> KLDecomposition:
    hit = graft._cache.get("kl")
    if hit is not None:
        return hit
    g = graft.graph
    D = distance_matrix(graft)
    allowed = to_mask(allowed_edges(graft))
    fcs = _edge_components(g, allowed)
    fc_index = [0] * g.n
    for i, m in enumerate(fcs):
        for v in bits(m):
            fc_index[v] = i
    rel = []
    for u in range(g.n):
        cls = 1 << u
        for v in bits(fcs[fc_index[u]]):
            if D[u][v] == 0:
                cls |= 1 << v
        rel.append(cls)
    for u in range(g.n):
        for v in bits(rel[u]):
            if rel[v] != rel[u]:
                raise PropertyViolation(
                    "kl_equivalence",
                    f"relation is not transitive at {g.labels[u]!r}, {g.labels[v]!r}",
                    {"u": u, "v": v},
                )
    class_masks = sorted(set(rel), key=lowest)
    pos = {m: i for i, m in enumerate(class_masks)}
    out = KLDecomposition(
        graft, allowed, tuple(fcs), tuple(class_masks),
        tuple(pos[rel[v]] for v in range(g.n)), tuple(fc_index),
    )
    graft._cache["kl"] = out
    return out


@dataclass(frozen=True)
class ComponentClasses:
    root_class_mask: int
    antiroot_class_mask: int
    fragment_mask: int
    family_masks: tuple[int, ...]  # fragment first, then classes meeting A(K)

    @property
    def root_class(self) -> frozenset[int]:
        return to_set(self.root_class_mask)

    @property
    def antiroot_class(self) -> frozenset[int]:
        return to_set(self.antiroot_class_mask)

    @property
    def root_fragment(self) -> frozenset[int]:
        return to_set(self.fragment_mask)

    @property
    def ak_family(self) -> list[frozenset[int]]:
        return [to_set(m) for m in self.family_masks]


def component_classes(
    graft: Graft, F, K: DistanceComponent, kl: KLDecomposition | None = None
) -> ComponentClasses:
    """Root class, antiroot class, root fragment and A(K)-family of a decapital K."""
    if K.capital:
        raise PreconditionError("K must be decapital")
    kl = kl or kl_decomposition(graft)
    g = graft.graph
    crossing = g.cut(K.mask) & kl.allowed
    inner_cls, outer_cls = set(), set()
    for e in bits(crossing):
        u, v = g.edges[e]
        inside, outside = (u, v) if K.mask >> u & 1 else (v, u)
        inner_cls.add(kl.class_index[inside])
        outer_cls.add(kl.class_index[outside])
    witness = {"component": K.mask, "root": K.root}
    if len(inner_cls) != 1 or len(outer_cls) != 1:
        raise PropertyViolation(
            "shore_classes",
            f"allowed boundary edges of {g.vertex_names(K.vertices)} meet "
            f"{len(inner_cls)} inner and {len(outer_cls)} outer classes", witness,
        )
    (si,), (ti,) = inner_cls, outer_cls
    s_mask, t_mask = kl.class_masks[si], kl.class_masks[ti]
    if si == ti or kl.fc_index[lowest(s_mask)] != kl.fc_index[lowest(t_mask)]:
        raise PropertyViolation(
            "shore_classes", "root and antiroot classes coincide or lie in different factor-components",
            witness,
        )
    if t_mask & K.mask:
        raise PropertyViolation("shore_classes", "antiroot class meets K", witness)
    fragment = K.mask & s_mask
    others = sorted(
        {m for m in kl.class_masks if m != s_mask and m & K.ak_mask}, key=lowest
    )
    return ComponentClasses(s_mask, t_mask, fragment, (fragment, *others))


@dataclass(frozen=True)
class AKPartitionReport:
    attachments: dict[int, int]  # D(K)-component mask -> family position


def check_ak2part(
    graft: Graft, F, K: DistanceComponent, cc: ComponentClasses, kl: KLDecomposition | None = None
) -> AKPartitionReport:
    """A(K)-family partitions A(K); non-fragment members keep their factor-component
    inside K; each D(K)-component attaches by allowed edges to exactly one member."""
    kl = kl or kl_decomposition(graft)
    g = graft.graph
    witness = {"component": K.mask, "root": K.root}
    acc = 0
    for m in cc.family_masks:
        if acc & m or m & ~K.ak_mask or not m:
            raise PropertyViolation("ak_partition", "family members overlap or leave A(K)",
                                    {**witness, "member": m})
        acc |= m
    if acc != K.ak_mask:
        raise PropertyViolation("ak_partition", "family does not cover A(K)", witness)
    for m in cc.family_masks[1:]:
        fc = kl.fc_masks[kl.fc_index[lowest(m)]]
        if fc & ~K.mask:
            raise PropertyViolation("ak_partition", "factor-component of a non-fragment member leaves K",
                                    {**witness, "member": m})
    attachments = {}
    for L in K.dk_masks:
        hits = [i for i, m in enumerate(cc.family_masks) if _allowed_between(g, kl.allowed, L, m)]
        if len(hits) != 1:
            raise PropertyViolation(
                "ak_partition", f"D(K)-component attaches to {len(hits)} family members",
                {**witness, "dk_component": L},
            )
        attachments[L] = hits[0]
    return AKPartitionReport(attachments)


def _allowed_between(g: Graph, allowed: int, a: int, b: int) -> bool:
    for e in bits(allowed):
        em = g.ends[e]
        if em & a and em & b:
            return True
    return False
