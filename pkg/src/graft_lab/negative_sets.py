"""Maximum negative sets, optionally avoiding a vertex set.

X (disjoint from S and Y) is negative for S when every x in X reaches some
s in S by a path of negative F-weight whose vertices other than s all lie
in X.  Negative sets are closed under union, so the maximum one is the
greatest fixed point of peeling: start from everything outside S and Y and
discard vertices without such a path until nothing changes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._bits import bits, to_mask, to_set
from .decomposition import DistanceComponent
from .distance import path_table
from .errors import PreconditionError, PropertyViolation, SizeError
from .graft_core import Graft, Graph, mask_weight
from .kl_decomp import ComponentClasses, kl_decomposition


@dataclass(frozen=True)
class NegativeSetResult:
    base: frozenset[int]
    avoid: frozenset[int]
    members: frozenset[int]
    witnesses: dict[int, tuple[int, ...]]  # x -> vertex sequence from x to S

    @property
    def mask(self) -> int:
        return to_mask(self.members)


def _edge_lookup(g: Graph) -> dict[tuple[int, int], int]:
    hit = g._cache.get("edge_of")
    if hit is None:
        hit = {}
        for e, (u, v) in enumerate(g.edges):
            hit[(u, v)] = hit[(v, u)] = e
        g._cache["edge_of"] = hit
    return hit


def negative_path(g: Graph, fmask: int, x: int, smask: int, xmask: int) -> tuple[int, ...] | None:
    """Some simple path x..s, s in S, of negative weight with all other vertices in X."""
    edge_of = _edge_lookup(g)
    adj = g.adj
    stack = [(x, (x,), 1 << x, 0)]
    while stack:
        v, path, vis, w = stack.pop()
        for u in bits(adj[v] & ~vis & (xmask | smask)):
            step = -1 if fmask >> edge_of[(v, u)] & 1 else 1
            if smask >> u & 1:
                if w + step < 0:
                    return path + (u,)
            else:
                stack.append((u, path + (u,), vis | 1 << u, w + step))
    return None


def max_negative_set(
    graft: Graft,
    F: Iterable[int] | int,
    S: Iterable[int | str],
    Y: Iterable[int | str] = (),
    order: Sequence[int] | None = None,
) -> NegativeSetResult:
    """Maximum F-negative set for S avoiding Y, with one witness path per member.

    Each round visits the surviving vertices in ``order`` (ascending ids by
    default) and drops the first one lacking a witness; the fixed point does
    not depend on the order.
    """
    g = graft.graph
    fmask = F if isinstance(F, int) else to_mask(F)
    smask = to_mask(graft.vertex(s) for s in S)
    ymask = to_mask(graft.vertex(y) for y in Y)
    if smask & ymask:
        raise PreconditionError("S and Y must be disjoint")
    order = list(range(g.n)) if order is None else list(order)
    X = g.all_vertices & ~smask & ~ymask
    witnesses: dict[int, tuple[int, ...]] = {}
    changed = True
    while changed:
        changed = False
        witnesses = {}
        for x in order:
            if not X >> x & 1:
                continue
            p = negative_path(g, fmask, x, smask, X)
            if p is None:
                X &= ~(1 << x)
                changed = True
                break
            witnesses[x] = p
    return NegativeSetResult(to_set(smask), to_set(ymask), to_set(X), witnesses)


def peel_mask(graft: Graft, fmask: int, smask: int, ymask: int = 0, weights: np.ndarray | None = None) -> int:
    """Vectorized peeling over the enumerated simple paths; returns a vertex mask."""
    memo = graft._cache.setdefault("negset", {})
    key = (fmask, smask, ymask)
    hit = memo.get(key)
    if hit is not None:
        return hit
    g = graft.graph
    table = path_table(g)
    w = table.weights(fmask) if weights is None else weights
    vm = table.vmask
    sel = ((vm & smask) == table.endbit) & ((vm & ymask) == 0) & (w < 0)
    vm = vm[sel]
    sb = table.startbit[sel]
    X = g.all_vertices & ~smask & ~ymask
    while True:
        ok = (vm & ~(X | smask)) == 0
        alive = int(np.bitwise_or.reduce(sb[ok])) if ok.any() else 0
        nxt = X & alive
        if nxt == X:
            break
        X = nxt
    memo[key] = X
    return X


def is_negative_set(graft: Graft, F, S, X, Y=()) -> bool:
    """Definitional check of the witness condition for every member of X."""
    g = graft.graph
    fmask = F if isinstance(F, int) else to_mask(F)
    smask = to_mask(graft.vertex(s) for s in S)
    xmask = to_mask(graft.vertex(x) for x in X)
    ymask = to_mask(graft.vertex(y) for y in Y)
    if xmask & (smask | ymask):
        return False
    return all(negative_path(g, fmask, x, smask, xmask) is not None for x in bits(xmask))


def negative_set_oracle(graft: Graft, F, S, Y=(), bound: int = 12) -> frozenset[int]:
    """Union of every subset of V - S - Y meeting the witness condition.

    Witnesses are looked up among the enumerated simple paths, not searched.
    """
    g = graft.graph
    fmask = F if isinstance(F, int) else to_mask(F)
    smask = to_mask(graft.vertex(s) for s in S)
    ymask = to_mask(graft.vertex(y) for y in Y)
    free = list(bits(g.all_vertices & ~smask & ~ymask))
    if len(free) > bound:
        raise SizeError(f"{len(free)} free vertices exceed oracle bound {bound}")
    table = path_table(g)
    w = table.weights(fmask)
    vm = table.vmask
    sel = (table.endbit & smask != 0) & (w < 0)
    starts = table.start[sel].tolist()
    vms = vm[sel].tolist()
    ends = table.endbit[sel].tolist()
    by_start: dict[int, list[tuple[int, int]]] = {}
    for s, v, eb in zip(starts, vms, ends):
        by_start.setdefault(s, []).append((v, eb))
    union = 0
    for k in range(1 << len(free)):
        X = 0
        for i, v in enumerate(free):
            if k >> i & 1:
                X |= 1 << v
        if X & ~union == 0:
            continue
        if all(any(v & ~(X | eb) == 0 for v, eb in by_start.get(x, ())) for x in bits(X)):
            union |= X
    return to_set(union)


def nei_comp_family(
    graft: Graft, F, K: DistanceComponent, S: Iterable[int] | int
) -> tuple[list[frozenset[int]], frozenset[int]]:
    """D(K)-components joined to S by an allowed edge, and their vertex union."""
    masks, union = _nei_comp_masks(graft, K, S if isinstance(S, int) else to_mask(S))
    return [to_set(m) for m in masks], to_set(union)


def _nei_comp_masks(graft: Graft, K: DistanceComponent, smask: int) -> tuple[list[int], int]:
    if not smask & K.ak_mask:
        raise PreconditionError("S must meet A(K)")
    g = graft.graph
    allowed = kl_decomposition(graft).allowed
    out, union = [], 0
    for L in K.dk_masks:
        for e in bits(allowed & g.cut(L)):
            if g.ends[e] & smask:
                out.append(L)
                union |= L
                break
    return out, union


@dataclass(frozen=True)
class NeighbourSetReport:
    neighbour_sets: dict[int, int]  # family member mask -> N*(K, member)
    negative_sets: dict[int, int]  # family member mask -> negset avoiding antiroot class


def check_neicomp2negset(
    graft: Graft, F, K: DistanceComponent, cc: ComponentClasses, peel=None
) -> NeighbourSetReport:
    """D(K) splits over the A(K)-family by allowed attachment, and each piece is
    the maximum negative set of its member (avoiding the antiroot class; for
    non-fragment members the avoidance is immaterial)."""
    fmask = F if isinstance(F, int) else to_mask(F)
    peel = peel or (lambda s, y: peel_mask(graft, fmask, s, y))
    witness = {"component": K.mask, "root": K.root}
    tk = cc.antiroot_class_mask
    nsets, negs = {}, {}
    seen_l: set[int] = set()
    total = 0
    for idx, S in enumerate(cc.family_masks):
        ls, union = _nei_comp_masks(graft, K, S)
        if seen_l & set(ls):
            raise PropertyViolation("neighbour_negset", "a D(K)-component attaches to two family members",
                                    {**witness, "member": S})
        seen_l.update(ls)
        avoiding = peel(S, tk)
        if union != avoiding:
            raise PropertyViolation(
                "neighbour_negset", "neighbour set differs from negative set avoiding the antiroot class",
                {**witness, "member": S, "neighbours": union, "negset": avoiding},
            )
        if idx > 0:
            plain = peel(S, 0)
            if plain != avoiding:
                raise PropertyViolation(
                    "neighbour_negset", "avoidance changes the negative set of a non-fragment member",
                    {**witness, "member": S, "negset": plain, "avoiding": avoiding},
                )
        if total & union:
            raise PropertyViolation("neighbour_negset", "neighbour sets overlap", {**witness, "member": S})
        total |= union
        nsets[S], negs[S] = union, avoiding
    if seen_l != set(K.dk_masks) or total != K.dk_mask:
        raise PropertyViolation("neighbour_negset", "neighbour sets do not cover D(K)", witness)
    return NeighbourSetReport(nsets, negs)


def path_weight(g: Graph, fmask: int, path: Sequence[int]) -> int:
    edge_of = _edge_lookup(g)
    em = to_mask(edge_of[(a, b)] for a, b in zip(path, path[1:]))
    return mask_weight(em, fmask)
