"""Distance components of a bipartite graft with respect to a root.

For a root r and each attained distance i, the connected components of the
subgraph induced by ``{x : dist(r, x) <= i}`` are the distance components at
level i.  A component is capital when it contains r.  Decapital components
are crossed by exactly one edge of a minimum join F (the beam); its inner end
is the F-root and its outer end the F-antiroot.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from ._bits import bits, lowest, to_mask, to_set
from .distance import distance_matrix, stratify
from .errors import DisconnectedError, InternalInvariantError, PreconditionError, PropertyViolation
from .graft_core import Graft, induced_with_join
from .join_solver import nu


@dataclass(frozen=True)
class DistanceComponent:
    root: int
    level: int
    mask: int
    capital: bool
    ak_mask: int
    dk_masks: tuple[int, ...]
    beam: int | None = None
    f_root: int | None = None
    f_antiroot: int | None = None

    @property
    def vertices(self) -> frozenset[int]:
        return to_set(self.mask)

    @property
    def ak(self) -> frozenset[int]:
        """Vertices of the component on its own level."""
        return to_set(self.ak_mask)

    @property
    def dk_mask(self) -> int:
        return self.mask & ~self.ak_mask

    @property
    def dk(self) -> frozenset[int]:
        return to_set(self.dk_mask)

    @property
    def dk_components(self) -> list[frozenset[int]]:
        return [to_set(m) for m in self.dk_masks]

    def __contains__(self, v: int) -> bool:
        return bool(self.mask >> v & 1)


def _skeleton(graft: Graft, r: int) -> list[tuple[int, int, bool, int, tuple[int, ...]]]:
    """Join-independent part: (level, mask, capital, A-mask, D-components)."""
    memo = graft._cache.setdefault("skeleton", {})
    hit = memo.get(r)
    if hit is not None:
        return hit
    g = graft.graph
    strata = stratify(graft, r)
    out = []
    for i in strata.interval:
        level = strata.level_masks[i]
        for comp in g.components_of(strata.lower_masks[i]):
            ak = comp & level
            out.append((i, comp, bool(comp >> r & 1), ak, g.components_of(comp & ~ak)))
    memo[r] = out
    return out


def components(
    graft: Graft, F: Iterable[int] | int, r: int | str, strict: bool = True
) -> list[DistanceComponent]:
    """Every (level, component) pair for root ``r``, lowest level first.

    With ``strict`` a decapital component not crossed by exactly one join
    edge raises :class:`InternalInvariantError`; otherwise its beam is None.
    """
    if not graft.is_bipartite:
        raise PreconditionError("distance components need a bipartite graft")
    r = graft.vertex(r)
    fmask = F if isinstance(F, int) else to_mask(F)
    g = graft.graph
    out = []
    for i, comp, capital, ak, dks in _skeleton(graft, r):
        if capital:
            out.append(DistanceComponent(r, i, comp, True, ak, dks))
            continue
        crossing = g.cut(comp) & fmask
        if crossing.bit_count() != 1:
            if strict:
                raise InternalInvariantError(
                    f"decapital component {g.vertex_names(bits(comp))} is crossed by "
                    f"{crossing.bit_count()} join edges"
                )
            out.append(DistanceComponent(r, i, comp, False, ak, dks))
            continue
        e = lowest(crossing)
        u, v = g.edges[e]
        inner, outer = (u, v) if comp >> u & 1 else (v, u)
        out.append(DistanceComponent(r, i, comp, False, ak, dks, e, inner, outer))
    return out


def noncap(graft: Graft, F: Iterable[int] | int, r: int | str, strict: bool = True) -> list[DistanceComponent]:
    """Decapital distance components of ``r`` (one per vertex set)."""
    seen = set()
    out = []
    for K in components(graft, F, r, strict):
        if not K.capital and K.mask not in seen:
            seen.add(K.mask)
            out.append(K)
    return out


def is_k_congruent(graft: Graft, F, r_prime: int | str, K: DistanceComponent) -> bool:
    """dist(r', F-root of K) == dist(r', F-antiroot of K) - 1."""
    if K.capital or K.f_root is None:
        raise PreconditionError("K must be a decapital component with beam data")
    r_prime = graft.vertex(r_prime)
    D = distance_matrix(graft)
    a, b = D[r_prime][K.f_root], D[r_prime][K.f_antiroot]
    if a is None or b is None:
        raise DisconnectedError("r' is not in K's component")
    return a == b - 1


@dataclass(frozen=True)
class UniversalityMap:
    """Ordered join edge (u, v) -> decapital component with F-root u, F-antiroot v."""

    pairs: dict[tuple[int, int], DistanceComponent] = field(default_factory=dict)

    def image(self) -> set[int]:
        return {K.mask for K in self.pairs.values()}


def universality_map(graft: Graft, F: Iterable[int] | int) -> UniversalityMap:
    fmask = F if isinstance(F, int) else to_mask(F)
    g = graft.graph
    by_root = {r: noncap(graft, fmask, r) for r in range(g.n)}
    pairs: dict[tuple[int, int], DistanceComponent] = {}
    for e in bits(fmask):
        a, b = g.edges[e]
        for x, y in ((a, b), (b, a)):
            found = [K for K in by_root[y] if K.level == -1 and x in K]
            if len(found) != 1:
                raise InternalInvariantError(f"no level -1 component of root {y} holds {x}")
            K = found[0]
            if (K.f_root, K.f_antiroot) != (x, y):
                raise InternalInvariantError(
                    f"component {g.vertex_names(K.vertices)} has beam ends "
                    f"({K.f_root}, {K.f_antiroot}), expected ({x}, {y})"
                )
            for r, ks in by_root.items():
                for K2 in ks:
                    if (K2.f_root, K2.f_antiroot) == (x, y) and K2.mask != K.mask:
                        raise InternalInvariantError(
                            f"two components share F-root {x} and F-antiroot {y} (root {r})"
                        )
            pairs[(x, y)] = K
    if len({K.mask for K in pairs.values()}) != len(pairs):
        raise InternalInvariantError("orientation map is not injective")
    return UniversalityMap(pairs)


@dataclass(frozen=True)
class CountReport:
    nu: int
    per_root: dict[int, int]
    union_size: int


def check_counts(graft: Graft, F: Iterable[int] | int) -> CountReport:
    """Each root has nu decapital components; over all roots there are 2 nu."""
    fmask = F if isinstance(F, int) else to_mask(F)
    k = nu(graft)
    per_root = {}
    union = set()
    for r in range(graft.graph.n):
        ks = noncap(graft, fmask, r, strict=False)
        per_root[r] = len(ks)
        union.update(K.mask for K in ks)
        if len(ks) != k:
            raise PropertyViolation(
                "decapital_count", f"root {r} has {len(ks)} decapital components, nu = {k}",
                {"root": r, "count": len(ks), "nu": k},
            )
    if len(union) != 2 * k:
        raise PropertyViolation(
            "decapital_union", f"{len(union)} distinct decapital components, 2 nu = {2 * k}",
            {"union": len(union), "nu": k},
        )
    return CountReport(k, per_root, len(union))


@dataclass(frozen=True)
class PrimalShiftReport:
    induced: Graft
    nu_induced: int
    join_size: int
    shifts: dict[int, int]


def check_primal_shift(graft: Graft, F: Iterable[int] | int, K: DistanceComponent) -> PrimalShiftReport:
    """Inside a decapital K, F restricted to K is a minimum join of the induced
    graft, which is primal at the F-root with distances shifted by the root's level."""
    if K.capital or K.f_root is None:
        raise PreconditionError("K must be a decapital component with beam data")
    fmask = F if isinstance(F, int) else to_mask(F)
    g = graft.graph
    sub, vmap, _ = induced_with_join(graft, fmask, K.mask)
    inner = fmask & g.inner(K.mask)
    k_sub = nu(sub)
    if inner.bit_count() != k_sub:
        raise PropertyViolation(
            "primal_shift", f"join restricted to K has {inner.bit_count()} edges, nu = {k_sub}",
            {"component": K.mask},
        )
    D = distance_matrix(graft)
    DK = distance_matrix(sub)
    rk = vmap[K.f_root]
    i_k = D[K.root][K.f_root]
    shifts = {}
    for x in bits(K.mask):
        inside = DK[rk][vmap[x]]
        shifts[x] = inside
        if inside > 0:
            raise PropertyViolation("primal_shift", f"induced graft not primal at {K.f_root}",
                                    {"component": K.mask, "vertex": x})
        if inside != D[K.root][x] - i_k:
            raise PropertyViolation(
                "primal_shift", f"distance to {x} inside K is {inside}, expected {D[K.root][x] - i_k}",
                {"component": K.mask, "vertex": x},
            )
    return PrimalShiftReport(sub, k_sub, inner.bit_count(), shifts)
