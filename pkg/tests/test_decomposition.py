import pytest

from graft_lab.decomposition import (
    check_counts,
    check_primal_shift,
    components,
    is_k_congruent,
    noncap,
    universality_map,
)
from graft_lab.errors import InternalInvariantError, PreconditionError

from conftest import eids, make, vids


def _shape(graft, comps):
    return sorted((K.level, tuple(sorted(graft.graph.labels[v] for v in K.vertices)), K.capital) for K in comps)


def test_p3_root_a(p3):
    F = eids(p3, "ab", "bc")
    comps = components(p3, F, "a")
    assert _shape(p3, comps) == [(-2, ("c",), False), (-1, ("b", "c"), False), (0, ("a", "b", "c"), True)]
    bc = next(K for K in comps if K.level == -1)
    assert bc.beam in eids(p3, "ab")
    assert (bc.f_root, bc.f_antiroot) == (1, 0)
    assert bc.ak == vids(p3, "b") and bc.dk_components == [vids(p3, "c")]


def test_p3_root_b(p3):
    comps = noncap(p3, eids(p3, "ab", "bc"), "b")
    assert _shape(p3, comps) == [(-1, ("a",), False), (-1, ("c",), False)]


def test_c4_root_v1(c4):
    F = eids(c4, ("v1", "v2"), ("v3", "v4"))
    comps = noncap(c4, F, "v1")
    assert _shape(c4, comps) == [(-1, ("v2",), False), (-1, ("v4",), False)]


def test_k2_noncap(k2):
    comps = noncap(k2, eids(k2, "ab"), "a")
    assert [K.vertices for K in comps] == [vids(k2, "b")]


def test_non_minimum_join_is_an_internal_error(c4):
    F = eids(c4, ("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1"))
    # not a join of T=all, but F-cut counting still applies
    with pytest.raises(InternalInvariantError):
        components(c4, frozenset(), "v1")
    assert len(noncap(c4, F, "v1", strict=False)) == 2


def test_non_bipartite_rejected():
    tri = make("abc", ["ab", "bc", "ca"], "ab")
    with pytest.raises(PreconditionError):
        components(tri, eids(tri, "ab"), "a")


def test_congruence_examples(p3):
    F = eids(p3, "ab", "bc")
    K = next(K for K in components(p3, F, "a") if K.vertices == vids(p3, "c"))
    assert (K.f_root, K.f_antiroot) == (2, 1)
    assert is_k_congruent(p3, F, "a", K)
    assert is_k_congruent(p3, F, "b", K)


def test_universality_examples(p3, c4):
    umap = universality_map(p3, eids(p3, "ab", "bc"))
    assert umap.pairs[(1, 0)].vertices == vids(p3, "b", "c")
    assert umap.pairs[(2, 1)].vertices == vids(p3, "c")
    assert len(umap.pairs) == 4
    umap = universality_map(c4, eids(c4, ("v1", "v2"), ("v3", "v4")))
    assert len(umap.pairs) == 4 and len(umap.image()) == 4


def test_counts(p3, k2, c4):
    r = check_counts(p3, eids(p3, "ab", "bc"))
    assert list(r.per_root.values()) == [2, 2, 2] and r.union_size == 4
    r = check_counts(k2, eids(k2, "ab"))
    assert list(r.per_root.values()) == [1, 1] and r.union_size == 2
    r = check_counts(c4, eids(c4, ("v1", "v2"), ("v3", "v4")))
    assert list(r.per_root.values()) == [2, 2, 2, 2] and r.union_size == 4


def test_primal_shift_examples(p3, c4):
    F = eids(p3, "ab", "bc")
    comps = components(p3, F, "a")
    bc = next(K for K in comps if K.level == -1)
    rep = check_primal_shift(p3, F, bc)
    assert rep.induced.graph.labels == ("b", "c")
    assert rep.induced.terminals == frozenset({0, 1})
    assert rep.shifts == {1: 0, 2: -1}
    c = next(K for K in comps if K.level == -2)
    assert check_primal_shift(p3, F, c).shifts == {2: 0}
    Fc = eids(c4, ("v1", "v2"), ("v3", "v4"))
    K = noncap(c4, Fc, "v1")[0]
    assert check_primal_shift(c4, Fc, K).shifts == {K.f_root: 0}
