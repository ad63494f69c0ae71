import pytest

from graft_lab.errors import CapExceeded, SizeError
from graft_lab.harness.generate import CorpusSpec, generate, grid_graph
from graft_lab.graft_core import is_join, new_graft
from graft_lab.join_solver import (
    _closure_min_joins,
    allowed_edges,
    allowed_edges_by_membership,
    brute_force_min_join,
    canonical_min_join,
    enumerate_min_joins,
    is_conservative,
    min_join,
    min_join_masks,
    nu,
)

from conftest import eids, make


def test_min_join_examples(k2, p3, c4):
    assert min_join(k2).nu == 1 and min_join(k2).join == eids(k2, "ab")
    r = min_join(p3)
    assert (r.nu, r.join, r.method) == (2, eids(p3, "ab", "bc"), "exact_matching")
    r = min_join(c4)
    assert r.nu == 2
    assert r.join in (eids(c4, ("v1", "v2"), ("v3", "v4")), eids(c4, ("v2", "v3"), ("v4", "v1")))


def test_brute_force_examples(k2_empty, p3, c4):
    assert brute_force_min_join(k2_empty).nu == 0
    assert brute_force_min_join(k2_empty).join == frozenset()
    assert brute_force_min_join(p3).nu == 2
    assert brute_force_min_join(c4).method == "brute_force"
    assert len(enumerate_min_joins(c4)) == 2


def test_enumerate_examples(k2, p3, c4):
    assert enumerate_min_joins(p3) == [eids(p3, "ab", "bc")]
    assert enumerate_min_joins(k2) == [eids(k2, "ab")]
    assert sorted(map(sorted, enumerate_min_joins(c4))) == [[0, 2], [1, 3]]
    assert enumerate_min_joins(c4, method="closure") == enumerate_min_joins(c4)


def test_enumeration_cap_signals_truncation():
    grid = new_graft(grid_graph(3, 3), [0, 8])
    total = len(min_join_masks(grid))
    assert total == 6
    with pytest.raises(CapExceeded) as info:
        enumerate_min_joins(grid, cap=2)
    assert len(info.value.partial) == 2


def test_conservative_examples(p3, c4):
    assert is_conservative(p3, eids(p3, "ab", "bc"))
    assert is_conservative(c4, eids(c4, ("v1", "v2"), ("v3", "v4")))
    assert not is_conservative(c4, eids(c4, ("v1", "v2"), ("v2", "v3"), ("v3", "v4")))


def test_allowed_edges_examples(p3, c4, k2_empty):
    assert allowed_edges(p3) == eids(p3, "ab", "bc")
    assert allowed_edges(c4) == frozenset(range(4))
    assert allowed_edges(k2_empty) == frozenset()


def test_canonical_join_is_lexicographically_first(c4):
    assert canonical_min_join(c4) == frozenset({0, 2})


def test_matching_bound():
    g = make([str(i) for i in range(22)], [(str(i), str(i + 1)) for i in range(21)], [str(i) for i in range(22)])
    with pytest.raises(SizeError):
        nu(g)
    with pytest.raises(SizeError):
        brute_force_min_join(g)


def test_solver_against_oracle_small_corpus():
    for graft in generate(CorpusSpec(max_vertices=5)):
        r = min_join(graft)
        assert r.nu == brute_force_min_join(graft).nu
        assert is_join(graft, r.join) and len(r.join) == r.nu
        assert is_conservative(graft, r.join)
        assert allowed_edges(graft) == allowed_edges_by_membership(graft)
        assert sorted(_closure_min_joins(graft, 10**6)) == sorted(min_join_masks(graft))


def test_non_bipartite_graft_is_solved():
    tri = make("abc", ["ab", "bc", "ca"], "ab")
    assert nu(tri) == 1
    assert enumerate_min_joins(tri) == [eids(tri, "ab")]
