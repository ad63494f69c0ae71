import json

import pytest
from hypothesis import given, strategies as st

from graft_lab.errors import FormatError, ParityError
from graft_lab.graft_core import (
    Graph,
    WeightFn,
    graft_from_json,
    induced_graft,
    is_join,
    new_graft,
    weight,
)

from conftest import eids, make, vids


def test_k2_with_both_terminals_is_valid(k2):
    assert k2.terminals == vids(k2, "a", "b")
    assert k2.is_bipartite


def test_odd_terminal_count_rejected():
    with pytest.raises(ParityError):
        make("abc", ["ab", "bc"], "a")


def test_parity_error_names_the_odd_component():
    with pytest.raises(ParityError) as info:
        make("abcd", ["ab", "cd"], "abc")
    g = info.value
    assert g.component == frozenset({2, 3})


@pytest.mark.parametrize("edges", [["aa"], ["ab", "ba"], ["ab", "ab"]])
def test_loops_and_parallel_edges_rejected(edges):
    with pytest.raises(FormatError):
        make("ab", edges)


def test_unknown_terminal_rejected():
    with pytest.raises(FormatError):
        make("ab", ["ab"], "z")


def test_is_join_examples(k2, p3):
    assert is_join(k2, eids(k2, "ab"))
    assert not is_join(k2, set())
    assert is_join(p3, eids(p3, "ab", "bc"))
    assert not is_join(p3, eids(p3, "ab"))


def test_weight_examples(p3, c4):
    w = WeightFn(eids(p3, "ab", "bc"))
    assert weight(w, eids(p3, "ab", "bc")) == -2
    assert weight(w, set()) == 0
    wc = WeightFn(eids(c4, ("v1", "v2"), ("v3", "v4")))
    assert weight(wc, range(4)) == 0


def test_induced_graft_examples(p3):
    F = eids(p3, "ab", "bc")
    sub = induced_graft(p3, F, vids(p3, "b", "c"))
    assert sub.graph.labels == ("b", "c")
    assert sub.graph.m == 1
    assert sub.terminals == frozenset({0, 1})
    empty = induced_graft(p3, F, set())
    assert empty.graph.n == 0
    ac = induced_graft(p3, F, vids(p3, "a", "c"))
    assert ac.graph.m == 0 and not ac.terminals


def test_json_round_trip(c4):
    again = graft_from_json(json.dumps(c4.to_json()))
    assert again.to_json() == c4.to_json()
    assert json.loads(str(c4)) == c4.to_json()


def test_bad_json_rejected():
    with pytest.raises(FormatError):
        graft_from_json({"edges": []})
    with pytest.raises(FormatError):
        graft_from_json({"vertices": ["a"], "edges": [["a", "b"]]})


@given(st.sets(st.integers(0, 9)), st.sets(st.integers(0, 9)), st.sets(st.integers(0, 9)))
def test_weight_is_additive_over_disjoint_sets(F, s1, s2):
    s2 = s2 - s1
    w = WeightFn(frozenset(F))
    assert weight(w, s1 | s2) == weight(w, s1) + weight(w, s2)


@st.composite
def graft_with_join_and_subset(draw):
    n = draw(st.integers(1, 7))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    graph = Graph(tuple(map(str, range(n))), tuple(edges))
    fmask = draw(st.integers(0, (1 << len(edges)) - 1)) if edges else 0
    odd = graph.odd_set(fmask)
    graft = new_graft(graph, [v for v in range(n) if odd >> v & 1])
    X = draw(st.sets(st.integers(0, n - 1)))
    F = frozenset(e for e in range(len(edges)) if fmask >> e & 1)
    return graft, F, X


@given(graft_with_join_and_subset())
def test_induced_graft_always_satisfies_parity(case):
    graft, F, X = case
    sub = induced_graft(graft, F, X)
    for comp in sub.graph.component_masks:
        assert (comp & sub.tmask).bit_count() % 2 == 0
