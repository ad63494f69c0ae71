import json

import pytest

from graft_lab.errors import SizeError
from graft_lab.harness.dot import export_dot
from graft_lab.harness.generate import CorpusSpec, generate, labeled_bipartite_graphs
from graft_lab.harness.suite import CHECKS, Violation, check_graft, replay, run_suite

from conftest import eids, make


def test_exhaustive_up_to_two_vertices():
    grafts = [g.to_json() for g in generate(CorpusSpec(max_vertices=2))]
    assert grafts == [
        {"vertices": ["0"], "edges": [], "terminals": []},
        {"vertices": ["0", "1"], "edges": [["0", "1"]], "terminals": []},
        {"vertices": ["0", "1"], "edges": [["0", "1"]], "terminals": ["0", "1"]},
    ]


def test_even_cycles_up_to_six():
    grafts = list(generate(CorpusSpec(max_vertices=6, classes=("even_cycles",))))
    # 2^3 even terminal sets on C4, 2^5 on C6
    assert len(grafts) == 8 + 32
    assert {g.graph.n for g in grafts} == {4, 6}


def test_labeled_connected_bipartite_counts():
    # labelled connected bipartite graphs on n vertices: 1, 1, 3, 19, 195, 3031
    assert [sum(1 for _ in labeled_bipartite_graphs(n)) for n in range(1, 7)] == [1, 1, 3, 19, 195, 3031]


def test_tree_and_grid_classes():
    trees = list(generate(CorpusSpec(max_vertices=4, min_vertices=4, classes=("trees",))))
    assert len(trees) == 16 * 8
    grids = {g.graph.n for g in generate(CorpusSpec(max_vertices=6, classes=("grids",)))}
    assert grids == {4, 6}


def test_random_corpus_is_deterministic():
    spec = CorpusSpec(mode="random", max_vertices=10, count=10, seed=7,
                      classes=("general_bipartite", "trees", "even_cycles", "grids"))
    a = [g.to_json() for g in generate(spec)]
    b = [g.to_json() for g in generate(spec)]
    assert a == b and len(a) == 10
    for g in generate(spec):
        assert g.is_bipartite and len(g.graph.component_masks) == 1


@pytest.mark.parametrize("spec", [
    CorpusSpec(max_vertices=8),
    CorpusSpec(mode="random", max_vertices=65),
    CorpusSpec(mode="random", max_vertices=1),
])
def test_absurd_bounds(spec):
    with pytest.raises(SizeError):
        list(generate(spec))


def test_p3_passes_every_check(p3):
    assert check_graft(p3) == []


def test_corrupted_join_is_flagged():
    c4 = make(["v1", "v2", "v3", "v4"], [("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1")], ["v1", "v2"])
    bad = eids(c4, ("v2", "v3"), ("v3", "v4"), ("v4", "v1"))
    found = check_graft(c4, ["min_join_conservative"], joins=[bad])
    assert [v.check for v in found] == ["min_join_conservative"]
    assert found[0].params["minimum"] is False
    assert replay(found[0])
    assert replay(json.loads(json.dumps(found[0].to_json())))


def test_replay_of_a_clean_record_does_not_reproduce(p3):
    v = Violation("cut_law", p3.to_json(), {}, "fabricated")
    assert not replay(v)


def test_suite_small_corpus_is_clean_and_deterministic():
    a = run_suite(CorpusSpec(max_vertices=4), threads=1)
    b = run_suite(CorpusSpec(max_vertices=4), threads=1)
    assert a.ok and a.grafts == b.grafts == 1 + 1 * 2 + 3 * 4 + 19 * 8
    assert set(a.checks) == set(CHECKS)
    assert a.to_json()["checks"] == b.to_json()["checks"]


def test_suite_with_worker_pool_matches_serial():
    spec = CorpusSpec(max_vertices=4, classes=("general_bipartite", "even_cycles"))
    serial = run_suite(spec, threads=1)
    pooled = run_suite(spec, threads=2)
    assert pooled.grafts == serial.grafts and pooled.ok


def test_unknown_check_rejected():
    with pytest.raises(ValueError):
        run_suite(CorpusSpec(max_vertices=2), ["nope"])


def test_dot_export(p3):
    text = export_dot(p3, sum(1 << e for e in eids(p3, "ab", "bc")), root=0)
    assert text.startswith("graph graft {")
    assert text.count("subgraph cluster_") == 2
    assert '"a" -- "b" [penwidth=3, color=red];' in text
