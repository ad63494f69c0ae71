import pytest

from graft_lab.graft_core import Graph, new_graft


def make(vertices, edges, terminals=()):
    return new_graft(Graph.from_labeled_edges(vertices, edges), [str(t) for t in terminals])


def eids(graft, *pairs):
    """Edge ids of labelled pairs like ``"ab"`` or ``("v1", "v2")``."""
    g = graft.graph
    out = set()
    for p in pairs:
        u, v = (graft.vertex(p[0]), graft.vertex(p[1]))
        for e, (a, b) in enumerate(g.edges):
            if {a, b} == {u, v}:
                out.add(e)
                break
        else:
            raise KeyError(p)
    return frozenset(out)


def vids(graft, *labels):
    return frozenset(graft.vertex(v) for v in labels)


@pytest.fixture
def p3():
    return make("abc", ["ab", "bc"], "ac")


@pytest.fixture
def k2():
    return make("ab", ["ab"], "ab")


@pytest.fixture
def k2_empty():
    return make("ab", ["ab"], "")


@pytest.fixture
def c4():
    vs = ["v1", "v2", "v3", "v4"]
    return make(vs, [("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1")], vs)


# acceptance lines, printed once at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
