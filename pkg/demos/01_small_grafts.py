"""Walk through the path a-b-c and the 4-cycle with every vertex a terminal.

Shows the minimum joins, the distance table, the distance components of one
root with their beams, and the Kotzig-Lovasz classes.
"""

from graft_lab import components, distance_matrix, enumerate_min_joins, kl_decomposition, nu
from graft_lab.graft_core import Graph, new_graft


def show(title, graft, root):
    g = graft.graph
    print(f"== {title}")
    joins = enumerate_min_joins(graft)
    print(f"nu = {nu(graft)}; minimum joins: {[g.edge_names(f) for f in joins]}")
    D = distance_matrix(graft)
    print("distances from", g.labels[root], {g.labels[x]: D[root][x] for x in range(g.n)})
    F = joins[0]
    for K in components(graft, F, root):
        tag = "capital" if K.capital else f"decapital, beam {g.edge_names([K.beam])[0]}"
        print(f"  level {K.level:+d}: {g.vertex_names(K.vertices)} ({tag})")
    kl = kl_decomposition(graft)
    print("KL classes:", [g.vertex_names(c) for c in kl.classes])
    print()


path = new_graft(Graph.from_labeled_edges("abc", ["ab", "bc"]), ["a", "c"])
show("path a-b-c, T = {a, c}", path, 0)

square = Graph.from_labeled_edges(["v1", "v2", "v3", "v4"], [("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1")])
show("4-cycle, T = all", new_graft(square, range(4)), 0)
