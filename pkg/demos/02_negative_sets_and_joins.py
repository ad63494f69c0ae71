"""Maximum negative sets can depend on the minimum join.

On the 4-cycle 0-2-1-3-0 with T = {0, 1} there are two minimum joins,
{02, 12} and {03, 13}.  For the base set S = {2} the first join makes both
0 and 1 reachable by negative paths; the second makes neither reachable.
For base sets that are whole Kotzig-Lovasz classes the answer is the same
for every minimum join, which is the case the decomposition results use.
"""

from graft_lab import enumerate_min_joins, kl_decomposition, max_negative_set
from graft_lab.graft_core import Graph, new_graft
from graft_lab.negative_sets import negative_set_oracle

g = Graph.from_labeled_edges("0123", ["02", "03", "12", "13"])
graft = new_graft(g, ["0", "1"])
joins = enumerate_min_joins(graft)

for base in (["2"], ["0", "1"]):
    print(f"base set {base}:")
    for F in joins:
        r = max_negative_set(graft, F, base)
        oracle = negative_set_oracle(graft, F, [graft.vertex(b) for b in base])
        print(f"  join {g.edge_names(F)} -> {g.vertex_names(r.members)}"
              f" (definitional oracle {g.vertex_names(oracle)})")

print("\nKL classes:")
for c in kl_decomposition(graft).classes:
    results = {frozenset(max_negative_set(graft, F, c).members) for F in joins}
    print(f"  {g.vertex_names(c)} -> {[g.vertex_names(x) for x in results]}")
