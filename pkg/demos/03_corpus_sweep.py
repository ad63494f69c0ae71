"""Run the whole check suite over every bipartite graft on at most five vertices."""

import sys

from graft_lab.harness import CHECKS, CorpusSpec, run_suite

n = int(sys.argv[1]) if len(sys.argv) > 1 else 5
report = run_suite(CorpusSpec(max_vertices=n), threads=1)
print(f"{report.grafts} grafts in {report.seconds:.1f}s")
for name, stats in report.checks.items():
    print(f"  {name:24s} {len(stats.violations):5d} violations   {CHECKS[name]}")
sys.exit(0 if report.ok else 1)
