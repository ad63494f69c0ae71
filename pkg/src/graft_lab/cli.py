"""graft-lab command line: solve, inspect and verify grafts given as JSON.

Input files hold ``{"vertices": [...], "edges": [[u, v], ...], "terminals": [...]}``
with external vertex labels; every output uses the same labels.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ._bits import bits, to_mask
from .decomposition import components
from .distance import distance_matrix, stratify
from .errors import CapExceeded, GraftError, PreconditionError
from .graft_core import Graft, is_join, load_graft
from .harness.dot import export_dot
from .harness.generate import CLASSES, CorpusSpec, generate
from .harness.suite import CHECKS, run_suite
from .join_solver import (
    ENUMERATION_CAP,
    allowed_edges,
    brute_force_min_join,
    canonical_min_join,
    enumerate_min_joins,
    nu,
)
from .kl_decomp import component_classes, kl_decomposition
from .negative_sets import max_negative_set


def _labels(values: str | None) -> list[str]:
    return [v for v in (values or "").split(",") if v]


def _join_mask(graft: Graft, spec: str | None) -> int:
    """``a:b,b:c`` to an edge mask; the canonical minimum join when absent."""
    if spec is None:
        return to_mask(canonical_min_join(graft))
    g = graft.graph
    lookup = {}
    for e, (u, v) in enumerate(g.edges):
        lookup[(u, v)] = lookup[(v, u)] = e
    mask = 0
    for item in _labels(spec):
        a, sep, b = item.partition(":")
        key = (graft.vertex(a), graft.vertex(b))
        if not sep or key not in lookup:
            raise PreconditionError(f"no edge {item!r}")
        mask |= 1 << lookup[key]
    if not is_join(graft, list(bits(mask))) or mask.bit_count() != nu(graft):
        raise PreconditionError("--join is not a minimum join")
    return mask


def _names(graft: Graft, mask: int) -> list[str]:
    return graft.graph.vertex_names(bits(mask))


def _component_json(graft: Graft, K) -> dict:
    g = graft.graph
    out = {
        "level": K.level,
        "vertices": _names(graft, K.mask),
        "capital": K.capital,
        "A": _names(graft, K.ak_mask),
        "D_components": [_names(graft, m) for m in K.dk_masks],
    }
    if K.beam is not None:
        out["beam"] = g.edge_names([K.beam])[0]
        out["f_root"] = g.labels[K.f_root]
        out["f_antiroot"] = g.labels[K.f_antiroot]
    return out


def cmd_solve_join(args) -> dict:
    graft = load_graft(args.input)
    g = graft.graph
    out = {"nu": nu(graft)}
    if args.enumerate:
        try:
            joins, truncated = enumerate_min_joins(graft, cap=args.cap), False
        except CapExceeded as exc:
            joins, truncated = exc.partial, True
        out["joins"] = [g.edge_names(f) for f in joins]
        out["truncated"] = truncated
        out["allowed_edges"] = g.edge_names(allowed_edges(graft))
    else:
        out["joins"] = [g.edge_names(canonical_min_join(graft))]
    if args.oracle:
        out["oracle_nu"] = brute_force_min_join(graft).nu
    return out


def cmd_distances(args) -> dict:
    graft = load_graft(args.input)
    g = graft.graph
    D = distance_matrix(graft)
    table = {g.labels[x]: {g.labels[y]: d for y, d in enumerate(row) if d is not None} for x, row in enumerate(D)}
    if args.root is None:
        return {"table": table}
    st = stratify(graft, args.root)
    return {
        "root": args.root,
        "interval": list(st.interval),
        "levels": {str(i): _names(graft, st.level_masks[i]) for i in st.interval},
        "table": table[g.labels[st.root]],
    }


def cmd_components(args) -> dict:
    graft = load_graft(args.input)
    g = graft.graph
    fmask = _join_mask(graft, args.join)
    roots = range(g.n) if args.all_roots else [graft.vertex(args.root)]
    return {
        "join": g.edge_names(bits(fmask)),
        "roots": {g.labels[r]: [_component_json(graft, K) for K in components(graft, fmask, r)] for r in roots},
    }


def cmd_kl(args) -> dict:
    graft = load_graft(args.input)
    g = graft.graph
    kl = kl_decomposition(graft)
    out = {
        "allowed_edges": g.edge_names(bits(kl.allowed)),
        "factor_components": [_names(graft, m) for m in kl.fc_masks],
        "classes": {kl.class_id(c): _names(graft, m) for c, m in enumerate(kl.class_masks)},
        "class_of": {g.labels[v]: c for v, c in kl.class_of.items()},
    }
    if args.root is not None and graft.is_bipartite:
        fmask = _join_mask(graft, args.join)
        shores = []
        for K in components(graft, fmask, graft.vertex(args.root)):
            if K.capital:
                continue
            cc = component_classes(graft, fmask, K, kl)
            shores.append({
                "component": _names(graft, K.mask),
                "level": K.level,
                "root_class": _names(graft, cc.root_class_mask),
                "antiroot_class": _names(graft, cc.antiroot_class_mask),
                "root_fragment": _names(graft, cc.fragment_mask),
                "ak_family": [_names(graft, m) for m in cc.family_masks],
            })
        out["decapital"] = shores
    return out


def cmd_negset(args) -> dict:
    graft = load_graft(args.input)
    g = graft.graph
    fmask = _join_mask(graft, args.join)
    res = max_negative_set(graft, fmask, _labels(args.base), _labels(args.avoid))
    return {
        "set": g.vertex_names(res.members),
        "witnesses": {g.labels[x]: [g.labels[v] for v in p] for x, p in sorted(res.witnesses.items())},
    }


def cmd_gen(args) -> list[dict]:
    spec = CorpusSpec(
        mode=args.mode, max_vertices=args.max_vertices, min_vertices=args.min_vertices,
        max_edges=args.max_edges, count=args.count, seed=args.seed, classes=tuple(args.classes.split(",")),
    )
    return [gr.to_json() for gr in generate(spec)]


def cmd_export_dot(args) -> str:
    graft = load_graft(args.input)
    fmask = _join_mask(graft, args.join)
    root = None if args.root is None else graft.vertex(args.root)
    return export_dot(graft, fmask, root)


def cmd_verify(args) -> tuple[dict, bool]:
    checks = None if args.checks == "all" else _labels(args.checks)
    classes = tuple(args.classes.split(","))
    if args.random_count:
        spec = CorpusSpec(mode="random", max_vertices=args.max_vertices, count=args.random_count,
                          seed=args.seed, classes=classes)
    else:
        spec = CorpusSpec(max_vertices=args.exhaustive_n, classes=classes)
    report = run_suite(spec, checks, threads=args.threads, cap=args.cap)
    out = report.to_json()
    out["corpus"] = spec.__dict__ | {"classes": list(spec.classes)}
    return out, report.ok


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="graft-lab", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    def with_input(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("--input", required=True, type=Path, help="graft JSON file")
        return p

    def with_join(p: argparse.ArgumentParser) -> None:
        p.add_argument("--join", help="minimum join as u:v,... (default: lexicographically first)")

    p = with_input("solve-join", "minimum join size and a representative")
    p.add_argument("--enumerate", action="store_true", help="list every minimum join and the allowed edges")
    p.add_argument("--oracle", action="store_true", help="also report the brute-force nu")
    p.add_argument("--cap", type=int, default=ENUMERATION_CAP)
    p.set_defaults(run=cmd_solve_join)

    p = with_input("distances", "F-distance matrix or one row")
    p.add_argument("--root")
    p.set_defaults(run=cmd_distances)

    p = with_input("components", "distance components for a root")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--root")
    group.add_argument("--all-roots", action="store_true")
    with_join(p)
    p.set_defaults(run=cmd_components)

    p = with_input("kl", "factor-components and Kotzig-Lovasz classes")
    p.add_argument("--root", help="also report root/antiroot classes of each decapital component")
    with_join(p)
    p.set_defaults(run=cmd_kl)

    p = with_input("negset", "maximum negative set for --base avoiding --avoid")
    p.add_argument("--base", required=True, help="comma-separated labels")
    p.add_argument("--avoid", default="", help="comma-separated labels")
    with_join(p)
    p.set_defaults(run=cmd_negset)

    p = sub.add_parser("verify", help="run the check suite over a corpus")
    p.add_argument("--exhaustive-n", type=int, default=5, help="every graft on at most this many vertices")
    p.add_argument("--random-count", type=int, default=0, help="sample this many random grafts instead")
    p.add_argument("--max-vertices", type=int, default=10, help="vertex bound for --random-count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--checks", default="all", help="'all' or comma-separated ids: " + ", ".join(CHECKS))
    p.add_argument("--classes", default="general_bipartite", help=",".join(CLASSES))
    p.add_argument("--threads", type=int, default=None, help="worker processes (default: GRAFT_LAB_THREADS or cpus)")
    p.add_argument("--cap", type=int, default=ENUMERATION_CAP, help="minimum joins checked per graft")
    p.add_argument("--report", type=Path, help="write the JSON report here")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("gen", help="emit a corpus as JSON lines")
    p.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--max-vertices", type=int, default=4)
    p.add_argument("--min-vertices", type=int, default=1)
    p.add_argument("--max-edges", type=int)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--classes", default="general_bipartite", help=",".join(CLASSES))
    p.set_defaults(run=cmd_gen)

    p = with_input("export-dot", "Graphviz rendering of join, classes and decapital components")
    p.add_argument("--root")
    p.add_argument("--output", type=Path)
    with_join(p)
    p.set_defaults(run=cmd_export_dot)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.run(args)
    except (GraftError, OSError, ValueError) as exc:
        print(f"graft-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.command == "verify":
        report, ok = result
        text = json.dumps(report, indent=2)
        if args.report:
            args.report.write_text(text + "\n")
            summary = {k: v["violations"] for k, v in report["checks"].items()}
            print(json.dumps({"grafts": report["grafts"], "seconds": report["seconds"], "violations": summary}))
        else:
            print(text)
        return 0 if ok else 1
    if args.command == "gen":
        for row in result:
            print(json.dumps(row))
    elif args.command == "export-dot":
        if args.output:
            args.output.write_text(result)
        else:
            sys.stdout.write(result)
    else:
        print(json.dumps(result, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
