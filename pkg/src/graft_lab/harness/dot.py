"""Graphviz DOT rendering of a graft with its join and decomposition."""

from __future__ import annotations

from .._bits import bits
from ..decomposition import components
from ..graft_core import Graft
from ..kl_decomp import kl_decomposition

_PALETTE = ("#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
            "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f")


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(graft: Graft, fmask: int, root: int | None = None) -> str:
    """DOT text: terminals double-circled, KL classes as fill colours, join
    edges bold.  With ``root``, decapital components become dashed clusters
    (one per vertex set, deepest level) and their beams are drawn in red."""
    g = graft.graph
    kl = kl_decomposition(graft)
    lines = ["graph graft {", "  node [style=filled];"]
    decap = []
    beams = set()
    if root is not None and graft.is_bipartite:
        seen = set()
        for K in components(graft, fmask, root, strict=False):
            if K.capital or K.mask in seen:
                continue
            seen.add(K.mask)
            decap.append(K)
            if K.beam is not None:
                beams.add(K.beam)
    for i, K in enumerate(decap):
        lines.append(f"  subgraph cluster_{i} {{")
        lines.append(f'    label="level {K.level}"; style=dashed;')
        lines.append("    " + " ".join(_q(g.labels[v]) + ";" for v in bits(K.mask)))
        lines.append("  }")
    for v in range(g.n):
        attrs = [f'fillcolor="{_PALETTE[kl.class_index[v] % len(_PALETTE)]}"']
        if v in graft.terminals:
            attrs.append("shape=doublecircle")
        if v == root:
            attrs.append("penwidth=3")
        lines.append(f"  {_q(g.labels[v])} [{', '.join(attrs)}];")
    for e, (u, v) in enumerate(g.edges):
        attrs = []
        if fmask >> e & 1:
            attrs.append("penwidth=3")
        if e in beams:
            attrs.append("color=red")
        elif not kl.allowed >> e & 1:
            attrs.append("style=dotted")
        tail = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {_q(g.labels[u])} -- {_q(g.labels[v])}{tail};")
    lines.append("}")
    return "\n".join(lines) + "\n"
