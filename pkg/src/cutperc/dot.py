"""Graphviz DOT export with a two-column bipartite layout."""
from __future__ import annotations

from typing import Hashable, Optional, Sequence

from .bigraph import Bigraph
from .folds import Fold

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
           "#bcbd22", "#7f7f7f")


def color_for(k: int) -> str:
    return PALETTE[k % len(PALETTE)]


def color_order(coloring: Sequence[Hashable]) -> dict:
    """Position of each color in natural order (repr order for mixed types)."""
    values = set(coloring)
    try:
        ordered = sorted(values)
    except TypeError:
        ordered = sorted(values, key=repr)
    return {c: k for k, c in enumerate(ordered)}


def export_dot(G: Bigraph, coloring: Optional[Sequence[Hashable]] = None, fold: Optional[Fold] = None,
               theta: Sequence[str] = (), name: str = "bigraph") -> str:
    fixed = {G.vertices[i] for i in fold.fixed} if fold else set()
    side = {G.vertices[i] for i in fold.side} if fold else set()
    mirror = {G.vertices[i] for i in fold.mirror} if fold else set()
    labels = {v: k for k, v in enumerate(theta)}
    order = color_order(coloring) if coloring is not None else {}
    lines = [f'graph "{name}" {{', "  rankdir=LR;", "  node [shape=circle, style=filled, fillcolor=white];"]
    for part, verts in (("left", G.v1), ("right", G.v2)):
        lines.append(f"  subgraph cluster_{part} {{")
        lines.append(f'    label="{part}"; color=lightgrey; rank=same;')
        for v in verts:
            attrs = []
            if v in fixed:
                attrs += ["fixed=true", "penwidth=3", 'color="#000000"', "shape=doublecircle"]
            elif v in side:
                attrs += ['fillcolor="#dddddd"', "fold_side=L"]
            elif v in mirror:
                attrs += ['fillcolor="#999999"', "fold_side=mirror"]
            if v in labels:
                attrs.append(f'xlabel="{labels[v] + 1}"')
            lines.append(f'    "{v}"' + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
        lines.append("  }")
    for k, (u, v) in enumerate(G.edges):
        if coloring is None:
            lines.append(f'  "{u}" -- "{v}";')
        else:
            c = coloring[k]
            lines.append(f'  "{u}" -- "{v}" [color="{color_for(order[c])}", label="{c}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
