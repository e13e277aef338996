"""Figures written next to command reports."""
from __future__ import annotations

import os
from fractions import Fraction
from typing import Hashable, List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bigraph import Bigraph  # noqa: E402
from .dot import color_for, color_order  # noqa: E402
from .folds import Fold  # noqa: E402


def _save(fig, path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_bigraph(G: Bigraph, path: str, coloring: Optional[Sequence[Hashable]] = None,
                 fold: Optional[Fold] = None, title: str = "") -> str:
    fig, ax = plt.subplots(figsize=(4, max(2.5, 0.6 * max(len(G.v1), len(G.v2)))))
    pos = {}
    for col, verts in ((0.0, G.v1), (1.0, G.v2)):
        for k, v in enumerate(verts):
            pos[v] = (col, -k + (len(verts) - 1) / 2)
    order = color_order(coloring or ())
    for k, (u, v) in enumerate(G.edges):
        color = color_for(order[coloring[k]]) if coloring is not None else "#444444"
        ax.plot([pos[u][0], pos[v][0]], [pos[u][1], pos[v][1]], color=color, lw=2, zorder=1)
    fixed = {G.vertices[i] for i in fold.fixed} if fold else set()
    side = {G.vertices[i] for i in fold.side} if fold else set()
    for v, (x, y) in pos.items():
        face = "#999999" if v in fixed else ("#dddddd" if v in side else "white")
        ax.scatter([x], [y], s=300, c=face, edgecolors="black", linewidths=2 if v in fixed else 1, zorder=2)
        ax.annotate(v, (x, y), xytext=(-14 if x == 0 else 14, 0), textcoords="offset points",
                    ha="right" if x == 0 else "left", va="center", fontsize=8)
    ax.set_axis_off()
    if title:
        ax.set_title(title, fontsize=9)
    return _save(fig, path)


def plot_stage_masses(masses: Sequence[Fraction], path: str, bounds: Sequence[int] = ()) -> str:
    """Objective mass per stage, with the geometric lower bounds for reference."""
    fig, ax = plt.subplots(figsize=(4.5, 3))
    xs = list(range(len(masses)))
    ax.plot(xs, [float(m) for m in masses], "o-", label="stage mass")
    for B in bounds:
        q = 1 - 2.0 ** (-B)
        ax.plot(xs, [1 - q ** n for n in xs], "--", lw=1, label=f"1-(1-2^-{B})^n")
    ax.set_xlabel("stage")
    ax.set_ylabel("mass on objectives")
    ax.set_ylim(0, 1.05)
    ax.legend(fontsize=7)
    return _save(fig, path)


def plot_items(items: List[tuple], path: str, title: str = "") -> str:
    """Bar per harness item: 1 true, 0 false, hatched when not computed."""
    fig, ax = plt.subplots(figsize=(4.5, 2.5))
    for k, value in items:
        if value is None:
            ax.bar(k, 0.5, color="white", edgecolor="grey", hatch="//")
        else:
            ax.bar(k, 1 if value else 0.1, color="#2ca02c" if value else "#d62728")
    ax.set_xticks([k for k, _ in items])
    ax.set_yticks([])
    ax.set_xlabel("item")
    if title:
        ax.set_title(title, fontsize=9)
    return _save(fig, path)
