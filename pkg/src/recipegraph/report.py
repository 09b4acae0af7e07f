"""Render a recipe graph to a figure and a delimited validation report.

Layout convention: actions run left to right in temporal order, foods sit
above the action row, clause vertices below.  The layout is deterministic
so renders of the same graph are comparable across runs.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.patches import FancyArrowPatch

from .graph import (
    ACTION,
    CLAUSE,
    FOOD,
    HAS_OUTPUT,
    INPUT_LABELS,
    ORIGIN_INGREDIENT,
    RecipeGraph,
    TEMPORAL_LABELS,
)
from .ontology import Ontology

_KIND_STYLE = {
    ACTION: {"boxstyle": "square,pad=0.35", "fc": "#cfe3ff", "ec": "#2a5ca8"},
    FOOD: {"boxstyle": "round,pad=0.35", "fc": "#d9f2d0", "ec": "#3c7a2a"},
    CLAUSE: {"boxstyle": "round4,pad=0.3", "fc": "#f4e8c8", "ec": "#9a7d2e"},
}
_ARC_COLOR = {
    "hasDOInput": "#3c7a2a",
    "hasPCInput": "#6aa84f",
    "hasOutput": "#2a5ca8",
    "isBefore": "#888888",
    "isDuring": "#bb6688",
    "isRelatedToClause": "#c8a028",
}


def layout_positions(g: RecipeGraph) -> dict[str, tuple[float, float]]:
    actions = sorted(
        (v.id for v in g.by_kind(ACTION)),
        key=lambda a: (len(g.strict_predecessors(a)), a),
    )
    pos: dict[str, tuple[float, float]] = {}
    for col, act in enumerate(actions):
        pos[act] = (float(col), 0.0)

    placed_foods = 0
    for v in g.by_kind(FOOD):
        producer = g.producer_of(v.id)
        if producer in pos:
            pos[v.id] = (pos[producer][0] + 0.5, 1.0)
        else:
            consumers = [c for c in g.consumers_of(v.id) if c in pos]
            x = min(pos[c][0] for c in consumers) - 0.5 if consumers else -1.0
            pos[v.id] = (x, 2.0 + (placed_foods % 3) * 0.4)
            placed_foods += 1
    for i, v in enumerate(g.by_kind(CLAUSE)):
        linked = [a.source for a in g.in_arcs(v.id, "isRelatedToClause") if a.source in pos]
        x = pos[linked[0]][0] if linked else float(i)
        pos[v.id] = (x, -1.0)
    return pos


def render_figure(g: RecipeGraph, path) -> None:
    pos = layout_positions(g)
    n = max(4, len(g.by_kind(ACTION)) + 1)
    fig, ax = plt.subplots(figsize=(1.9 * n, 6))
    for arc in sorted(g.arcs, key=lambda a: (a.source, a.label, a.target)):
        x1, y1 = pos[arc.source]
        x2, y2 = pos[arc.target]
        patch = FancyArrowPatch(
            (x1, y1),
            (x2, y2),
            arrowstyle="-|>",
            mutation_scale=12,
            color=_ARC_COLOR[arc.label],
            lw=1.2,
            connectionstyle="arc3,rad=0.12",
            alpha=0.85,
        )
        ax.add_patch(patch)
        ax.annotate(
            arc.label,
            ((x1 + x2) / 2, (y1 + y2) / 2),
            fontsize=6,
            color=_ARC_COLOR[arc.label],
            ha="center",
        )
    for vid, (x, y) in pos.items():
        v = g.vertices[vid]
        ax.annotate(
            vid,
            (x, y),
            fontsize=8,
            ha="center",
            va="center",
            bbox=_KIND_STYLE[v.kind],
        )
    xs = [p[0] for p in pos.values()] or [0]
    ys = [p[1] for p in pos.values()] or [0]
    ax.set_xlim(min(xs) - 1, max(xs) + 1)
    ax.set_ylim(min(ys) - 1, max(ys) + 1)
    ax.set_axis_off()
    ax.set_title(g.recipe_id)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def write_report(g: RecipeGraph, ontology: Ontology, out_dir) -> list[Path]:
    """Figure plus tab-delimited validation report; returns written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = g.validate(ontology)

    fig_path = out / f"{g.recipe_id}.png"
    render_figure(g, fig_path)

    violations_path = out / f"{g.recipe_id}_violations.tsv"
    with violations_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter="\t")
        writer.writerow(["rule", "message", "vertices"])
        for rule, message, ids in report.violations:
            writer.writerow([rule, message, " ".join(ids)])

    summary_path = out / f"{g.recipe_id}_summary.tsv"
    with summary_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter="\t")
        writer.writerow(["metric", "value"])
        writer.writerow(["vertex_count", report.vertex_count])
        writer.writerow(["action_count", report.action_count])
        writer.writerow(["ingredient_count", report.ingredient_count])
        writer.writerow(["component_count", report.component_count])
        writer.writerow(["violation_count", len(report.violations)])
        writer.writerow(["version", g.version])
    return [fig_path, violations_path, summary_path]
