"""Structural comparison of recipe graphs.

Auto-generated vertex ids differ between annotation runs, so graphs are
compared through a structural correspondence: clauses by their stable ids,
actions through their clause link, outputs through their producing action,
and remaining foods by concept and label.
"""

from __future__ import annotations

from typing import Optional

from .graph import (
    ACTION,
    CLAUSE,
    FOOD,
    HAS_OUTPUT,
    INPUT_LABELS,
    ORIGIN_INGREDIENT,
    RecipeGraph,
)


def structural_map(g1: RecipeGraph, g2: RecipeGraph) -> dict[str, str]:
    """Partial correspondence from g1 vertex ids to g2 vertex ids."""
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def bind(a: str, b: str) -> None:
        if a not in mapping and b not in used:
            mapping[a] = b
            used.add(b)

    for c1 in g1.by_kind(CLAUSE):
        if c1.id in g2.vertices and g2.vertices[c1.id].kind == CLAUSE:
            bind(c1.id, c1.id)

    def actions_by_clause(g: RecipeGraph) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for a in g.by_kind(ACTION):
            clause = g.clause_of(a.id)
            if clause is not None:
                out.setdefault(clause, []).append(a.id)
        return out

    acts1, acts2 = actions_by_clause(g1), actions_by_clause(g2)
    for clause, ids1 in sorted(acts1.items()):
        ids2 = acts2.get(mapping.get(clause, clause), [])
        for a1, a2 in zip(ids1, ids2):
            if g1.vertices[a1].concept == g2.vertices[a2].concept:
                bind(a1, a2)

    # outputs follow their producing action
    for a1, a2 in list(mapping.items()):
        if g1.vertices[a1].kind != ACTION:
            continue
        for o1, o2 in zip(g1.outputs_of(a1), g2.outputs_of(a2)):
            bind(o1, o2)

    # ingredient-list foods by concept and label
    def ingredient_key(g: RecipeGraph, fid: str):
        v = g.vertices[fid]
        return (v.concept or "", v.label or "")

    ing1 = sorted(
        (f.id for f in g1.by_kind(FOOD) if f.origin == ORIGIN_INGREDIENT),
        key=lambda fid: ingredient_key(g1, fid),
    )
    ing2 = sorted(
        (f.id for f in g2.by_kind(FOOD) if f.origin == ORIGIN_INGREDIENT),
        key=lambda fid: ingredient_key(g2, fid),
    )
    for f1, f2 in zip(ing1, ing2):
        if ingredient_key(g1, f1) == ingredient_key(g2, f2):
            bind(f1, f2)

    # leftover foods (danglings, user additions) through their consumers
    for a1, a2 in list(mapping.items()):
        if g1.vertices[a1].kind != ACTION:
            continue
        rest1 = [f for f in g1.inputs_of(a1) if f not in mapping]
        rest2 = [f for f in g2.inputs_of(a2) if f not in used]
        for f1, f2 in zip(rest1, rest2):
            v1, v2 = g1.vertices[f1], g2.vertices[f2]
            if (v1.concept, v1.label) == (v2.concept, v2.label):
                bind(f1, f2)
    return mapping


def graphs_equivalent(g1: RecipeGraph, g2: RecipeGraph) -> bool:
    """True when the graphs are isomorphic up to auto-generated vertex ids."""
    if len(g1.vertices) != len(g2.vertices) or len(g1.arcs) != len(g2.arcs):
        return False
    mapping = structural_map(g1, g2)
    if len(mapping) != len(g1.vertices):
        return False
    for vid, other in mapping.items():
        v1, v2 = g1.vertices[vid], g2.vertices[other]
        if (v1.kind, v1.concept, v1.origin, v1.label) != (
            v2.kind,
            v2.concept,
            v2.origin,
            v2.label,
        ):
            return False
    arcs1 = {(mapping[a.source], mapping[a.target], a.label) for a in g1.arcs}
    arcs2 = {(a.source, a.target, a.label) for a in g2.arcs}
    return arcs1 == arcs2
