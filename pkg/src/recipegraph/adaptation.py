"""Prune/graft adaptation: swap one ingredient's preparation sequence for a
donor recipe's, keeping graph and text in sync through the clause mapping."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from . import textproc
from .annotator import Recipe
from .graph import (
    ACTION,
    CLAUSE,
    FOOD,
    HAS_OUTPUT,
    INPUT_LABELS,
    IS_BEFORE,
    IS_DURING,
    ORIGIN_INGREDIENT,
    RELATED_TO_CLAUSE,
    Arc,
    GraphError,
    RecipeGraph,
    Vertex,
)
from .ontology import Ontology


class AdaptationError(ValueError):
    pass


@dataclass(frozen=True)
class AdaptationRequest:
    alpha: str  # food concept to remove
    beta: str  # food concept to insert
    donor_recipe_id: str


@dataclass(frozen=True)
class TextPatch:
    start: int
    end: int
    replacement: str

    def to_document(self) -> dict:
        return {"start": self.start, "end": self.end, "replacement": self.replacement}


@dataclass
class Branch:
    seed_foods: list[str]
    actions: list[str]  # in temporal order
    outputs: list[str]
    clauses: list[str]
    cut_arc: Arc  # input arc from the branch's final output into the merge action

    @property
    def vertices(self) -> set[str]:
        return set(self.seed_foods) | set(self.actions) | set(self.outputs) | set(self.clauses)

    @property
    def final_output(self) -> str:
        return self.cut_arc.target


@dataclass
class AdaptationResult:
    graph: RecipeGraph
    patches: list[TextPatch]
    text: str
    dropped_arcs: list[Arc] = field(default_factory=list)

    def to_document(self) -> dict:
        return {
            "graph": self.graph.to_document(),
            "text": self.text,
            "patches": [p.to_document() for p in self.patches],
        }


def extract_branch(g: RecipeGraph, alpha: str, ontology: Ontology) -> Branch:
    """The maximal sub-graph of actions whose inputs all trace back to the
    ingredient ``alpha`` alone, plus the arc where its result merges in."""
    seeds = sorted(
        v.id
        for v in g.vertices.values()
        if v.kind == FOOD
        and v.origin == ORIGIN_INGREDIENT
        and v.concept is not None
        and ontology.is_a(v.concept, alpha)
    )
    if not seeds:
        raise AdaptationError(f"no ingredient under {alpha!r} in recipe {g.recipe_id!r}")

    branch_foods = set(seeds)
    actions: list[str] = []
    changed = True
    while changed:
        changed = False
        for act in g.by_kind(ACTION):
            if act.id in actions:
                continue
            inputs = g.inputs_of(act.id)
            if inputs and set(inputs) <= branch_foods:
                actions.append(act.id)
                branch_foods.update(g.outputs_of(act.id))
                changed = True
    outputs = [o for a in actions for o in g.outputs_of(a)]
    clauses = sorted(
        {c for a in actions if (c := g.clause_of(a)) is not None}, key=_clause_index
    )

    in_branch = set(actions)
    exit_arcs = sorted(
        (
            a
            for a in g.arcs
            if a.label in INPUT_LABELS
            and a.target in branch_foods
            and a.source not in in_branch
        ),
        key=lambda a: (len(g.strict_predecessors(a.source)), a.source, a.label),
    )
    if not exit_arcs:
        raise AdaptationError(
            f"ingredient {alpha!r} never merges with the rest of the recipe; nothing to cut"
        )
    # order branch actions temporally for deterministic grafting
    actions.sort(key=lambda a: (len(g.strict_predecessors(a)), a))
    return Branch(
        seed_foods=seeds,
        actions=actions,
        outputs=outputs,
        clauses=clauses,
        cut_arc=exit_arcs[0],
    )


def _clause_index(clause_id: str) -> int:
    m = re.search(r"(\d+)$", clause_id)
    return int(m.group(1)) if m else 0


def adapt(
    g: RecipeGraph,
    request: AdaptationRequest,
    donor_graph: RecipeGraph,
    recipe: Recipe,
    donor_recipe: Recipe,
    ontology: Ontology,
) -> AdaptationResult:
    a_branch = extract_branch(g, request.alpha, ontology)
    b_branch = extract_branch(donor_graph, request.beta, ontology)

    out = g.copy()
    out.version = g.version + 1

    # temporal context of the pruned branch
    branch_actions = set(a_branch.actions)
    preds_outside = sorted(
        {
            a.source
            for a in g.arcs
            if a.label == IS_BEFORE and a.target in branch_actions and a.source not in branch_actions
        }
    )
    succs_outside = sorted(
        {
            a.target
            for a in g.arcs
            if a.label == IS_BEFORE and a.source in branch_actions and a.target not in branch_actions
        }
    )
    dropped = [
        a
        for a in sorted(g.arcs, key=lambda a: (a.source, a.label, a.target))
        if a.label == IS_DURING and (a.source in branch_actions) != (a.target in branch_actions)
    ]

    for vid in sorted(a_branch.vertices):
        out.remove_vertex(vid)

    # import the donor branch under fresh ids
    mapping: dict[str, str] = {}
    next_clause = max(
        (_clause_index(v.id) for v in out.vertices.values() if v.kind == CLAUSE),
        default=0,
    )
    for cid in b_branch.clauses:
        next_clause += 1
        v = donor_graph.vertices[cid]
        mapping[cid] = f"{CLAUSE}:c_{next_clause}"
        out.add_vertex(Vertex(id=mapping[cid], kind=CLAUSE, text_span=v.text_span))
    for vid in b_branch.seed_foods + b_branch.actions + b_branch.outputs:
        v = donor_graph.vertices[vid]
        lexeme = vid.split(":", 1)[1].rsplit("_", 1)[0]
        mapping[vid] = out.fresh_id(v.kind, lexeme)
        out.add_vertex(
            Vertex(
                id=mapping[vid],
                kind=v.kind,
                concept=v.concept,
                origin=v.origin,
                label=v.label,
            )
        )
    imported = b_branch.vertices
    for arc in sorted(donor_graph.arcs, key=lambda a: (a.source, a.label, a.target)):
        if arc.source in imported and arc.target in imported:
            out.add_arc(mapping[arc.source], mapping[arc.target], arc.label)

    # rewire the merge point with the slot the pruned output occupied
    out.add_arc(a_branch.cut_arc.source, mapping[b_branch.final_output], a_branch.cut_arc.label)

    # stitch temporal order: the graft occupies the pruned branch's position
    b_actions = [mapping[a] for a in b_branch.actions]
    b_roots = [
        a
        for a in b_actions
        if not any(x.label == IS_BEFORE and x.target == a and x.source in b_actions for x in out.arcs)
    ]
    b_leaves = [
        a
        for a in b_actions
        if not any(x.label == IS_BEFORE and x.source == a and x.target in b_actions for x in out.arcs)
    ]
    for pred in preds_outside:
        for root in b_roots:
            if Arc(pred, root, IS_BEFORE) not in out.arcs:
                out.add_arc(pred, root, IS_BEFORE)
    for succ in succs_outside:
        for leaf in b_leaves:
            if Arc(leaf, succ, IS_BEFORE) not in out.arcs:
                out.add_arc(leaf, succ, IS_BEFORE)

    # textual adaptation: delete the pruned clauses, insert the donor's
    patches = _build_patches(recipe.preparation_text, donor_recipe.preparation_text, g, donor_graph, a_branch, b_branch)
    adapted_text = apply_text_patches(recipe.preparation_text, patches)
    insert_pos = patches[0].start if patches else 0
    grafted_ids = [mapping[c] for c in b_branch.clauses]
    _remap_clause_spans(out, adapted_text, ontology, grafted_ids, insert_pos)

    return AdaptationResult(graph=out, patches=patches, text=adapted_text, dropped_arcs=dropped)


def _build_patches(
    text: str,
    donor_text: str,
    g: RecipeGraph,
    donor_graph: RecipeGraph,
    a_branch: Branch,
    b_branch: Branch,
) -> list[TextPatch]:
    spans = sorted(
        g.vertices[c].text_span for c in a_branch.clauses if g.vertices[c].text_span
    )
    if not spans:
        return []
    # widen each deletion to swallow the following whitespace
    widened: list[tuple[int, int]] = []
    for start, end in spans:
        while end < len(text) and text[end] in " \t":
            end += 1
        if widened and start <= widened[-1][1]:
            widened[-1] = (widened[-1][0], max(end, widened[-1][1]))
        else:
            widened.append((start, end))
    donor_pieces = [
        donor_text[s[0] : s[1]]
        for c in b_branch.clauses
        if (s := donor_graph.vertices[c].text_span)
    ]
    insertion = " ".join(p.strip() for p in donor_pieces)
    if insertion and not insertion.endswith((".", "!", "?", ",", ";")):
        insertion += "."
    if insertion:
        insertion += " "
    patches = [TextPatch(widened[0][0], widened[0][1], insertion)]
    patches.extend(TextPatch(s, e, "") for s, e in widened[1:])
    return patches


def apply_text_patches(text: str, patches: list[TextPatch]) -> str:
    """Replace patch spans and fix capitalisation, spacing, and final stop."""
    ordered = sorted(patches, key=lambda p: p.start)
    pos = 0
    for p in ordered:
        if p.start < pos or p.end > len(text) or p.start > p.end:
            raise AdaptationError(f"patch ({p.start},{p.end}) overlaps or is out of range")
        pos = p.end
    out: list[str] = []
    cursor = 0
    for p in ordered:
        out.append(text[cursor : p.start])
        out.append(p.replacement)
        cursor = p.end
    out.append(text[cursor:])
    return tidy_text("".join(out))


def tidy_text(text: str) -> str:
    """Minor linguistic adjustments after splicing."""
    text = re.sub(r"[ \t]{2,}", " ", text)
    text = re.sub(r" +([,.;:!?])", r"\1", text)
    text = re.sub(r",+", ",", text)
    text = re.sub(r",\s*\.", ".", text)
    text = text.strip()
    if text and text[-1] not in ".!?":
        text += "."

    # capitalise sentence starts, lowercase a clause joined after a comma
    chars = list(text)
    sentence_start = True
    i = 0
    while i < len(chars):
        ch = chars[i]
        if ch.isalpha():
            if sentence_start:
                chars[i] = ch.upper()
                sentence_start = False
            i += 1
        elif ch in ".!?":
            sentence_start = True
            i += 1
        elif ch == ",":
            # first letter after a comma reads mid-sentence
            j = i + 1
            while j < len(chars) and chars[j] == " ":
                j += 1
            if j < len(chars) and chars[j].isalpha() and not sentence_start:
                chars[j] = chars[j].lower()
            i += 1
        else:
            i += 1
    return "".join(chars)


def _remap_clause_spans(
    out: RecipeGraph,
    adapted_text: str,
    ontology: Ontology,
    grafted_ids: list[str],
    insert_pos: int,
) -> None:
    """Re-derive clause spans from the adapted text when segmentation agrees."""
    clauses = textproc.analyse(adapted_text, ontology)

    def key(v: Vertex):
        # grafted clauses occupy the splice position, in donor order;
        # originals keep their old relative order
        if v.id in grafted_ids:
            return (insert_pos, 1, grafted_ids.index(v.id))
        return (v.text_span[0] if v.text_span else 0, 0, 0)

    vertex_clauses = sorted(
        (v for v in out.vertices.values() if v.kind == CLAUSE), key=key
    )
    if len(clauses) != len(vertex_clauses):
        return
    for v, cl in zip(vertex_clauses, clauses):
        out.vertices[v.id] = Vertex(
            id=v.id, kind=v.kind, text_span=(cl.char_start, cl.char_end)
        )


def adapt_ingredients(
    recipe: Recipe,
    donor: Recipe,
    request: AdaptationRequest,
    ontology: Ontology,
) -> list[tuple[str, str]]:
    """Ingredient list for the adapted recipe: alpha's line swapped for the
    donor's beta line, quantities copied verbatim."""
    beta_lines = [
        (raw, cid) for raw, cid in donor.ingredients if ontology.is_a(cid, request.beta)
    ]
    out: list[tuple[str, str]] = []
    replaced = False
    for raw, cid in recipe.ingredients:
        if ontology.is_a(cid, request.alpha):
            if beta_lines and not replaced:
                out.extend(beta_lines)
                replaced = True
        else:
            out.append((raw, cid))
    return out
