"""Semi-automatic correction: user edits in text order plus downstream
repropagation, so one fix repairs the errors it caused further on."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from . import textproc
from .annotator import AnnotationState, annotate_clause, attach_outputs
from .compare import structural_map
from .graph import (
    ACTION,
    CLAUSE,
    FOOD,
    HAS_OUTPUT,
    INPUT_LABELS,
    IS_BEFORE,
    IS_DURING,
    ORIGIN_INGREDIENT,
    ORIGIN_USER,
    RELATED_TO_CLAUSE,
    TEMPORAL_LABELS,
    Arc,
    GraphError,
    GraphTypingError,
    RecipeGraph,
    Vertex,
)
from .ontology import Ontology
from .textproc import TemporalMarker

EDIT_KINDS = ("AddAction", "AddFood", "AddArc", "RemoveArc", "RemoveVertex", "Relabel")


class EditOrderError(ValueError):
    """Edit anchored at a clause earlier than the validated cursor."""


@dataclass(frozen=True)
class EditOperation:
    kind: str
    payload: dict
    anchor_clause: str
    author: str = ""
    timestamp: str = ""

    @property
    def anchor_index(self) -> int:
        m = re.search(r"(\d+)$", self.anchor_clause)
        if not m:
            raise ValueError(f"bad anchor clause id {self.anchor_clause!r}")
        return int(m.group(1))

    @classmethod
    def from_document(cls, doc: dict) -> "EditOperation":
        kind = doc.get("kind")
        if kind not in EDIT_KINDS:
            raise ValueError(f"unknown edit kind {kind!r}")
        return cls(
            kind=kind,
            payload=doc.get("payload", {}),
            anchor_clause=doc["anchor_clause"],
            author=doc.get("author", ""),
            timestamp=doc.get("timestamp", ""),
        )


@dataclass
class Session:
    recipe_id: str
    base_version: int
    validated_cursor: int = 0
    user_added: set[str] = field(default_factory=set)
    edits: list[EditOperation] = field(default_factory=list)


@dataclass
class ChangeSet:
    added_vertices: list[Vertex] = field(default_factory=list)
    removed_vertices: list[Vertex] = field(default_factory=list)
    added_arcs: list[Arc] = field(default_factory=list)
    removed_arcs: list[Arc] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not (
            self.added_vertices or self.removed_vertices or self.added_arcs or self.removed_arcs
        )

    def to_document(self) -> dict:
        def vdoc(v: Vertex) -> dict:
            rec: dict = {"id": v.id, "kind": v.kind}
            if v.concept:
                rec["concept"] = v.concept
            if v.label:
                rec["label"] = v.label
            return rec

        def adoc(a: Arc) -> dict:
            return {"from": a.source, "to": a.target, "label": a.label}

        return {
            "added": {
                "vertices": [vdoc(v) for v in self.added_vertices],
                "arcs": [adoc(a) for a in self.added_arcs],
            },
            "removed": {
                "vertices": [vdoc(v) for v in self.removed_vertices],
                "arcs": [adoc(a) for a in self.removed_arcs],
            },
        }


def apply_edit(
    g: RecipeGraph, edit: EditOperation, session: Session, ontology: Ontology
) -> RecipeGraph:
    """Apply one user edit, enforcing text order and arc typing atomically."""
    if f"{CLAUSE}:{edit.anchor_clause}" not in g.vertices and edit.anchor_clause not in g.vertices:
        raise GraphError(f"anchor clause {edit.anchor_clause!r} does not exist")
    if edit.anchor_index < session.validated_cursor:
        raise EditOrderError(
            f"edit anchored at {edit.anchor_clause!r} but clauses up to "
            f"c_{session.validated_cursor} are already validated"
        )
    out = g.copy()
    payload = edit.payload
    if edit.kind == "AddAction":
        concept = payload["concept"]
        c = ontology.concept(concept)
        if c.hierarchy != "action":
            raise GraphTypingError(f"{concept!r} is not an action concept")
        lexeme = payload.get("lexeme") or concept.lower()
        vid = payload.get("id") or out.fresh_id(ACTION, lexeme)
        out.add_vertex(Vertex(id=vid, kind=ACTION, concept=concept))
        session.user_added.add(vid)
    elif edit.kind == "AddFood":
        concept = payload.get("concept")
        if concept is not None and ontology.concept(concept).hierarchy != "food":
            raise GraphTypingError(f"{concept!r} is not a food concept")
        lexeme = payload.get("lexeme") or (concept.lower() if concept else "food")
        vid = payload.get("id") or out.fresh_id(FOOD, lexeme)
        out.add_vertex(
            Vertex(
                id=vid,
                kind=FOOD,
                concept=concept,
                origin=ORIGIN_USER,
                label=payload.get("label"),
            )
        )
        session.user_added.add(vid)
    elif edit.kind == "AddArc":
        out.add_arc(payload["from"], payload["to"], payload["label"])
    elif edit.kind == "RemoveArc":
        out.remove_arc(payload["from"], payload["to"], payload["label"])
    elif edit.kind == "RemoveVertex":
        vid = payload["id"]
        if vid not in out.vertices:
            raise GraphError(f"no such vertex {vid!r}")
        if out.vertices[vid].kind == CLAUSE:
            raise GraphTypingError("clause vertices come from the text and cannot be removed")
        out.remove_vertex(vid)
        session.user_added.discard(vid)
    elif edit.kind == "Relabel":
        vid = payload["id"]
        v = out.vertices.get(vid)
        if v is None:
            raise GraphError(f"no such vertex {vid!r}")
        concept = payload["concept"]
        c = ontology.concept(concept)
        expected = "action" if v.kind == ACTION else "food"
        if c.hierarchy != expected:
            raise GraphTypingError(
                f"cannot relabel {v.kind} vertex with {c.hierarchy} concept {concept!r}"
            )
        out.vertices[vid] = Vertex(
            id=v.id, kind=v.kind, concept=concept, origin=v.origin,
            text_span=v.text_span, label=v.label,
        )
    else:
        raise ValueError(f"unknown edit kind {edit.kind!r}")
    out.version = g.version + 1
    session.validated_cursor = max(session.validated_cursor, edit.anchor_index)
    session.edits.append(edit)
    return out


def repropagate(
    recipe, g: RecipeGraph, session: Session, ontology: Ontology
) -> tuple[RecipeGraph, ChangeSet]:
    """Keep the human-validated prefix and user additions, then re-run the
    automatic annotation on everything downstream of the cursor."""
    clauses = textproc.analyse(recipe.preparation_text, ontology)
    cursor = session.validated_cursor

    def clause_index(cid: Optional[str]) -> Optional[int]:
        if cid is None:
            return None
        m = re.search(r"(\d+)$", cid)
        return int(m.group(1)) if m else None

    frozen_actions: list[str] = []
    for a in g.by_kind(ACTION):
        idx = clause_index(g.clause_of(a.id))
        if (idx is not None and idx <= cursor) or a.id in session.user_added:
            frozen_actions.append(a.id)
    frozen: set[str] = set(frozen_actions)
    frozen.update(
        f.id
        for f in g.by_kind(FOOD)
        if f.origin in (ORIGIN_INGREDIENT, ORIGIN_USER) or f.id in session.user_added
    )
    for a in frozen_actions:
        frozen.update(g.inputs_of(a))
        frozen.update(g.outputs_of(a))

    out = RecipeGraph(g.recipe_id, g.version + 1)
    out._next_index = g._next_index
    for clause in clauses:
        out.add_vertex(
            Vertex(
                id=f"{CLAUSE}:{clause.id}",
                kind=CLAUSE,
                text_span=(clause.char_start, clause.char_end),
            )
        )
    for vid in sorted(frozen):
        v = g.vertices[vid]
        out.add_vertex(v)
    for arc in sorted(g.arcs, key=lambda a: (a.source, a.label, a.target)):
        src_ok = arc.source in out.vertices
        dst_ok = arc.target in out.vertices
        if src_ok and dst_ok and (arc.source in frozen):
            if arc.label in TEMPORAL_LABELS and arc.target not in frozen:
                continue
            out.add_arc(arc.source, arc.target, arc.label)

    # frozen actions added by hand may still lack outputs and temporal links
    ordered = sorted(
        frozen_actions, key=lambda a: (clause_index(g.clause_of(a)) or 0, a)
    )
    for a in ordered:
        v = out.vertices[a]
        schema = ontology.schemas.get(v.concept) if v.concept else None
        want = schema.output_count if schema else 1
        missing = want - len(out.outputs_of(a))
        if missing > 0:
            lexeme = a.split(":", 1)[1].rsplit("_", 1)[0]
            do = [x.target for x in out.out_arcs(a, "hasDOInput")]
            pc = [x.target for x in out.out_arcs(a, "hasPCInput")]
            # attach_outputs adds the hasOutput arcs for the missing count
            attach_outputs(out, a, lexeme, missing, do, pc)
    markers = {c.index: c.temporal_marker for c in clauses}
    for prev, nxt in zip(ordered, ordered[1:]):
        linked = any(
            a.label in TEMPORAL_LABELS
            and {a.source, a.target} == {prev, nxt}
            for a in out.arcs
        )
        if not linked:
            prev_idx = clause_index(g.clause_of(prev))
            label = (
                IS_DURING
                if prev_idx is not None
                and markers.get(prev_idx, TemporalMarker.NONE) is not TemporalMarker.NONE
                else IS_BEFORE
            )
            out.add_arc(prev, nxt, label)

    state = AnnotationState(graph=out)
    if ordered:
        state.last_action = ordered[-1]
        state.current_group = [ordered[-1]]
        last_idx = clause_index(g.clause_of(ordered[-1]))
        state.pending_during = (
            last_idx is not None
            and markers.get(last_idx, TemporalMarker.NONE) is not TemporalMarker.NONE
        )
    for clause in clauses:
        if clause.index <= cursor:
            continue
        annotate_clause(state, clause, ontology)
        state.clause_cursor = clause.index

    _stabilise_ids(g, out)
    return out, diff_graphs(g, out)


def _stabilise_ids(old: RecipeGraph, new: RecipeGraph) -> None:
    """Rename re-generated vertices back to their old ids when they match
    structurally, so repropagation is idempotent and diffs stay small."""
    mapping = structural_map(old, new)
    rename = {
        new_id: old_id
        for old_id, new_id in mapping.items()
        if new_id != old_id and old_id not in new.vertices
    }
    if not rename:
        return
    for new_id, old_id in rename.items():
        v = new.vertices.pop(new_id)
        new.vertices[old_id] = Vertex(
            id=old_id, kind=v.kind, concept=v.concept, origin=v.origin,
            text_span=v.text_span, label=v.label,
        )
    new.arcs = {
        Arc(rename.get(a.source, a.source), rename.get(a.target, a.target), a.label)
        for a in new.arcs
    }
    new._next_index = max(new._next_index, old._next_index)


def diff_graphs(old: RecipeGraph, new: RecipeGraph) -> ChangeSet:
    cs = ChangeSet()
    for vid in sorted(set(new.vertices) - set(old.vertices)):
        cs.added_vertices.append(new.vertices[vid])
    for vid in sorted(set(old.vertices) - set(new.vertices)):
        cs.removed_vertices.append(old.vertices[vid])
    for vid in sorted(set(old.vertices) & set(new.vertices)):
        vo, vn = old.vertices[vid], new.vertices[vid]
        if (vo.kind, vo.concept, vo.label) != (vn.kind, vn.concept, vn.label):
            cs.removed_vertices.append(vo)
            cs.added_vertices.append(vn)
    cs.added_arcs = sorted(new.arcs - old.arcs, key=lambda a: (a.source, a.label, a.target))
    cs.removed_arcs = sorted(old.arcs - new.arcs, key=lambda a: (a.source, a.label, a.target))
    return cs
