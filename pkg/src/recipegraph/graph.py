"""Recipe graph data model: typed vertices and labelled arcs.

A recipe graph holds Action, Food, and Clause vertices tied together by six
arc labels.  Mutations go through ``add_vertex``/``add_arc``/``remove_*`` so
the label/endpoint typing rules can never be violated by a committed change.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .ontology import Ontology

ACTION = "Action"
FOOD = "Food"
CLAUSE = "Clause"

HAS_DO_INPUT = "hasDOInput"
HAS_PC_INPUT = "hasPCInput"
HAS_OUTPUT = "hasOutput"
IS_BEFORE = "isBefore"
IS_DURING = "isDuring"
RELATED_TO_CLAUSE = "isRelatedToClause"

INPUT_LABELS = (HAS_DO_INPUT, HAS_PC_INPUT)
TEMPORAL_LABELS = (IS_BEFORE, IS_DURING)
ARC_LABELS = (HAS_DO_INPUT, HAS_PC_INPUT, HAS_OUTPUT, IS_BEFORE, IS_DURING, RELATED_TO_CLAUSE)

ORIGIN_INGREDIENT = "ingredient-list"
ORIGIN_OUTPUT = "action-output"
ORIGIN_USER = "user-added"

_ID_RE = re.compile(r"^(Action|Food|Clause):(.+?)(?:_(\d+))?$")


class GraphTypingError(ValueError):
    """An arc or vertex violates the typing rules."""


class GraphError(ValueError):
    """Structural error that is not a typing violation (unknown ids, cycles)."""


@dataclass(frozen=True)
class Vertex:
    id: str
    kind: str
    concept: Optional[str] = None
    origin: Optional[str] = None
    text_span: Optional[tuple[int, int]] = None
    label: Optional[str] = None  # display lexeme for concept-less foods


@dataclass(frozen=True)
class Arc:
    source: str
    target: str
    label: str


@dataclass
class ValidationReport:
    violations: list[tuple[str, str, list[str]]] = field(default_factory=list)
    component_count: int = 0
    action_count: int = 0
    ingredient_count: int = 0
    vertex_count: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_document(self) -> dict:
        return {
            "violations": [
                {"rule": r, "message": m, "ids": ids} for r, m, ids in self.violations
            ],
            "component_count": self.component_count,
            "action_count": self.action_count,
            "ingredient_count": self.ingredient_count,
            "vertex_count": self.vertex_count,
        }


class RecipeGraph:
    def __init__(self, recipe_id: str, version: int = 1):
        self.recipe_id = recipe_id
        self.version = version
        self.vertices: dict[str, Vertex] = {}
        self.arcs: set[Arc] = set()
        self._next_index = 1

    # -- id allocation -----------------------------------------------------

    def fresh_id(self, kind: str, lexeme: str) -> str:
        vid = f"{kind}:{lexeme}_{self._next_index}"
        self._next_index += 1
        return vid

    def note_index(self, vid: str) -> None:
        m = _ID_RE.match(vid)
        if m and m.group(3):
            self._next_index = max(self._next_index, int(m.group(3)) + 1)

    # -- mutation ----------------------------------------------------------

    def add_vertex(self, v: Vertex) -> Vertex:
        if v.id in self.vertices:
            raise GraphTypingError(f"duplicate vertex id {v.id!r}")
        m = _ID_RE.match(v.id)
        if not m or m.group(1) != v.kind:
            raise GraphTypingError(f"vertex id {v.id!r} does not match kind {v.kind!r}")
        self.vertices[v.id] = v
        self.note_index(v.id)
        return v

    def add_arc(self, source: str, target: str, label: str) -> Arc:
        arc = Arc(source, target, label)
        self._check_arc(arc)
        if arc in self.arcs:
            raise GraphTypingError(f"duplicate arc {source}-{label}->{target}")
        self.arcs.add(arc)
        return arc

    def _check_arc(self, arc: Arc) -> None:
        if arc.label not in ARC_LABELS:
            raise GraphTypingError(f"unknown arc label {arc.label!r}")
        src = self.vertices.get(arc.source)
        dst = self.vertices.get(arc.target)
        if src is None or dst is None:
            raise GraphError(f"arc endpoint missing: {arc.source!r} -> {arc.target!r}")
        expected = {
            HAS_DO_INPUT: (ACTION, FOOD),
            HAS_PC_INPUT: (ACTION, FOOD),
            HAS_OUTPUT: (ACTION, FOOD),
            IS_BEFORE: (ACTION, ACTION),
            IS_DURING: (ACTION, ACTION),
            RELATED_TO_CLAUSE: (ACTION, CLAUSE),
        }[arc.label]
        if (src.kind, dst.kind) != expected:
            raise GraphTypingError(
                f"arc {arc.label} requires {expected[0]}->{expected[1]}, "
                f"got {src.kind}->{dst.kind}"
            )

    def remove_arc(self, source: str, target: str, label: str) -> None:
        arc = Arc(source, target, label)
        if arc not in self.arcs:
            raise GraphError(f"no such arc {source}-{label}->{target}")
        self.arcs.remove(arc)

    def remove_vertex(self, vid: str) -> None:
        if vid not in self.vertices:
            raise GraphError(f"no such vertex {vid!r}")
        del self.vertices[vid]
        self.arcs = {a for a in self.arcs if a.source != vid and a.target != vid}

    def copy(self) -> "RecipeGraph":
        g = RecipeGraph(self.recipe_id, self.version)
        g.vertices = dict(self.vertices)
        g.arcs = set(self.arcs)
        g._next_index = self._next_index
        return g

    # -- views -------------------------------------------------------------

    def by_kind(self, kind: str) -> list[Vertex]:
        return sorted((v for v in self.vertices.values() if v.kind == kind), key=lambda v: v.id)

    def out_arcs(self, vid: str, label: Optional[str] = None) -> list[Arc]:
        return sorted(
            (a for a in self.arcs if a.source == vid and (label is None or a.label == label)),
            key=lambda a: (a.label, a.target),
        )

    def in_arcs(self, vid: str, label: Optional[str] = None) -> list[Arc]:
        return sorted(
            (a for a in self.arcs if a.target == vid and (label is None or a.label == label)),
            key=lambda a: (a.label, a.source),
        )

    def outputs_of(self, action_id: str) -> list[str]:
        return [a.target for a in self.out_arcs(action_id, HAS_OUTPUT)]

    def inputs_of(self, action_id: str) -> list[str]:
        return [a.target for a in self.out_arcs(action_id) if a.label in INPUT_LABELS]

    def clause_of(self, action_id: str) -> Optional[str]:
        arcs = self.out_arcs(action_id, RELATED_TO_CLAUSE)
        return arcs[0].target if arcs else None

    def producer_of(self, food_id: str) -> Optional[str]:
        arcs = self.in_arcs(food_id, HAS_OUTPUT)
        return arcs[0].source if arcs else None

    def consumers_of(self, food_id: str) -> list[str]:
        return [a.source for a in self.in_arcs(food_id) if a.label in INPUT_LABELS]

    # -- temporal order ----------------------------------------------------

    def strict_predecessors(self, at: str) -> set[str]:
        """Actions strictly before ``at`` under the transitive closure of
        isBefore (isDuring pairs stay unordered).  ``at`` may be "end"."""
        actions = {v.id for v in self.vertices.values() if v.kind == ACTION}
        if at == "end":
            return actions
        if at not in actions:
            raise GraphError(f"unknown action {at!r}")
        before: dict[str, set[str]] = {a: set() for a in actions}
        for a in self.arcs:
            if a.label == IS_BEFORE:
                before[a.target].add(a.source)
        # transitive closure via repeated expansion (graphs are small)
        changed = True
        while changed:
            changed = False
            for tgt, preds in before.items():
                extra = set()
                for p in preds:
                    extra |= before[p]
                if not extra <= preds:
                    preds |= extra
                    changed = True
        for act, preds in before.items():
            if act in preds:
                raise GraphError("temporal order is cyclic")
        return before[at]

    def temporal_acyclic(self) -> bool:
        try:
            for v in self.by_kind(ACTION):
                self.strict_predecessors(v.id)
        except GraphError:
            return False
        return True

    # -- analyses ----------------------------------------------------------

    def availability_frontier(self, at: str) -> set[str]:
        """Foods available for use when ``at`` executes: ingredient-list (and
        user-added) foods plus outputs of strictly earlier actions, minus
        anything those earlier actions consumed."""
        earlier = self.strict_predecessors(at)
        available: set[str] = {
            v.id
            for v in self.vertices.values()
            if v.kind == FOOD and v.origin in (ORIGIN_INGREDIENT, ORIGIN_USER)
        }
        for act in earlier:
            available.update(self.outputs_of(act))
        for act in earlier:
            available.difference_update(self.inputs_of(act))
        return available

    def zoom(self, focus: str) -> "RecipeGraph":
        v = self.vertices.get(focus)
        if v is None or v.kind != ACTION:
            raise GraphError(f"unknown action {focus!r}")
        keep = {focus}
        clause = self.clause_of(focus)
        if clause:
            keep.add(clause)
        keep.update(self.inputs_of(focus))
        keep.update(self.outputs_of(focus))
        keep.update(self.availability_frontier(focus))
        sub = RecipeGraph(self.recipe_id, self.version)
        for vid in sorted(keep):
            sub.vertices[vid] = self.vertices[vid]
            sub.note_index(vid)
        sub.arcs = {a for a in self.arcs if a.source in keep and a.target in keep}
        return sub

    def validate(self, ontology: Ontology) -> ValidationReport:
        report = ValidationReport()
        actions = self.by_kind(ACTION)
        foods = self.by_kind(FOOD)
        report.action_count = len(actions)
        report.ingredient_count = sum(1 for f in foods if f.origin == ORIGIN_INGREDIENT)
        report.vertex_count = len(self.vertices)

        for act in actions:
            schema = ontology.schemas.get(act.concept) if act.concept else None
            do = self.out_arcs(act.id, HAS_DO_INPUT)
            pc = self.out_arcs(act.id, HAS_PC_INPUT)
            if schema is not None:
                if schema.requires_direct_object and not do:
                    report.violations.append(
                        ("V1", f"{act.id} is missing its direct-object input", [act.id])
                    )
                if schema.requires_prepositional_complement and not pc:
                    report.violations.append(
                        ("V1", f"{act.id} is missing its prepositional input", [act.id])
                    )
                expected_out = schema.output_count
            else:
                expected_out = 1
            outs = self.outputs_of(act.id)
            if len(outs) != expected_out:
                report.violations.append(
                    ("V2", f"{act.id} has {len(outs)} outputs, expected {expected_out}", [act.id])
                )
            clause_arcs = self.out_arcs(act.id, RELATED_TO_CLAUSE)
            if len(clause_arcs) != 1:
                report.violations.append(
                    ("V3", f"{act.id} must link to exactly one clause, has {len(clause_arcs)}", [act.id])
                )
        if not self.temporal_acyclic():
            report.violations.append(("V4", "temporal order contains a cycle", []))

        # V5: dataflow connectivity over actions and foods, clauses excluded
        nodes = [v.id for v in actions] + [v.id for v in foods]
        adjacency: dict[str, set[str]] = {n: set() for n in nodes}
        for a in self.arcs:
            if a.label in (HAS_DO_INPUT, HAS_PC_INPUT, HAS_OUTPUT):
                adjacency[a.source].add(a.target)
                adjacency[a.target].add(a.source)
        components: list[set[str]] = []
        seen: set[str] = set()
        for n in nodes:
            if n in seen:
                continue
            comp = {n}
            stack = [n]
            while stack:
                cur = stack.pop()
                for nxt in adjacency[cur]:
                    if nxt not in comp:
                        comp.add(nxt)
                        stack.append(nxt)
            seen |= comp
            components.append(comp)
        report.component_count = len(components)
        if len(components) > 1:
            main = max(components, key=len)
            isolated = sorted(vid for comp in components if comp is not main for vid in comp)
            unlinked_clauses = sorted(
                c.id for c in self.by_kind(CLAUSE) if not self.in_arcs(c.id, RELATED_TO_CLAUSE)
            )
            report.violations.append(
                (
                    "V5",
                    f"graph has {len(components)} dataflow components; "
                    f"isolated: {', '.join(isolated + unlinked_clauses)}",
                    isolated + unlinked_clauses,
                )
            )

        # V6: size bound, checked only when each action has its own clause
        # and a fresh output (the paper's "at least 3a+i" configuration)
        clause_links = [self.clause_of(a.id) for a in actions]
        own_clause = len(set(c for c in clause_links if c)) == len(actions)
        outputs = [o for a in actions for o in self.outputs_of(a.id)]
        fresh_outputs = len(set(outputs)) == len(actions)
        if actions and own_clause and fresh_outputs:
            bound = 3 * report.action_count + report.ingredient_count
            if report.vertex_count < bound:
                report.violations.append(
                    ("V6", f"vertex count {report.vertex_count} below 3a+i = {bound}", [])
                )

        # V7: foods created for references that never resolved to a concept
        for f in foods:
            if f.concept is None and f.label is not None and self.producer_of(f.id) is None:
                report.violations.append(
                    ("V7", f"{f.id} is an unresolved food reference ({f.label!r})", [f.id])
                )
        report.violations.sort(key=lambda v: (v[0], v[2], v[1]))
        return report

    # -- serialization -----------------------------------------------------

    def to_document(self) -> dict:
        vertices = []
        for v in sorted(self.vertices.values(), key=lambda v: v.id):
            rec: dict = {"id": v.id, "kind": v.kind}
            if v.concept is not None:
                rec["concept"] = v.concept
            if v.origin is not None:
                rec["origin"] = v.origin
            if v.text_span is not None:
                rec["text_span"] = list(v.text_span)
            if v.label is not None:
                rec["label"] = v.label
            vertices.append(rec)
        arcs = [
            {"from": a.source, "to": a.target, "label": a.label}
            for a in sorted(self.arcs, key=lambda a: (a.source, a.label, a.target))
        ]
        return {
            "recipe_id": self.recipe_id,
            "version": self.version,
            "vertices": vertices,
            "arcs": arcs,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_document(), indent=2, sort_keys=False) + "\n"

    @classmethod
    def from_document(cls, doc: dict) -> "RecipeGraph":
        try:
            g = cls(doc["recipe_id"], int(doc.get("version", 1)))
            for rec in doc["vertices"]:
                span = rec.get("text_span")
                g.add_vertex(
                    Vertex(
                        id=rec["id"],
                        kind=rec["kind"],
                        concept=rec.get("concept"),
                        origin=rec.get("origin"),
                        text_span=tuple(span) if span else None,
                        label=rec.get("label"),
                    )
                )
            for rec in doc["arcs"]:
                g.add_arc(rec["from"], rec["to"], rec["label"])
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph document: {exc}") from exc
        return g

    @classmethod
    def from_json(cls, text: str) -> "RecipeGraph":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError(f"malformed graph document: {exc}") from exc
        return cls.from_document(doc)

    def export_dot(self) -> str:
        shapes = {ACTION: "box", FOOD: "ellipse", CLAUSE: "note"}
        lines = [f'digraph "{self.recipe_id}" {{']
        for v in sorted(self.vertices.values(), key=lambda v: v.id):
            label = v.id if v.label is None else f"{v.id}\\n({v.label})"
            lines.append(f'  "{v.id}" [shape={shapes[v.kind]}, label="{label}"];')
        for a in sorted(self.arcs, key=lambda a: (a.source, a.label, a.target)):
            lines.append(f'  "{a.source}" -> "{a.target}" [label="{a.label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def retag_vertex(v: Vertex, **changes) -> Vertex:
    return replace(v, **changes)
