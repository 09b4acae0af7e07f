"""Automatic case acquisition: recipe text to recipe graph.

One clause at a time, the annotator resolves the verb to an action concept,
fills the action's argument slots from the set of currently available foods
(direct matches, category references, target sets, then anaphora on the
last action's output), and chains the actions temporally.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import textproc
from .graph import (
    ACTION,
    CLAUSE,
    FOOD,
    HAS_DO_INPUT,
    HAS_OUTPUT,
    HAS_PC_INPUT,
    IS_BEFORE,
    IS_DURING,
    ORIGIN_INGREDIENT,
    ORIGIN_OUTPUT,
    RELATED_TO_CLAUSE,
    RecipeGraph,
    Vertex,
)
from .ontology import Ontology
from .textproc import Chunk, ChunkKind, Clause, Tag, TemporalMarker

MIXTURE_LABEL = "mixture"


class AnnotationError(ValueError):
    pass


@dataclass
class Recipe:
    id: str
    title: str
    ingredients: list[tuple[str, str]]  # (raw text, food concept id)
    preparation_text: str

    def to_document(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "ingredients": [
                {"text": t, "concept": c} for t, c in self.ingredients
            ],
            "preparation": self.preparation_text,
        }

    @classmethod
    def from_document(cls, doc: dict) -> "Recipe":
        return cls(
            id=doc["id"],
            title=doc.get("title", doc["id"]),
            ingredients=[(i["text"], i["concept"]) for i in doc.get("ingredients", [])],
            preparation_text=doc.get("preparation", ""),
        )

    @classmethod
    def from_json(cls, text: str) -> "Recipe":
        return cls.from_document(json.loads(text))


@dataclass
class AnnotationState:
    graph: RecipeGraph
    last_action: Optional[str] = None
    clause_cursor: int = 0
    current_group: list[str] = field(default_factory=list)  # concurrent actions
    pending_during: bool = False  # next action joins the current group


def _content_tokens(chunk: Chunk) -> list[str]:
    return [
        tt.token.lower
        for tt in chunk.tokens
        if tt.tag in (Tag.NOUN, Tag.ADJ)
    ]


def _phrase_concept(chunk: Chunk, ontology: Ontology) -> Optional[str]:
    """Best food concept named inside an NP/PP: the longest variant match."""
    words = _content_tokens(chunk)
    matches = ontology.lexical_lookup(words, "food")
    return matches[0][0] if matches else None


def resolve_target_set(
    word: str,
    frontier: Sequence[str],
    graph: RecipeGraph,
    ontology: Ontology,
) -> Optional[tuple[str, float]]:
    """Pick the frontier food whose ingredient provenance best matches the
    target set for ``word`` (weighted Jaccard, ties to the newest food)."""
    ts = ontology.target_sets.get(word.lower())
    if ts is None:
        raise AnnotationError(f"no target set for {word!r}")

    def provenance(fid: str, seen: frozenset = frozenset()) -> set[str]:
        if fid in seen:
            return set()
        v = graph.vertices[fid]
        if v.origin == ORIGIN_INGREDIENT:
            return {v.concept} if v.concept else set()
        producer = graph.producer_of(fid)
        if producer is None:
            return {v.concept} if v.concept else set()
        out: set[str] = set()
        for inp in graph.inputs_of(producer):
            out |= provenance(inp, seen | {fid})
        return out

    best: Optional[tuple[str, float]] = None
    for fid in frontier:
        prov = provenance(fid)
        matched = {
            m for m in ts.members
            if any(ontology.is_a(p, m) for p in prov if p in ontology.concepts)
        }
        inter = sum(ts.members[m] for m in matched)
        union = sum(ts.members.values())
        union += sum(
            1.0
            for p in prov
            if not any(p in ontology.concepts and ontology.is_a(p, m) for m in ts.members)
        )
        score = inter / union if union else 0.0
        if score <= 0:
            continue
        if best is None or score > best[1] or (
            score == best[1] and _creation_order(fid) > _creation_order(best[0])
        ):
            best = (fid, score)
    return best


def _creation_order(vid: str) -> int:
    tail = vid.rsplit("_", 1)[-1]
    return int(tail) if tail.isdigit() else 0


def resolve_food_reference(
    chunk: Chunk,
    frontier: list[str],
    graph: RecipeGraph,
    ontology: Ontology,
) -> tuple[list[str], Optional[str]]:
    """Resolve an NP (or the NP of a PP) to frontier foods.

    Returns (matched food ids, unresolved-label).  When the phrase names a
    food concept or a target-set trigger but nothing on the frontier fits,
    the label signals that a dangling food vertex should be created.
    """
    concept = _phrase_concept(chunk, ontology)
    if concept is not None:
        matches = sorted(
            fid
            for fid in frontier
            if graph.vertices[fid].concept is not None
            and (
                ontology.is_a(graph.vertices[fid].concept, concept)
                or ontology.is_a(concept, graph.vertices[fid].concept)
            )
        )
        if matches:
            return matches, None
    head = chunk.head.lower
    if head in ontology.target_sets:
        best = resolve_target_set(head, frontier, graph, ontology)
        if best is not None:
            return [best[0]], None
        return [], head
    if concept is not None:
        return [], head
    return [], None  # not a food phrase at all: skip silently


def resolve_anaphora(state: AnnotationState, frontier: list[str]) -> Optional[str]:
    """The missing argument is the output of the last action; with no prior
    action, fall back to a singleton frontier."""
    if state.last_action is not None:
        outs = state.graph.outputs_of(state.last_action)
        if outs:
            return outs[0]
    if len(frontier) == 1:
        return frontier[0]
    return None


def annotate(recipe: Recipe, ontology: Ontology) -> RecipeGraph:
    if not recipe.preparation_text.strip():
        raise AnnotationError("recipe has no preparation text")
    graph = RecipeGraph(recipe.id)
    state = AnnotationState(graph=graph)
    for raw, concept in recipe.ingredients:
        ontology.concept(concept)
        lexeme = concept.lower().replace(" ", "_")
        graph.add_vertex(
            Vertex(
                id=graph.fresh_id(FOOD, lexeme),
                kind=FOOD,
                concept=concept,
                origin=ORIGIN_INGREDIENT,
                label=raw,
            )
        )
    clauses = textproc.analyse(recipe.preparation_text, ontology)
    for clause in clauses:
        graph.add_vertex(
            Vertex(
                id=f"{CLAUSE}:{clause.id}",
                kind=CLAUSE,
                text_span=(clause.char_start, clause.char_end),
            )
        )
    for clause in clauses:
        annotate_clause(state, clause, ontology)
        state.clause_cursor = clause.index
    return graph


def annotate_clause(state: AnnotationState, clause: Clause, ontology: Ontology) -> Optional[str]:
    """Process one clause; returns the created action id, if any."""
    graph = state.graph
    vp = clause.verb_phrase
    if vp is None:
        return None
    lemma_info = ontology.verb_lemma(vp.head.lower)
    if lemma_info is None:
        return None  # unmatched verb: the clause vertex stays unlinked
    lemma, concept = lemma_info
    schema = ontology.schema(concept)

    action_id = graph.fresh_id(ACTION, lemma)
    graph.add_vertex(Vertex(id=action_id, kind=ACTION, concept=concept))
    graph.add_arc(action_id, f"{CLAUSE}:{clause.id}", RELATED_TO_CLAUSE)

    # temporal chaining; a clause marked WHILE/MEANWHILE runs during the
    # action that follows it, so both stay unordered but everything later
    # comes after the whole concurrent group
    if state.pending_during and state.current_group:
        graph.add_arc(state.current_group[-1], action_id, IS_DURING)
        state.current_group.append(action_id)
    else:
        for member in state.current_group:
            graph.add_arc(member, action_id, IS_BEFORE)
        state.current_group = [action_id]
    state.pending_during = clause.temporal_marker is not TemporalMarker.NONE

    frontier = sorted(graph.availability_frontier(action_id))

    # argument phrases: NPs after the verb are direct objects, PPs with an
    # allowed preposition are prepositional complements
    do_targets: list[str] = []
    pc_targets: list[str] = []
    do_seen = False
    pc_seen = False
    pre_verbal: list[Chunk] = []

    def resolve_into(ch: Chunk, targets: list[str]) -> None:
        matched, dangling = resolve_food_reference(ch, frontier, graph, ontology)
        targets.extend(m for m in matched if m not in targets)
        if not matched and dangling is not None:
            targets.append(_dangling_food(graph, dangling))

    for ch in clause.chunks:
        if ch.start_index <= vp.start_index:
            if ch.kind is ChunkKind.NP:
                pre_verbal.append(ch)
            continue
        if ch.kind is ChunkKind.NP:
            do_seen = True
            resolve_into(ch, do_targets)
        elif ch.kind is ChunkKind.PP and ch.preposition in schema.allowed_prepositions:
            pc_seen = True
            resolve_into(ch, pc_targets)

    # non-imperative clause ("the rice cooks"): the subject is the patient
    if not do_seen and pre_verbal:
        do_seen = True
        for ch in pre_verbal:
            resolve_into(ch, do_targets)

    if schema.requires_direct_object and not do_seen:
        resolved = resolve_anaphora(state, frontier)
        if resolved is not None:
            do_targets.append(resolved)
    if schema.requires_prepositional_complement and not pc_seen:
        resolved = resolve_anaphora(state, frontier)
        if resolved is not None and resolved not in do_targets:
            pc_targets.append(resolved)

    for fid in do_targets:
        graph.add_arc(action_id, fid, HAS_DO_INPUT)
    for fid in pc_targets:
        graph.add_arc(action_id, fid, HAS_PC_INPUT)

    attach_outputs(graph, action_id, lemma, schema.output_count, do_targets, pc_targets)
    state.last_action = action_id
    return action_id


def _dangling_food(graph: RecipeGraph, label: str) -> str:
    fid = graph.fresh_id(FOOD, label)
    graph.add_vertex(Vertex(id=fid, kind=FOOD, origin=ORIGIN_OUTPUT, label=label))
    return fid


def attach_outputs(
    graph: RecipeGraph,
    action_id: str,
    lemma: str,
    count: int,
    do_targets: list[str],
    pc_targets: list[str],
) -> list[str]:
    """Create the action's fresh output foods.  The output inherits the
    concept of the principal input when it is unambiguous."""
    principal: Optional[str] = None
    label: Optional[str] = None
    do_concepts = {
        c for f in do_targets if (c := graph.vertices[f].concept) is not None
    }
    all_concepts = {
        c
        for f in do_targets + pc_targets
        if (c := graph.vertices[f].concept) is not None
    }
    if len(do_concepts) == 1:
        principal = next(iter(do_concepts))
    elif len(all_concepts) == 1:
        principal = next(iter(all_concepts))
    elif do_targets or pc_targets:
        label = MIXTURE_LABEL
    created = []
    for _ in range(count):
        fid = graph.fresh_id(FOOD, f"{lemma}_out")
        graph.add_vertex(
            Vertex(id=fid, kind=FOOD, concept=principal, origin=ORIGIN_OUTPUT, label=label)
        )
        graph.add_arc(action_id, fid, HAS_OUTPUT)
        created.append(fid)
    return created
