"""Cooking ontology: concept hierarchies, action schemas, and target sets.

The ontology is loaded once from a JSON document and is immutable
afterwards, so it can be shared freely between threads.  It answers
subsumption queries (``is_a``), maps word sequences to concepts through
lexical variants, and proposes ingredient substitutions by generalising
a concept up the food hierarchy and specialising back down.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

HIERARCHY_NAMES = ("food", "dish-type", "dish-moment", "location", "diet", "action")

_VOWELS = "aeiou"


class OntologyError(ValueError):
    """Raised when an ontology document violates a structural invariant."""


@dataclass(frozen=True)
class Concept:
    id: str
    hierarchy: str
    parents: tuple[str, ...] = ()
    lexical_variants: tuple[tuple[str, ...], ...] = ()
    description: str = ""


@dataclass(frozen=True)
class ActionSchema:
    concept: str
    requires_direct_object: bool = False
    requires_prepositional_complement: bool = False
    allowed_prepositions: tuple[str, ...] = ()
    output_count: int = 1


@dataclass(frozen=True)
class TargetSet:
    trigger_word: str
    members: Mapping[str, float] = field(default_factory=dict)


def _plural_forms(word: str) -> set[str]:
    forms = {word + "s"}
    if word.endswith(("s", "x", "z", "ch", "sh", "o")):
        forms.add(word + "es")
    if word.endswith("y") and len(word) > 1 and word[-2] not in _VOWELS:
        forms.add(word[:-1] + "ies")
    return forms


def _verb_forms(word: str) -> set[str]:
    """All inflected forms a recipe text may use for a base verb."""
    forms = {word, word + "s"}
    if word.endswith(("s", "x", "z", "ch", "sh")):
        forms.add(word + "es")
    if word.endswith("e"):
        forms.update({word + "d", word[:-1] + "ing"})
    elif word.endswith("y") and len(word) > 1 and word[-2] not in _VOWELS:
        forms.update({word[:-1] + "ied", word + "ing"})
    else:
        forms.update({word + "ed", word + "ing"})
        # consonant doubling for short stems: chop -> chopped, stir -> stirring
        if (
            len(word) >= 3
            and word[-1] not in _VOWELS + "wxy"
            and word[-2] in _VOWELS
            and word[-3] not in _VOWELS
        ):
            forms.update({word + word[-1] + "ed", word + word[-1] + "ing"})
    return forms


class Ontology:
    """Immutable view over the six concept hierarchies."""

    def __init__(
        self,
        concepts: dict[str, Concept],
        schemas: dict[str, ActionSchema],
        target_sets: dict[str, TargetSet],
    ):
        self.concepts = concepts
        self.schemas = schemas
        self.target_sets = target_sets
        self.roots: dict[str, str] = {}
        self._children: dict[str, set[str]] = {c: set() for c in concepts}
        for c in concepts.values():
            for p in c.parents:
                # unknown parents are reported by _validate_structure
                self._children.setdefault(p, set()).add(c.id)
        self._validate_structure()
        self._build_lexical_index()

    # -- structure ---------------------------------------------------------

    def _validate_structure(self) -> None:
        by_hier: dict[str, list[Concept]] = {}
        for c in self.concepts.values():
            by_hier.setdefault(c.hierarchy, []).append(c)
            for p in c.parents:
                parent = self.concepts.get(p)
                if parent is None:
                    raise OntologyError(f"dangling parent reference {p!r} on {c.id!r}")
                if parent.hierarchy != c.hierarchy:
                    raise OntologyError(
                        f"parent {p!r} of {c.id!r} is in hierarchy "
                        f"{parent.hierarchy!r}, not {c.hierarchy!r}"
                    )
        if not by_hier:
            raise OntologyError("missing hierarchy roots: ontology document is empty")
        for name, members in by_hier.items():
            roots = [c.id for c in members if not c.parents]
            if len(roots) != 1:
                raise OntologyError(
                    f"hierarchy {name!r} must have exactly one root, found {sorted(roots)}"
                )
            self.roots[name] = roots[0]
            self._check_acyclic(name, members)
        for cid, schema in self.schemas.items():
            c = self.concepts.get(cid)
            if c is None or c.hierarchy != "action":
                raise OntologyError(f"schema for unknown action concept {cid!r}")
            if schema.output_count < 1:
                raise OntologyError(f"schema for {cid!r} has output_count < 1")
        for cid in (c.id for c in self.concepts.values() if c.hierarchy == "action"):
            if cid not in self.schemas:
                raise OntologyError(f"action concept {cid!r} has no schema")
        for ts in self.target_sets.values():
            if not ts.members:
                raise OntologyError(f"target set {ts.trigger_word!r} is empty")
            for cid, w in ts.members.items():
                if cid not in self.concepts or self.concepts[cid].hierarchy != "food":
                    raise OntologyError(
                        f"target set {ts.trigger_word!r} references non-food {cid!r}"
                    )
                if not 0 < w <= 1:
                    raise OntologyError(
                        f"target set {ts.trigger_word!r} weight for {cid!r} not in (0,1]"
                    )

    def _check_acyclic(self, name: str, members: list[Concept]) -> None:
        state: dict[str, int] = {}  # 0 visiting, 1 done

        def visit(cid: str, stack: tuple[str, ...]) -> None:
            if state.get(cid) == 1:
                return
            if state.get(cid) == 0:
                raise OntologyError(f"cycle detected in hierarchy {name!r} at {cid!r}")
            state[cid] = 0
            for p in self.concepts[cid].parents:
                visit(p, stack + (cid,))
            state[cid] = 1

        for c in members:
            visit(c.id, ())

    # -- lexical index -----------------------------------------------------

    def _build_lexical_index(self) -> None:
        # variant word-sequence -> concept ids, with morphological expansion
        # of the final word (plurals for foods, verb inflections for actions)
        self._lexicon: dict[str, dict[tuple[str, ...], set[str]]] = {
            name: {} for name in self.roots
        }
        self._verb_lemmas: dict[str, tuple[str, str]] = {}  # form -> (lemma, concept)
        for c in self.concepts.values():
            index = self._lexicon[c.hierarchy]
            for variant in c.lexical_variants:
                keys = {variant}
                last = variant[-1]
                if c.hierarchy == "food":
                    keys.update(variant[:-1] + (f,) for f in _plural_forms(last))
                elif c.hierarchy == "action":
                    keys.update(variant[:-1] + (f,) for f in _verb_forms(last))
                    if len(variant) == 1:
                        for form in _verb_forms(last):
                            self._verb_lemmas.setdefault(form, (last, c.id))
                for key in keys:
                    index.setdefault(key, set()).add(c.id)
        self._max_variant_len = {
            name: max((len(k) for k in idx), default=0)
            for name, idx in self._lexicon.items()
        }

    # -- queries -----------------------------------------------------------

    def concept(self, cid: str) -> Concept:
        try:
            return self.concepts[cid]
        except KeyError:
            raise OntologyError(f"unknown concept {cid!r}") from None

    def is_a(self, cid: str, ancestor: str) -> bool:
        """True iff ``ancestor`` lies on some parent path from ``cid`` (reflexive)."""
        c, a = self.concept(cid), self.concept(ancestor)
        if c.hierarchy != a.hierarchy:
            raise OntologyError(
                f"cross-hierarchy comparison: {cid!r} vs {ancestor!r}"
            )
        seen: set[str] = set()
        queue = deque([cid])
        while queue:
            cur = queue.popleft()
            if cur == ancestor:
                return True
            if cur in seen:
                continue
            seen.add(cur)
            queue.extend(self.concepts[cur].parents)
        return False

    def children(self, cid: str) -> set[str]:
        self.concept(cid)
        return set(self._children[cid])

    def is_leaf(self, cid: str) -> bool:
        return not self._children[self.concept(cid).id]

    def leaves_under(self, cid: str) -> set[str]:
        out: set[str] = set()
        queue = deque([self.concept(cid).id])
        seen: set[str] = set()
        while queue:
            cur = queue.popleft()
            if cur in seen:
                continue
            seen.add(cur)
            kids = self._children[cur]
            if kids:
                queue.extend(kids)
            else:
                out.add(cur)
        return out

    def lexical_lookup(
        self, words: Sequence[str], hierarchy: str
    ) -> list[tuple[str, int]]:
        """Concepts whose variant matches a contiguous subsequence of
        ``words``, ordered by descending match length."""
        if hierarchy not in self._lexicon:
            raise OntologyError(f"unknown hierarchy {hierarchy!r}")
        index = self._lexicon[hierarchy]
        lowered = tuple(w.lower() for w in words)
        found: dict[str, int] = {}
        for length in range(min(len(lowered), self._max_variant_len[hierarchy]), 0, -1):
            for start in range(len(lowered) - length + 1):
                hits = index.get(lowered[start : start + length])
                for cid in hits or ():
                    if cid not in found:
                        found[cid] = length
        return sorted(found.items(), key=lambda kv: (-kv[1], kv[0]))

    def verb_lemma(self, word: str) -> tuple[str, str] | None:
        """(lemma, action concept) for an inflected verb form, if known."""
        return self._verb_lemmas.get(word.lower())

    def is_action_form(self, word: str) -> bool:
        return word.lower() in self._verb_lemmas

    def is_food_form(self, word: str) -> bool:
        return (word.lower(),) in self._lexicon["food"]

    def schema(self, action_concept: str) -> ActionSchema:
        try:
            return self.schemas[action_concept]
        except KeyError:
            raise OntologyError(f"no schema for action {action_concept!r}") from None

    def substitution_candidates(
        self, target: str, forbidden: Iterable[str] = ()
    ) -> list[tuple[str, int]]:
        """Leaf food concepts reachable by generalising ``target`` then
        specialising, ranked by number of generalisation steps.
        """
        c = self.concept(target)
        if c.hierarchy != "food":
            raise OntologyError(f"substitution target {target!r} is not a food concept")
        forbidden = list(forbidden)

        def allowed(cid: str) -> bool:
            return cid != target and not any(self.is_a(cid, f) for f in forbidden)

        # minimal generalisation distance to each ancestor
        dist: dict[str, int] = {target: 0}
        frontier = [target]
        k = 0
        while frontier:
            k += 1
            nxt: list[str] = []
            for cid in frontier:
                for p in self.concepts[cid].parents:
                    if p not in dist:
                        dist[p] = k
                        nxt.append(p)
            frontier = nxt
        by_cost: dict[str, int] = {}
        for ancestor, cost in dist.items():
            if cost == 0:
                continue
            for leaf in self.leaves_under(ancestor):
                if allowed(leaf) and (leaf not in by_cost or cost < by_cost[leaf]):
                    by_cost[leaf] = cost
        return sorted(by_cost.items(), key=lambda item: (item[1], item[0]))

    # -- serialization -----------------------------------------------------

    def to_document(self) -> dict:
        hierarchies: dict[str, list[dict]] = {}
        for c in sorted(self.concepts.values(), key=lambda c: c.id):
            hierarchies.setdefault(c.hierarchy, []).append(
                {
                    "id": c.id,
                    "parents": list(c.parents),
                    "variants": [" ".join(v) for v in c.lexical_variants],
                    "description": c.description,
                }
            )
        return {
            "hierarchies": hierarchies,
            "action_schemas": {
                cid: {
                    "requires_do": s.requires_direct_object,
                    "requires_pc": s.requires_prepositional_complement,
                    "prepositions": list(s.allowed_prepositions),
                    "output_count": s.output_count,
                }
                for cid, s in sorted(self.schemas.items())
            },
            "target_sets": {
                word: [
                    {"concept": cid, "weight": w}
                    for cid, w in sorted(ts.members.items())
                ]
                for word, ts in sorted(self.target_sets.items())
            },
        }


def load_ontology(source) -> Ontology:
    """Load an ontology from a JSON document (path, file object, or dict)."""
    if isinstance(source, dict):
        doc = source
    elif hasattr(source, "read"):
        doc = json.load(source)
    else:
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)

    concepts: dict[str, Concept] = {}
    for hierarchy, records in doc.get("hierarchies", {}).items():
        for rec in records:
            cid = rec["id"]
            if cid in concepts:
                raise OntologyError(f"duplicate concept id {cid!r}")
            concepts[cid] = Concept(
                id=cid,
                hierarchy=hierarchy,
                parents=tuple(rec.get("parents", [])),
                lexical_variants=tuple(
                    tuple(v.lower().split()) for v in rec.get("variants", [])
                ),
                description=rec.get("description", ""),
            )
    schemas = {
        cid: ActionSchema(
            concept=cid,
            requires_direct_object=bool(rec.get("requires_do", False)),
            requires_prepositional_complement=bool(rec.get("requires_pc", False)),
            allowed_prepositions=tuple(rec.get("prepositions", [])),
            output_count=int(rec.get("output_count", 1)),
        )
        for cid, rec in doc.get("action_schemas", {}).items()
    }
    target_sets = {
        word.lower(): TargetSet(
            trigger_word=word.lower(),
            members={m["concept"]: float(m["weight"]) for m in members},
        )
        for word, members in doc.get("target_sets", {}).items()
    }
    return Ontology(concepts, schemas, target_sets)
