import random

import pytest

from recipegraph.annotator import annotate
from recipegraph.graph import (
    ACTION,
    CLAUSE,
    FOOD,
    HAS_DO_INPUT,
    HAS_OUTPUT,
    IS_BEFORE,
    ORIGIN_INGREDIENT,
    ORIGIN_OUTPUT,
    Arc,
    GraphError,
    GraphTypingError,
    RecipeGraph,
    Vertex,
)


def chain_graph(n_actions=3, n_ingredients=2) -> RecipeGraph:
    """A simple isBefore chain where each action consumes one ingredient
    and produces one output."""
    g = RecipeGraph("fixture")
    for i in range(n_ingredients):
        g.add_vertex(
            Vertex(g.fresh_id(FOOD, "ing"), FOOD, concept="Food", origin=ORIGIN_INGREDIENT)
        )
    prev = None
    for i in range(n_actions):
        a = g.add_vertex(Vertex(g.fresh_id(ACTION, "act"), ACTION, concept="Chop"))
        c = g.add_vertex(Vertex(f"Clause:c_{i + 1}", CLAUSE))
        g.add_arc(a.id, c.id, "isRelatedToClause")
        o = g.add_vertex(Vertex(g.fresh_id(FOOD, "out"), FOOD, origin=ORIGIN_OUTPUT))
        g.add_arc(a.id, o.id, HAS_OUTPUT)
        if prev:
            g.add_arc(prev, a.id, IS_BEFORE)
        prev = a.id
    return g


class TestTyping:
    def test_arc_requires_action_source(self):
        g = chain_graph()
        foods = [v.id for v in g.by_kind(FOOD)]
        with pytest.raises(GraphTypingError):
            g.add_arc(foods[0], foods[1], HAS_DO_INPUT)

    def test_temporal_between_actions_only(self):
        g = chain_graph()
        food = g.by_kind(FOOD)[0].id
        action = g.by_kind(ACTION)[0].id
        with pytest.raises(GraphTypingError):
            g.add_arc(action, food, IS_BEFORE)

    def test_unknown_label(self):
        g = chain_graph()
        acts = [v.id for v in g.by_kind(ACTION)]
        with pytest.raises(GraphTypingError):
            g.add_arc(acts[0], acts[1], "causes")

    def test_missing_endpoint(self):
        g = chain_graph()
        with pytest.raises(GraphError):
            g.add_arc("Action:nope_99", g.by_kind(FOOD)[0].id, HAS_DO_INPUT)

    def test_rejected_arc_leaves_graph_unchanged(self):
        g = chain_graph()
        before = set(g.arcs)
        foods = [v.id for v in g.by_kind(FOOD)]
        with pytest.raises(GraphTypingError):
            g.add_arc(foods[0], foods[1], HAS_DO_INPUT)
        assert g.arcs == before

    def test_id_kind_mismatch(self):
        g = RecipeGraph("x")
        with pytest.raises(GraphTypingError):
            g.add_vertex(Vertex("Food:oops_1", ACTION))

    def test_duplicate_vertex(self):
        g = chain_graph()
        vid = g.by_kind(ACTION)[0].id
        with pytest.raises(GraphTypingError):
            g.add_vertex(Vertex(vid, ACTION))


class TestTemporalOrder:
    def test_strict_predecessors_chain(self):
        g = chain_graph(3)
        acts = [v.id for v in g.by_kind(ACTION)]
        acts.sort(key=lambda a: len(g.strict_predecessors(a)))
        assert g.strict_predecessors(acts[0]) == set()
        assert g.strict_predecessors(acts[2]) == set(acts[:2])
        assert g.strict_predecessors("end") == set(acts)

    def test_cycle_detected(self):
        g = chain_graph(2)
        acts = sorted(
            (v.id for v in g.by_kind(ACTION)), key=lambda a: len(g.strict_predecessors(a))
        )
        g.add_arc(acts[1], acts[0], IS_BEFORE)
        assert not g.temporal_acyclic()
        with pytest.raises(GraphError):
            g.strict_predecessors(acts[0])

    def test_during_not_ordered(self):
        g = chain_graph(2)
        acts = [v.id for v in g.by_kind(ACTION)]
        g2 = RecipeGraph("x")
        a = g2.add_vertex(Vertex("Action:a_1", ACTION)).id
        b = g2.add_vertex(Vertex("Action:b_2", ACTION)).id
        g2.add_arc(a, b, "isDuring")
        assert g2.strict_predecessors(a) == set()
        assert g2.strict_predecessors(b) == set()


class TestFrontier:
    def test_first_action_sees_only_ingredients(self):
        g = chain_graph(3, 2)
        first = min(g.by_kind(ACTION), key=lambda v: len(g.strict_predecessors(v.id)))
        ingredients = {v.id for v in g.by_kind(FOOD) if v.origin == ORIGIN_INGREDIENT}
        assert g.availability_frontier(first.id) == ingredients

    def test_consumed_foods_leave_frontier(self):
        g = chain_graph(2, 1)
        acts = sorted(
            (v.id for v in g.by_kind(ACTION)), key=lambda a: len(g.strict_predecessors(a))
        )
        ing = next(v.id for v in g.by_kind(FOOD) if v.origin == ORIGIN_INGREDIENT)
        g.add_arc(acts[0], ing, HAS_DO_INPUT)
        frontier = g.availability_frontier(acts[1])
        assert ing not in frontier
        assert g.outputs_of(acts[0])[0] in frontier

    def test_monotone_in_consumption(self):
        # adding an input arc to an earlier action never grows the frontier
        rng = random.Random(7)
        for _ in range(25):
            g = chain_graph(rng.randint(2, 5), rng.randint(1, 3))
            acts = sorted(
                (v.id for v in g.by_kind(ACTION)),
                key=lambda a: len(g.strict_predecessors(a)),
            )
            at = acts[-1]
            base = g.availability_frontier(at)
            earlier = rng.choice(acts[:-1])
            candidates = sorted(
                g.availability_frontier(earlier) - set(g.inputs_of(earlier))
            )
            if not candidates:
                continue
            g.add_arc(earlier, rng.choice(candidates), HAS_DO_INPUT)
            assert g.availability_frontier(at) <= base


class TestZoom:
    def test_zoom_contents(self, ontology, mango_recipe):
        g = annotate(mango_recipe, ontology)
        slice_id = next(v.id for v in g.by_kind(ACTION) if v.concept == "Slice")
        sub = g.zoom(slice_id)
        expected = {slice_id, g.clause_of(slice_id)}
        expected.update(g.inputs_of(slice_id))
        expected.update(g.outputs_of(slice_id))
        expected.update(g.availability_frontier(slice_id))
        assert set(sub.vertices) == expected
        for a in sub.arcs:
            assert a in g.arcs

    def test_zoom_unknown_focus(self, ontology, mango_recipe):
        g = annotate(mango_recipe, ontology)
        with pytest.raises(GraphError):
            g.zoom("Action:nope_1")


class TestValidate:
    def test_empty_graph_clean(self, ontology):
        report = RecipeGraph("empty").validate(ontology)
        assert report.ok
        assert report.vertex_count == 0
        assert report.component_count == 0

    def test_v1_missing_slot(self, ontology):
        g = RecipeGraph("x")
        g.add_vertex(Vertex("Action:chop_1", ACTION, concept="Chop"))
        g.add_vertex(Vertex("Clause:c_1", CLAUSE))
        g.add_arc("Action:chop_1", "Clause:c_1", "isRelatedToClause")
        g.add_vertex(Vertex("Food:out_2", FOOD, origin=ORIGIN_OUTPUT))
        g.add_arc("Action:chop_1", "Food:out_2", HAS_OUTPUT)
        rules = {r for r, _, _ in g.validate(ontology).violations}
        assert "V1" in rules

    def test_v2_output_count(self, ontology):
        g = RecipeGraph("x")
        g.add_vertex(Vertex("Action:chop_1", ACTION, concept="Chop"))
        g.add_vertex(Vertex("Clause:c_1", CLAUSE))
        g.add_arc("Action:chop_1", "Clause:c_1", "isRelatedToClause")
        rules = {r for r, _, _ in g.validate(ontology).violations}
        assert "V2" in rules

    def test_v3_clause_link(self, ontology):
        g = RecipeGraph("x")
        g.add_vertex(Vertex("Action:chop_1", ACTION, concept="Chop"))
        rules = {r for r, _, _ in g.validate(ontology).violations}
        assert "V3" in rules

    def test_v4_cycle(self, ontology):
        g = RecipeGraph("x")
        g.add_vertex(Vertex("Action:a_1", ACTION))
        g.add_vertex(Vertex("Action:b_2", ACTION))
        g.add_arc("Action:a_1", "Action:b_2", IS_BEFORE)
        g.add_arc("Action:b_2", "Action:a_1", IS_BEFORE)
        rules = {r for r, _, _ in g.validate(ontology).violations}
        assert "V4" in rules

    def test_v5_isolated_component(self, ontology, mango_recipe):
        g = annotate(mango_recipe, ontology)
        g.add_vertex(Vertex("Food:stray_99", FOOD, concept="Salt", origin=ORIGIN_INGREDIENT))
        report = g.validate(ontology)
        v5 = [v for v in report.violations if v[0] == "V5"]
        assert v5 and "Food:stray_99" in v5[0][2]

    def test_clean_annotation_validates(self, ontology, mango_recipe):
        report = annotate(mango_recipe, ontology).validate(ontology)
        assert report.ok
        assert report.component_count == 1
        assert report.vertex_count == 3 * report.action_count + report.ingredient_count


class TestSerialization:
    def test_round_trip(self, ontology, mango_recipe):
        g = annotate(mango_recipe, ontology)
        again = RecipeGraph.from_json(g.to_json())
        assert again.vertices == g.vertices
        assert again.arcs == g.arcs
        assert again.version == g.version
        assert again.to_json() == g.to_json()

    def test_fresh_ids_after_round_trip(self, ontology, mango_recipe):
        g = annotate(mango_recipe, ontology)
        again = RecipeGraph.from_json(g.to_json())
        new = again.fresh_id(FOOD, "x")
        assert new not in again.vertices

    def test_malformed_document(self):
        with pytest.raises(GraphError):
            RecipeGraph.from_json('{"recipe_id": "x"}')
        with pytest.raises(GraphError):
            RecipeGraph.from_json("not json")

    def test_dot_deterministic(self, ontology, mango_recipe):
        g1 = annotate(mango_recipe, ontology)
        g2 = annotate(mango_recipe, ontology)
        assert g1.export_dot() == g2.export_dot()

    def test_dot_minimal(self):
        g = RecipeGraph("tiny")
        g.add_vertex(Vertex("Action:mix_1", ACTION))
        g.add_vertex(Vertex("Food:mix_out_2", FOOD))
        g.add_arc("Action:mix_1", "Food:mix_out_2", HAS_OUTPUT)
        dot = g.export_dot()
        assert dot.count("shape=") == 2
        assert 'label="hasOutput"' in dot
