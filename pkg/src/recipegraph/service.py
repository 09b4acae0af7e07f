"""HTTP service tying the pipeline together for the editor UI and the CLI.

Mutations are serialized per recipe and guarded by optimistic versioning:
a stale ``base_version`` or an out-of-order edit is answered with 409 and a
machine-readable reason, a typing violation with 422.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .adaptation import AdaptationError, AdaptationRequest, adapt, adapt_ingredients
from .annotator import AnnotationError, Recipe, annotate
from .correction import EditOperation, EditOrderError, Session, apply_edit, repropagate
from .graph import GraphError, GraphTypingError
from .ontology import Ontology, OntologyError
from .store import NotFoundError, Store


class RecipeIn(BaseModel):
    id: str
    title: str = ""
    ingredients: list[dict] = Field(default_factory=list)
    preparation: str = ""


class EditsIn(BaseModel):
    base_version: int
    edits: list[dict]


class AdaptIn(BaseModel):
    alpha: str
    beta: str
    donor_id: str


def _session_from_doc(recipe_id: str, doc: Optional[dict]) -> Session:
    if doc is None:
        return Session(recipe_id=recipe_id, base_version=0)
    return Session(
        recipe_id=recipe_id,
        base_version=doc.get("base_version", 0),
        validated_cursor=doc.get("validated_cursor", 0),
        user_added=set(doc.get("user_added", [])),
    )


def _session_to_doc(session: Session) -> dict:
    return {
        "base_version": session.base_version,
        "validated_cursor": session.validated_cursor,
        "user_added": sorted(session.user_added),
    }


def create_app(ontology: Ontology, store: Store, static_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="recipegraph")

    def get_recipe(recipe_id: str) -> Recipe:
        try:
            return store.load_recipe(recipe_id)
        except NotFoundError:
            raise HTTPException(404, f"unknown recipe {recipe_id!r}")

    def get_graph(recipe_id: str):
        try:
            return store.load_graph(recipe_id)
        except NotFoundError:
            raise HTTPException(404, f"no graph for recipe {recipe_id!r}")

    @app.get("/ontology")
    def read_ontology():
        return ontology.to_document()

    @app.get("/recipes")
    def list_recipes():
        return [{"id": r.id, "title": r.title} for r in store.list_recipes()]

    @app.get("/recipes/{recipe_id}")
    def read_recipe(recipe_id: str):
        return get_recipe(recipe_id).to_document()

    @app.post("/recipes", status_code=201)
    def create_recipe(body: RecipeIn):
        try:
            recipe = Recipe.from_document(body.model_dump())
            for _, concept in recipe.ingredients:
                ontology.concept(concept)
        except (KeyError, OntologyError) as exc:
            raise HTTPException(422, str(exc))
        store.save_recipe(recipe)
        return recipe.to_document()

    @app.post("/recipes/{recipe_id}/annotate")
    def annotate_recipe(recipe_id: str):
        recipe = get_recipe(recipe_id)
        with store.lock(recipe_id):
            try:
                graph = annotate(recipe, ontology)
            except AnnotationError as exc:
                raise HTTPException(422, str(exc))
            store.clear_graphs(recipe_id)
            store.clear_session(recipe_id)
            store.save_graph(graph)
        return graph.to_document()

    @app.get("/recipes/{recipe_id}/graph")
    def read_graph(recipe_id: str):
        return get_graph(recipe_id).to_document()

    @app.get("/recipes/{recipe_id}/graph/validate")
    def validate_graph(recipe_id: str):
        return get_graph(recipe_id).validate(ontology).to_document()

    @app.get("/recipes/{recipe_id}/graph/zoom")
    def zoom_graph(recipe_id: str, focus: str = Query(...)):
        try:
            return get_graph(recipe_id).zoom(focus).to_document()
        except GraphError as exc:
            raise HTTPException(404, str(exc))

    @app.post("/recipes/{recipe_id}/edits")
    def post_edits(recipe_id: str, body: EditsIn):
        get_recipe(recipe_id)
        with store.lock(recipe_id):
            graph = get_graph(recipe_id)
            if body.base_version != graph.version:
                return JSONResponse(
                    status_code=409,
                    content={
                        "reason": "version-conflict",
                        "expected": graph.version,
                        "got": body.base_version,
                    },
                )
            session = _session_from_doc(recipe_id, store.load_session(recipe_id))
            staged = graph
            new_versions = []
            try:
                for doc in body.edits:
                    edit = EditOperation.from_document(doc)
                    staged = apply_edit(staged, edit, session, ontology)
                    new_versions.append(staged)
            except EditOrderError as exc:
                return JSONResponse(
                    status_code=409, content={"reason": "order-violation", "detail": str(exc)}
                )
            except (GraphTypingError, OntologyError, ValueError) as exc:
                raise HTTPException(422, str(exc))
            for g in new_versions:
                store.save_graph(g)
            session.base_version = staged.version
            store.save_session(recipe_id, _session_to_doc(session))
        return staged.to_document()

    @app.post("/recipes/{recipe_id}/repropagate")
    def repropagate_graph(recipe_id: str):
        recipe = get_recipe(recipe_id)
        with store.lock(recipe_id):
            graph = get_graph(recipe_id)
            session = _session_from_doc(recipe_id, store.load_session(recipe_id))
            new_graph, changes = repropagate(recipe, graph, session, ontology)
            store.save_graph(new_graph)
            session.base_version = new_graph.version
            store.save_session(recipe_id, _session_to_doc(session))
        return {"graph": new_graph.to_document(), "changeset": changes.to_document()}

    @app.post("/recipes/{recipe_id}/adapt")
    def adapt_recipe(recipe_id: str, body: AdaptIn):
        recipe = get_recipe(recipe_id)
        donor = get_recipe(body.donor_id)
        graph = get_graph(recipe_id)
        try:
            donor_graph = store.load_graph(body.donor_id)
        except NotFoundError:
            try:
                donor_graph = annotate(donor, ontology)
            except AnnotationError as exc:
                raise HTTPException(422, f"donor recipe cannot be annotated: {exc}")
        request = AdaptationRequest(body.alpha, body.beta, body.donor_id)
        try:
            result = adapt(graph, request, donor_graph, recipe, donor, ontology)
            ingredients = adapt_ingredients(recipe, donor, request, ontology)
        except (AdaptationError, OntologyError) as exc:
            raise HTTPException(422, str(exc))
        doc = result.to_document()
        doc["ingredients"] = [{"text": t, "concept": c} for t, c in ingredients]
        return doc

    if static_dir:
        app.mount("/", StaticFiles(directory=Path(static_dir), html=True), name="ui")

    return app
