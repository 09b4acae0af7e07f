import json
from pathlib import Path

import pytest

from recipegraph import Recipe, load_ontology

DATA = Path(__file__).resolve().parent.parent / "data"
CORPUS = Path(__file__).resolve().parent / "fixtures" / "corpus"


@pytest.fixture(scope="session")
def ontology():
    return load_ontology(DATA / "ontology.json")


@pytest.fixture(scope="session")
def ontology_doc():
    return json.loads((DATA / "ontology.json").read_text())


def load_recipe(name: str) -> Recipe:
    return Recipe.from_json((DATA / "recipes" / f"{name}.json").read_text())


@pytest.fixture
def mango_recipe():
    return load_recipe("mango-dessert")


@pytest.fixture
def rice_recipe():
    return load_recipe("rice-mango")


@pytest.fixture
def fig_recipe():
    return load_recipe("fig-dessert")


@pytest.fixture
def cookie_recipe():
    return load_recipe("butter-cookies")


def corpus_recipes() -> list[Recipe]:
    return [Recipe.from_json(p.read_text()) for p in sorted(CORPUS.glob("*.json"))]


CRITERION_RESULTS: list[tuple[int, str, str]] = []


def record_criterion(number: int, title: str, status: str) -> None:
    CRITERION_RESULTS.append((number, title, status))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERION_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status in sorted(CRITERION_RESULTS):
        terminalreporter.write_line(f"CRITERION {number}: {status} - {title}")


def ontology_without_melt(ontology_doc: dict):
    """Same ontology but with the 'melt' verb unrecognisable."""
    doc = json.loads(json.dumps(ontology_doc))
    for rec in doc["hierarchies"]["action"]:
        if rec["id"] == "Melt":
            rec["variants"] = []
    return load_ontology(doc)
