"""Semi-automatic annotation of cooking recipes as formal graphs.

The pipeline turns free-text preparation steps into a typed graph of
actions, foods and clauses, validates it against a cooking ontology,
supports user correction with downstream repropagation, and adapts a
recipe by pruning one ingredient's preparation branch and grafting a
donor recipe's branch in its place.
"""

from .adaptation import AdaptationRequest, AdaptationResult, TextPatch, adapt, extract_branch
from .annotator import Recipe, annotate
from .compare import graphs_equivalent, structural_map
from .correction import ChangeSet, EditOperation, Session, apply_edit, repropagate
from .graph import Arc, RecipeGraph, ValidationReport, Vertex
from .ontology import Concept, Ontology, load_ontology
from .store import Store
from .textproc import analyse, tokenize

__all__ = [
    "AdaptationRequest",
    "AdaptationResult",
    "Arc",
    "ChangeSet",
    "Concept",
    "EditOperation",
    "Ontology",
    "Recipe",
    "RecipeGraph",
    "Session",
    "Store",
    "TextPatch",
    "ValidationReport",
    "Vertex",
    "adapt",
    "analyse",
    "annotate",
    "apply_edit",
    "extract_branch",
    "graphs_equivalent",
    "load_ontology",
    "repropagate",
    "structural_map",
    "tokenize",
]

__version__ = "0.1.0"
