"""Command-line driver for batch annotation, validation and adaptation.

Machine-readable output goes to stdout, diagnostics to stderr.  Exit codes:
0 success (or clean validation), 1 validation violations, 2 usage errors,
3 bad input files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .adaptation import AdaptationError, AdaptationRequest, adapt, adapt_ingredients
from .annotator import AnnotationError, Recipe, annotate
from .graph import GraphError, RecipeGraph
from .ontology import Ontology, OntologyError, load_ontology
from .textproc import debug_dump

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_INPUT = 3


class _InputError(Exception):
    pass


def _load_ontology(path: str) -> Ontology:
    try:
        return load_ontology(path)
    except (OSError, json.JSONDecodeError, OntologyError) as exc:
        raise _InputError(f"cannot load ontology {path}: {exc}")


def _load_recipe(path: str) -> Recipe:
    try:
        return Recipe.from_json(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise _InputError(f"cannot load recipe {path}: {exc}")


def _load_graph(path: str) -> RecipeGraph:
    try:
        return RecipeGraph.from_json(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError, GraphError, KeyError) as exc:
        raise _InputError(f"cannot load graph {path}: {exc}")


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_annotate(args) -> int:
    ontology = _load_ontology(args.ontology)
    recipe = _load_recipe(args.recipe)
    try:
        graph = annotate(recipe, ontology)
    except AnnotationError as exc:
        raise _InputError(str(exc))
    _emit(graph.to_document(), args.out)
    report = graph.validate(ontology)
    for rule, message, _ids in report.violations:
        print(f"{rule}: {message}", file=sys.stderr)
    return EXIT_OK


def _cmd_validate(args) -> int:
    ontology = _load_ontology(args.ontology)
    graph = _load_graph(args.graph)
    report = graph.validate(ontology)
    _emit(report.to_document(), None)
    return EXIT_OK if report.ok else EXIT_VIOLATIONS


def _cmd_adapt(args) -> int:
    ontology = _load_ontology(args.ontology)
    recipe = _load_recipe(args.recipe)
    graph = _load_graph(args.graph)
    donor_recipe = _load_recipe(args.donor_recipe)
    donor_graph = _load_graph(args.donor_graph)
    request = AdaptationRequest(args.alpha, args.beta, donor_recipe.id)
    try:
        result = adapt(graph, request, donor_graph, recipe, donor_recipe, ontology)
        ingredients = adapt_ingredients(recipe, donor_recipe, request, ontology)
    except (AdaptationError, OntologyError) as exc:
        raise _InputError(str(exc))
    doc = result.to_document()
    doc["ingredients"] = [{"text": t, "concept": c} for t, c in ingredients]
    _emit(doc, args.out)
    return EXIT_OK


def _cmd_export_dot(args) -> int:
    graph = _load_graph(args.graph)
    sys.stdout.write(graph.export_dot())
    return EXIT_OK


def _cmd_debug_nlp(args) -> int:
    ontology = _load_ontology(args.ontology)
    try:
        text = Path(args.text).read_text(encoding="utf-8")
    except OSError as exc:
        raise _InputError(str(exc))
    sys.stdout.write(debug_dump(text, ontology))
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app
    from .store import Store

    ontology = _load_ontology(args.ontology)
    app = create_app(ontology, Store(args.store), static_dir=args.static)
    host, _, port = args.listen.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return EXIT_OK


def _cmd_report(args) -> int:
    from .report import write_report

    ontology = _load_ontology(args.ontology)
    graph = _load_graph(args.graph)
    paths = write_report(graph, ontology, args.out)
    for path in paths:
        print(path)
    report = graph.validate(ontology)
    for rule, message, _ids in report.violations:
        print(f"{rule}: {message}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_VIOLATIONS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recipegraph", description="Recipe text to formal graph toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("annotate", help="annotate a recipe into a graph document")
    p.add_argument("--ontology", required=True)
    p.add_argument("--recipe", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_annotate)

    p = sub.add_parser("validate", help="run consistency rules on a graph")
    p.add_argument("--ontology", required=True)
    p.add_argument("--graph", required=True)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("adapt", help="prune an ingredient branch and graft a donor branch")
    p.add_argument("--ontology", required=True)
    p.add_argument("--recipe", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--donor-recipe", required=True)
    p.add_argument("--donor-graph", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_adapt)

    p = sub.add_parser("export-dot", help="write a graph as DOT")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=_cmd_export_dot)

    p = sub.add_parser("debug-nlp", help="dump tokens, tags, chunks and clauses")
    p.add_argument("--ontology", required=True)
    p.add_argument("--text", required=True)
    p.set_defaults(func=_cmd_debug_nlp)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--ontology", required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--listen", default="127.0.0.1:8000")
    p.add_argument("--static", help="directory with the editor UI assets")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("report", help="render a figure and delimited validation tables")
    p.add_argument("--ontology", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
