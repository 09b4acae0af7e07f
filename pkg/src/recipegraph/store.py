"""File-backed store for recipes and versioned graphs.

One JSON file per (recipe, version) plus a pointer file, all written with
write-then-rename so a crash mid-write never corrupts the latest version.
"""

from __future__ import annotations

import json
import os
import re
import threading
from pathlib import Path
from typing import Optional

from .annotator import Recipe
from .graph import GraphError, RecipeGraph

_VERSION_RE = re.compile(r"^v(\d+)\.json$")


class StoreError(ValueError):
    pass


class NotFoundError(StoreError):
    pass


def _atomic_write(path: Path, data: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(data, encoding="utf-8")
    os.replace(tmp, path)


class Store:
    def __init__(self, root):
        self.root = Path(root)
        (self.root / "recipes").mkdir(parents=True, exist_ok=True)
        (self.root / "graphs").mkdir(parents=True, exist_ok=True)
        (self.root / "sessions").mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def lock(self, recipe_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(recipe_id, threading.Lock())

    # -- recipes -----------------------------------------------------------

    def _recipe_path(self, recipe_id: str) -> Path:
        if not re.match(r"^[\w.-]+$", recipe_id):
            raise StoreError(f"invalid recipe id {recipe_id!r}")
        return self.root / "recipes" / f"{recipe_id}.json"

    def list_recipes(self) -> list[Recipe]:
        out = []
        for path in sorted((self.root / "recipes").glob("*.json")):
            out.append(Recipe.from_json(path.read_text(encoding="utf-8")))
        return out

    def has_recipe(self, recipe_id: str) -> bool:
        return self._recipe_path(recipe_id).exists()

    def load_recipe(self, recipe_id: str) -> Recipe:
        path = self._recipe_path(recipe_id)
        if not path.exists():
            raise NotFoundError(f"no recipe {recipe_id!r}")
        return Recipe.from_json(path.read_text(encoding="utf-8"))

    def save_recipe(self, recipe: Recipe) -> None:
        _atomic_write(
            self._recipe_path(recipe.id),
            json.dumps(recipe.to_document(), indent=2) + "\n",
        )

    # -- graphs ------------------------------------------------------------

    def _graph_dir(self, recipe_id: str) -> Path:
        return self.root / "graphs" / recipe_id

    def save_graph(self, graph: RecipeGraph) -> None:
        gdir = self._graph_dir(graph.recipe_id)
        gdir.mkdir(parents=True, exist_ok=True)
        _atomic_write(gdir / f"v{graph.version}.json", graph.to_json())
        _atomic_write(gdir / "LATEST", str(graph.version))

    def latest_version(self, recipe_id: str) -> Optional[int]:
        gdir = self._graph_dir(recipe_id)
        pointer = gdir / "LATEST"
        if pointer.exists():
            try:
                version = int(pointer.read_text().strip())
                self._load_version(recipe_id, version)
                return version
            except (ValueError, GraphError, OSError):
                pass
        # pointer missing or stale: fall back to the newest loadable file
        versions = []
        if gdir.exists():
            for path in gdir.iterdir():
                m = _VERSION_RE.match(path.name)
                if m:
                    versions.append(int(m.group(1)))
        for version in sorted(versions, reverse=True):
            try:
                self._load_version(recipe_id, version)
                return version
            except (GraphError, OSError):
                continue
        return None

    def _load_version(self, recipe_id: str, version: int) -> RecipeGraph:
        path = self._graph_dir(recipe_id) / f"v{version}.json"
        return RecipeGraph.from_json(path.read_text(encoding="utf-8"))

    def load_graph(self, recipe_id: str) -> RecipeGraph:
        version = self.latest_version(recipe_id)
        if version is None:
            raise NotFoundError(f"no graph for recipe {recipe_id!r}")
        return self._load_version(recipe_id, version)

    def clear_graphs(self, recipe_id: str) -> None:
        gdir = self._graph_dir(recipe_id)
        if gdir.exists():
            for path in gdir.iterdir():
                path.unlink()

    # -- sessions ----------------------------------------------------------

    def _session_path(self, recipe_id: str) -> Path:
        return self.root / "sessions" / f"{recipe_id}.json"

    def load_session(self, recipe_id: str) -> Optional[dict]:
        path = self._session_path(recipe_id)
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))

    def save_session(self, recipe_id: str, doc: dict) -> None:
        _atomic_write(self._session_path(recipe_id), json.dumps(doc, indent=2) + "\n")

    def clear_session(self, recipe_id: str) -> None:
        path = self._session_path(recipe_id)
        if path.exists():
            path.unlink()
