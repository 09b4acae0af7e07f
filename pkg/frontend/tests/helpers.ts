/** Test helpers: fixture loading and a fake service.
 *
 * The fixtures under tests/fixtures/ are verbatim responses recorded from
 * the real HTTP service running the butter scenario with the "melt" verb
 * removed from the ontology, so unit tests exercise exactly the documents
 * the UI will see in production.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";
import type {
  GraphDoc,
  OntologyDoc,
  RecipeDoc,
  RepropagateDoc,
  ValidationDoc,
} from "../src/types.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, name), "utf8")) as T;
}

export const recipeDoc = (): RecipeDoc => fixture("recipe.json");
export const brokenGraph = (): GraphDoc => fixture("graph-broken.json");
export const editedGraph = (): GraphDoc => fixture("graph-edited.json");
export const zoomCream = (): GraphDoc => fixture("zoom-cream.json");
export const brokenValidation = (): ValidationDoc =>
  fixture("validate-broken.json");
export const fixedValidation = (): ValidationDoc =>
  fixture("validate-fixed.json");
export const repropagation = (): RepropagateDoc => fixture("repropagate.json");
export const ontologyDoc = (): OntologyDoc => fixture("ontology.json");

type State = "broken" | "edited" | "fixed";

/** In-memory stand-in for the service, replaying the recorded scenario. */
export class FakeService {
  state: State = "broken";
  requests: string[] = [];

  get version(): number {
    if (this.state === "broken") return brokenGraph().version;
    if (this.state === "edited") return editedGraph().version;
    return repropagation().graph.version;
  }

  private currentGraph(): GraphDoc {
    if (this.state === "broken") return brokenGraph();
    if (this.state === "edited") return editedGraph();
    return repropagation().graph;
  }

  fetch: FetchLike = (url, init) => {
    const method = init?.method ?? "GET";
    this.requests.push(`${method} ${url}`);
    const respond = (status: number, body: unknown) =>
      Promise.resolve(
        new Response(JSON.stringify(body), {
          status,
          headers: { "Content-Type": "application/json" },
        }),
      );

    if (url === "/ontology") return respond(200, ontologyDoc());
    if (url === "/recipes") {
      const r = recipeDoc();
      return respond(200, [{ id: r.id, title: r.title }]);
    }
    if (url === "/recipes/butter-cookies") return respond(200, recipeDoc());
    if (url === "/recipes/butter-cookies/graph") {
      return respond(200, this.currentGraph());
    }
    if (url === "/recipes/butter-cookies/graph/validate") {
      return respond(
        200,
        this.state === "fixed" ? fixedValidation() : brokenValidation(),
      );
    }
    if (url.startsWith("/recipes/butter-cookies/graph/zoom?focus=")) {
      const focus = decodeURIComponent(url.split("focus=")[1]);
      if (focus !== "Action:cream_11") {
        return respond(404, { detail: `unknown action '${focus}'` });
      }
      return respond(200, zoomCream());
    }
    if (url === "/recipes/butter-cookies/edits" && method === "POST") {
      const body = JSON.parse(String(init?.body)) as { base_version: number };
      if (body.base_version !== this.version) {
        return respond(409, {
          reason: "version-conflict",
          expected: this.version,
          got: body.base_version,
        });
      }
      this.state = "edited";
      return respond(200, editedGraph());
    }
    if (url === "/recipes/butter-cookies/repropagate" && method === "POST") {
      this.state = "fixed";
      return respond(200, repropagation());
    }
    return respond(404, { detail: `unknown route ${method} ${url}` });
  };
}
