/** Thin typed client for the recipe graph HTTP service.
 *
 * Every method maps to one endpoint; non-2xx responses become typed errors
 * so the view model can distinguish conflicts (reload) from typing mistakes
 * (reject the edit) and missing resources.
 */

import type {
  AdaptationDoc,
  EditDoc,
  GraphDoc,
  OntologyDoc,
  RecipeDoc,
  RecipeSummaryDoc,
  RepropagateDoc,
  ValidationDoc,
} from "./types.js";

export type ConflictReason = "version-conflict" | "order-violation";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ConflictError extends ApiError {
  constructor(
    readonly reason: ConflictReason,
    readonly body: Record<string, unknown>,
  ) {
    super(409, `conflict: ${reason}`);
    this.name = "ConflictError";
  }
}

export type FetchLike = (
  url: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(
    private readonly baseUrl: string,
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (response.status === 409) {
      const doc = (await response.json()) as Record<string, unknown>;
      throw new ConflictError(doc.reason as ConflictReason, doc);
    }
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const doc = (await response.json()) as { detail?: string };
        if (doc.detail) detail = doc.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  ontology(): Promise<OntologyDoc> {
    return this.request("GET", "/ontology");
  }

  listRecipes(): Promise<RecipeSummaryDoc[]> {
    return this.request("GET", "/recipes");
  }

  recipe(id: string): Promise<RecipeDoc> {
    return this.request("GET", `/recipes/${encodeURIComponent(id)}`);
  }

  createRecipe(doc: RecipeDoc): Promise<RecipeDoc> {
    return this.request("POST", "/recipes", doc);
  }

  annotate(id: string): Promise<GraphDoc> {
    return this.request("POST", `/recipes/${encodeURIComponent(id)}/annotate`);
  }

  graph(id: string): Promise<GraphDoc> {
    return this.request("GET", `/recipes/${encodeURIComponent(id)}/graph`);
  }

  validate(id: string): Promise<ValidationDoc> {
    return this.request(
      "GET",
      `/recipes/${encodeURIComponent(id)}/graph/validate`,
    );
  }

  zoom(id: string, focus: string): Promise<GraphDoc> {
    return this.request(
      "GET",
      `/recipes/${encodeURIComponent(id)}/graph/zoom?focus=${encodeURIComponent(focus)}`,
    );
  }

  postEdits(
    id: string,
    baseVersion: number,
    edits: EditDoc[],
  ): Promise<GraphDoc> {
    return this.request("POST", `/recipes/${encodeURIComponent(id)}/edits`, {
      base_version: baseVersion,
      edits,
    });
  }

  repropagate(id: string): Promise<RepropagateDoc> {
    return this.request(
      "POST",
      `/recipes/${encodeURIComponent(id)}/repropagate`,
    );
  }

  adapt(
    id: string,
    alpha: string,
    beta: string,
    donorId: string,
  ): Promise<AdaptationDoc> {
    return this.request("POST", `/recipes/${encodeURIComponent(id)}/adapt`, {
      alpha,
      beta,
      donor_id: donorId,
    });
  }
}
