/** Editing session state for one recipe.
 *
 * The view model never fabricates graph state: `graph`, `zoomed` and
 * `proposal` are always verbatim server responses, and `version` is the
 * last version the server acknowledged. Edits are staged locally (typing
 * and text order enforced up front) and posted as one optimistic batch.
 */

import { ApiClient, ApiError } from "./api.js";
import {
  arcIsLegal,
  clauseNumber,
  frontierFoods,
  legalTargets,
} from "./rules.js";
import { arcKey, type RenderOptions } from "./render.js";
import type {
  ArcDoc,
  ArcLabel,
  ChangeSetDoc,
  EditDoc,
  GraphDoc,
  OntologyDoc,
  RecipeDoc,
  ValidationDoc,
  VertexDoc,
} from "./types.js";

export interface Proposal {
  graph: GraphDoc;
  changeset: ChangeSetDoc;
}

export type Badge = "empty" | "clean" | "violations";

export class EditorViewModel {
  recipe: RecipeDoc | null = null;
  graph: GraphDoc | null = null;
  zoomed: GraphDoc | null = null;
  proposal: Proposal | null = null;
  validation: ValidationDoc | null = null;
  ontology: OntologyDoc | null = null;
  selection: string | null = null;
  pendingEdits: EditDoc[] = [];

  /** highest clause ordinal an edit was anchored to; earlier clauses lock */
  private cursor = 0;

  constructor(private readonly api: ApiClient) {}

  get version(): number {
    return this.graph?.version ?? 0;
  }

  get recipeId(): string {
    if (!this.recipe) throw new Error("no recipe loaded");
    return this.recipe.id;
  }

  async init(): Promise<void> {
    this.ontology = await this.api.ontology();
  }

  async load(recipeId: string): Promise<void> {
    this.recipe = await this.api.recipe(recipeId);
    try {
      this.graph = await this.api.graph(recipeId);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        this.graph = await this.api.annotate(recipeId);
      } else {
        throw err;
      }
    }
    this.zoomed = null;
    this.proposal = null;
    this.selection = null;
    this.pendingEdits = [];
    this.cursor = 0;
    await this.refreshValidation();
  }

  /** Reload after a version conflict; drops all unposted local state. */
  async forceReload(): Promise<void> {
    await this.load(this.recipeId);
  }

  async refreshValidation(): Promise<void> {
    this.validation = await this.api.validate(this.recipeId);
  }

  badge(): Badge {
    if (!this.validation) return "empty";
    return this.validation.violations.length === 0 ? "clean" : "violations";
  }

  // -- display -----------------------------------------------------------

  /** The document the canvas must render right now. */
  displayed(): GraphDoc {
    if (this.proposal) return this.mergedProposalGraph();
    if (this.zoomed) return this.zoomed;
    if (this.graph) return this.graph;
    throw new Error("nothing to display");
  }

  displayOptions(): RenderOptions {
    const options: RenderOptions = { selection: this.selection };
    if (this.proposal) {
      const cs = this.proposal.changeset;
      options.addedVertices = new Set(cs.added.vertices.map((v) => v.id));
      options.addedArcs = new Set(cs.added.arcs.map(arcKey));
      options.removedVertices = new Set(cs.removed.vertices.map((v) => v.id));
      options.removedArcs = new Set(cs.removed.arcs.map(arcKey));
    } else if (this.zoomed && this.selection) {
      options.frontier = frontierFoods(this.zoomed, this.selection);
    }
    return options;
  }

  /** Proposal graph plus the removed elements, so removals render dashed. */
  private mergedProposalGraph(): GraphDoc {
    const proposal = this.proposal;
    if (!proposal) throw new Error("no proposal");
    const present = new Set(proposal.graph.vertices.map((v) => v.id));
    const vertices: VertexDoc[] = [...proposal.graph.vertices];
    for (const v of proposal.changeset.removed.vertices) {
      if (!present.has(v.id)) vertices.push(v);
    }
    const arcKeys = new Set(proposal.graph.arcs.map(arcKey));
    const arcs: ArcDoc[] = [...proposal.graph.arcs];
    for (const a of proposal.changeset.removed.arcs) {
      if (!arcKeys.has(arcKey(a))) arcs.push(a);
    }
    return { ...proposal.graph, vertices, arcs };
  }

  // -- zoom --------------------------------------------------------------

  async zoomOn(actionId: string): Promise<void> {
    this.zoomed = await this.api.zoom(this.recipeId, actionId);
    this.selection = actionId;
  }

  clearZoom(): void {
    this.zoomed = null;
    this.selection = null;
  }

  /** Character range of the selected action's clause in the preparation. */
  selectedClauseSpan(): [number, number] | null {
    if (!this.graph || !this.selection) return null;
    const arc = this.graph.arcs.find(
      (a) => a.from === this.selection && a.label === "isRelatedToClause",
    );
    if (!arc) return null;
    const clause = this.graph.vertices.find((v) => v.id === arc.to);
    return clause?.text_span ?? null;
  }

  // -- editing -----------------------------------------------------------

  /** Action concepts offered by the add-action palette. */
  actionConcepts(): string[] {
    if (!this.ontology) return [];
    return Object.keys(this.ontology.action_schemas).sort();
  }

  /** Text order rule: edits must not go behind the working cursor. */
  canAnchor(clauseId: string): boolean {
    return clauseNumber(clauseId) >= this.cursor;
  }

  /** Legal drag targets for a new arc, against the staged graph. */
  legalArcTargets(source: string, label: ArcLabel): string[] {
    return legalTargets(this.stagedGraph(), source, label);
  }

  /** Current graph with staged additions, the base for typing checks. */
  stagedGraph(): GraphDoc {
    if (!this.graph) throw new Error("no graph loaded");
    const vertices = [...this.graph.vertices];
    const arcs = [...this.graph.arcs];
    for (const edit of this.pendingEdits) {
      if (edit.kind === "AddAction") {
        vertices.push({
          id: String(edit.payload.id),
          kind: "Action",
          concept: String(edit.payload.concept),
        });
      } else if (edit.kind === "AddFood") {
        vertices.push({
          id: String(edit.payload.id),
          kind: "Food",
          concept: edit.payload.concept
            ? String(edit.payload.concept)
            : undefined,
        });
      } else if (edit.kind === "AddArc") {
        arcs.push({
          from: String(edit.payload.from),
          to: String(edit.payload.to),
          label: edit.payload.label as ArcLabel,
        });
      }
    }
    return { ...this.graph, vertices, arcs };
  }

  /** Queue an edit after enforcing text order and arc typing locally. */
  stageEdit(edit: EditDoc): void {
    if (!this.canAnchor(edit.anchor_clause)) {
      throw new Error(
        `edit anchored to ${edit.anchor_clause} is behind the cursor`,
      );
    }
    if (edit.kind === "AddArc") {
      const { from, to, label } = edit.payload as {
        from: string;
        to: string;
        label: ArcLabel;
      };
      if (!arcIsLegal(this.stagedGraph(), from, to, label)) {
        throw new Error(`ill-typed arc ${from} -${label}-> ${to}`);
      }
    }
    if (edit.kind === "AddAction" && this.ontology) {
      const concept = String(edit.payload.concept);
      if (!(concept in this.ontology.action_schemas)) {
        throw new Error(`unknown action concept ${concept}`);
      }
    }
    this.pendingEdits.push(edit);
    this.cursor = clauseNumber(edit.anchor_clause);
  }

  discardEdits(): void {
    this.pendingEdits = [];
  }

  /** Post the staged batch; throws ConflictError on stale version. */
  async submitEdits(): Promise<GraphDoc> {
    const graph = await this.api.postEdits(
      this.recipeId,
      this.version,
      this.pendingEdits,
    );
    this.graph = graph;
    this.pendingEdits = [];
    this.zoomed = null;
    await this.refreshValidation();
    return graph;
  }

  // -- repropagation -----------------------------------------------------

  async repropagate(): Promise<Proposal> {
    this.proposal = await this.api.repropagate(this.recipeId);
    return this.proposal;
  }

  async acceptProposal(): Promise<void> {
    if (!this.proposal) throw new Error("no proposal to accept");
    this.graph = this.proposal.graph;
    this.proposal = null;
    this.zoomed = null;
    await this.refreshValidation();
  }

  /** Keep the pre-repropagation view. The server retains every version,
   * so the next mutation on this stale view hits the conflict path. */
  revertProposal(): void {
    this.proposal = null;
  }
}
