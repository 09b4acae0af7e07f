/** JSON document shapes exchanged with the recipe graph HTTP service. */

export type VertexKind = "Action" | "Food" | "Clause";

export type ArcLabel =
  | "hasDOInput"
  | "hasPCInput"
  | "hasOutput"
  | "isBefore"
  | "isDuring"
  | "isRelatedToClause";

export interface VertexDoc {
  id: string;
  kind: VertexKind;
  concept?: string;
  origin?: string;
  text_span?: [number, number];
  label?: string;
}

export interface ArcDoc {
  from: string;
  to: string;
  label: ArcLabel;
}

export interface GraphDoc {
  recipe_id: string;
  version: number;
  vertices: VertexDoc[];
  arcs: ArcDoc[];
}

export interface ViolationDoc {
  rule: string;
  message: string;
  ids: string[];
}

export interface ValidationDoc {
  violations: ViolationDoc[];
  component_count: number;
  action_count: number;
  ingredient_count: number;
  vertex_count: number;
}

export interface IngredientDoc {
  text: string;
  concept: string;
}

export interface RecipeDoc {
  id: string;
  title: string;
  ingredients: IngredientDoc[];
  preparation: string;
}

export interface RecipeSummaryDoc {
  id: string;
  title: string;
}

export type EditKind =
  | "AddAction"
  | "AddFood"
  | "AddArc"
  | "RemoveArc"
  | "RemoveVertex"
  | "Relabel";

export interface EditDoc {
  kind: EditKind;
  payload: Record<string, unknown>;
  anchor_clause: string;
}

export interface ChangeSetDoc {
  added: { vertices: VertexDoc[]; arcs: ArcDoc[] };
  removed: { vertices: VertexDoc[]; arcs: ArcDoc[] };
}

export interface RepropagateDoc {
  graph: GraphDoc;
  changeset: ChangeSetDoc;
}

export interface ConceptDoc {
  id: string;
  parents: string[];
  variants: string[];
  description: string;
}

export interface ActionSchemaDoc {
  requires_do: boolean;
  requires_pc: boolean;
  prepositions: string[];
  output_count: number;
}

export interface TargetSetMemberDoc {
  concept: string;
  weight: number;
}

export interface OntologyDoc {
  hierarchies: Record<string, ConceptDoc[]>;
  action_schemas: Record<string, ActionSchemaDoc>;
  target_sets: Record<string, TargetSetMemberDoc[]>;
}

export interface TextPatchDoc {
  start: number;
  end: number;
  replacement: string;
}

export interface AdaptationDoc {
  graph: GraphDoc;
  text: string;
  patches: TextPatchDoc[];
  ingredients: IngredientDoc[];
}
