/** Client-side mirror of the graph typing rules.
 *
 * The server is authoritative; these checks only exist so illegal edits are
 * never offered in the UI (illegal drag targets stay unhighlighted, staging
 * an ill-typed arc throws before anything is posted).
 */

import type { ArcLabel, GraphDoc, VertexDoc, VertexKind } from "./types.js";

/** Required target kind per arc label; every arc is sourced at an action. */
export const ARC_TARGET_KIND: Record<ArcLabel, VertexKind> = {
  hasDOInput: "Food",
  hasPCInput: "Food",
  hasOutput: "Food",
  isBefore: "Action",
  isDuring: "Action",
  isRelatedToClause: "Clause",
};

export const ARC_LABELS = Object.keys(ARC_TARGET_KIND) as ArcLabel[];

export function vertexById(
  graph: GraphDoc,
  id: string,
): VertexDoc | undefined {
  return graph.vertices.find((v) => v.id === id);
}

export function arcIsLegal(
  graph: GraphDoc,
  source: string,
  target: string,
  label: ArcLabel,
): boolean {
  const from = vertexById(graph, source);
  const to = vertexById(graph, target);
  if (!from || !to || from.kind !== "Action") return false;
  if (source === target) return false;
  return to.kind === ARC_TARGET_KIND[label];
}

/** Targets that may legally receive an arc of `label` from `source`. */
export function legalTargets(
  graph: GraphDoc,
  source: string,
  label: ArcLabel,
): string[] {
  return graph.vertices
    .filter((v) => arcIsLegal(graph, source, v.id, label))
    .map((v) => v.id)
    .sort();
}

/** Ordinal of a clause id; accepts "Clause:c_3" and "c_3". */
export function clauseNumber(id: string): number {
  const match = /c_(\d+)$/.exec(id);
  if (!match) throw new Error(`not a clause id: ${id}`);
  return Number(match[1]);
}

/** Clause vertex an action is related to, if any. */
export function clauseOf(graph: GraphDoc, actionId: string): string | null {
  const arc = graph.arcs.find(
    (a) => a.from === actionId && a.label === "isRelatedToClause",
  );
  return arc ? arc.to : null;
}

/** Foods in a zoom sub-graph that are there only as availability frontier,
 * i.e. not connected to the focus action itself. */
export function frontierFoods(zoomed: GraphDoc, focus: string): Set<string> {
  const touched = new Set<string>();
  for (const a of zoomed.arcs) {
    if (a.from === focus) touched.add(a.to);
  }
  const frontier = new Set<string>();
  for (const v of zoomed.vertices) {
    if (v.kind === "Food" && !touched.has(v.id)) frontier.add(v.id);
  }
  return frontier;
}
