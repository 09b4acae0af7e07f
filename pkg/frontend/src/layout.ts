/** Deterministic layered layout.
 *
 * Actions go left-to-right in temporal order, foods sit above the action
 * row, clauses below. Vertices sharing a column are stacked in sorted id
 * order, so two renders of the same document are pixel-identical.
 */

import type { GraphDoc } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

export const COLUMN_WIDTH = 170;
export const ROW_HEIGHT = 130;
export const STACK_OFFSET = 40;
export const MARGIN = 90;

const ROW_FOOD = 0;
const ROW_ACTION = 1;
const ROW_CLAUSE = 2;

/** Number of distinct transitive isBefore predecessors per action. */
function temporalDepths(graph: GraphDoc): Map<string, number> {
  const preds = new Map<string, string[]>();
  for (const v of graph.vertices) {
    if (v.kind === "Action") preds.set(v.id, []);
  }
  for (const a of graph.arcs) {
    if (a.label === "isBefore") preds.get(a.to)?.push(a.from);
  }
  const depths = new Map<string, number>();
  const closure = (id: string, seen: Set<string>): Set<string> => {
    const out = new Set<string>();
    for (const p of preds.get(id) ?? []) {
      if (seen.has(p)) continue; // cycle guard; validation reports it
      out.add(p);
      seen.add(p);
      for (const q of closure(p, seen)) out.add(q);
    }
    return out;
  };
  for (const id of preds.keys()) {
    depths.set(id, closure(id, new Set([id])).size);
  }
  return depths;
}

export function layoutPositions(graph: GraphDoc): Map<string, Point> {
  const depths = temporalDepths(graph);
  const actions = [...depths.keys()].sort((a, b) => {
    const d = (depths.get(a) ?? 0) - (depths.get(b) ?? 0);
    return d !== 0 ? d : a.localeCompare(b);
  });
  const column = new Map<string, number>();
  actions.forEach((id, i) => column.set(id, i));

  // foods take the column of their producer, else of their first consumer
  const producerCol = new Map<string, number>();
  const consumerCol = new Map<string, number>();
  const clauseCol = new Map<string, number>();
  for (const a of graph.arcs) {
    const col = column.get(a.from);
    if (col === undefined) continue;
    if (a.label === "hasOutput") {
      producerCol.set(a.to, col);
    } else if (a.label === "hasDOInput" || a.label === "hasPCInput") {
      const prev = consumerCol.get(a.to);
      if (prev === undefined || col < prev) consumerCol.set(a.to, col);
    } else if (a.label === "isRelatedToClause") {
      clauseCol.set(a.to, col);
    }
  }

  const cell = (id: string, kind: string): [number, number] => {
    if (kind === "Action") return [column.get(id) ?? 0, ROW_ACTION];
    if (kind === "Food") {
      return [producerCol.get(id) ?? consumerCol.get(id) ?? 0, ROW_FOOD];
    }
    const fallback = /c_(\d+)$/.exec(id);
    return [clauseCol.get(id) ?? (fallback ? Number(fallback[1]) - 1 : 0), ROW_CLAUSE];
  };

  const positions = new Map<string, Point>();
  const occupancy = new Map<string, number>();
  const ordered = [...graph.vertices].sort((a, b) => a.id.localeCompare(b.id));
  for (const v of ordered) {
    const [col, row] = cell(v.id, v.kind);
    const key = `${row}:${col}`;
    const slot = occupancy.get(key) ?? 0;
    occupancy.set(key, slot + 1);
    positions.set(v.id, {
      x: MARGIN + col * COLUMN_WIDTH,
      y: MARGIN + row * ROW_HEIGHT + slot * STACK_OFFSET,
    });
  }
  return positions;
}

export function layoutExtent(positions: Map<string, Point>): Point {
  let x = 2 * MARGIN;
  let y = 2 * MARGIN;
  for (const p of positions.values()) {
    x = Math.max(x, p.x + MARGIN);
    y = Math.max(y, p.y + MARGIN);
  }
  return { x, y };
}
