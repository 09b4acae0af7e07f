/** SVG rendering of a recipe graph document.
 *
 * The renderer produces markup from the last server response and nothing
 * else: every `data-id` in the output names a vertex of the input document,
 * every `data-arc` an arc. Diff styling follows the convention of bold for
 * additions and dashed for removals.
 */

import { layoutExtent, layoutPositions } from "./layout.js";
import type { ArcDoc, GraphDoc, VertexDoc } from "./types.js";

export interface RenderOptions {
  /** frontier foods get the `frontier` class (zoom view) */
  frontier?: Set<string>;
  /** proposal additions, rendered bold */
  addedVertices?: Set<string>;
  addedArcs?: Set<string>;
  /** proposal removals, rendered dashed */
  removedVertices?: Set<string>;
  removedArcs?: Set<string>;
  selection?: string | null;
}

export function arcKey(a: ArcDoc): string {
  return `${a.from}|${a.label}|${a.to}`;
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function caption(v: VertexDoc): string {
  if (v.concept) return v.concept;
  if (v.label) return v.label;
  return v.id.split(":", 2)[1] ?? v.id;
}

function vertexClasses(v: VertexDoc, options: RenderOptions): string {
  const classes = ["vertex", v.kind.toLowerCase()];
  if (options.frontier?.has(v.id)) classes.push("frontier");
  if (options.addedVertices?.has(v.id)) classes.push("added");
  if (options.removedVertices?.has(v.id)) classes.push("removed");
  if (options.selection === v.id) classes.push("selected");
  return classes.join(" ");
}

function shape(v: VertexDoc): string {
  if (v.kind === "Action") {
    return '<rect x="-60" y="-18" width="120" height="36" rx="4"/>';
  }
  if (v.kind === "Food") {
    return '<ellipse rx="62" ry="20"/>';
  }
  return '<rect x="-60" y="-16" width="120" height="32" class="note"/>';
}

export function renderSvg(
  graph: GraphDoc,
  options: RenderOptions = {},
): string {
  const positions = layoutPositions(graph);
  const extent = layoutExtent(positions);
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${extent.x} ${extent.y}" ` +
      `width="${extent.x}" height="${extent.y}" class="recipe-graph">`,
  );
  parts.push(
    "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" " +
      "markerWidth=\"7\" markerHeight=\"7\" orient=\"auto-start-reverse\">" +
      '<path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>',
  );

  const arcs = [...graph.arcs].sort((a, b) =>
    arcKey(a).localeCompare(arcKey(b)),
  );
  for (const a of arcs) {
    const from = positions.get(a.from);
    const to = positions.get(a.to);
    if (!from || !to) continue;
    const classes = ["arc", a.label];
    if (options.addedArcs?.has(arcKey(a))) classes.push("added");
    if (options.removedArcs?.has(arcKey(a))) classes.push("removed");
    const midX = (from.x + to.x) / 2;
    const midY = (from.y + to.y) / 2;
    parts.push(
      `<g class="${classes.join(" ")}" data-arc="${escapeXml(arcKey(a))}">` +
        `<line x1="${from.x}" y1="${from.y}" x2="${to.x}" y2="${to.y}" ` +
        'marker-end="url(#arrow)"/>' +
        `<text x="${midX}" y="${midY - 4}">${escapeXml(a.label)}</text></g>`,
    );
  }

  const vertices = [...graph.vertices].sort((a, b) =>
    a.id.localeCompare(b.id),
  );
  for (const v of vertices) {
    const p = positions.get(v.id);
    if (!p) continue;
    parts.push(
      `<g class="${vertexClasses(v, options)}" data-id="${escapeXml(v.id)}" ` +
        `transform="translate(${p.x},${p.y})">` +
        shape(v) +
        `<text text-anchor="middle" dy="4">${escapeXml(caption(v))}</text></g>`,
    );
  }

  parts.push("</svg>");
  return parts.join("\n");
}

/** Vertex ids present in rendered markup; the UI's no-fabrication check. */
export function renderedVertexIds(svg: string): Set<string> {
  const ids = new Set<string>();
  for (const match of svg.matchAll(/data-id="([^"]+)"/g)) {
    ids.add(match[1].replace(/&amp;/g, "&").replace(/&quot;/g, '"'));
  }
  return ids;
}
