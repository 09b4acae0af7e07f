import { describe, expect, it } from "vitest";

import { arcKey, renderSvg, renderedVertexIds } from "../src/render.js";
import { brokenGraph, repropagation, zoomCream } from "./helpers.js";

describe("renderSvg", () => {
  it("renders exactly the document's vertex set, nothing fabricated", () => {
    for (const g of [brokenGraph(), zoomCream(), repropagation().graph]) {
      const ids = renderedVertexIds(renderSvg(g));
      expect(ids).toEqual(new Set(g.vertices.map((v) => v.id)));
    }
  });

  it("is deterministic", () => {
    const g = brokenGraph();
    expect(renderSvg(g)).toBe(renderSvg(g));
  });

  it("renders every arc with a data-arc key", () => {
    const g = brokenGraph();
    const svg = renderSvg(g);
    for (const a of g.arcs) {
      expect(svg).toContain(`data-arc="${arcKey(a)}"`);
    }
  });

  it("marks frontier, added and removed elements with classes", () => {
    const g = zoomCream();
    const svg = renderSvg(g, {
      frontier: new Set(["Food:butter_1"]),
      addedVertices: new Set(["Action:cream_11"]),
      removedVertices: new Set(["Food:sift_out_8"]),
    });
    expect(svg).toMatch(/class="vertex food frontier"[^>]*Food:butter_1/);
    expect(svg).toMatch(/class="vertex action added"[^>]*Action:cream_11/);
    expect(svg).toMatch(/class="vertex food removed"[^>]*Food:sift_out_8/);
  });

  it("marks the selection", () => {
    const svg = renderSvg(zoomCream(), { selection: "Action:cream_11" });
    expect(svg).toMatch(/class="vertex action selected"/);
  });

  it("escapes markup-significant characters in captions", () => {
    const g = brokenGraph();
    g.vertices.push({
      id: "Food:odd_99",
      kind: "Food",
      label: 'a <b> & "c"',
    });
    const svg = renderSvg(g);
    expect(svg).toContain("a &lt;b&gt; &amp; &quot;c&quot;");
    expect(svg).not.toContain("<b>");
  });
});
