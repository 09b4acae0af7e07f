import { describe, expect, it } from "vitest";

import { layoutPositions } from "../src/layout.js";
import { brokenGraph, zoomCream } from "./helpers.js";

describe("layoutPositions", () => {
  it("is deterministic", () => {
    const g = brokenGraph();
    const a = [...layoutPositions(g).entries()];
    const b = [...layoutPositions(g).entries()];
    expect(a).toEqual(b);
  });

  it("covers every vertex", () => {
    const g = brokenGraph();
    const positions = layoutPositions(g);
    for (const v of g.vertices) {
      expect(positions.has(v.id)).toBe(true);
    }
  });

  it("orders actions left-to-right by temporal order", () => {
    const g = brokenGraph();
    const positions = layoutPositions(g);
    const before = g.arcs.filter((a) => a.label === "isBefore");
    expect(before.length).toBeGreaterThan(0);
    for (const a of before) {
      expect(positions.get(a.from)!.x).toBeLessThan(positions.get(a.to)!.x);
    }
  });

  it("puts foods above and clauses below the action row", () => {
    const g = brokenGraph();
    const positions = layoutPositions(g);
    const rowTop = (kind: string) =>
      Math.min(
        ...g.vertices
          .filter((v) => v.kind === kind)
          .map((v) => positions.get(v.id)!.y),
      );
    expect(rowTop("Food")).toBeLessThan(rowTop("Action"));
    expect(rowTop("Action")).toBeLessThan(rowTop("Clause"));
  });

  it("never stacks two vertices on the same point", () => {
    for (const g of [brokenGraph(), zoomCream()]) {
      const seen = new Set<string>();
      for (const p of layoutPositions(g).values()) {
        const key = `${p.x},${p.y}`;
        expect(seen.has(key)).toBe(false);
        seen.add(key);
      }
    }
  });
});
