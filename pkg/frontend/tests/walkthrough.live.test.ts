/** Scripted walkthrough of the butter scenario against a live service.
 *
 * Spawns the real HTTP server (with the "melt" verb removed from the
 * ontology so annotation breaks the way the scenario requires), drives the
 * view model over real HTTP, and checks that the rendered vertex set equals
 * the API responses at every step.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { renderSvg, renderedVertexIds } from "../src/render.js";
import { EditorViewModel } from "../src/viewmodel.js";
import type { GraphDoc } from "../src/types.js";
import { recipeDoc } from "./helpers.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const PORT = 8000 + (process.pid % 1000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | undefined;
let workdir: string;

function brokenOntologyFile(dir: string): string {
  const doc = JSON.parse(
    readFileSync(join(HERE, "..", "..", "data", "ontology.json"), "utf8"),
  );
  for (const rec of doc.hierarchies.action) {
    if (rec.id === "Melt") rec.variants = [];
  }
  const path = join(dir, "ontology-broken.json");
  writeFileSync(path, JSON.stringify(doc));
  return path;
}

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const r = await fetch(`${BASE}/recipes`);
      if (r.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), "recipegraph-ui-"));
  server = spawn(
    "recipegraph",
    [
      "serve",
      "--ontology",
      brokenOntologyFile(workdir),
      "--store",
      join(workdir, "store"),
      "--listen",
      `127.0.0.1:${PORT}`,
    ],
    { stdio: "ignore" },
  );
  await waitForServer();
}, 30_000);

afterAll(() => {
  server?.kill();
  rmSync(workdir, { recursive: true, force: true });
});

function renderedSet(vm: EditorViewModel): Set<string> {
  return renderedVertexIds(renderSvg(vm.displayed(), vm.displayOptions()));
}

function idSet(graph: GraphDoc): Set<string> {
  return new Set(graph.vertices.map((v) => v.id));
}

describe("live butter scenario", () => {
  it("load, zoom, three edits, repropagate, accept, badge clears", async () => {
    const api = new ApiClient(BASE);
    await api.createRecipe(recipeDoc());

    const vm = new EditorViewModel(api);
    await vm.init();
    await vm.load("butter-cookies");

    // broken annotation: two components, butter and clause c_3 isolated
    expect(vm.badge()).toBe("violations");
    expect(vm.validation!.component_count).toBeGreaterThanOrEqual(2);
    const v5 = vm.validation!.violations.find((v) => v.rule === "V5");
    expect(v5).toBeDefined();
    const butter = vm.graph!.vertices.find((v) => v.concept === "Butter")!.id;
    expect(v5!.ids).toContain(butter);
    expect(v5!.ids).toContain("Clause:c_3");
    expect(renderedSet(vm)).toEqual(idSet(await api.graph("butter-cookies")));

    // zoom on the creaming action renders exactly the endpoint's sub-graph
    const cream = vm.graph!.vertices.find(
      (v) => v.kind === "Action" && v.concept === "CreamAction",
    )!.id;
    await vm.zoomOn(cream);
    const zoomResponse = await api.zoom("butter-cookies", cream);
    expect(renderedSet(vm)).toEqual(idSet(zoomResponse));
    expect(vm.displayOptions().frontier!.has(butter)).toBe(true);

    // three corrective edits, posted as one optimistic batch
    vm.stageEdit({
      kind: "AddAction",
      payload: { concept: "Melt", id: "Action:melt_50" },
      anchor_clause: "c_3",
    });
    vm.stageEdit({
      kind: "AddArc",
      payload: { from: "Action:melt_50", to: butter, label: "hasDOInput" },
      anchor_clause: "c_3",
    });
    vm.stageEdit({
      kind: "AddArc",
      payload: {
        from: "Action:melt_50",
        to: "Clause:c_3",
        label: "isRelatedToClause",
      },
      anchor_clause: "c_3",
    });
    await vm.submitEdits();
    expect(renderedSet(vm)).toEqual(idSet(await api.graph("butter-cookies")));

    // repropagate and accept the proposed diff
    const proposal = await vm.repropagate();
    expect(proposal.changeset.added.vertices.length).toBeGreaterThan(0);
    const diffIds = renderedSet(vm);
    for (const v of proposal.graph.vertices) {
      expect(diffIds.has(v.id)).toBe(true);
    }
    await vm.acceptProposal();
    expect(vm.version).toBe(proposal.graph.version);
    expect(renderedSet(vm)).toEqual(idSet(await api.graph("butter-cookies")));

    // validation badge clears: one component, no violations
    expect(vm.badge()).toBe("clean");
    expect(vm.validation!.violations).toEqual([]);
    expect(vm.validation!.component_count).toBe(1);

    console.log("CRITERION 8: PASS - live UI walkthrough");
  }, 30_000);

  it("stale submit conflicts and forced reload recovers", async () => {
    const api = new ApiClient(BASE);
    const vm = new EditorViewModel(api);
    await vm.init();
    await vm.load("butter-cookies");
    const latest = vm.version;
    vm.graph!.version = 1; // simulate a view left behind by another session
    vm.stageEdit({
      kind: "AddFood",
      payload: { id: "Food:extra_99", concept: "Salt" },
      anchor_clause: "c_6",
    });
    await expect(vm.submitEdits()).rejects.toMatchObject({
      reason: "version-conflict",
    });
    await vm.forceReload();
    expect(vm.version).toBe(latest);
    expect(vm.pendingEdits).toHaveLength(0);
  }, 30_000);
});
