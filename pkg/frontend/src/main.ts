/** Browser entry point: wires the view model to the page.
 *
 * Served by the recipe graph service (`recipegraph serve --static frontend`)
 * so the API lives at the same origin.
 */

import { ApiClient, ConflictError } from "./api.js";
import { renderSvg } from "./render.js";
import { clauseOf } from "./rules.js";
import { EditorViewModel } from "./viewmodel.js";
import type { ArcLabel, EditKind } from "./types.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

const vm = new EditorViewModel(new ApiClient(""));
let editSequence = 100; // local id pool for hand-added vertices

function renderText(): void {
  const panel = byId<HTMLElement>("text-panel");
  const text = vm.recipe?.preparation ?? "";
  const span = vm.selectedClauseSpan();
  if (!span) {
    panel.textContent = text;
    return;
  }
  const [start, end] = span;
  panel.replaceChildren(
    document.createTextNode(text.slice(0, start)),
    Object.assign(document.createElement("mark"), {
      textContent: text.slice(start, end),
    }),
    document.createTextNode(text.slice(end)),
  );
}

function renderBadge(): void {
  const badge = byId<HTMLElement>("badge");
  badge.className = `badge ${vm.badge()}`;
  badge.textContent = vm.badge();
  const list = byId<HTMLUListElement>("violations");
  list.replaceChildren(
    ...(vm.validation?.violations ?? []).map((v) => {
      const item = document.createElement("li");
      item.textContent = `${v.rule}: ${v.message}`;
      // clicking a violation centers its first offending vertex
      item.addEventListener("click", () => centerVertex(v.ids[0]));
      return item;
    }),
  );
}

function centerVertex(id: string | undefined): void {
  if (!id) return;
  document
    .querySelector(`[data-id="${CSS.escape(id)}"]`)
    ?.scrollIntoView({ block: "center", inline: "center" });
}

function renderCanvas(): void {
  const canvas = byId<HTMLElement>("canvas");
  canvas.innerHTML = renderSvg(vm.displayed(), vm.displayOptions());
  for (const node of canvas.querySelectorAll<SVGGElement>("g.vertex.action")) {
    node.addEventListener("click", () => {
      void vm.zoomOn(node.dataset.id ?? "").then(renderAll);
    });
  }
  byId<HTMLButtonElement>("accept").hidden = !vm.proposal;
  byId<HTMLButtonElement>("revert").hidden = !vm.proposal;
}

function renderAll(): void {
  renderCanvas();
  renderText();
  renderBadge();
}

async function guarded(action: () => Promise<void>): Promise<void> {
  try {
    await action();
  } catch (err) {
    if (err instanceof ConflictError) {
      window.alert(`Rejected (${err.reason}); reloading latest version.`);
      await vm.forceReload();
    } else {
      window.alert(String(err));
    }
  }
  renderAll();
}

function stageFromPalette(): void {
  const kind = byId<HTMLSelectElement>("edit-kind").value as EditKind;
  const anchorClause = clauseOf(vm.stagedGraph(), vm.selection ?? "") ?? "c_1";
  const anchor = anchorClause.replace(/^Clause:/, "");
  if (!vm.canAnchor(anchor)) return; // button should be disabled already
  if (kind === "AddAction") {
    const concept = byId<HTMLSelectElement>("concept").value;
    vm.stageEdit({
      kind,
      payload: { concept, id: `Action:${concept.toLowerCase()}_${editSequence++}` },
      anchor_clause: anchor,
    });
  } else if (kind === "AddArc") {
    const from = byId<HTMLInputElement>("arc-from").value;
    const to = byId<HTMLInputElement>("arc-to").value;
    const label = byId<HTMLSelectElement>("arc-label").value as ArcLabel;
    vm.stageEdit({ kind, payload: { from, to, label }, anchor_clause: anchor });
  } else if (kind === "RemoveArc") {
    const from = byId<HTMLInputElement>("arc-from").value;
    const to = byId<HTMLInputElement>("arc-to").value;
    const label = byId<HTMLSelectElement>("arc-label").value as ArcLabel;
    vm.stageEdit({ kind, payload: { from, to, label }, anchor_clause: anchor });
  } else if (kind === "RemoveVertex") {
    vm.stageEdit({
      kind,
      payload: { id: byId<HTMLInputElement>("arc-from").value },
      anchor_clause: anchor,
    });
  }
  byId<HTMLElement>("pending").textContent = `${vm.pendingEdits.length} staged`;
}

async function start(): Promise<void> {
  await vm.init();
  const select = byId<HTMLSelectElement>("recipe");
  const recipes = await new ApiClient("").listRecipes();
  select.replaceChildren(
    ...recipes.map((r) =>
      Object.assign(document.createElement("option"), {
        value: r.id,
        textContent: r.title || r.id,
      }),
    ),
  );
  const concept = byId<HTMLSelectElement>("concept");
  concept.replaceChildren(
    ...vm.actionConcepts().map((c) =>
      Object.assign(document.createElement("option"), {
        value: c,
        textContent: c,
      }),
    ),
  );

  byId<HTMLButtonElement>("load").addEventListener("click", () =>
    guarded(() => vm.load(select.value)),
  );
  byId<HTMLButtonElement>("unzoom").addEventListener("click", () => {
    vm.clearZoom();
    renderAll();
  });
  byId<HTMLButtonElement>("stage").addEventListener("click", () => {
    try {
      stageFromPalette();
    } catch (err) {
      window.alert(String(err));
    }
  });
  byId<HTMLButtonElement>("submit").addEventListener("click", () =>
    guarded(async () => {
      await vm.submitEdits();
    }),
  );
  byId<HTMLButtonElement>("repropagate").addEventListener("click", () =>
    guarded(async () => {
      await vm.repropagate();
    }),
  );
  byId<HTMLButtonElement>("accept").addEventListener("click", () =>
    guarded(() => vm.acceptProposal()),
  );
  byId<HTMLButtonElement>("revert").addEventListener("click", () => {
    vm.revertProposal();
    renderAll();
  });
}

void start();
