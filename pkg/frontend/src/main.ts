/** App shell: load a snapshot from the API or a local file, keep one
 *  immutable ViewState, re-render on every transition. */

import {
  buildScene,
  clusterPanel,
  highlightSlice,
  selectCluster,
  selectNode,
  setLabelAlgorithm,
  setTransform,
} from "./scene.js";
import { attachPanZoom, renderScene } from "./render.js";
import { SnapshotValidationError, loadSnapshot } from "./validate.js";
import type { LabelAlgorithm, SnapshotDocument, ViewState } from "./types.js";
import { initialViewState } from "./types.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
};

let snapshot: SnapshotDocument | null = null;
let state: ViewState = initialViewState();

function transition(next: ViewState): void {
  state = next;
  render();
}

function render(): void {
  if (!snapshot) return;
  const svg = $("graph") as unknown as SVGSVGElement;
  const scene = buildScene(snapshot, state);
  renderScene(svg, scene, state.transform, {
    onClusterClick: (cid) => transition(selectCluster(state, cid)),
    onNodeClick: (key) => transition(selectNode(state, key)),
  });
  $("notice").textContent = scene.notice ?? "";
  renderPanel();
}

function renderPanel(): void {
  if (!snapshot) return;
  const panel = $("panel");
  if (state.selectedCluster === null) {
    panel.innerHTML = "<p>Click a cluster hull to inspect its labels and citers.</p>";
    return;
  }
  const detail = clusterPanel(snapshot, state.selectedCluster);
  const sections = (
    [
      ["tf*idf", "tfidf"],
      ["log-likelihood", "llr"],
      ["lsa dim 1", "lsa_dim1"],
      ["lsa dim 2", "lsa_dim2"],
    ] as const
  )
    .map(([title, key]) => {
      const rows = (detail.algorithms[key] ?? [])
        .map((c) => `<li><b>${c.score.toFixed(2)}</b> ${escapeHtml(c.term)} <i>n=${c.frequency}</i></li>`)
        .join("");
      return `<h4>${title}</h4><ul>${rows || "<li>-</li>"}</ul>`;
    })
    .join("");
  const citers = detail.citers
    .map((c) => `<li>(${c.coverage}/${c.outOf}) ${escapeHtml(c.id)}</li>`)
    .join("");
  panel.innerHTML = `
    <h3>cluster ${detail.clusterId}</h3>
    <p>${detail.size} members, mean silhouette ${detail.meanSilhouette.toFixed(4)}</p>
    ${sections}
    <h4>most representative citers</h4>
    <ul>${citers || "<li>-</li>"}</ul>`;
}

function escapeHtml(text: string): string {
  return text.replace(/[&<>"]/g, (ch) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;" })[ch]!);
}

function showError(violations: string[]): void {
  snapshot = null;
  ($("graph") as unknown as SVGSVGElement).textContent = "";
  $("panel").innerHTML =
    "<h3>snapshot rejected</h3><ul>" +
    violations.map((v) => `<li>${escapeHtml(v)}</li>`).join("") +
    "</ul>";
}

function installSnapshot(doc: unknown): void {
  try {
    snapshot = loadSnapshot(doc);
  } catch (err) {
    if (err instanceof SnapshotValidationError) {
      showError(err.violations);
      return;
    }
    throw err;
  }
  state = initialViewState();
  populateControls();
  render();
}

function populateControls(): void {
  if (!snapshot) return;
  const sliceSelect = $("slice") as HTMLSelectElement;
  sliceSelect.innerHTML = '<option value="">all years</option>';
  for (const slice of snapshot.slices) {
    const option = document.createElement("option");
    option.value = String(slice.index);
    option.textContent =
      slice.start_year === slice.end_year
        ? String(slice.start_year)
        : `${slice.start_year}-${slice.end_year}`;
    sliceSelect.appendChild(option);
  }
}

function wireControls(): void {
  const sliceSelect = $("slice") as HTMLSelectElement;
  sliceSelect.addEventListener("change", () => {
    if (!snapshot) return;
    const value = sliceSelect.value === "" ? null : Number(sliceSelect.value);
    transition(highlightSlice(snapshot, state, value));
  });
  const algorithmSelect = $("algorithm") as HTMLSelectElement;
  algorithmSelect.addEventListener("change", () => {
    transition(setLabelAlgorithm(state, algorithmSelect.value as LabelAlgorithm));
  });
  const fileInput = $("file") as HTMLInputElement;
  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    try {
      installSnapshot(JSON.parse(await file.text()));
    } catch (err) {
      showError([`not-json: ${String(err)}`]);
    }
  });
  const svg = $("graph") as unknown as SVGSVGElement;
  attachPanZoom(
    svg,
    () => state.transform,
    (t) => transition(setTransform(state, t.x, t.y, t.k)),
  );
}

async function boot(): Promise<void> {
  wireControls();
  try {
    const response = await fetch("/api/snapshot");
    if (response.ok) {
      installSnapshot(await response.json());
      return;
    }
  } catch {
    // no server; wait for a file to be opened
  }
  $("panel").innerHTML = "<p>No snapshot API found. Open a snapshot file above.</p>";
}

void boot();
