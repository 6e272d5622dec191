/**
 * App wiring: upload a cloud, orbit the colored canopy, click to place a
 * pending cut, preview its effect, accept or undo - each answer shaping
 * the operator's next cut.
 */

import { HttpServiceClient } from "./api";
import type { ColorMode } from "./colors";
import { renderNotice, renderScoreRows } from "./panel";
import { WhatIfSession } from "./state";
import { CanopyViewer } from "./viewer";

const api = new HttpServiceClient("");
const session = new WhatIfSession(api);

const viewerHost = document.getElementById("viewer")!;
const currentPanel = document.getElementById("current-panel")!;
const previewPanel = document.getElementById("preview-panel")!;
const historyLabel = document.getElementById("history")!;
const noticeHost = document.getElementById("notice")!;
const viewer = new CanopyViewer(viewerHost);

function refresh(): void {
  if (session.lightfield) {
    viewer.applyColors(session.colorMode, session.previewRemovedCells());
  }
  renderScoreRows(currentPanel, "Current tree", session.statePanel());
  const preview = session.previewPanel();
  if (preview) {
    renderScoreRows(previewPanel, "Pending cut (preview)", preview);
  } else if (session.lastError) {
    renderNotice(previewPanel, session.lastError);
  } else {
    renderNotice(previewPanel, "click a point to preview a cut");
  }
  historyLabel.textContent = session.state
    ? `${session.state.history_length} accepted cut(s)`
    : "no tree";
  if (!session.lightfield || session.lightfield.voxels.length === 0) {
    renderNotice(noticeHost, "empty scene: upload a tree cloud");
  } else {
    noticeHost.textContent = "";
  }
}

session.onChange(() => {
  if (session.lightfield && viewerNeedsGeometry) {
    viewer.setLightfield(session.lightfield);
    viewerNeedsGeometry = false;
  }
  refresh();
});
let viewerNeedsGeometry = true;

viewer.canvas.addEventListener("click", (event) => {
  const hit = viewer.pickAt(event.clientX, event.clientY);
  if (hit === null) return; // empty sky: no-op
  void session.previewCut({ location: hit.centroid });
});

document.getElementById("accept")!.addEventListener("click", () => {
  if (session.pending && session.preview) {
    viewerNeedsGeometry = true;
    void session.acceptPending();
  }
});

document.getElementById("undo")!.addEventListener("click", () => {
  if (session.state && session.state.history_length > 0) {
    viewerNeedsGeometry = true;
    void session.undoLast();
  }
});

document.getElementById("cancel")!.addEventListener("click", () => {
  session.cancelPreview();
});

document.getElementById("suggest")!.addEventListener("click", async () => {
  const response = await session.fetchSuggestions();
  viewer.setSuggestionMarkers(response.selected);
});

const modeSelect = document.getElementById("color-mode") as HTMLSelectElement;
modeSelect.addEventListener("change", () => {
  session.setColorMode(modeSelect.value as ColorMode);
});

const fileInput = document.getElementById("cloud-file") as HTMLInputElement;
fileInput.addEventListener("change", async () => {
  const file = fileInput.files?.[0];
  if (!file) return;
  viewerNeedsGeometry = true;
  await session.uploadAndOpen(await file.text());
});
