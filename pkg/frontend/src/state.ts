/**
 * View state and the what-if flow, independent of rendering.
 *
 * Previews never mutate server state; accepted cuts and undo go through
 * the mutating endpoints and the session then refetches, so what the UI
 * holds is always exactly what the server reported.
 */

import type {
  CutRequest,
  LightfieldResponse,
  ScoreChanges,
  ScoreReport,
  ServiceClient,
  SimulateResponse,
  SuggestionsResponse,
  TreeStateResponse,
  Vec3,
} from "./api";
import { ApiError } from "./api";
import type { ColorMode } from "./colors";
import { cellKey } from "./colors";

export interface PendingCut {
  location: Vec3;
  cutRadius?: number;
}

export type SessionListener = (session: WhatIfSession) => void;

/** Panel text: every value is the raw response field stringified. */
export interface PanelStrings {
  D: string;
  v_norm: string;
  l_norm: string;
  S: string;
  dChange: string;
  sChange: string;
}

export function formatPct(value: number): string {
  // The one client-side transformation allowed: percentage formatting.
  return `${value >= 0 ? "+" : ""}${value.toFixed(2)}%`;
}

export function panelStrings(
  report: ScoreReport,
  changes: ScoreChanges,
): PanelStrings {
  return {
    D: String(report.D),
    v_norm: String(report.v_norm),
    l_norm: String(report.l_norm),
    S: String(report.S),
    dChange: formatPct(changes.D_change_pct),
    sChange: formatPct(changes.S_change_pct),
  };
}

export class WhatIfSession {
  treeId: string | null = null;
  state: TreeStateResponse | null = null;
  lightfield: LightfieldResponse | null = null;
  colorMode: ColorMode = "light-absorption";
  pending: PendingCut | null = null;
  preview: SimulateResponse | null = null;
  suggestions: SuggestionsResponse | null = null;
  lastError: string | null = null;

  private listeners: SessionListener[] = [];

  constructor(private api: ServiceClient) {}

  onChange(listener: SessionListener): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this);
  }

  /** Cells grayed out under removed-preview, from the simulate response. */
  previewRemovedCells(): ReadonlySet<string> | null {
    if (!this.preview) return null;
    return new Set(this.preview.removed_cells.map(cellKey));
  }

  async open(treeId: string): Promise<void> {
    this.treeId = treeId;
    this.state = await this.api.treeState(treeId);
    this.lightfield = await this.api.lightfield(treeId);
    this.pending = null;
    this.preview = null;
    this.suggestions = null;
    this.lastError = null;
    this.notify();
  }

  async uploadAndOpen(body: string): Promise<void> {
    const created = await this.api.uploadTree(body);
    await this.open(created.id);
  }

  /** Re-coloring is purely client-side; no refetch happens here. */
  setColorMode(mode: ColorMode): void {
    this.colorMode = mode;
    this.notify();
  }

  private requireTree(): string {
    if (this.treeId === null) throw new Error("no tree open");
    return this.treeId;
  }

  private cutRequest(cut: PendingCut): CutRequest {
    const request: CutRequest = { location: cut.location };
    if (cut.cutRadius !== undefined) request.cut_radius = cut.cutRadius;
    return request;
  }

  /**
   * Preview the pending cut: a pure read of the server.  On a 422 (no
   * matter at the cut point) the preview clears and the panel shows the
   * notice instead.
   */
  async previewCut(cut: PendingCut): Promise<SimulateResponse | null> {
    const id = this.requireTree();
    this.pending = cut;
    try {
      this.preview = await this.api.simulate(id, this.cutRequest(cut));
      this.lastError = null;
      this.colorMode = "removed-preview";
    } catch (err) {
      this.preview = null;
      if (err instanceof ApiError && err.status === 422) {
        this.lastError = "no matter at cut point";
      } else {
        throw err;
      }
    }
    this.notify();
    return this.preview;
  }

  cancelPreview(): void {
    this.pending = null;
    this.preview = null;
    if (this.colorMode === "removed-preview") {
      this.colorMode = "light-absorption";
    }
    this.notify();
  }

  /** Commit the pending cut, then resync state and lightfield. */
  async acceptPending(): Promise<TreeStateResponse> {
    const id = this.requireTree();
    if (!this.pending) throw new Error("no pending cut to accept");
    const state = await this.api.acceptCut(id, this.cutRequest(this.pending));
    this.state = state;
    this.lightfield = await this.api.lightfield(id);
    this.pending = null;
    this.preview = null;
    this.suggestions = null;
    if (this.colorMode === "removed-preview") {
      this.colorMode = "light-absorption";
    }
    this.notify();
    return state;
  }

  async undoLast(): Promise<TreeStateResponse> {
    const id = this.requireTree();
    const state = await this.api.undoLast(id);
    this.state = state;
    this.lightfield = await this.api.lightfield(id);
    this.pending = null;
    this.preview = null;
    this.suggestions = null;
    this.notify();
    return state;
  }

  async fetchSuggestions(k?: number): Promise<SuggestionsResponse> {
    const id = this.requireTree();
    this.suggestions = await this.api.suggestions(id, k);
    this.notify();
    return this.suggestions;
  }

  /** Panel strings for the current state (verbatim server values). */
  statePanel(): PanelStrings | null {
    if (!this.state) return null;
    return panelStrings(this.state.current, this.state.changes);
  }

  /** Panel strings for the active preview, if any. */
  previewPanel(): PanelStrings | null {
    if (!this.preview) return null;
    return panelStrings(this.preview.report, this.preview.changes);
  }
}
