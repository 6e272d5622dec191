/**
 * Typed client for the what-if service endpoints.
 *
 * The UI is a pure view over these responses: every number it displays is
 * a field from one of these payloads, never recomputed client-side.
 */

export interface Coefficients {
  alpha: number;
  beta: number;
  gamma: number;
}

export interface ScoreReport {
  D: number;
  volume: number;
  total_light: number;
  v_norm: number;
  l_norm: number;
  S: number;
  coefficients: Coefficients;
}

export interface ScoreChanges {
  D_change_pct: number;
  S_change_pct: number;
}

export type CellIndex = [number, number, number];
export type Vec3 = [number, number, number];

export interface VoxelEntry {
  index: CellIndex;
  centroid: Vec3;
  p: number;
  d: number;
}

export interface LightfieldResponse {
  id: string;
  voxel_count: number;
  voxels: VoxelEntry[];
}

export interface CutRequest {
  location: Vec3;
  cut_radius?: number;
}

export interface TreeStateResponse {
  id: string;
  n_points: number;
  history_length: number;
  history: { location: Vec3; cut_radius: number }[];
  baseline: ScoreReport;
  current: ScoreReport;
  changes: ScoreChanges;
}

export interface SimulateResponse {
  removed_point_indices: number[];
  removed_cells: CellIndex[];
  removed_count: number;
  baseline: ScoreReport;
  report: ScoreReport;
  changes: ScoreChanges;
}

export interface SuggestionEntry {
  label: string;
  node: number;
  location: Vec3;
  j: number;
}

export interface SuggestionsResponse {
  selected: SuggestionEntry[];
  reports: Record<string, ScoreReport>;
  changes: Record<string, ScoreChanges>;
  errors: Record<string, string>;
}

export interface ServiceError {
  code: string;
  message: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: ServiceError,
  ) {
    super(`${body.code}: ${body.message}`);
  }
}

/** The service surface the UI consumes; swappable for a test double. */
export interface ServiceClient {
  uploadTree(body: string): Promise<{ id: string; n_points: number }>;
  treeState(id: string): Promise<TreeStateResponse>;
  lightfield(id: string): Promise<LightfieldResponse>;
  simulate(id: string, cut: CutRequest): Promise<SimulateResponse>;
  acceptCut(id: string, cut: CutRequest): Promise<TreeStateResponse>;
  undoLast(id: string): Promise<TreeStateResponse>;
  suggestions(id: string, k?: number): Promise<SuggestionsResponse>;
}

async function asJson<T>(response: Response): Promise<T> {
  const payload = await response.json();
  if (!response.ok) {
    throw new ApiError(response.status, payload as ServiceError);
  }
  return payload as T;
}

export class HttpServiceClient implements ServiceClient {
  constructor(private baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async uploadTree(body: string) {
    const response = await fetch(this.url("/trees"), {
      method: "POST",
      headers: { "content-type": "text/csv" },
      body,
    });
    return asJson<{ id: string; n_points: number }>(response);
  }

  async treeState(id: string) {
    return asJson<TreeStateResponse>(await fetch(this.url(`/trees/${id}`)));
  }

  async lightfield(id: string) {
    return asJson<LightfieldResponse>(
      await fetch(this.url(`/trees/${id}/lightfield`)),
    );
  }

  async simulate(id: string, cut: CutRequest) {
    const response = await fetch(this.url(`/trees/${id}/simulate`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(cut),
    });
    return asJson<SimulateResponse>(response);
  }

  async acceptCut(id: string, cut: CutRequest) {
    const response = await fetch(this.url(`/trees/${id}/cuts`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(cut),
    });
    return asJson<TreeStateResponse>(response);
  }

  async undoLast(id: string) {
    const response = await fetch(this.url(`/trees/${id}/cuts/last`), {
      method: "DELETE",
    });
    return asJson<TreeStateResponse>(response);
  }

  async suggestions(id: string, k?: number) {
    const query = k ? `?k=${k}` : "";
    return asJson<SuggestionsResponse>(
      await fetch(this.url(`/trees/${id}/suggestions${query}`)),
    );
  }
}
