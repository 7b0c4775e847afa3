import type {
  DatasetDetail,
  DatasetSummary,
  DiagnosticsReport,
  ProjectionDoc,
  ProjectionRequest,
  ProjectionResult,
} from "./types.js";

// All data enters through this module. Nothing below recomputes geometry;
// the server is the only authority on coordinates and scores.

export class ApiError extends Error {
  status: number;
  detail: string;

  constructor(status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
    this.status = status;
    this.detail = detail;
  }
}

let baseUrl = "";

export function setBaseUrl(url: string): void {
  baseUrl = url.replace(/\/+$/, "");
}

export function getBaseUrl(): string {
  return baseUrl;
}

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") return body.detail;
    return JSON.stringify(body);
  } catch {
    return response.statusText || "request failed";
  }
}

async function getJson<T>(path: string): Promise<T> {
  const response = await fetch(`${baseUrl}${path}`);
  if (!response.ok) {
    throw new ApiError(response.status, await errorDetail(response));
  }
  return response.json() as Promise<T>;
}

export async function fetchDatasets(): Promise<DatasetSummary[]> {
  return getJson<DatasetSummary[]>("/datasets");
}

export async function fetchDataset(id: string): Promise<DatasetDetail> {
  return getJson<DatasetDetail>(`/datasets/${encodeURIComponent(id)}`);
}

export async function fetchProjection(id: string): Promise<ProjectionDoc> {
  return getJson<ProjectionDoc>(`/projections/${encodeURIComponent(id)}`);
}

export async function fetchDiagnostics(id: string): Promise<DiagnosticsReport> {
  return getJson<DiagnosticsReport>(
    `/projections/${encodeURIComponent(id)}/diagnostics`,
  );
}

// One reprojection in flight at a time. A new submit aborts the previous
// request and takes its place; the stale response never reaches the UI.
let inflight: AbortController | null = null;

export async function postProjection(
  request: ProjectionRequest,
): Promise<ProjectionResult> {
  if (inflight !== null) inflight.abort();
  const controller = new AbortController();
  inflight = controller;
  try {
    const response = await fetch(`${baseUrl}/projections`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
      signal: controller.signal,
    });
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    const doc = (await response.json()) as ProjectionDoc;
    const computed = response.headers.get("X-Semgeo-Computed") === "1";
    return { doc, computed };
  } finally {
    if (inflight === controller) inflight = null;
  }
}

export function hasInflight(): boolean {
  return inflight !== null;
}
