// Shapes mirrored from the workbench service JSON. The UI never invents
// fields; anything not listed here is passed through untouched.

export interface LexItem {
  text: string;
  category: string;
  lang: string;
  level: string;
  order: number | null;
  pair_id: string | null;
}

export interface ProjectionDoc {
  id: string;
  dataset_id: string;
  model_id: string;
  method: string;
  params: Record<string, number | string>;
  seed: number;
  coords: number[][];
  items: LexItem[];
  stress: number | null;
  metadata: Record<string, unknown>;
  diagnostics: DiagnosticsReport | null;
}

export interface DiagnosticsReport {
  projection_id: string;
  scores: Record<string, number>;
  per_category: Record<string, number>;
  flags: Record<string, boolean>;
  thresholds: Record<string, number>;
  skipped: Record<string, string>;
}

export interface DatasetSummary {
  id: string;
  items: number;
  description: string;
}

export interface DatasetDetail {
  id: string;
  items: LexItem[];
}

export interface ProjectionRequest {
  dataset_id: string;
  provider?: Record<string, unknown>;
  method: string;
  params: Record<string, number | string>;
  seed: number;
  dims: 2 | 3;
}

// Result of a POST: the doc plus whether the server actually computed it.
// X-Semgeo-Computed: "1" means fresh work, "0" means the memo answered.
export interface ProjectionResult {
  doc: ProjectionDoc;
  computed: boolean;
}

export type ColorBy = "category" | "lang" | "level" | "script";

export interface CameraState {
  position: [number, number, number];
  target: [number, number, number];
}

// Everything the view needs to redraw. hidden_categories only ever holds
// categories present in the loaded doc; swapping docs prunes stale entries.
export interface ViewState {
  projectionId: string | null;
  dims: 2 | 3;
  colorBy: ColorBy;
  hiddenCategories: Set<string>;
  selectedItem: number | null;
  camera: CameraState | null;
}

export const COLOR_MODES: ColorBy[] = ["category", "lang", "level", "script"];

export function initialViewState(): ViewState {
  return {
    projectionId: null,
    dims: 2,
    colorBy: "category",
    hiddenCategories: new Set(),
    selectedItem: null,
    camera: null,
  };
}
