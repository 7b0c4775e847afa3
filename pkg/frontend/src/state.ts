import type { ProjectionDoc, ProjectionRequest, ViewState } from "./types.js";

// Pure view-state transitions. Keeping these free of DOM and network makes
// the filter and swap rules testable in isolation.

export function validateDoc(doc: unknown): string[] {
  const problems: string[] = [];
  if (typeof doc !== "object" || doc === null) {
    return ["document is not an object"];
  }
  const d = doc as Record<string, unknown>;
  if (typeof d.id !== "string" || d.id.length === 0) {
    problems.push("missing document id");
  }
  if (typeof d.dataset_id !== "string") problems.push("missing dataset_id");
  if (typeof d.method !== "string") problems.push("missing method");
  if (!Array.isArray(d.coords)) {
    problems.push("coords is not an array");
    return problems;
  }
  if (!Array.isArray(d.items)) {
    problems.push("items is not an array");
    return problems;
  }
  if (d.coords.length !== d.items.length) {
    problems.push(
      `coords rows (${d.coords.length}) do not match items (${d.items.length})`,
    );
  }
  const rows = d.coords as unknown[];
  let width = -1;
  for (let i = 0; i < rows.length; i++) {
    const row = rows[i];
    if (!Array.isArray(row) || !row.every((v) => typeof v === "number" && isFinite(v))) {
      problems.push(`coords row ${i} is not a finite number vector`);
      break;
    }
    if (width === -1) width = row.length;
    if (row.length !== width) {
      problems.push(`coords row ${i} has width ${row.length}, expected ${width}`);
      break;
    }
  }
  if (width !== -1 && width !== 2 && width !== 3) {
    problems.push(`coords width ${width} is not 2 or 3`);
  }
  for (let i = 0; i < (d.items as unknown[]).length; i++) {
    const it = (d.items as unknown[])[i] as Record<string, unknown>;
    if (
      typeof it !== "object" || it === null ||
      typeof it.text !== "string" || typeof it.category !== "string" ||
      typeof it.lang !== "string"
    ) {
      problems.push(`item ${i} lacks text/category/lang`);
      break;
    }
  }
  return problems;
}

export function docDims(doc: ProjectionDoc): 2 | 3 {
  return doc.coords.length > 0 && doc.coords[0].length === 3 ? 3 : 2;
}

// Unique categories in first-appearance order.
export function docCategories(doc: ProjectionDoc): string[] {
  const seen = new Set<string>();
  const out: string[] = [];
  for (const it of doc.items) {
    if (!seen.has(it.category)) {
      seen.add(it.category);
      out.push(it.category);
    }
  }
  return out;
}

// Swap in a new doc. Color mode and filters survive the swap; hidden
// categories that no longer exist are pruned, selection is cleared because
// indices point into the old doc, and the camera survives only when the
// dimensionality did not change.
export function adoptDoc(state: ViewState, doc: ProjectionDoc): ViewState {
  const dims = docDims(doc);
  const categories = new Set(docCategories(doc));
  const hidden = new Set<string>();
  for (const cat of state.hiddenCategories) {
    if (categories.has(cat)) hidden.add(cat);
  }
  return {
    projectionId: doc.id,
    dims,
    colorBy: state.colorBy,
    hiddenCategories: hidden,
    selectedItem: null,
    camera: dims === state.dims ? state.camera : null,
  };
}

// Toggling twice restores the exact starting state. Unknown categories
// are ignored rather than accumulated.
export function toggleCategory(
  state: ViewState,
  category: string,
  available: string[],
): ViewState {
  if (!available.includes(category)) return state;
  const hidden = new Set(state.hiddenCategories);
  if (hidden.has(category)) {
    hidden.delete(category);
  } else {
    hidden.add(category);
  }
  return { ...state, hiddenCategories: hidden };
}

export function visibleMask(doc: ProjectionDoc, hidden: Set<string>): boolean[] {
  return doc.items.map((it) => !hidden.has(it.category));
}

export function allHidden(doc: ProjectionDoc, hidden: Set<string>): boolean {
  return doc.items.length > 0 && doc.items.every((it) => hidden.has(it.category));
}

export function visibleCount(doc: ProjectionDoc, hidden: Set<string>): number {
  let n = 0;
  for (const it of doc.items) {
    if (!hidden.has(it.category)) n++;
  }
  return n;
}

// Two requests land on the same document id exactly when dataset, method,
// params, seed and dims agree. Used to label a resubmit as a memo probe.
export function sameRequest(a: ProjectionRequest, b: ProjectionRequest): boolean {
  if (a.dataset_id !== b.dataset_id) return false;
  if (a.method.toLowerCase() !== b.method.toLowerCase()) return false;
  if (a.seed !== b.seed || a.dims !== b.dims) return false;
  const ka = Object.keys(a.params).sort();
  const kb = Object.keys(b.params).sort();
  if (ka.length !== kb.length) return false;
  for (let i = 0; i < ka.length; i++) {
    if (ka[i] !== kb[i] || a.params[ka[i]] !== b.params[kb[i]]) return false;
  }
  return JSON.stringify(a.provider ?? null) === JSON.stringify(b.provider ?? null);
}

// Best-effort guess at which form field a server rejection talks about,
// so the UI can highlight it. Falls back to null for generic messages.
export function pickFailingField(
  detail: string,
  paramKeys: string[],
): string | null {
  const lower = detail.toLowerCase();
  for (const key of paramKeys) {
    const pattern = new RegExp(`(^|[^a-z0-9_])${key}([^a-z0-9_]|$)`, "i");
    if (pattern.test(detail)) return `param:${key}`;
  }
  if (lower.includes("method") || lower.includes("not implemented")) {
    return "method";
  }
  if (lower.includes("dataset")) return "dataset";
  if (lower.includes("seed")) return "seed";
  if (lower.includes("dims") || lower.includes("out_dims")) return "dims";
  if (lower.includes("provider") || lower.includes("model")) return "provider";
  return null;
}
