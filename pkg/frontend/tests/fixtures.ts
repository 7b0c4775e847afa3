import type { DiagnosticsReport, LexItem, ProjectionDoc } from "../src/types.js";

// Deterministic doc factory for tests. Coordinates come from a seeded
// generator so failures reproduce exactly.

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export interface DocOptions {
  n?: number;
  dims?: 2 | 3;
  categories?: string[];
  langs?: string[];
  id?: string;
}

export function makeDoc(options: DocOptions = {}): ProjectionDoc {
  const n = options.n ?? 12;
  const dims = options.dims ?? 2;
  const categories = options.categories ?? ["core.animals", "numbers.digits", "emoji.faces"];
  const langs = options.langs ?? ["enu", "chn", "deu"];
  const rand = mulberry32(17);
  const coords: number[][] = [];
  const items: LexItem[] = [];
  for (let i = 0; i < n; i++) {
    const row: number[] = [];
    for (let d = 0; d < dims; d++) row.push((rand() - 0.5) * 4);
    coords.push(row);
    items.push({
      text: `item${i}`,
      category: categories[i % categories.length],
      lang: langs[i % langs.length],
      level: "word",
      order: null,
      pair_id: null,
    });
  }
  return {
    id: options.id ?? "d".repeat(64),
    dataset_id: "test_ds",
    model_id: "mock-d32-s0",
    method: "pca",
    params: { out_dims: dims },
    seed: 0,
    coords,
    items,
    stress: null,
    metadata: {},
    diagnostics: null,
  };
}

export function makeReport(overrides: Partial<DiagnosticsReport> = {}): DiagnosticsReport {
  return {
    projection_id: "d".repeat(64),
    scores: {
      effective_rank: 1.990986907451845,
      duplicate_fraction: 0.0,
      spiral_score: 0.4230769230769231,
    },
    per_category: { "spiral:numbers.powers10": 0.9811320754716981 },
    flags: { collapsed: false },
    thresholds: {
      "collapsed.duplicate_fraction": 0.5,
      "collapsed.effective_rank": 1.5,
      "separated.ratio": 0.9,
      "spiral.sweep_gate": 3.141592653589793,
    },
    skipped: { clustering_score: "need at least 3 points, got 0" },
    ...overrides,
  };
}
