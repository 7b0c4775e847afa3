import type { ColorBy, LexItem, ProjectionDoc } from "./types.js";

// Categorical palette, dark-canvas friendly. Twelve hues, then it cycles;
// the datasets in the catalog stay well under that per grouping mode.
export const PALETTE: string[] = [
  "#4fc3f7",
  "#ff8a65",
  "#aed581",
  "#ba68c8",
  "#ffd54f",
  "#4db6ac",
  "#f06292",
  "#9575cd",
  "#a1887f",
  "#90a4ae",
  "#dce775",
  "#7986cb",
];

// Label an item under a grouping mode. "script" reads the suffix of
// script.* categories and falls back to the language tag elsewhere,
// which matches how the items are tagged server-side.
export function groupLabel(item: LexItem, mode: ColorBy): string {
  switch (mode) {
    case "category":
      return item.category;
    case "lang":
      return item.lang;
    case "level":
      return item.level;
    case "script":
      return item.category.startsWith("script.")
        ? item.category.slice("script.".length)
        : item.lang;
  }
}

// Stable color assignment: labels sorted once, then indexed into the
// palette. Sorting keeps colors independent of item order in the doc.
export function colorMap(doc: ProjectionDoc, mode: ColorBy): Map<string, string> {
  const labels = new Set<string>();
  for (const it of doc.items) labels.add(groupLabel(it, mode));
  const sorted = [...labels].sort();
  const out = new Map<string, string>();
  sorted.forEach((label, i) => out.set(label, PALETTE[i % PALETTE.length]));
  return out;
}

export function itemColors(doc: ProjectionDoc, mode: ColorBy): string[] {
  const map = colorMap(doc, mode);
  return doc.items.map((it) => map.get(groupLabel(it, mode))!);
}

export function hexToRgb(hex: string): [number, number, number] {
  const v = parseInt(hex.slice(1), 16);
  return [((v >> 16) & 255) / 255, ((v >> 8) & 255) / 255, (v & 255) / 255];
}
