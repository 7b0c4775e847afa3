import { describe, expect, it } from "vitest";
import { colorMap, groupLabel, hexToRgb, itemColors, PALETTE } from "../src/colors.js";
import type { LexItem } from "../src/types.js";
import { makeDoc } from "./fixtures.js";

function item(category: string, lang: string): LexItem {
  return { text: "x", category, lang, level: "word", order: null, pair_id: null };
}

describe("groupLabel", () => {
  it("reads the script suffix from script.* categories", () => {
    expect(groupLabel(item("script.hangul", "kor"), "script")).toBe("hangul");
    expect(groupLabel(item("script.latin", "deu"), "script")).toBe("latin");
  });

  it("falls back to the language for everything else", () => {
    expect(groupLabel(item("numbers.digits", "mixed"), "script")).toBe("mixed");
    expect(groupLabel(item("core.animals", "chn"), "script")).toBe("chn");
  });

  it("passes the plain fields through for the other modes", () => {
    const it_ = item("core.animals", "enu");
    expect(groupLabel(it_, "category")).toBe("core.animals");
    expect(groupLabel(it_, "lang")).toBe("enu");
    expect(groupLabel(it_, "level")).toBe("word");
  });
});

describe("colorMap", () => {
  it("assigns colors by sorted label, independent of item order", () => {
    const doc = makeDoc();
    const shuffled = makeDoc();
    shuffled.items = [...shuffled.items].reverse();
    shuffled.coords = [...shuffled.coords].reverse();
    expect(colorMap(doc, "category")).toEqual(colorMap(shuffled, "category"));
  });

  it("gives distinct palette colors to distinct labels", () => {
    const doc = makeDoc();
    const map = colorMap(doc, "category");
    expect(map.size).toBe(3);
    expect(new Set(map.values()).size).toBe(3);
    for (const color of map.values()) {
      expect(PALETTE).toContain(color);
    }
  });

  it("colors every item, aligned with the item list", () => {
    const doc = makeDoc({ n: 30 });
    const colors = itemColors(doc, "lang");
    expect(colors).toHaveLength(30);
    const map = colorMap(doc, "lang");
    doc.items.forEach((it_, i) => {
      expect(colors[i]).toBe(map.get(it_.lang));
    });
  });
});

describe("hexToRgb", () => {
  it("converts to unit floats", () => {
    expect(hexToRgb("#ffffff")).toEqual([1, 1, 1]);
    expect(hexToRgb("#000000")).toEqual([0, 0, 0]);
    const [r, g, b] = hexToRgb("#4fc3f7");
    expect(r).toBeCloseTo(0x4f / 255, 10);
    expect(g).toBeCloseTo(0xc3 / 255, 10);
    expect(b).toBeCloseTo(0xf7 / 255, 10);
  });
});
