// Glyph coverage self-test. The datasets mix Latin, Han, Hangul, kana,
// Arabic and emoji; a viewer that silently drops any of those into tofu
// boxes is lying about the data. This page renders a sample per script
// family with an explicit fallback stack and checks the result on a
// canvas against the browser's missing-glyph box.

export interface GlyphFamily {
  name: string;
  sample: string;
  stack: string;
  range: [number, number];
}

// Each stack ends in a generic family so the page never falls back to
// nothing. The range is the Unicode block the sample must come from,
// which the tests use to keep samples honest.
export const GLYPH_FAMILIES: GlyphFamily[] = [
  {
    name: "latin",
    sample: "Ag ß É ñ",
    stack: "'Noto Sans', 'DejaVu Sans', 'Liberation Sans', Arial, sans-serif",
    range: [0x0041, 0x024f],
  },
  {
    name: "han",
    sample: "水 語 雨 山",
    stack:
      "'Noto Sans CJK SC', 'Noto Sans SC', 'Source Han Sans SC', 'WenQuanYi Zen Hei', 'PingFang SC', 'Microsoft YaHei', sans-serif",
    range: [0x4e00, 0x9fff],
  },
  {
    name: "hangul",
    sample: "한 글 물 불",
    stack:
      "'Noto Sans CJK KR', 'Noto Sans KR', 'Source Han Sans K', 'Malgun Gothic', 'Apple SD Gothic Neo', sans-serif",
    range: [0xac00, 0xd7a3],
  },
  {
    name: "hiragana",
    sample: "あ ひ ら か",
    stack:
      "'Noto Sans CJK JP', 'Noto Sans JP', 'Source Han Sans JP', 'Hiragino Sans', 'Yu Gothic', 'Meiryo', sans-serif",
    range: [0x3041, 0x3096],
  },
  {
    name: "katakana",
    sample: "カ タ ナ ミ",
    stack:
      "'Noto Sans CJK JP', 'Noto Sans JP', 'Source Han Sans JP', 'Hiragino Sans', 'Yu Gothic', 'Meiryo', sans-serif",
    range: [0x30a1, 0x30fa],
  },
  {
    name: "arabic",
    sample: "ا ب ماء جبل",
    stack:
      "'Noto Sans Arabic', 'Noto Naskh Arabic', 'Amiri', 'Scheherazade New', 'Arabic Typesetting', Tahoma, sans-serif",
    range: [0x0600, 0x06ff],
  },
  {
    name: "emoji",
    sample: "😀 🌍 🔥",
    stack:
      "'Noto Color Emoji', 'Apple Color Emoji', 'Segoe UI Emoji', 'Twemoji Mozilla', sans-serif",
    range: [0x1f300, 0x1faff],
  },
];

export function sampleCodePoints(sample: string): number[] {
  return [...sample.replace(/\s+/g, "")].map((ch) => ch.codePointAt(0)!);
}

function drawSignature(
  ctx: CanvasRenderingContext2D,
  text: string,
  font: string,
): string {
  const w = ctx.canvas.width;
  const h = ctx.canvas.height;
  ctx.clearRect(0, 0, w, h);
  ctx.font = font;
  ctx.textBaseline = "middle";
  ctx.fillStyle = "#000";
  ctx.fillText(text, 2, h / 2);
  const data = ctx.getImageData(0, 0, w, h).data;
  // Hash the alpha channel; identical ink means identical rendering.
  let hash = 2166136261;
  for (let i = 3; i < data.length; i += 4) {
    hash = Math.imul(hash ^ data[i], 16777619);
  }
  return (hash >>> 0).toString(16);
}

// A glyph rendered as tofu looks exactly like the missing-glyph box.
// U+0FFFE is a guaranteed noncharacter, so drawing it yields that box;
// any sample glyph whose pixels match it was not really rendered.
export function checkCoverage(
  canvas: HTMLCanvasElement,
  family: GlyphFamily,
): { ok: boolean; detail: string } {
  const ctx = canvas.getContext("2d", { willReadFrequently: true });
  if (ctx === null) return { ok: false, detail: "no 2d context" };
  const font = `32px ${family.stack}`;
  const tofu = drawSignature(ctx, "\u{FFFE}", font);
  const blank = drawSignature(ctx, "", font);
  for (const ch of family.sample.split(/\s+/)) {
    const sig = drawSignature(ctx, ch, font);
    if (sig === tofu) return { ok: false, detail: `'${ch}' renders as a fallback box` };
    if (sig === blank) return { ok: false, detail: `'${ch}' renders as nothing` };
  }
  return { ok: true, detail: "all glyphs drawn" };
}

export function renderGlyphPage(root: HTMLElement): void {
  const canvas = document.createElement("canvas");
  canvas.width = 64;
  canvas.height = 48;

  const table = document.createElement("table");
  const head = table.createTHead().insertRow();
  for (const title of ["family", "sample", "status", "font stack"]) {
    const th = document.createElement("th");
    th.textContent = title;
    head.appendChild(th);
  }
  const body = table.createTBody();

  let failures = 0;
  for (const family of GLYPH_FAMILIES) {
    const row = body.insertRow();
    row.insertCell().textContent = family.name;

    const sampleCell = row.insertCell();
    sampleCell.textContent = family.sample;
    sampleCell.style.fontFamily = family.stack;
    sampleCell.className = "sample";

    const result = checkCoverage(canvas, family);
    const statusCell = row.insertCell();
    statusCell.textContent = result.ok ? "OK" : `MISSING (${result.detail})`;
    statusCell.className = result.ok ? "ok" : "missing";
    if (!result.ok) failures++;

    const stackCell = row.insertCell();
    stackCell.textContent = family.stack;
    stackCell.className = "stack";
  }

  const verdict = document.createElement("p");
  verdict.id = "verdict";
  verdict.className = failures === 0 ? "ok" : "missing";
  verdict.textContent =
    failures === 0
      ? `coverage ok: ${GLYPH_FAMILIES.length} script families render without fallback boxes`
      : `${failures} of ${GLYPH_FAMILIES.length} families fall back to boxes; install the listed fonts`;

  root.textContent = "";
  root.appendChild(verdict);
  root.appendChild(table);
}
