import type { DiagnosticsReport } from "./types.js";

// Diagnostics display. Scores arrive as JSON numbers and are printed with
// String(), the shortest digit string that round-trips, so what the panel
// shows is exactly what the server sent. No score is recomputed here.

export interface ScoreRow {
  name: string;
  value: string;
  threshold: string;
}

// Scores paired with the threshold that gates them. Scores without a
// server-side gate get an empty threshold cell.
const THRESHOLD_FOR: Record<string, string> = {
  duplicate_fraction: "collapsed.duplicate_fraction",
  effective_rank: "collapsed.effective_rank",
  script_separation: "separated.ratio",
  spiral_score: "spiral.sweep_gate",
};

export function scoreRows(report: DiagnosticsReport): ScoreRow[] {
  const rows: ScoreRow[] = [];
  for (const name of Object.keys(report.scores).sort()) {
    const key = THRESHOLD_FOR[name];
    const threshold =
      key !== undefined && key in report.thresholds
        ? `${key} = ${String(report.thresholds[key])}`
        : "";
    rows.push({ name, value: String(report.scores[name]), threshold });
  }
  return rows;
}

export function perCategoryRows(report: DiagnosticsReport): ScoreRow[] {
  return Object.keys(report.per_category)
    .sort()
    .map((name) => ({
      name,
      value: String(report.per_category[name]),
      threshold: "",
    }));
}

export function flagRows(report: DiagnosticsReport): { name: string; raised: boolean }[] {
  return Object.keys(report.flags)
    .sort()
    .map((name) => ({ name, raised: report.flags[name] }));
}

export function skippedRows(report: DiagnosticsReport): { name: string; reason: string }[] {
  return Object.keys(report.skipped)
    .sort()
    .map((name) => ({ name, reason: report.skipped[name] }));
}

function section(title: string): HTMLElement {
  const h = document.createElement("h3");
  h.textContent = title;
  return h;
}

function table(headers: string[], rows: string[][]): HTMLTableElement {
  const t = document.createElement("table");
  const thead = t.createTHead().insertRow();
  for (const h of headers) {
    const th = document.createElement("th");
    th.textContent = h;
    thead.appendChild(th);
  }
  const body = t.createTBody();
  for (const row of rows) {
    const tr = body.insertRow();
    for (const cell of row) {
      tr.insertCell().textContent = cell;
    }
  }
  return t;
}

export function renderDiagnostics(container: HTMLElement, report: DiagnosticsReport): void {
  container.textContent = "";

  container.appendChild(section("scores"));
  container.appendChild(
    table(
      ["metric", "value", "threshold"],
      scoreRows(report).map((r) => [r.name, r.value, r.threshold]),
    ),
  );

  const perCat = perCategoryRows(report);
  if (perCat.length > 0) {
    container.appendChild(section("per category"));
    container.appendChild(table(["metric", "value"], perCat.map((r) => [r.name, r.value])));
  }

  container.appendChild(section("flags"));
  container.appendChild(
    table(
      ["flag", "state"],
      flagRows(report).map((r) => [r.name, r.raised ? "raised" : "clear"]),
    ),
  );

  const skipped = skippedRows(report);
  if (skipped.length > 0) {
    container.appendChild(section("skipped"));
    container.appendChild(table(["metric", "reason"], skipped.map((r) => [r.name, r.reason])));
  }
}

export function renderDiagnosticsUnavailable(container: HTMLElement, reason: string): void {
  container.textContent = "";
  container.appendChild(section("diagnostics"));
  const p = document.createElement("p");
  p.className = "muted";
  p.textContent = `unavailable: ${reason}`;
  container.appendChild(p);
}
