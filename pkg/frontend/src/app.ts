import {
  ApiError,
  fetchDatasets,
  fetchDiagnostics,
  postProjection,
  setBaseUrl,
} from "./api.js";
import { colorMap, hexToRgb, itemColors } from "./colors.js";
import { renderDiagnostics, renderDiagnosticsUnavailable } from "./panel.js";
import { ScatterView } from "./scatter.js";
import {
  adoptDoc,
  allHidden,
  docCategories,
  pickFailingField,
  sameRequest,
  toggleCategory,
  validateDoc,
  visibleCount,
  visibleMask,
} from "./state.js";
import type {
  ColorBy,
  ProjectionDoc,
  ProjectionRequest,
  ViewState,
} from "./types.js";
import { COLOR_MODES, initialViewState } from "./types.js";

const DEFAULT_API = "http://127.0.0.1:8000";

// Form fields per method, mirroring the server's defaults. out_dims and
// seed have their own controls; everything else rides in params.
interface ParamField {
  name: string;
  value: number | string;
  step?: number;
}

const PARAM_FIELDS: Record<string, ParamField[]> = {
  phate: [
    { name: "k", value: 10 },
    { name: "alpha", value: 10.0, step: 0.5 },
    { name: "t", value: 20 },
  ],
  pca: [],
  cmds: [],
  kpca: [
    { name: "kernel", value: "rbf" },
    { name: "rbf_gamma", value: 1.0, step: 0.1 },
  ],
  isomap: [{ name: "k", value: 10 }],
  lle: [{ name: "k", value: 10 }],
  spectral: [{ name: "k", value: 10 }],
  tsne: [
    { name: "perplexity", value: 30.0, step: 1 },
    { name: "iters", value: 1000 },
  ],
};

const RESERVED_METHODS = ["umap", "trimap", "pacmap", "forceatlas2"];

let viewState: ViewState = initialViewState();
let currentDoc: ProjectionDoc | null = null;
let lastRequest: ProjectionRequest | null = null;
let scatter: ScatterView | null = null;
let mouseX = 0;
let mouseY = 0;

const canvasWrap = document.getElementById("canvas-wrap")!;
const tooltip = document.getElementById("tooltip")!;
const hint = document.getElementById("hint")!;
const banner = document.getElementById("banner")!;
const apiInput = document.getElementById("api-url") as HTMLInputElement;
const connectButton = document.getElementById("connect") as HTMLButtonElement;
const datasetSelect = document.getElementById("dataset") as HTMLSelectElement;
const methodSelect = document.getElementById("method") as HTMLSelectElement;
const paramsDiv = document.getElementById("params")!;
const seedInput = document.getElementById("seed") as HTMLInputElement;
const providerInput = document.getElementById("provider-json") as HTMLTextAreaElement;
const submitButton = document.getElementById("submit") as HTMLButtonElement;
const formError = document.getElementById("form-error")!;
const statusLine = document.getElementById("status")!;
const docMeta = document.getElementById("doc-meta")!;
const computeBadge = document.getElementById("compute-badge")!;
const colorSelect = document.getElementById("color-by") as HTMLSelectElement;
const togglesDiv = document.getElementById("toggles")!;
const legendDiv = document.getElementById("legend")!;
const diagnosticsDiv = document.getElementById("diagnostics")!;
const selectedDiv = document.getElementById("selected")!;

function showBanner(message: string): void {
  banner.textContent = message;
  banner.classList.remove("hidden");
}

function clearBanner(): void {
  banner.textContent = "";
  banner.classList.add("hidden");
}

function setStatus(message: string): void {
  statusLine.textContent = message;
}

function clearFieldErrors(): void {
  formError.textContent = "";
  formError.classList.add("hidden");
  for (const el of document.querySelectorAll(".field-error")) {
    el.classList.remove("field-error");
  }
}

// Point the red border at whichever control the server complained about.
function markFieldError(field: string | null): void {
  if (field === null) return;
  let el: Element | null;
  if (field.startsWith("param:")) {
    el = document.getElementById(`param-${field.slice("param:".length)}`);
  } else if (field === "dims") {
    el = document.getElementById("dims-wrap");
  } else if (field === "provider") {
    el = providerInput;
  } else {
    el = document.getElementById(field);
  }
  el?.classList.add("field-error");
}

function showFormError(message: string, field: string | null): void {
  formError.textContent = message;
  formError.classList.remove("hidden");
  markFieldError(field);
}

function rebuildParamFields(): void {
  paramsDiv.textContent = "";
  const method = methodSelect.value;
  for (const field of PARAM_FIELDS[method] ?? []) {
    const label = document.createElement("label");
    label.textContent = field.name;
    const input = document.createElement("input");
    input.id = `param-${field.name}`;
    input.name = field.name;
    if (typeof field.value === "number") {
      input.type = "number";
      input.value = String(field.value);
      if (field.step !== undefined) input.step = String(field.step);
    } else {
      input.type = "text";
      input.value = field.value;
    }
    label.appendChild(input);
    paramsDiv.appendChild(label);
  }
}

function readParams(): Record<string, number | string> {
  const out: Record<string, number | string> = {};
  for (const input of paramsDiv.querySelectorAll("input")) {
    const raw = input.value.trim();
    if (raw === "") continue;
    if (input.type === "number") {
      const num = Number(raw);
      out[input.name] = Number.isFinite(num) ? num : raw;
    } else {
      out[input.name] = raw;
    }
  }
  return out;
}

function readDims(): 2 | 3 {
  const checked = document.querySelector<HTMLInputElement>("input[name=dims]:checked");
  return checked !== null && checked.value === "3" ? 3 : 2;
}

function buildRequest(): ProjectionRequest | null {
  const request: ProjectionRequest = {
    dataset_id: datasetSelect.value,
    method: methodSelect.value,
    params: readParams(),
    seed: Number(seedInput.value) || 0,
    dims: readDims(),
  };
  const providerRaw = providerInput.value.trim();
  if (providerRaw !== "") {
    try {
      request.provider = JSON.parse(providerRaw);
    } catch {
      showFormError("provider override is not valid JSON", "provider");
      return null;
    }
  }
  return request;
}

function rgbColors(doc: ProjectionDoc, mode: ColorBy): [number, number, number][] {
  return itemColors(doc, mode).map(hexToRgb);
}

function updateHint(): void {
  if (currentDoc === null) {
    hint.textContent = "no projection loaded; submit one on the left";
    hint.classList.remove("hidden");
    return;
  }
  if (allHidden(currentDoc, viewState.hiddenCategories)) {
    hint.textContent = "all categories hidden; re-enable one to see marks";
    hint.classList.remove("hidden");
    return;
  }
  hint.classList.add("hidden");
}

function rebuildToggles(): void {
  togglesDiv.textContent = "";
  if (currentDoc === null) return;
  for (const category of docCategories(currentDoc)) {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = !viewState.hiddenCategories.has(category);
    box.addEventListener("change", () => {
      if (currentDoc === null) return;
      viewState = toggleCategory(viewState, category, docCategories(currentDoc));
      // Filters alter which marks draw, nothing else: positions stay
      // put and the diagnostics panel keeps the server's full report.
      scatter?.setVisibility(visibleMask(currentDoc, viewState.hiddenCategories));
      updateHint();
      updateMeta();
    });
    label.appendChild(box);
    label.appendChild(document.createTextNode(` ${category}`));
    togglesDiv.appendChild(label);
  }
}

function rebuildLegend(): void {
  legendDiv.textContent = "";
  if (currentDoc === null) return;
  for (const [label, hex] of colorMap(currentDoc, viewState.colorBy)) {
    const entry = document.createElement("span");
    entry.className = "legend-entry";
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = hex;
    entry.appendChild(swatch);
    entry.appendChild(document.createTextNode(label));
    legendDiv.appendChild(entry);
  }
}

function updateMeta(): void {
  if (currentDoc === null) {
    docMeta.textContent = "no document";
    return;
  }
  const shown = visibleCount(currentDoc, viewState.hiddenCategories);
  docMeta.textContent =
    `${currentDoc.id}  ·  ${currentDoc.method} on ${currentDoc.dataset_id}` +
    `  ·  ${shown}/${currentDoc.items.length} marks  ·  ${viewState.dims}-D`;
}

function renderSelected(): void {
  selectedDiv.textContent = "";
  if (currentDoc === null || viewState.selectedItem === null) return;
  const item = currentDoc.items[viewState.selectedItem];
  const dl = document.createElement("dl");
  const fields: [string, string][] = [
    ["text", item.text],
    ["category", item.category],
    ["lang", item.lang],
    ["level", item.level],
    ["order", item.order === null ? "-" : String(item.order)],
  ];
  for (const [k, v] of fields) {
    const dt = document.createElement("dt");
    dt.textContent = k;
    const dd = document.createElement("dd");
    dd.textContent = v;
    dl.appendChild(dt);
    dl.appendChild(dd);
  }
  selectedDiv.appendChild(dl);
}

function handleHover(index: number | null): void {
  if (index === null || currentDoc === null) {
    tooltip.classList.add("hidden");
    return;
  }
  const item = currentDoc.items[index];
  tooltip.textContent = `${item.text}  [${item.category} / ${item.lang}]`;
  tooltip.style.left = `${mouseX + 14}px`;
  tooltip.style.top = `${mouseY + 10}px`;
  tooltip.classList.remove("hidden");
}

function handleSelect(index: number | null): void {
  viewState = { ...viewState, selectedItem: index };
  scatter?.setSelected(index);
  renderSelected();
}

async function refreshDiagnostics(docId: string): Promise<void> {
  try {
    const report = await fetchDiagnostics(docId);
    renderDiagnostics(diagnosticsDiv, report);
  } catch (err) {
    const reason = err instanceof ApiError ? err.detail : String(err);
    renderDiagnosticsUnavailable(diagnosticsDiv, reason);
  }
}

function loadDoc(doc: ProjectionDoc): void {
  const problems = validateDoc(doc);
  if (problems.length > 0) {
    // Keep whatever is on screen; a malformed document must not blank
    // the app, it gets reported and ignored.
    showBanner(`document failed validation: ${problems.join("; ")}`);
    setStatus("idle");
    return;
  }
  clearBanner();
  viewState = adoptDoc(viewState, doc);
  currentDoc = doc;
  scatter?.setDoc(
    doc.coords,
    rgbColors(doc, viewState.colorBy),
    viewState.dims,
    viewState.camera,
  );
  scatter?.setVisibility(visibleMask(doc, viewState.hiddenCategories));
  scatter?.setSelected(null);
  rebuildToggles();
  rebuildLegend();
  updateHint();
  updateMeta();
  renderSelected();
  void refreshDiagnostics(doc.id);
}

async function submit(): Promise<void> {
  clearFieldErrors();
  const request = buildRequest();
  if (request === null) return;
  const resubmit = lastRequest !== null && sameRequest(request, lastRequest);
  setStatus("projecting…");
  submitButton.disabled = true;
  try {
    const result = await postProjection(request);
    lastRequest = request;
    computeBadge.textContent = result.computed ? "computed" : "memoized";
    computeBadge.className = result.computed ? "badge fresh" : "badge memo";
    if (!result.computed && resubmit) {
      setStatus(`same parameters, same document ${result.doc.id.slice(0, 10)}; served from the store`);
    } else {
      setStatus(result.computed ? "computed fresh" : "served from the store");
    }
    loadDoc(result.doc);
  } catch (err) {
    if (err instanceof DOMException && err.name === "AbortError") {
      // replaced by a newer submission; the newer call owns the UI now
      return;
    }
    if (err instanceof ApiError) {
      const field = pickFailingField(err.detail, Object.keys(request.params));
      showFormError(`${err.status}: ${err.detail}`, field);
      setStatus("request rejected");
    } else {
      showFormError(String(err), null);
      setStatus("request failed");
    }
  } finally {
    submitButton.disabled = false;
  }
}

async function connect(): Promise<void> {
  setBaseUrl(apiInput.value.trim() || DEFAULT_API);
  datasetSelect.textContent = "";
  try {
    const datasets = await fetchDatasets();
    for (const ds of datasets) {
      const option = document.createElement("option");
      option.value = ds.id;
      option.textContent = `${ds.id} (${ds.items})`;
      datasetSelect.appendChild(option);
    }
    clearBanner();
    setStatus(`connected, ${datasets.length} datasets`);
    submitButton.disabled = false;
  } catch (err) {
    showBanner(`cannot reach the service: ${String(err)}`);
    setStatus("disconnected");
    submitButton.disabled = true;
  }
}

export function boot(): void {
  for (const mode of COLOR_MODES) {
    const option = document.createElement("option");
    option.value = mode;
    option.textContent = mode;
    colorSelect.appendChild(option);
  }
  for (const name of Object.keys(PARAM_FIELDS)) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    methodSelect.appendChild(option);
  }
  for (const name of RESERVED_METHODS) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = `${name} (reserved)`;
    methodSelect.appendChild(option);
  }
  rebuildParamFields();
  methodSelect.addEventListener("change", rebuildParamFields);

  colorSelect.addEventListener("change", () => {
    viewState = { ...viewState, colorBy: colorSelect.value as ColorBy };
    if (currentDoc !== null) {
      scatter?.setColors(rgbColors(currentDoc, viewState.colorBy));
      rebuildLegend();
    }
  });

  canvasWrap.addEventListener("mousemove", (ev) => {
    mouseX = ev.clientX;
    mouseY = ev.clientY;
  });

  scatter = new ScatterView(canvasWrap, {
    onHover: handleHover,
    onSelect: handleSelect,
    onCamera: (camera) => {
      viewState = { ...viewState, camera };
    },
  });

  submitButton.addEventListener("click", () => void submit());
  connectButton.addEventListener("click", () => void connect());

  const params = new URLSearchParams(window.location.search);
  apiInput.value = params.get("api") ?? DEFAULT_API;
  updateHint();
  updateMeta();
  void connect();
}

boot();
