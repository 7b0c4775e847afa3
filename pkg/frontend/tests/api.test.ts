import { afterEach, describe, expect, it, vi } from "vitest";
import {
  ApiError,
  fetchDatasets,
  fetchDiagnostics,
  hasInflight,
  postProjection,
  setBaseUrl,
} from "../src/api.js";
import type { ProjectionRequest } from "../src/types.js";
import { makeDoc } from "./fixtures.js";

function jsonResponse(body: unknown, status = 200, headers: Record<string, string> = {}): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json", ...headers },
  });
}

const REQUEST: ProjectionRequest = {
  dataset_id: "trilingual_sample",
  method: "phate",
  params: { k: 10 },
  seed: 0,
  dims: 2,
};

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("postProjection", () => {
  it("reads the computed header: 1 means fresh work", async () => {
    const doc = makeDoc();
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse(doc, 200, { "X-Semgeo-Computed": "1" })));
    setBaseUrl("http://svc");
    const result = await postProjection(REQUEST);
    expect(result.computed).toBe(true);
    expect(result.doc.id).toBe(doc.id);
  });

  it("reads the computed header: 0 means the memo answered", async () => {
    const doc = makeDoc();
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse(doc, 200, { "X-Semgeo-Computed": "0" })));
    setBaseUrl("http://svc");
    const result = await postProjection(REQUEST);
    expect(result.computed).toBe(false);
  });

  it("resubmitting unchanged parameters surfaces the same id without a compute flag", async () => {
    const doc = makeDoc({ id: "a".repeat(64) });
    let calls = 0;
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => {
        calls++;
        return jsonResponse(doc, 200, { "X-Semgeo-Computed": calls === 1 ? "1" : "0" });
      }),
    );
    setBaseUrl("http://svc");
    const first = await postProjection(REQUEST);
    const second = await postProjection({ ...REQUEST });
    expect(first.computed).toBe(true);
    expect(second.computed).toBe(false);
    expect(second.doc.id).toBe(first.doc.id);
  });

  it("sends the request body as-is", async () => {
    const doc = makeDoc();
    const spy = vi.fn(async () => jsonResponse(doc, 200, { "X-Semgeo-Computed": "1" }));
    vi.stubGlobal("fetch", spy);
    setBaseUrl("http://svc");
    await postProjection(REQUEST);
    const [url, init] = spy.mock.calls[0] as unknown as [string, RequestInit];
    expect(url).toBe("http://svc/projections");
    expect(init.method).toBe("POST");
    expect(JSON.parse(init.body as string)).toEqual(REQUEST);
  });

  it("turns error payloads into ApiError with the server detail verbatim", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => jsonResponse({ detail: "method 'umap' is reserved and not implemented" }, 422)),
    );
    setBaseUrl("http://svc");
    const err = await postProjection(REQUEST).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(422);
    expect(err.detail).toBe("method 'umap' is reserved and not implemented");
  });

  it("propagates provider failures as 502", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse({ detail: "embedding provider failed" }, 502)));
    setBaseUrl("http://svc");
    const err = await postProjection(REQUEST).catch((e) => e);
    expect(err.status).toBe(502);
  });

  it("aborts the previous in-flight request when a new one starts", async () => {
    const doc = makeDoc();
    const signals: AbortSignal[] = [];
    let calls = 0;
    vi.stubGlobal(
      "fetch",
      vi.fn((_url: string, init?: RequestInit) => {
        const signal = init!.signal!;
        signals.push(signal);
        if (calls++ === 0) {
          // First request hangs until the replacement aborts it.
          return new Promise<Response>((_resolve, reject) => {
            signal.addEventListener("abort", () =>
              reject(new DOMException("aborted", "AbortError")),
            );
          });
        }
        return Promise.resolve(jsonResponse(doc, 200, { "X-Semgeo-Computed": "1" }));
      }),
    );
    setBaseUrl("http://svc");
    const first = postProjection(REQUEST);
    const second = postProjection({ ...REQUEST, seed: 1 });
    const firstErr = await first.catch((e) => e);
    expect(firstErr.name).toBe("AbortError");
    expect(signals[0].aborted).toBe(true);
    const result = await second;
    expect(result.doc.id).toBe(doc.id);
    expect(signals[1].aborted).toBe(false);
    expect(hasInflight()).toBe(false);
  });
});

describe("GET wrappers", () => {
  it("hits the expected paths", async () => {
    const spy = vi.fn(async (url: string) => {
      if (url.endsWith("/datasets")) return jsonResponse([{ id: "enu", items: 482, description: "" }]);
      return jsonResponse({ projection_id: "x", scores: {}, per_category: {}, flags: {}, thresholds: {}, skipped: {} });
    });
    vi.stubGlobal("fetch", spy);
    setBaseUrl("http://svc/");
    const datasets = await fetchDatasets();
    expect(datasets[0].id).toBe("enu");
    await fetchDiagnostics("abc123");
    const urls = spy.mock.calls.map((c) => c[0]);
    expect(urls).toContain("http://svc/datasets");
    expect(urls).toContain("http://svc/projections/abc123/diagnostics");
  });

  it("maps 404 to ApiError", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse({ detail: "unknown projection" }, 404)));
    setBaseUrl("http://svc");
    const err = await fetchDiagnostics("nope").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(404);
  });
});
