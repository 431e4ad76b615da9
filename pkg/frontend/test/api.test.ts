import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, LatestWins } from "../src/api";

function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

describe("ApiClient", () => {
  it("hits the four endpoints with the documented shapes", async () => {
    const calls: { url: string; body?: unknown }[] = [];
    const client = new ApiClient("http://svc", async (url, init) => {
      calls.push({ url, body: init?.body ? JSON.parse(init.body as string) : undefined });
      if (url.endsWith("/models")) return jsonResponse([]);
      if (url.endsWith("/segment")) return jsonResponse({ text: "x", results: {} });
      if (url.endsWith("/corrupt")) {
        return jsonResponse({
          text: "x",
          corrupted_indices: [],
          ratio_requested: 0.1,
          ratio_actual: 0,
          seed: 1,
          warning: null,
        });
      }
      return jsonResponse({ corpus_id: "c", rows: [], zipf: { fit: null, points: [] } });
    });

    await client.getModels();
    await client.segment("пример", ["m1", "m2"]);
    await client.corrupt("пример", "ru", 0.3, 7);
    await client.getReport("мой корпус");

    expect(calls[0].url).toBe("http://svc/models");
    expect(calls[1]).toEqual({
      url: "http://svc/segment",
      body: { text: "пример", model_ids: ["m1", "m2"] },
    });
    expect(calls[2].body).toEqual({ text: "пример", ruleset_id: "ru", ratio: 0.3, seed: 7 });
    expect(calls[3].url).toBe("http://svc/report/" + encodeURIComponent("мой корпус"));
  });

  it("surfaces the service's detail message on errors", async () => {
    const client = new ApiClient("", async () =>
      jsonResponse({ detail: "unknown model_id 'ghost'" }, 404),
    );
    await expect(client.getModels()).rejects.toThrowError(ApiError);
    await expect(client.getModels()).rejects.toThrow("unknown model_id 'ghost'");
  });
});

describe("LatestWins", () => {
  it("aborts the in-flight request when a new one starts", async () => {
    const slot = new LatestWins();
    const seen: string[] = [];

    const slow = slot.run(
      (signal) =>
        new Promise<string>((resolve, reject) => {
          signal.addEventListener("abort", () => reject(new DOMException("x", "AbortError")));
          setTimeout(() => resolve("slow"), 200);
        }),
    );
    const fast = slot.run(async () => "fast");

    const [slowResult, fastResult] = await Promise.all([slow, fast]);
    seen.push(String(slowResult), String(fastResult));
    expect(slowResult).toBeNull(); // superseded: caller must skip rendering
    expect(fastResult).toBe("fast");
    expect(seen).toEqual(["null", "fast"]);
  });

  it("propagates non-abort failures", async () => {
    const slot = new LatestWins();
    await expect(slot.run(async () => Promise.reject(new Error("boom")))).rejects.toThrow("boom");
  });
});
