import type { CorruptionResult, ModelInfo, Report, SegmentResponse } from "./types";

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function readJson<T>(res: Response): Promise<T> {
  if (!res.ok) {
    let detail = `HTTP ${res.status}`;
    try {
      const body = (await res.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // keep the status line
    }
    throw new ApiError(res.status, detail);
  }
  return (await res.json()) as T;
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  getModels(signal?: AbortSignal): Promise<ModelInfo[]> {
    return this.fetchImpl(`${this.baseUrl}/models`, { signal }).then((r) =>
      readJson<ModelInfo[]>(r),
    );
  }

  segment(text: string, modelIds: string[], signal?: AbortSignal): Promise<SegmentResponse> {
    return this.fetchImpl(`${this.baseUrl}/segment`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text, model_ids: modelIds }),
      signal,
    }).then((r) => readJson<SegmentResponse>(r));
  }

  corrupt(
    text: string,
    rulesetId: string,
    ratio: number,
    seed: number,
    signal?: AbortSignal,
  ): Promise<CorruptionResult> {
    return this.fetchImpl(`${this.baseUrl}/corrupt`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text, ruleset_id: rulesetId, ratio, seed }),
      signal,
    }).then((r) => readJson<CorruptionResult>(r));
  }

  getReport(corpusId: string, signal?: AbortSignal): Promise<Report> {
    return this.fetchImpl(`${this.baseUrl}/report/${encodeURIComponent(corpusId)}`, {
      signal,
    }).then((r) => readJson<Report>(r));
  }
}

/**
 * Latest-wins request slot: starting a new request aborts the in-flight one.
 * A superseded request resolves to null so callers simply skip rendering.
 */
export class LatestWins {
  private controller: AbortController | null = null;

  async run<T>(request: (signal: AbortSignal) => Promise<T>): Promise<T | null> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    try {
      const result = await request(controller.signal);
      return this.controller === controller ? result : null;
    } catch (err) {
      if (controller.signal.aborted) return null;
      throw err;
    }
  }
}
