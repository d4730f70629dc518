/** Thin typed client over the service's HTTP interface. */

import type {
  BrowsePayload,
  ErrorPayload,
  HealthPayload,
  ModelsPayload,
  ResultsJson,
  StatsPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly payload: ErrorPayload,
  ) {
    super(payload.message ?? payload.error);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class Client {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.base}${path}`, init);
    const body = (await response.json()) as T | ErrorPayload;
    if (!response.ok) {
      const payload = body as ErrorPayload;
      throw new ApiError(response.status, payload.error ? payload : { error: `HTTP ${response.status}` });
    }
    return body as T;
  }

  health(): Promise<HealthPayload> {
    return this.request<HealthPayload>("/health");
  }

  stats(): Promise<StatsPayload> {
    return this.request<StatsPayload>("/stats");
  }

  models(): Promise<ModelsPayload> {
    return this.request<ModelsPayload>("/models");
  }

  browse(iri: string): Promise<BrowsePayload> {
    return this.request<BrowsePayload>(`/browse/${encodeURIComponent(iri)}`);
  }

  query(text: string): Promise<ResultsJson> {
    return this.request<ResultsJson>("/sparql", {
      method: "POST",
      headers: { "Content-Type": "application/sparql-query" },
      body: text,
    });
  }
}
