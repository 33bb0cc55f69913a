/** Typed client for the tuxqa HTTP API. */

export interface CandidateRow {
  id: number;
  title: string;
  tfidf: number;
  cosine: number;
  fused: number;
}

export interface ApiQueryResponse {
  kind: "answer" | "salutation" | "no_result";
  reply_text: string;
  question: { id: number; title: string } | null;
  answer: string | null;
  category: "factual" | "troubleshooting" | null;
  candidates?: CandidateRow[];
  timings_ms: Record<string, number>;
}

export interface HealthResponse {
  status: "ok" | "loading";
  n_questions: number;
  index_version: number | null;
}

/**
 * Minimal fetch shape, injectable so tests can replay recorded responses
 * without touching globals.
 */
export interface FetchLike {
  (url: string, init?: {
    method?: string;
    headers?: Record<string, string>;
    body?: string;
  }): Promise<{ ok: boolean; status: number; text(): Promise<string> }>;
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

const defaultFetch: FetchLike = (url, init) => fetch(url, init);

export async function postQuery(
  text: string,
  debug: boolean,
  fetchFn: FetchLike = defaultFetch,
): Promise<ApiQueryResponse> {
  const response = await fetchFn("/api/query", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ text, debug }),
  });
  const body = await response.text();
  if (!response.ok) {
    throw new ApiError(response.status, `query failed with HTTP ${response.status}`);
  }
  return JSON.parse(body) as ApiQueryResponse;
}

export async function getHealth(
  fetchFn: FetchLike = defaultFetch,
): Promise<HealthResponse> {
  const response = await fetchFn("/api/health");
  const body = await response.text();
  if (!response.ok) {
    throw new ApiError(response.status, `health check failed with HTTP ${response.status}`);
  }
  return JSON.parse(body) as HealthResponse;
}
