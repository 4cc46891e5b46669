import type {
  ConsensusResponse,
  CreateSessionRequest,
  CreateSessionResponse,
  DeleteResponse,
  EditResponse,
  ErrorEnvelope,
  PinResponse,
  SessionResponse,
  SimilarityResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Error carrying the service's structured error envelope. */
export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: Record<string, unknown>;

  constructor(status: number, envelope: ErrorEnvelope) {
    super(`${envelope.error.code}: ${envelope.error.message}`);
    this.name = "ApiError";
    this.status = status;
    this.code = envelope.error.code;
    this.detail = envelope.error.detail;
  }
}

/**
 * Thin typed client for the session service.  All metric values pass
 * through untouched so callers can render the exact strings the service
 * produced.
 */
export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(base = "", fetchFn?: FetchLike) {
    // strip one trailing slash so path joins stay predictable
    this.base = base.endsWith("/") ? base.slice(0, -1) : base;
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { accept: "application/json" } };
    if (body !== undefined) {
      init.headers = { ...init.headers, "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchFn(this.base + path, init);
    const payload = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, payload as ErrorEnvelope);
    }
    return payload as T;
  }

  createSession(req: CreateSessionRequest): Promise<CreateSessionResponse> {
    return this.request("POST", "/sessions", req);
  }

  getSession(sessionId: string): Promise<SessionResponse> {
    return this.request("GET", `/sessions/${sessionId}`);
  }

  getSimilarity(sessionId: string): Promise<SimilarityResponse> {
    return this.request("GET", `/sessions/${sessionId}/similarity`);
  }

  generateConsensus(sessionId: string, t: number): Promise<ConsensusResponse> {
    return this.request("POST", `/sessions/${sessionId}/consensus`, { t });
  }

  // Ranking ids only contain [a-z0-9:] and ":" is a legal raw path
  // character, so ids are interpolated without percent-encoding.
  editRanking(
    sessionId: string,
    rankingId: string,
    candidate: string,
    position: number,
  ): Promise<EditResponse> {
    return this.request(
      "POST",
      `/sessions/${sessionId}/rankings/${rankingId}/edit`,
      { candidate, position },
    );
  }

  pinRanking(sessionId: string, rankingId: string): Promise<PinResponse> {
    return this.request(
      "POST",
      `/sessions/${sessionId}/rankings/${rankingId}/pin`,
    );
  }

  unpinRanking(sessionId: string, rankingId: string): Promise<PinResponse> {
    return this.request(
      "DELETE",
      `/sessions/${sessionId}/rankings/${rankingId}/pin`,
    );
  }

  deleteRanking(sessionId: string, rankingId: string): Promise<DeleteResponse> {
    return this.request(
      "DELETE",
      `/sessions/${sessionId}/rankings/${rankingId}`,
    );
  }
}
