import type {
  CommitResponse,
  CreateSessionOptions,
  PlayRoundResponse,
  SessionReport,
  SessionStateResponse,
} from "./types.js";

export interface WireEntry {
  method: string;
  path: string;
  body: unknown;
  response: unknown;
}

/** Thin typed client over the game service's HTTP JSON API.
 *
 * Every request/response pair is appended to `wireLog`, which the fairness
 * tests inspect to show that computer bits only ever arrive in round
 * (reveal) responses, never earlier.
 */
export class ApiClient {
  readonly wireLog: WireEntry[] = [];

  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      const detail = await response.text();
      throw new Error(`${method} ${path} failed (${response.status}): ${detail}`);
    }
    const parsed = (await response.json()) as T;
    this.wireLog.push({ method, path, body: body ?? null, response: parsed });
    return parsed;
  }

  createSession(options: CreateSessionOptions): Promise<SessionStateResponse> {
    return this.request<SessionStateResponse>("POST", "/sessions", options);
  }

  commit(sessionId: string): Promise<CommitResponse> {
    return this.request<CommitResponse>("POST", `/sessions/${sessionId}/commit`);
  }

  playRound(sessionId: string, bit: 0 | 1): Promise<PlayRoundResponse> {
    return this.request<PlayRoundResponse>("POST", `/sessions/${sessionId}/round`, {
      bit,
    });
  }

  state(sessionId: string): Promise<SessionStateResponse> {
    return this.request<SessionStateResponse>("GET", `/sessions/${sessionId}`);
  }

  report(sessionId: string): Promise<SessionReport> {
    return this.request<SessionReport>("GET", `/sessions/${sessionId}/report`);
  }
}
