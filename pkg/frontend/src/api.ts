/** Thin typed client over the rulecf REST API.
 *
 * All view state derives from these responses; the client performs no
 * rule evaluation of its own.
 */

import type {
  EventResponse,
  ExplanationResponse,
  HistoryEntry,
  StateResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly details: Record<string, unknown> = {},
  ) {
    super(message);
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    if (body && typeof body === "object" && "error" in body) {
      const err = body as { error: string; message: string; details?: Record<string, unknown> };
      throw new ApiError(response.status, err.error, err.message, err.details ?? {});
    }
    throw new ApiError(response.status, "http-error", `HTTP ${response.status}`);
  }
  return body as T;
}

export class RulecfClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async health(): Promise<{ status: string; sessions: number }> {
    return unwrap(await fetch(this.url("/healthz")));
  }

  async createSession(scenarioJson: string): Promise<string> {
    const body = await unwrap<{ id: string }>(
      await fetch(this.url("/sessions"), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: scenarioJson,
      }),
    );
    return body.id;
  }

  async getState(sessionId: string): Promise<StateResponse> {
    return unwrap(await fetch(this.url(`/sessions/${sessionId}/state`)));
  }

  async getHistory(sessionId: string): Promise<HistoryEntry[]> {
    const body = await unwrap<{ history: HistoryEntry[] }>(
      await fetch(this.url(`/sessions/${sessionId}/history`)),
    );
    return body.history;
  }

  async postEvent(
    sessionId: string,
    event: { entity?: string; value?: string; advance_ms?: number },
  ): Promise<EventResponse> {
    return unwrap(
      await fetch(this.url(`/sessions/${sessionId}/events`), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(event),
      }),
    );
  }

  async explain(
    sessionId: string,
    request: {
      device: string;
      foil: string;
      kind?: "counterfactual" | "causal" | "both";
      config?: Record<string, unknown>;
    },
  ): Promise<ExplanationResponse> {
    return unwrap(
      await fetch(this.url(`/sessions/${sessionId}/explanations`), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ kind: "both", ...request }),
      }),
    );
  }
}
