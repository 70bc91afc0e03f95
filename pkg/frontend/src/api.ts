// Thin client for the gateway HTTP + event-stream API.

import type { PolicyOut, SessionView, StateOut, StreamEvent } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface EventSourceLike {
  addEventListener(type: string, listener: (event: MessageEvent) => void): void;
  close(): void;
}

export type EventSourceFactory = (url: string) => EventSourceLike;

export class GatewayError extends Error {
  constructor(public status: number, public detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

const STREAM_KINDS = [
  "kpm",
  "policy_enforced",
  "policy_replaced",
  "policy_stopped",
  "ratio_applied",
  "contract_state",
  "contract_ready",
] as const;

export class GatewayClient {
  constructor(
    private base: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
    private eventSourceFactory: EventSourceFactory = (url) =>
      new EventSource(url) as unknown as EventSourceLike,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, init);
    const body = await response.text();
    if (!response.ok) {
      let detail = body;
      try {
        detail = JSON.parse(body).detail ?? body;
      } catch {
        /* non-JSON error body */
      }
      throw new GatewayError(response.status, String(detail));
    }
    return JSON.parse(body) as T;
  }

  createSession(): Promise<SessionView> {
    return this.request<SessionView>("/sessions", { method: "POST" });
  }

  sendTurn(sessionId: string, text: string): Promise<SessionView> {
    return this.request<SessionView>(`/sessions/${sessionId}/turns`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ text }),
    });
  }

  getContract(contractId: string): Promise<Record<string, unknown>> {
    return this.request<Record<string, unknown>>(`/contracts/${contractId}`);
  }

  activateContract(contractId: string): Promise<PolicyOut> {
    return this.request<PolicyOut>(`/contracts/${contractId}:activate`, { method: "POST" });
  }

  stopPolicy(policyId: string): Promise<PolicyOut> {
    return this.request<PolicyOut>(`/policies/${policyId}`, { method: "DELETE" });
  }

  getState(): Promise<StateOut> {
    return this.request<StateOut>("/state");
  }

  /** Subscribe to the metrics stream; returns an unsubscribe function. */
  subscribe(onEvent: (event: StreamEvent) => void): () => void {
    const source = this.eventSourceFactory(`${this.base}/metrics/stream`);
    for (const kind of STREAM_KINDS) {
      source.addEventListener(kind, (message: MessageEvent) => {
        try {
          onEvent(JSON.parse(String(message.data)) as StreamEvent);
        } catch {
          /* skip unparsable frames */
        }
      });
    }
    return () => source.close();
  }
}
