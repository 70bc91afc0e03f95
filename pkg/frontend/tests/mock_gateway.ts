// Stateful scripted gateway for console tests: implements the HTTP surface
// the console uses and pushes server-sent events through a fake
// EventSource.

import type { EventSourceFactory, EventSourceLike, FetchLike } from "../src/api.js";
import type { PolicyOut, SessionView, StreamEvent } from "../src/types.js";

const FULL_UTTERANCE_FIELDS = ["decrease", "downlink", "%", "minute", "slice", "cell"];

class FakeEventSource implements EventSourceLike {
  listeners = new Map<string, ((event: MessageEvent) => void)[]>();
  closed = false;

  addEventListener(type: string, listener: (event: MessageEvent) => void): void {
    const list = this.listeners.get(type) ?? [];
    list.push(listener);
    this.listeners.set(type, list);
  }

  close(): void {
    this.closed = true;
  }

  emit(kind: string, payload: unknown): void {
    for (const listener of this.listeners.get(kind) ?? []) {
      listener({ data: JSON.stringify(payload) } as MessageEvent);
    }
  }
}

export class MockGateway {
  sessions = new Map<string, SessionView>();
  policies = new Map<string, PolicyOut>();
  sources: FakeEventSource[] = [];
  tick = 0;
  ratios: Record<string, { min: number; max: number }> = {
    "1:1": { min: 10, max: 41 },
    "1:2": { min: 10, max: 57 },
  };
  throughput: Record<string, number> = { "1:1": 22.4, "1:2": 12.1 };
  private sessionCounter = 0;
  private policyCounter = 0;

  readonly fetch: FetchLike = async (input, init) => this.route(input, init);
  readonly eventSourceFactory: EventSourceFactory = () => {
    const source = new FakeEventSource();
    this.sources.push(source);
    return source;
  };

  private emit(event: StreamEvent): void {
    for (const source of this.sources) {
      if (!source.closed) source.emit(event.kind, event);
    }
  }

  /** Advance one simulated tick and publish its kpm event. */
  step(): void {
    const reports = Object.entries(this.throughput).map(([key, value]) => {
      const [cell, slice] = key.split(":").map(Number);
      return {
        tick: this.tick,
        cell_id: cell,
        slice_id: slice,
        dl_throughput_mbps: value,
        prb_used: this.ratios[key].max,
        avg_cqi: 11,
      };
    });
    this.emit({ kind: "kpm", tick: this.tick, reports });
    this.tick += 1;
  }

  /** Scripted control action: nudge a slice toward its policy target. */
  controlToward(key: string, target: number, policyId: string): void {
    const [cell, slice] = key.split(":").map(Number);
    const ratio = this.ratios[key];
    const next = { min: Math.max(0, ratio.min - 2), max: Math.max(0, ratio.max - 2) };
    this.ratios[key] = next;
    this.emit({
      kind: "ratio_applied",
      tick: this.tick,
      cell_id: cell,
      slice_id: slice,
      min_ratio_pct: next.min,
      max_ratio_pct: next.max,
      policy_id: policyId,
    });
    const current = this.throughput[key];
    this.throughput[key] = Math.max(target, current - (current - target) * 0.5);
  }

  private json(body: unknown, status = 200): Response {
    return new Response(JSON.stringify(body), {
      status,
      headers: { "content-type": "application/json" },
    });
  }

  private async route(input: string, init?: RequestInit): Promise<Response> {
    const method = init?.method ?? "GET";
    const url = input.replace(/^https?:\/\/[^/]+/, "");

    if (method === "POST" && url === "/sessions") {
      this.sessionCounter += 1;
      const view: SessionView = {
        session_id: `sess-${this.sessionCounter}`,
        pipeline_status: "Idle",
        conversation: [],
        contract_id: null,
        policy_id: null,
        rejection: null,
      };
      this.sessions.set(view.session_id, view);
      return this.json(view);
    }

    const turnMatch = url.match(/^\/sessions\/([^/]+)\/turns$/);
    if (method === "POST" && turnMatch) {
      const view = this.sessions.get(turnMatch[1]);
      if (!view) return this.json({ detail: "unknown session" }, 404);
      const { text } = JSON.parse(String(init?.body)) as { text: string };
      view.conversation.push({ speaker: "Operator", text, timestamp: this.tick });
      const everything = view.conversation.map((t) => t.text).join(" ");
      const complete = FULL_UTTERANCE_FIELDS.every((frag) => everything.includes(frag));
      if (complete) {
        view.pipeline_status = "ContractReady";
        view.contract_id = `intent-${turnMatch[1]}`;
      } else {
        view.pipeline_status = "AwaitingClarification";
        view.conversation.push({
          speaker: "System",
          text: "Please clarify the deadline for reaching the target.",
          timestamp: this.tick,
        });
      }
      return this.json(view);
    }

    const contractMatch = url.match(/^\/contracts\/([^/:]+)$/);
    if (method === "GET" && contractMatch) {
      return this.json({
        id: contractMatch[1],
        "icm:target": "Cell_1_Slice_1",
        "icm:hasExpectation": "ThroughputReduction",
        "ran:targetThroughputIncreasement": 20.0,
        "idan:Delivery_slaPolicy": "TwoLevelRrmPolicyRatio",
        lifecycle: { state: "Validated", history: [] },
      });
    }

    const activateMatch = url.match(/^\/contracts\/([^/:]+):activate$/);
    if (method === "POST" && activateMatch) {
      this.policyCounter += 1;
      const policy: PolicyOut = {
        policy_id: `pol-${this.policyCounter}`,
        contract_id: activateMatch[1],
        scope: { cell_id: 1, slice_id: 1 },
        target_throughput_mbps: 18.0,
        deadline_s: 300,
        state: "Enforced",
      };
      this.policies.set(policy.policy_id, policy);
      for (const view of this.sessions.values()) {
        if (view.contract_id === activateMatch[1]) view.policy_id = policy.policy_id;
      }
      this.emit({ kind: "policy_enforced", tick: this.tick, policy: { ...policy } });
      return this.json(policy);
    }

    const policyMatch = url.match(/^\/policies\/([^/]+)$/);
    if (method === "DELETE" && policyMatch) {
      const policy = this.policies.get(policyMatch[1]);
      if (!policy) return this.json({ detail: "unknown policy" }, 404);
      if (policy.state !== "Enforced") {
        return this.json({ detail: `policy ${policy.policy_id} is ${policy.state}` }, 409);
      }
      policy.state = "Stopped";
      this.emit({
        kind: "policy_stopped",
        tick: this.tick,
        policy: { ...policy },
        reason: "stopped by operator",
      });
      return this.json(policy);
    }

    if (method === "GET" && url === "/state") {
      return this.json({
        tick: this.tick,
        ratios: Object.entries(this.ratios).map(([key, r]) => {
          const [cell, slice] = key.split(":").map(Number);
          return {
            cell_id: cell,
            slice_id: slice,
            min_ratio_pct: r.min,
            max_ratio_pct: r.max,
          };
        }),
        policies: [...this.policies.values()],
        contracts: [],
      });
    }

    return this.json({ detail: `no route for ${method} ${url}` }, 404);
  }
}
