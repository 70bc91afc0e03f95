// Wire types mirroring the gateway's JSON payloads.

export interface TurnOut {
  speaker: "Operator" | "System";
  text: string;
  timestamp: number;
}

export interface SessionView {
  session_id: string;
  pipeline_status: "Idle" | "AwaitingClarification" | "ContractReady" | "Rejected";
  conversation: TurnOut[];
  contract_id: string | null;
  policy_id: string | null;
  rejection: Record<string, unknown> | null;
}

export interface PolicyScope {
  cell_id: number;
  slice_id: number;
}

export interface PolicyOut {
  policy_id: string;
  contract_id: string;
  scope: PolicyScope;
  target_throughput_mbps: number;
  deadline_s: number;
  state: "Created" | "Enforced" | "Replaced" | "Stopped";
}

export interface KpmRecord {
  tick: number;
  cell_id: number;
  slice_id: number;
  dl_throughput_mbps: number;
  prb_used: number;
  avg_cqi: number;
}

export interface RatioOut {
  cell_id: number;
  slice_id: number;
  min_ratio_pct: number;
  max_ratio_pct: number;
}

export interface StateOut {
  tick: number;
  ratios: RatioOut[];
  policies: PolicyOut[];
  contracts: { id: string; target: string; state: string; policy_id: string | null }[];
}

// Events on GET /metrics/stream (server-sent).
export type StreamEvent =
  | ({ kind: "kpm"; tick: number; reports: KpmRecord[] })
  | ({ kind: "policy_enforced"; tick: number; policy: PolicyOut & { scope: PolicyScope } })
  | ({ kind: "policy_replaced"; tick: number; policy: PolicyOut; reason: string })
  | ({ kind: "policy_stopped"; tick: number; policy: PolicyOut; reason: string })
  | ({ kind: "ratio_applied"; tick: number; cell_id: number; slice_id: number;
       min_ratio_pct: number; max_ratio_pct: number; policy_id: string })
  | ({ kind: "contract_state"; tick: number; contract_id: string; state: string; reason: string })
  | ({ kind: "contract_ready"; tick: number; session_id: string; contract_id: string });

export interface ChartPoint {
  tick: number;
  dl_throughput_mbps: number;
  min_ratio_pct: number | null;
  max_ratio_pct: number | null;
}

export interface ChartMarker {
  tick: number;
  label: string; // "Policy n" | "Stop"
}

export interface ChartSeries {
  cell_id: number;
  slice_id: number;
  points: ChartPoint[];
  markers: ChartMarker[];
  target: number | null; // gateway-provided target, never computed here
}
