// Accumulates gateway stream events into per-slice chart series.
//
// This store renders ONLY gateway state: targets come from policy payloads,
// ratios from /state and ratio_applied events. Nothing is computed here
// beyond bookkeeping, and one kpm record becomes exactly one chart point.

import type {
  ChartMarker,
  ChartPoint,
  ChartSeries,
  PolicyOut,
  RatioOut,
  StreamEvent,
} from "./types.js";

export interface LabeledPolicy extends PolicyOut {
  label: string; // "Policy n" in arrival order
}

const scopeKey = (cell: number, slice: number) => `${cell}:${slice}`;

export class SeriesStore {
  private points = new Map<string, ChartPoint[]>();
  private markers = new Map<string, ChartMarker[]>();
  private ratios = new Map<string, { min: number; max: number }>();
  private targets = new Map<string, number>();
  private policies = new Map<string, LabeledPolicy>();
  private enforcedCount = 0;
  kpmRecordsReceived = 0;

  constructor(private maxPoints = 2000) {}

  seedRatios(ratios: RatioOut[]): void {
    for (const ratio of ratios) {
      this.ratios.set(scopeKey(ratio.cell_id, ratio.slice_id), {
        min: ratio.min_ratio_pct,
        max: ratio.max_ratio_pct,
      });
    }
  }

  onEvent(event: StreamEvent): void {
    switch (event.kind) {
      case "kpm": {
        for (const report of event.reports) {
          const key = scopeKey(report.cell_id, report.slice_id);
          const ratio = this.ratios.get(key) ?? null;
          const list = this.points.get(key) ?? [];
          list.push({
            tick: report.tick,
            dl_throughput_mbps: report.dl_throughput_mbps,
            min_ratio_pct: ratio ? ratio.min : null,
            max_ratio_pct: ratio ? ratio.max : null,
          });
          if (list.length > this.maxPoints) list.shift();
          this.points.set(key, list);
          this.kpmRecordsReceived += 1;
        }
        break;
      }
      case "ratio_applied": {
        this.ratios.set(scopeKey(event.cell_id, event.slice_id), {
          min: event.min_ratio_pct,
          max: event.max_ratio_pct,
        });
        break;
      }
      case "policy_enforced": {
        this.enforcedCount += 1;
        const labeled: LabeledPolicy = {
          ...event.policy,
          state: "Enforced",
          label: `Policy ${this.enforcedCount}`,
        };
        this.policies.set(event.policy.policy_id, labeled);
        const key = scopeKey(event.policy.scope.cell_id, event.policy.scope.slice_id);
        this.targets.set(key, event.policy.target_throughput_mbps);
        this.pushMarker(key, { tick: event.tick, label: labeled.label });
        break;
      }
      case "policy_replaced":
      case "policy_stopped": {
        const existing = this.policies.get(event.policy.policy_id);
        const state = event.kind === "policy_replaced" ? "Replaced" : "Stopped";
        if (existing) {
          existing.state = state;
        } else {
          this.policies.set(event.policy.policy_id, {
            ...event.policy,
            state,
            label: event.policy.policy_id,
          });
        }
        if (event.kind === "policy_stopped") {
          const scope = event.policy.scope;
          this.pushMarker(scopeKey(scope.cell_id, scope.slice_id), {
            tick: event.tick,
            label: "Stop",
          });
        }
        break;
      }
      default:
        break; // contract_state / contract_ready feed other panels
    }
  }

  private pushMarker(key: string, marker: ChartMarker): void {
    const list = this.markers.get(key) ?? [];
    list.push(marker);
    this.markers.set(key, list);
  }

  scopes(): { cell_id: number; slice_id: number }[] {
    return [...this.points.keys()]
      .map((key) => key.split(":").map(Number))
      .map(([cell_id, slice_id]) => ({ cell_id, slice_id }))
      .sort((a, b) => a.cell_id - b.cell_id || a.slice_id - b.slice_id);
  }

  series(cell: number, slice: number): ChartSeries {
    const key = scopeKey(cell, slice);
    const points = this.points.get(key) ?? [];
    const lastTick = points.length ? points[points.length - 1].tick : -Infinity;
    return {
      cell_id: cell,
      slice_id: slice,
      points,
      // markers only for ticks the series already covers
      markers: (this.markers.get(key) ?? []).filter((m) => m.tick <= lastTick),
      target: this.targets.get(key) ?? null,
    };
  }

  policyList(): LabeledPolicy[] {
    return [...this.policies.values()];
  }
}
