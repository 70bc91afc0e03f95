// SVG time-series chart: throughput line, gateway-provided target line,
// min/max ratio band (right axis), Policy/Stop markers.

import type { ChartSeries } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface ChartLayout {
  width: number;
  height: number;
  padding: number;
}

const DEFAULT_LAYOUT: ChartLayout = { width: 720, height: 280, padding: 36 };

function el(name: string, attrs: Record<string, string | number>): SVGElement {
  const node = document.createElementNS(SVG_NS, name);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

export function renderChart(
  svg: SVGSVGElement,
  series: ChartSeries,
  layout: ChartLayout = DEFAULT_LAYOUT,
): void {
  svg.innerHTML = "";
  svg.setAttribute("viewBox", `0 0 ${layout.width} ${layout.height}`);
  const { width, height, padding } = layout;
  const plotW = width - 2 * padding;
  const plotH = height - 2 * padding;

  if (series.points.length === 0) {
    const empty = el("text", {
      x: width / 2,
      y: height / 2,
      "text-anchor": "middle",
      class: "chart-empty",
    });
    empty.textContent = "no data yet";
    svg.appendChild(empty);
    return;
  }

  const ticks = series.points.map((p) => p.tick);
  const tMin = Math.min(...ticks);
  const tMax = Math.max(...ticks, tMin + 1);
  const values = series.points.map((p) => p.dl_throughput_mbps);
  const vMax = Math.max(...values, series.target ?? 0) * 1.15 || 1;

  const x = (tick: number) => padding + ((tick - tMin) / (tMax - tMin)) * plotW;
  const y = (mbps: number) => padding + plotH - (mbps / vMax) * plotH;
  const yPct = (pct: number) => padding + plotH - (pct / 100) * plotH;

  // ratio band (min..max %) behind everything else
  const banded = series.points.filter(
    (p) => p.min_ratio_pct !== null && p.max_ratio_pct !== null,
  );
  if (banded.length > 1) {
    const upper = banded.map((p) => `${x(p.tick)},${yPct(p.max_ratio_pct as number)}`);
    const lower = [...banded]
      .reverse()
      .map((p) => `${x(p.tick)},${yPct(p.min_ratio_pct as number)}`);
    svg.appendChild(
      el("polygon", {
        points: [...upper, ...lower].join(" "),
        class: "ratio-band",
        fill: "#8ecae6",
        opacity: 0.25,
        stroke: "none",
      }),
    );
  }

  // axes
  svg.appendChild(
    el("line", {
      x1: padding, y1: padding + plotH, x2: padding + plotW, y2: padding + plotH,
      stroke: "#888", class: "axis-x",
    }),
  );
  svg.appendChild(
    el("line", {
      x1: padding, y1: padding, x2: padding, y2: padding + plotH,
      stroke: "#888", class: "axis-y",
    }),
  );

  // throughput polyline: one vertex per received report, no interpolation
  svg.appendChild(
    el("polyline", {
      points: series.points
        .map((p) => `${x(p.tick)},${y(p.dl_throughput_mbps)}`)
        .join(" "),
      fill: "none",
      stroke: "#2a6f97",
      "stroke-width": 1.6,
      class: "throughput-line",
    }),
  );

  // target line straight from the gateway's policy payload
  if (series.target !== null) {
    svg.appendChild(
      el("line", {
        x1: padding, y1: y(series.target), x2: padding + plotW, y2: y(series.target),
        stroke: "#d62828",
        "stroke-dasharray": "6 4",
        class: "target-line",
        "data-target": series.target,
      }),
    );
    const label = el("text", {
      x: padding + plotW + 2,
      y: y(series.target) + 4,
      class: "target-label",
      fill: "#d62828",
      "font-size": 11,
    });
    label.textContent = `${series.target} Mbps`;
    svg.appendChild(label);
  }

  // lifecycle markers: vertical dashed lines with labels
  for (const marker of series.markers) {
    const mx = x(marker.tick);
    svg.appendChild(
      el("line", {
        x1: mx, y1: padding, x2: mx, y2: padding + plotH,
        stroke: "#555",
        "stroke-dasharray": "4 4",
        class: "marker-line",
        "data-label": marker.label,
        "data-tick": marker.tick,
      }),
    );
    const text = el("text", {
      x: mx + 3, y: padding + 12, class: "marker-label", "font-size": 11, fill: "#333",
    });
    text.textContent = marker.label;
    svg.appendChild(text);
  }
}
