import { describe, expect, it } from "vitest";

import { renderChart } from "../src/chart.js";
import type { ChartSeries } from "../src/types.js";

const makeSvg = (): SVGSVGElement =>
  document.createElementNS("http://www.w3.org/2000/svg", "svg") as SVGSVGElement;

const series = (overrides: Partial<ChartSeries> = {}): ChartSeries => ({
  cell_id: 1,
  slice_id: 1,
  points: Array.from({ length: 40 }, (_, t) => ({
    tick: t,
    dl_throughput_mbps: 22 - t * 0.1,
    min_ratio_pct: 10,
    max_ratio_pct: 41,
  })),
  markers: [{ tick: 5, label: "Policy 1" }],
  target: 18,
  ...overrides,
});

describe("renderChart", () => {
  it("renders an empty-state placeholder without data", () => {
    const svg = makeSvg();
    renderChart(svg, series({ points: [], markers: [], target: null }));
    expect(svg.querySelector(".chart-empty")?.textContent).toBe("no data yet");
    expect(svg.querySelector(".throughput-line")).toBeNull();
  });

  it("draws one polyline vertex per point (no interpolation)", () => {
    const svg = makeSvg();
    const s = series();
    renderChart(svg, s);
    const line = svg.querySelector(".throughput-line") as SVGPolylineElement;
    expect(line.getAttribute("points")!.split(" ")).toHaveLength(s.points.length);
  });

  it("renders the gateway target verbatim", () => {
    const svg = makeSvg();
    renderChart(svg, series());
    const target = svg.querySelector(".target-line")!;
    expect(target.getAttribute("data-target")).toBe("18");
    expect(svg.querySelector(".target-label")?.textContent).toBe("18 Mbps");
  });

  it("draws marker lines with labels", () => {
    const svg = makeSvg();
    renderChart(svg, series({ markers: [{ tick: 5, label: "Policy 1" }, { tick: 30, label: "Stop" }] }));
    const labels = [...svg.querySelectorAll(".marker-line")].map((n) =>
      n.getAttribute("data-label"),
    );
    expect(labels).toEqual(["Policy 1", "Stop"]);
  });

  it("renders a ratio band polygon when ratios are known", () => {
    const svg = makeSvg();
    renderChart(svg, series());
    expect(svg.querySelector(".ratio-band")).not.toBeNull();
    renderChart(svg, series({
      points: [
        { tick: 0, dl_throughput_mbps: 5, min_ratio_pct: null, max_ratio_pct: null },
        { tick: 1, dl_throughput_mbps: 5, min_ratio_pct: null, max_ratio_pct: null },
      ],
    }));
    expect(svg.querySelector(".ratio-band")).toBeNull();
  });
});
