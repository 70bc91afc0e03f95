// Scripted end-to-end console flow against the mock gateway: intent chat
// -> contract card -> Activate -> Policy marker + series descending toward
// the 18 Mbps target line -> Stop -> frozen ratio band.

import { beforeEach, describe, expect, it } from "vitest";

import { GatewayClient } from "../src/api.js";
import { mountConsole, type ConsoleApp } from "../src/app.js";
import { MockGateway } from "./mock_gateway.js";

const UTTERANCE = "decrease downlink throughput by 20% in 5 minutes for slice 1 of cell 1";

const flush = () => new Promise((resolve) => setTimeout(resolve, 0));

async function typeAndSend(root: HTMLElement, text: string): Promise<void> {
  const input = root.querySelector(".chat-input") as HTMLInputElement;
  input.value = text;
  input.dispatchEvent(new Event("input"));
  (root.querySelector(".chat-form") as HTMLFormElement).dispatchEvent(
    new Event("submit", { cancelable: true }),
  );
  await flush();
  await flush();
}

describe("operator console end to end", () => {
  let gateway: MockGateway;
  let root: HTMLElement;
  let app: ConsoleApp;

  beforeEach(async () => {
    gateway = new MockGateway();
    root = document.createElement("div");
    document.body.innerHTML = "";
    document.body.appendChild(root);
    app = await mountConsole(
      root,
      new GatewayClient("", gateway.fetch, gateway.eventSourceFactory),
    );
  });

  it("empty input keeps send disabled", () => {
    const send = root.querySelector(".chat-send") as HTMLButtonElement;
    expect(send.disabled).toBe(true);
    const input = root.querySelector(".chat-input") as HTMLInputElement;
    input.value = "  ";
    input.dispatchEvent(new Event("input"));
    expect(send.disabled).toBe(true);
  });

  it("shows a clarification prompt for partial intents", async () => {
    await typeAndSend(root, "decrease downlink throughput by 20% for slice 1 of cell 1");
    const status = root.querySelector(".chat-status") as HTMLElement;
    expect(status.dataset.status).toBe("AwaitingClarification");
    const system = [...root.querySelectorAll(".turn-system")].map((n) => n.textContent);
    expect(system.some((t) => t?.includes("clarify"))).toBe(true);
  });

  it("runs the single-intent assurance flow", async () => {
    // a few ticks of idle telemetry
    for (let i = 0; i < 5; i++) gateway.step();
    await flush();

    // 1. the utterance produces a contract card with pretty JSON-LD
    await typeAndSend(root, UTTERANCE);
    const card = root.querySelector(".contract-card") as HTMLElement;
    expect(card.hidden).toBe(false);
    expect(card.querySelector(".contract-json")!.textContent).toContain("icm:target");

    // 2. activation inserts a Policy marker and the target line
    (card.querySelector(".contract-activate") as HTMLButtonElement).click();
    await flush();
    await flush();
    const policyId = [...gateway.policies.keys()][0];
    expect(policyId).toBeDefined();

    // scripted control loop: descend from ~22 toward the 18 Mbps target
    for (let i = 0; i < 20; i++) {
      gateway.controlToward("1:1", 18.0, policyId);
      gateway.step();
    }
    await flush();

    const svg = root.querySelector(".chart") as SVGSVGElement;
    const markerLabels = [...svg.querySelectorAll(".marker-line")].map((n) =>
      n.getAttribute("data-label"),
    );
    expect(markerLabels).toContain("Policy 1");
    const targetLine = svg.querySelector(".target-line")!;
    expect(targetLine.getAttribute("data-target")).toBe("18");

    // the series descends toward the gateway-provided target
    const series = app.store.series(1, 1);
    const first = series.points[0].dl_throughput_mbps;
    const last = series.points[series.points.length - 1].dl_throughput_mbps;
    expect(first).toBeGreaterThan(20);
    expect(Math.abs(last - 18.0)).toBeLessThanOrEqual(1.8);
    // render fidelity: one polyline vertex per received report
    const line = svg.querySelector(".throughput-line") as SVGPolylineElement;
    expect(line.getAttribute("points")!.split(" ")).toHaveLength(series.points.length);

    // 3. Stop freezes the ratio band and adds the Stop marker
    const stopButton = root.querySelector(
      `.policy-list li[data-policy-id="${policyId}"] .policy-stop`,
    ) as HTMLButtonElement;
    stopButton.click();
    await flush();
    const frozen = { ...gateway.ratios["1:1"] };
    for (let i = 0; i < 10; i++) gateway.step(); // no further control events
    await flush();

    const after = app.store.series(1, 1);
    const tail = after.points.slice(-10);
    expect(tail.every((p) => p.min_ratio_pct === frozen.min)).toBe(true);
    expect(tail.every((p) => p.max_ratio_pct === frozen.max)).toBe(true);
    const labels = [...svg.querySelectorAll(".marker-line")].map((n) =>
      n.getAttribute("data-label"),
    );
    expect(labels).toContain("Stop");

    // 4. stopping a terminal policy surfaces a conflict toast
    stopButton.click();
    await flush();
    const toasts = [...root.querySelectorAll(".toast")].map((n) => n.textContent);
    expect(toasts.some((t) => t?.includes("already terminal"))).toBe(true);
  });

  it("re-labels a replaced policy in the panel", async () => {
    for (let i = 0; i < 3; i++) gateway.step();
    await typeAndSend(root, UTTERANCE);
    (root.querySelector(".contract-activate") as HTMLButtonElement).click();
    await flush();
    const policyId = [...gateway.policies.keys()][0];
    // dynamic scenario: a second policy on the same cell replaces the first
    const first = gateway.policies.get(policyId)!;
    first.state = "Replaced";
    gateway.sources.forEach((s) =>
      s.emit("policy_replaced", {
        kind: "policy_replaced",
        tick: gateway.tick,
        policy: { ...first },
        reason: "replaced by pol-next",
      }),
    );
    await flush();
    const item = root.querySelector(
      `.policy-list li[data-policy-id="${policyId}"]`,
    ) as HTMLElement;
    expect(item.dataset.state).toBe("Replaced");
    expect(item.textContent).toContain("[Replaced]");
  });
});
