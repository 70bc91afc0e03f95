// Console composition: chat + live chart + policy panel on one page.

import { GatewayClient } from "./api.js";
import { ChatPanel } from "./chat.js";
import { renderChart } from "./chart.js";
import { PolicyPanel } from "./policies.js";
import { SeriesStore } from "./series.js";
import type { StreamEvent } from "./types.js";

export interface ConsoleApp {
  store: SeriesStore;
  chat: ChatPanel;
  policies: PolicyPanel;
  selectScope(cell: number, slice: number): void;
  dispose(): void;
}

export function showToast(host: HTMLElement, text: string): void {
  const toast = document.createElement("div");
  toast.className = "toast";
  toast.textContent = text;
  host.appendChild(toast);
  setTimeout(() => toast.remove(), 4000);
}

export async function mountConsole(
  root: HTMLElement,
  client: GatewayClient,
): Promise<ConsoleApp> {
  root.innerHTML = `
    <header><h1>CAIF operator console</h1></header>
    <main class="layout">
      <div class="left"></div>
      <div class="right">
        <section class="chart-panel">
          <h2>Live slice telemetry</h2>
          <label>scope
            <select class="scope-select"></select>
          </label>
          <svg class="chart" role="img" aria-label="slice throughput chart"></svg>
        </section>
        <div class="policy-host"></div>
      </div>
    </main>
    <div class="toast-host"></div>
  `;
  const toastHost = root.querySelector(".toast-host") as HTMLElement;
  const toast = (text: string) => showToast(toastHost, text);

  const store = new SeriesStore();
  const chat = new ChatPanel(client, { onToast: toast });
  const policyPanel = new PolicyPanel(client, toast);
  (root.querySelector(".left") as HTMLElement).appendChild(chat.root);
  (root.querySelector(".policy-host") as HTMLElement).appendChild(policyPanel.root);

  const svg = root.querySelector(".chart") as SVGSVGElement;
  const scopeSelect = root.querySelector(".scope-select") as HTMLSelectElement;
  let selected: { cell: number; slice: number } = { cell: 1, slice: 1 };

  const state = await client.getState();
  store.seedRatios(state.ratios);

  const refreshScopeOptions = () => {
    const scopes = store.scopes();
    const current = `${selected.cell}:${selected.slice}`;
    const wanted = scopes
      .map((s) => `${s.cell_id}:${s.slice_id}`)
      .filter((value, i, all) => all.indexOf(value) === i);
    if (wanted.join("|") !== [...scopeSelect.options].map((o) => o.value).join("|")) {
      scopeSelect.innerHTML = "";
      for (const value of wanted) {
        const option = document.createElement("option");
        option.value = value;
        option.textContent = `cell ${value.split(":")[0]} / slice ${value.split(":")[1]}`;
        option.selected = value === current;
        scopeSelect.appendChild(option);
      }
    }
  };

  const redraw = () => {
    refreshScopeOptions();
    renderChart(svg, store.series(selected.cell, selected.slice));
    policyPanel.render(store.policyList());
  };

  scopeSelect.addEventListener("change", () => {
    const [cell, slice] = scopeSelect.value.split(":").map(Number);
    selected = { cell, slice };
    redraw();
  });

  const unsubscribe = client.subscribe((event: StreamEvent) => {
    store.onEvent(event);
    redraw();
  });

  redraw();
  return {
    store,
    chat,
    policies: policyPanel,
    selectScope(cell: number, slice: number) {
      selected = { cell, slice };
      redraw();
    },
    dispose: unsubscribe,
  };
}
