// Policy panel: enforced/replaced/stopped list with Stop actions.

import { GatewayClient, GatewayError } from "./api.js";
import type { LabeledPolicy } from "./series.js";

export class PolicyPanel {
  readonly root: HTMLElement;
  private list: HTMLElement;

  constructor(
    private client: GatewayClient,
    private onToast: (text: string) => void = () => {},
  ) {
    this.root = document.createElement("section");
    this.root.className = "policy-panel";
    this.root.innerHTML = `<h2>Policies</h2><ul class="policy-list"></ul>`;
    this.list = this.root.querySelector(".policy-list") as HTMLElement;
  }

  render(policies: LabeledPolicy[]): void {
    this.list.innerHTML = "";
    for (const policy of policies) {
      const item = document.createElement("li");
      item.className = `policy policy-${policy.state.toLowerCase()}`;
      item.dataset.policyId = policy.policy_id;
      item.dataset.state = policy.state;
      const text = document.createElement("span");
      text.textContent =
        `${policy.label} (${policy.policy_id}) cell ${policy.scope.cell_id} ` +
        `slice ${policy.scope.slice_id} -> ${policy.target_throughput_mbps} Mbps ` +
        `[${policy.state}]`;
      const stop = document.createElement("button");
      stop.className = "policy-stop";
      stop.textContent = "Stop";
      stop.addEventListener("click", () => {
        void this.stop(policy.policy_id);
      });
      item.append(text, stop);
      this.list.appendChild(item);
    }
  }

  private async stop(policyId: string): Promise<void> {
    try {
      await this.client.stopPolicy(policyId);
      this.onToast(`policy ${policyId} stopped`);
    } catch (error) {
      if (error instanceof GatewayError && error.status === 409) {
        this.onToast(`cannot stop ${policyId}: already terminal`);
      } else if (error instanceof GatewayError) {
        this.onToast(`stop failed: ${error.detail}`);
      } else {
        throw error;
      }
    }
  }
}
