// Intent chat panel: multi-turn conversation, clarification prompts,
// contract review with an explicit Activate action.

import { GatewayClient, GatewayError } from "./api.js";
import type { SessionView } from "./types.js";

export interface ChatCallbacks {
  onActivated?: (policyId: string) => void;
  onToast?: (text: string) => void;
}

export class ChatPanel {
  readonly root: HTMLElement;
  private log: HTMLElement;
  private input: HTMLInputElement;
  private sendButton: HTMLButtonElement;
  private contractCard: HTMLElement;
  private session: SessionView | null = null;

  constructor(
    private client: GatewayClient,
    private callbacks: ChatCallbacks = {},
  ) {
    this.root = document.createElement("section");
    this.root.className = "chat-panel";
    this.root.innerHTML = `
      <h2>Intent chat</h2>
      <div class="chat-log"></div>
      <form class="chat-form">
        <input type="text" class="chat-input" placeholder="Describe the intent..." />
        <button type="submit" class="chat-send" disabled>Send</button>
      </form>
      <div class="contract-card" hidden></div>
    `;
    this.log = this.root.querySelector(".chat-log") as HTMLElement;
    this.input = this.root.querySelector(".chat-input") as HTMLInputElement;
    this.sendButton = this.root.querySelector(".chat-send") as HTMLButtonElement;
    this.contractCard = this.root.querySelector(".contract-card") as HTMLElement;

    this.input.addEventListener("input", () => {
      this.sendButton.disabled = this.input.value.trim().length === 0;
    });
    (this.root.querySelector(".chat-form") as HTMLFormElement).addEventListener(
      "submit",
      (event) => {
        event.preventDefault();
        void this.send();
      },
    );
  }

  async ensureSession(): Promise<SessionView> {
    if (!this.session) {
      this.session = await this.client.createSession();
    }
    return this.session;
  }

  async send(): Promise<void> {
    const text = this.input.value.trim();
    if (!text) return;
    const session = await this.ensureSession();
    this.input.value = "";
    this.sendButton.disabled = true;
    try {
      this.session = await this.client.sendTurn(session.session_id, text);
    } catch (error) {
      this.callbacks.onToast?.(error instanceof Error ? error.message : String(error));
      return;
    }
    this.renderConversation();
    if (this.session.pipeline_status === "ContractReady" && this.session.contract_id) {
      await this.showContract(this.session.contract_id);
    } else if (this.session.pipeline_status === "Rejected") {
      this.renderRejection();
    }
  }

  private renderConversation(): void {
    if (!this.session) return;
    this.log.innerHTML = "";
    for (const turn of this.session.conversation) {
      const bubble = document.createElement("div");
      bubble.className = `turn turn-${turn.speaker.toLowerCase()}`;
      bubble.textContent = `${turn.speaker}: ${turn.text}`;
      this.log.appendChild(bubble);
    }
    const status = document.createElement("div");
    status.className = "chat-status";
    status.dataset.status = this.session.pipeline_status;
    status.textContent = `status: ${this.session.pipeline_status}`;
    this.log.appendChild(status);
  }

  private renderRejection(): void {
    const rejection = this.session?.rejection;
    if (!rejection) return;
    const card = document.createElement("div");
    card.className = "rejection-card";
    const violations =
      (rejection["evaluation"] as { violations?: { field: string; reason: string }[] })
        ?.violations ??
      (rejection["validation"] as { field: string; reason: string }[]) ??
      [];
    card.innerHTML = `<strong>Intent rejected</strong><ul>${violations
      .map((v) => `<li>${v.field}: ${v.reason}</li>`)
      .join("")}</ul>`;
    this.log.appendChild(card);
  }

  private async showContract(contractId: string): Promise<void> {
    const doc = await this.client.getContract(contractId);
    this.contractCard.hidden = false;
    this.contractCard.innerHTML = "";
    const heading = document.createElement("h3");
    heading.textContent = `Contract ${contractId}`;
    const pre = document.createElement("pre");
    pre.className = "contract-json";
    pre.textContent = JSON.stringify(doc, null, 2);
    const activate = document.createElement("button");
    activate.className = "contract-activate";
    activate.textContent = "Activate";
    activate.addEventListener("click", () => {
      void this.activate(contractId, activate);
    });
    this.contractCard.append(heading, pre, activate);
  }

  private async activate(contractId: string, button: HTMLButtonElement): Promise<void> {
    button.disabled = true;
    try {
      const policy = await this.client.activateContract(contractId);
      this.callbacks.onToast?.(`policy ${policy.policy_id} enforced`);
      this.callbacks.onActivated?.(policy.policy_id);
    } catch (error) {
      button.disabled = false;
      if (error instanceof GatewayError) {
        this.callbacks.onToast?.(`activation failed: ${error.detail}`);
      } else {
        throw error;
      }
    }
  }
}
