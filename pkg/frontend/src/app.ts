/** Playground controller.
 *
 * Holds only the session id plus the latest confirmed service
 * responses; every user action round-trips through the API and the view
 * re-renders from the response (no optimistic updates).
 */

import { ApiError, RulecfClient } from "./api.js";
import { DEMOS, demoById } from "./demos.js";
import type {
  EntityTile,
  ExplanationResponse,
  RankedAlternative,
  StateResponse,
} from "./types.js";
import {
  actionableEvents,
  alternativeHtml,
  escapeHtml,
  firingSummary,
  formatClock,
  ruleRowHtml,
  tickerLineHtml,
  tileHtml,
} from "./view.js";

interface Elements {
  demoSelect: HTMLSelectElement;
  loadButton: HTMLButtonElement;
  tiles: HTMLElement;
  rules: HTMLElement;
  ticker: HTMLElement;
  clock: HTMLElement;
  status: HTMLElement;
  advanceButton: HTMLButtonElement;
  advanceInput: HTMLInputElement;
  whyDevice: HTMLSelectElement;
  whyFoil: HTMLSelectElement;
  whyButton: HTMLButtonElement;
  causalPanel: HTMLElement;
  counterfactualPanel: HTMLElement;
  alternatives: HTMLElement;
  verdict: HTMLElement;
}

export class Playground {
  private sessionId: string | null = null;
  private entities: EntityTile[] = [];
  private lastExplanation: ExplanationResponse | null = null;

  constructor(
    private readonly client: RulecfClient,
    private readonly el: Elements,
  ) {}

  bind(): void {
    this.el.demoSelect.innerHTML = DEMOS.map(
      (d) => `<option value="${d.id}">${escapeHtml(d.label)}</option>`,
    ).join("");
    this.el.loadButton.addEventListener("click", () => {
      void this.loadScenario(this.el.demoSelect.value);
    });
    this.el.advanceButton.addEventListener("click", () => {
      void this.advanceClock(Number(this.el.advanceInput.value) || 1000);
    });
    this.el.whyButton.addEventListener("click", () => {
      void this.askWhy(this.el.whyDevice.value, this.el.whyFoil.value);
    });
    this.el.tiles.addEventListener("change", (event) => {
      const target = event.target as HTMLSelectElement;
      const entity = target.dataset.entity;
      if (entity) void this.toggleDevice(entity, target.value);
    });
    this.el.whyDevice.addEventListener("change", () => this.refreshFoilOptions());
    this.el.alternatives.addEventListener("click", (event) => {
      const target = event.target as HTMLElement;
      const index = target.dataset.apply;
      if (index !== undefined) void this.applySuggestion(Number(index));
    });
  }

  async loadScenario(demoId: string): Promise<void> {
    const demo = demoById(demoId);
    try {
      this.sessionId = await this.client.createSession(JSON.stringify(demo.document));
      this.lastExplanation = null;
      this.el.causalPanel.textContent = "";
      this.el.counterfactualPanel.textContent = "";
      this.el.alternatives.innerHTML = "";
      this.el.verdict.textContent = "";
      await this.refresh();
      this.el.whyDevice.value = demo.suggestedDevice;
      this.refreshFoilOptions();
      this.el.whyFoil.value = demo.suggestedFoil;
      this.setStatus(`session ${this.sessionId} ready`);
    } catch (error) {
      this.reportError(error);
    }
  }

  async toggleDevice(entity: string, value: string): Promise<void> {
    if (!this.sessionId) return;
    try {
      const result = await this.client.postEvent(this.sessionId, { entity, value });
      this.setStatus(firingSummary(result.firings));
      await this.refresh();
    } catch (error) {
      this.reportError(error);
      await this.refresh();
    }
  }

  async advanceClock(ms: number): Promise<void> {
    if (!this.sessionId) return;
    try {
      await this.client.postEvent(this.sessionId, { advance_ms: ms });
      this.setStatus(`advanced clock by ${ms} ms`);
      await this.refresh();
    } catch (error) {
      this.reportError(error);
    }
  }

  async askWhy(device: string, foil: string): Promise<void> {
    if (!this.sessionId) return;
    try {
      const response = await this.client.explain(this.sessionId, {
        device,
        foil,
        kind: "both",
      });
      this.lastExplanation = response;
      const causal = response.explanations.find((e) => e.kind === "causal");
      const counterfactual = response.explanations.find(
        (e) => e.kind === "counterfactual",
      );
      this.el.causalPanel.textContent = causal ? causal.text : "—";
      this.el.counterfactualPanel.textContent = counterfactual
        ? counterfactual.text
        : "—";
      const alternatives = response.alternatives ?? [];
      this.el.alternatives.innerHTML = alternatives
        .map((alt, i) => alternativeHtml(alt, i, this.entities))
        .join("");
      this.el.verdict.textContent = response.case
        ? `case ${response.case}, ${alternatives.length} ranked candidate(s)`
        : "";
      this.setStatus("explanation ready");
    } catch (error) {
      this.lastExplanation = null;
      this.el.alternatives.innerHTML = "";
      if (error instanceof ApiError) {
        this.el.counterfactualPanel.textContent = `(${error.code}) ${error.message}`;
        this.el.causalPanel.textContent = "";
      }
      this.reportError(error);
    }
  }

  async applySuggestion(index: number): Promise<void> {
    if (!this.sessionId || !this.lastExplanation) return;
    const alternative: RankedAlternative | undefined =
      this.lastExplanation.alternatives?.[index];
    if (!alternative) return;
    const events = actionableEvents(alternative, this.entities);
    if (events.length === 0) {
      this.setStatus("suggestion has no actionable changes");
      return;
    }
    try {
      for (const event of events) {
        await this.client.postEvent(this.sessionId, event);
      }
      const state = await this.refresh();
      const { device, foil } = this.lastExplanation;
      const reached = state.state.values[device] === foil;
      this.el.verdict.textContent = reached
        ? `✔ ${device} is now ${foil}`
        : `✘ ${device} is still ${state.state.values[device]}`;
      this.el.verdict.className = reached ? "verdict-ok" : "verdict-miss";
    } catch (error) {
      this.reportError(error);
    }
  }

  private async refresh(): Promise<StateResponse> {
    if (!this.sessionId) throw new Error("no session");
    const state = await this.client.getState(this.sessionId);
    const history = await this.client.getHistory(this.sessionId);
    this.entities = state.entities;
    this.el.tiles.innerHTML = state.entities.map(tileHtml).join("");
    this.el.rules.innerHTML = state.rules.map(ruleRowHtml).join("");
    this.el.ticker.innerHTML = history.slice(-30).reverse().map(tickerLineHtml).join("");
    this.el.clock.textContent = formatClock(state.state.clock);
    const device = this.el.whyDevice.value;
    this.el.whyDevice.innerHTML = state.entities
      .map((e) => `<option value="${escapeHtml(e.id)}">${escapeHtml(e.name)}</option>`)
      .join("");
    if (state.entities.some((e) => e.id === device)) this.el.whyDevice.value = device;
    this.refreshFoilOptions();
    return state;
  }

  private refreshFoilOptions(): void {
    const entity = this.entities.find((e) => e.id === this.el.whyDevice.value);
    this.el.whyFoil.innerHTML = (entity?.domain ?? [])
      .map((v) => `<option value="${escapeHtml(v)}">${escapeHtml(v)}</option>`)
      .join("");
  }

  private setStatus(text: string): void {
    this.el.status.textContent = text;
  }

  private reportError(error: unknown): void {
    if (error instanceof ApiError) {
      this.setStatus(`error (${error.code}): ${error.message}`);
    } else {
      this.setStatus(`error: ${String(error)}`);
    }
  }
}

export function mount(baseUrl: string, root: Document): Playground {
  const byId = <T extends HTMLElement>(id: string): T => {
    const node = root.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
  };
  const playground = new Playground(new RulecfClient(baseUrl), {
    demoSelect: byId<HTMLSelectElement>("demo-select"),
    loadButton: byId<HTMLButtonElement>("load-button"),
    tiles: byId("tiles"),
    rules: byId("rules"),
    ticker: byId("ticker"),
    clock: byId("clock"),
    status: byId("status"),
    advanceButton: byId<HTMLButtonElement>("advance-button"),
    advanceInput: byId<HTMLInputElement>("advance-input"),
    whyDevice: byId<HTMLSelectElement>("why-device"),
    whyFoil: byId<HTMLSelectElement>("why-foil"),
    whyButton: byId<HTMLButtonElement>("why-button"),
    causalPanel: byId("causal-panel"),
    counterfactualPanel: byId("counterfactual-panel"),
    alternatives: byId("alternatives"),
    verdict: byId("verdict"),
  });
  playground.bind();
  return playground;
}
