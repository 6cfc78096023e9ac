/** Iteration control: start a seed->crawl cycle, watch progress, show the
 * final report in the iteration-table layout. */

import type { ApiClient, IterationInfo } from "../api.js";
import { ApiError } from "../api.js";
import { reportCells } from "../viewmodel.js";

export interface IterationsViewDeps {
  api: ApiClient;
  onError: (error: unknown) => void;
}

export class IterationsView {
  private currentId: number | null = null;
  private form!: HTMLFormElement;
  private message!: HTMLElement;
  private progress!: HTMLElement;
  private reportEl!: HTMLElement;

  constructor(private root: HTMLElement, private deps: IterationsViewDeps) {
    this.build();
  }

  private build(): void {
    this.root.textContent = "";
    this.form = document.createElement("form");
    this.form.id = "iteration-form";

    const seedLabel = document.createElement("label");
    seedLabel.textContent = "seed queries ";
    const seedInput = document.createElement("input");
    seedInput.type = "number";
    seedInput.name = "seed_count";
    seedInput.id = "seed-count";
    seedInput.min = "0";
    seedInput.value = "10";
    seedLabel.appendChild(seedInput);

    const rngLabel = document.createElement("label");
    rngLabel.className = "advanced";
    rngLabel.textContent = " rng seed (optional) ";
    const rngInput = document.createElement("input");
    rngInput.type = "number";
    rngInput.name = "rng_seed";
    rngInput.id = "rng-seed";
    rngLabel.appendChild(rngInput);

    const submit = document.createElement("button");
    submit.type = "submit";
    submit.id = "start-iteration";
    submit.textContent = "start iteration";

    this.form.append(seedLabel, rngLabel, submit);
    this.form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.start();
    });

    this.message = document.createElement("div");
    this.message.id = "iteration-message";
    this.progress = document.createElement("div");
    this.progress.id = "iteration-progress";
    this.reportEl = document.createElement("div");
    this.reportEl.id = "iteration-report";

    this.root.append(this.form, this.message, this.progress, this.reportEl);
  }

  private async start(): Promise<void> {
    const seedCount = Number(
      (this.form.querySelector("#seed-count") as HTMLInputElement).value || "0",
    );
    const rngRaw = (this.form.querySelector("#rng-seed") as HTMLInputElement).value;
    const rngSeed = rngRaw === "" ? undefined : Number(rngRaw);
    const button = this.form.querySelector("#start-iteration") as HTMLButtonElement;
    button.disabled = true; // double-click guard
    try {
      const { id } = await this.deps.api.startIteration(seedCount, rngSeed);
      this.currentId = id;
      this.message.textContent = `iteration ${id} started`;
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.message.textContent = "iteration already running";
      } else {
        this.deps.onError(error);
      }
    } finally {
      button.disabled = false;
    }
  }

  /** Called by the polling loop. */
  async refresh(runningId: number | null): Promise<void> {
    if (this.currentId === null && runningId !== null) {
      this.currentId = runningId;
    }
    if (this.currentId === null) return;
    try {
      const info = await this.deps.api.iteration(this.currentId);
      this.renderInfo(info);
    } catch (error) {
      this.deps.onError(error);
    }
  }

  private renderInfo(info: IterationInfo): void {
    const phase = typeof info.progress.phase === "string" ? info.progress.phase : "";
    this.progress.textContent = `iteration ${info.id}: ${info.status}${
      phase ? ` (${phase})` : ""
    }`;
    if (info.status === "failed") {
      const error = info.progress.error;
      this.progress.textContent += error ? ` — ${String(error)}` : "";
    }
    if (info.report) {
      this.renderReport(info);
    }
  }

  private renderReport(info: IterationInfo): void {
    if (!info.report) return;
    this.reportEl.textContent = "";
    const table = document.createElement("table");
    table.className = "report";
    const head = document.createElement("tr");
    const body = document.createElement("tr");
    for (const cell of reportCells(info.report)) {
      const th = document.createElement("th");
      th.textContent = cell.header;
      head.appendChild(th);
      const td = document.createElement("td");
      td.textContent = cell.value;
      td.dataset.raw = cell.raw;
      td.dataset.field = cell.header;
      body.appendChild(td);
    }
    table.append(head, body);
    this.reportEl.appendChild(table);
  }
}
