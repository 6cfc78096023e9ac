/** Domain triage: ranked table, per-domain sentence samples, blacklisting. */

import type { ApiClient, DomainRow } from "../api.js";
import { fmtInt, fmtPercent, fmtProba } from "../format.js";

export interface DomainsViewDeps {
  api: ApiClient;
  onMessage: (text: string) => void;
  onError: (error: unknown) => void;
}

export class DomainsView {
  private sort: "sentences" | "urls" = "sentences";

  constructor(private root: HTMLElement, private deps: DomainsViewDeps) {}

  async refresh(): Promise<void> {
    try {
      const rows = await this.deps.api.domains(this.sort, 25);
      this.render(rows);
    } catch (error) {
      this.deps.onError(error);
    }
  }

  private render(rows: DomainRow[]): void {
    this.root.textContent = "";

    const controls = document.createElement("div");
    controls.className = "domain-controls";
    for (const key of ["sentences", "urls"] as const) {
      const button = document.createElement("button");
      button.textContent = `sort by ${key}`;
      button.dataset.sort = key;
      button.disabled = key === this.sort;
      button.addEventListener("click", () => {
        this.sort = key;
        void this.refresh();
      });
      controls.appendChild(button);
    }

    const manual = document.createElement("span");
    manual.className = "manual-blacklist";
    const input = document.createElement("input");
    input.placeholder = "domain to blacklist";
    input.id = "blacklist-input";
    const button = document.createElement("button");
    button.textContent = "blacklist";
    button.id = "blacklist-button";
    button.addEventListener("click", () => {
      void this.blacklist(input.value);
    });
    manual.append(input, button);
    controls.appendChild(manual);
    this.root.appendChild(controls);

    const table = document.createElement("table");
    table.className = "domains";
    const head = document.createElement("tr");
    for (const header of ["domain", "URLs", "sentences", "%", ""]) {
      const th = document.createElement("th");
      th.textContent = header;
      head.appendChild(th);
    }
    table.appendChild(head);

    for (const row of rows) {
      const tr = document.createElement("tr");
      tr.dataset.domain = row.domain;
      const cells = [
        row.domain,
        fmtInt(row.url_count),
        fmtInt(row.sentence_count),
        fmtPercent(row.percent),
      ];
      for (const text of cells) {
        const td = document.createElement("td");
        td.textContent = text;
        tr.appendChild(td);
      }
      const actions = document.createElement("td");
      const inspect = document.createElement("button");
      inspect.textContent = "sentences";
      inspect.addEventListener("click", () => {
        void this.inspect(row.domain);
      });
      const ban = document.createElement("button");
      ban.textContent = "blacklist";
      ban.className = "danger";
      ban.addEventListener("click", () => {
        void this.blacklist(row.domain);
      });
      actions.append(inspect, ban);
      tr.appendChild(actions);
      table.appendChild(tr);
    }
    this.root.appendChild(table);

    const drill = document.createElement("div");
    drill.id = "domain-drilldown";
    this.root.appendChild(drill);
  }

  private async inspect(domain: string): Promise<void> {
    const drill = this.root.querySelector<HTMLElement>("#domain-drilldown");
    if (!drill) return;
    try {
      const sentences = await this.deps.api.sentences({ domain, limit: 15 });
      drill.textContent = "";
      const heading = document.createElement("h3");
      heading.textContent = `latest sentences from ${domain}`;
      drill.appendChild(heading);
      const list = document.createElement("ul");
      list.className = "sentences";
      for (const row of sentences) {
        const item = document.createElement("li");
        const proba = document.createElement("code");
        proba.textContent = fmtProba(row.crawl_proba);
        const text = document.createElement("span");
        text.textContent = ` ${row.text}`;
        item.append(proba, text);
        list.appendChild(item);
      }
      drill.appendChild(list);
    } catch (error) {
      this.deps.onError(error);
    }
  }

  private async blacklist(domain: string): Promise<void> {
    if (!domain.trim()) {
      this.deps.onMessage("enter a domain to blacklist");
      return;
    }
    try {
      const result = await this.deps.api.blacklist(domain.trim());
      this.deps.onMessage(
        `blacklisted ${result.domain} (${result.cancelled} pending tasks cancelled)`,
      );
      await this.refresh();
    } catch (error) {
      this.deps.onError(error);
    }
  }
}
