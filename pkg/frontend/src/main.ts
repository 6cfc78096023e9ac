/** Dashboard entry point: tabbed layout plus a 1 Hz polling loop. */

import { ApiClient } from "./api.js";
import { DomainsView } from "./views/domains.js";
import { IterationsView } from "./views/iterations.js";
import { renderStatus } from "./views/status.js";

const POLL_MS = 1000;

export function mountDashboard(root: HTMLElement, api: ApiClient): () => void {
  root.textContent = "";

  const banner = document.createElement("div");
  banner.id = "offline-banner";
  banner.textContent = "service unreachable — retrying...";
  banner.hidden = true;

  const messages = document.createElement("div");
  messages.id = "messages";

  const nav = document.createElement("nav");
  const sections: Record<string, HTMLElement> = {};
  for (const name of ["status", "domains", "iterations"]) {
    const button = document.createElement("button");
    button.textContent = name;
    button.dataset.tab = name;
    button.addEventListener("click", () => selectTab(name));
    nav.appendChild(button);
    const section = document.createElement("section");
    section.id = `tab-${name}`;
    section.hidden = name !== "status";
    sections[name] = section;
  }

  root.append(banner, nav, messages, ...Object.values(sections));

  function selectTab(name: string): void {
    for (const [tab, section] of Object.entries(sections)) {
      section.hidden = tab !== name;
    }
    nav.querySelectorAll("button").forEach((b) => {
      b.classList.toggle("active", b.dataset.tab === name);
    });
  }

  function showMessage(text: string): void {
    messages.textContent = text;
  }

  function showError(error: unknown): void {
    showMessage(error instanceof Error ? error.message : String(error));
  }

  const domainsView = new DomainsView(sections.domains, {
    api,
    onMessage: showMessage,
    onError: showError,
  });
  const iterationsView = new IterationsView(sections.iterations, {
    api,
    onError: showError,
  });

  let domainsFresh = 0;

  async function poll(): Promise<void> {
    try {
      const status = await api.status();
      const stats = await api.stats();
      banner.hidden = true;
      renderStatus(sections.status, status, stats);
      await iterationsView.refresh(status.current_iteration);
      // domain table refreshes lazily; sentence counts change slowly
      const now = Date.now();
      if (now - domainsFresh > 5000) {
        domainsFresh = now;
        await domainsView.refresh();
      }
    } catch {
      banner.hidden = false;
    }
  }

  void poll();
  const timer = setInterval(() => void poll(), POLL_MS);
  return () => clearInterval(timer);
}

declare global {
  interface Window {
    __webharvestDashboard?: () => void;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const root = document.getElementById("app") as HTMLElement;
  window.__webharvestDashboard = mountDashboard(root, new ApiClient(""));
}
