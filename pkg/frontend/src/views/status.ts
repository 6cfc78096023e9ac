/** Live status: crawl counters, probability bins, length distributions. */

import type { StatsPayload, StatusPayload } from "../api.js";
import { renderBarChart } from "../charts.js";
import { binBars, histBars, statsSummary, statusTiles } from "../viewmodel.js";

export function renderStatus(root: HTMLElement, status: StatusPayload, stats: StatsPayload): void {
  root.textContent = "";

  const tiles = document.createElement("div");
  tiles.className = "tiles";
  for (const tile of [...statusTiles(status), ...statsSummary(stats)]) {
    const el = document.createElement("div");
    el.className = "tile";
    const value = document.createElement("div");
    value.className = "tile-value";
    value.textContent = tile.value;
    const label = document.createElement("div");
    label.className = "tile-label";
    label.textContent = tile.label;
    el.append(value, label);
    tiles.appendChild(el);
  }
  root.appendChild(tiles);

  const charts = document.createElement("div");
  charts.className = "charts";
  const binsEl = document.createElement("div");
  binsEl.className = "chart";
  renderBarChart(binsEl, binBars(stats.proba_bins), {
    title: "sentences per probability bin",
  });
  const charsEl = document.createElement("div");
  charsEl.className = "chart";
  renderBarChart(charsEl, histBars(stats.char_hist), {
    title: "text length (characters)",
    barWidth: 44,
  });
  const wordsEl = document.createElement("div");
  wordsEl.className = "chart";
  renderBarChart(wordsEl, histBars(stats.word_hist), {
    title: "text length (words)",
    barWidth: 44,
  });
  charts.append(binsEl, charsEl, wordsEl);
  root.appendChild(charts);

  const workers = document.createElement("div");
  workers.className = "workers";
  const entries = Object.entries(status.workers);
  if (entries.length > 0) {
    const heading = document.createElement("h3");
    heading.textContent = "workers";
    workers.appendChild(heading);
    const list = document.createElement("ul");
    for (const [id, task] of entries) {
      const item = document.createElement("li");
      item.textContent = `#${id}: ${task}`;
      list.appendChild(item);
    }
    workers.appendChild(list);
  }
  root.appendChild(workers);
}
