/** Tiny dependency-free SVG bar charts. */

import type { Bar } from "./viewmodel.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export function renderBarChart(
  container: HTMLElement,
  bars: Bar[],
  options: { height?: number; barWidth?: number; title?: string } = {},
): void {
  const height = options.height ?? 120;
  const barWidth = options.barWidth ?? 34;
  const labelSpace = 28;
  container.textContent = "";

  if (options.title) {
    const caption = document.createElement("div");
    caption.className = "chart-title";
    caption.textContent = options.title;
    container.appendChild(caption);
  }
  if (bars.length === 0) {
    const empty = document.createElement("div");
    empty.className = "chart-empty";
    empty.textContent = "no data yet";
    container.appendChild(empty);
    return;
  }

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(bars.length * barWidth));
  svg.setAttribute("height", String(height + labelSpace));
  svg.setAttribute("role", "img");

  bars.forEach((bar, i) => {
    const barHeight = Math.max(1, Math.round(bar.frac * height));
    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("x", String(i * barWidth + 2));
    rect.setAttribute("y", String(height - barHeight));
    rect.setAttribute("width", String(barWidth - 4));
    rect.setAttribute("height", String(barHeight));
    rect.setAttribute("class", "chart-bar");
    const tooltip = document.createElementNS(SVG_NS, "title");
    tooltip.textContent = `${bar.label}: ${bar.count}`;
    rect.appendChild(tooltip);
    svg.appendChild(rect);

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(i * barWidth + barWidth / 2));
    label.setAttribute("y", String(height + 14));
    label.setAttribute("text-anchor", "middle");
    label.setAttribute("class", "chart-label");
    label.textContent = bar.label;
    svg.appendChild(label);

    const count = document.createElementNS(SVG_NS, "text");
    count.setAttribute("x", String(i * barWidth + barWidth / 2));
    count.setAttribute("y", String(height + labelSpace - 2));
    count.setAttribute("text-anchor", "middle");
    count.setAttribute("class", "chart-count");
    count.textContent = String(bar.count);
    svg.appendChild(count);
  });

  container.appendChild(svg);
}
