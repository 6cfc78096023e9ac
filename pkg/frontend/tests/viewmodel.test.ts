import { describe, expect, it } from "vitest";

import type { IterationReport, StatusPayload } from "../src/api.js";
import { binBars, histBars, reportCells, statusTiles } from "../src/viewmodel.js";

const REPORT: IterationReport = {
  seeds: 100,
  urls_found: 837,
  urls_good: 577,
  percent_good: 68.94,
  new_sentences: 89350,
  new_domains: 529,
  new_urls: 4810,
  runtime: 12.3,
};

describe("reportCells", () => {
  it("has the iteration-table column order", () => {
    const headers = reportCells(REPORT).map((c) => c.header);
    expect(headers).toEqual(
      ["seeds", "found", "good", "%good", "sentences", "domains", "urls", "runtime"],
    );
  });

  it("exposes each raw API value untouched (field-for-field)", () => {
    const cells = reportCells(REPORT);
    const byHeader = Object.fromEntries(cells.map((c) => [c.header, c.raw]));
    expect(byHeader.seeds).toBe("100");
    expect(byHeader.found).toBe("837");
    expect(byHeader.good).toBe("577");
    expect(byHeader["%good"]).toBe("68.94");
    expect(byHeader.sentences).toBe("89350");
    expect(byHeader.domains).toBe("529");
    expect(byHeader.urls).toBe("4810");
    expect(byHeader.runtime).toBe("12.3");
  });

  it("formats display values without changing magnitude", () => {
    const cells = reportCells(REPORT);
    expect(cells.find((c) => c.header === "sentences")?.value).toBe("89,350");
    expect(cells.find((c) => c.header === "%good")?.value).toBe("68.94%");
  });
});

describe("binBars", () => {
  it("orders bins high-confidence first and scales to the tallest", () => {
    const bars = binBars({ "92+": 10, "99+": 40, "95+": 20 });
    expect(bars.map((b) => b.label)).toEqual(["99+", "95+", "92+"]);
    expect(bars[0].frac).toBe(1);
    expect(bars[1].frac).toBe(0.5);
    expect(bars.map((b) => b.count)).toEqual([40, 20, 10]);
  });

  it("handles empty bins", () => {
    expect(binBars({})).toEqual([]);
  });
});

describe("histBars", () => {
  it("labels buckets by range and keeps counts verbatim", () => {
    const bars = histBars([
      [0, 49, 5],
      [50, 99, 10],
    ]);
    expect(bars[0].label).toBe("0–49");
    expect(bars[1].count).toBe(10);
    expect(bars[1].frac).toBe(1);
  });
});

describe("statusTiles", () => {
  it("maps every tile to one API field", () => {
    const status: StatusPayload = {
      state: "crawling",
      queue_depth: 7,
      visited: 3,
      saved: 2,
      blacklisted: 1,
      errors: 0,
      new_sentences: 11,
      sentences_per_minute: 33,
      workers: {},
      sentences_total: 1234,
      tasks: { pending: 7, visited: 3, blacklisted: 1 },
      current_iteration: null,
    };
    const tiles = statusTiles(status);
    const byLabel = Object.fromEntries(tiles.map((t) => [t.label, t.value]));
    expect(byLabel.state).toBe("crawling");
    expect(byLabel.queue).toBe("7");
    expect(byLabel["sentences/min"]).toBe("33/min");
    expect(byLabel["corpus size"]).toBe("1,234");
  });
});
