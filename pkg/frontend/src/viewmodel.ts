/** Pure view models: shape API payloads for rendering.
 *
 * Every value displayed traces to exactly one API field; the only work done
 * here is ordering, labelling, and bar scaling for the charts.
 */

import type { IterationReport, StatsPayload, StatusPayload } from "./api.js";
import { fmtDuration, fmtInt, fmtPercent, fmtRange, fmtRate } from "./format.js";

export interface Tile {
  label: string;
  value: string;
}

export function statusTiles(status: StatusPayload): Tile[] {
  return [
    { label: "state", value: status.state },
    { label: "queue", value: fmtInt(status.queue_depth) },
    { label: "sentences/min", value: fmtRate(status.sentences_per_minute) },
    { label: "corpus size", value: fmtInt(status.sentences_total) },
    { label: "visited", value: fmtInt(status.visited) },
    { label: "saved", value: fmtInt(status.saved) },
    { label: "blacklisted", value: fmtInt(status.blacklisted) },
    { label: "errors", value: fmtInt(status.errors) },
  ];
}

export interface Bar {
  label: string;
  count: number;
  /** height fraction relative to the tallest bar, in [0, 1] */
  frac: number;
}

const BIN_ORDER = ["99+", "98+", "97+", "96+", "95+", "94+", "93+", "92+", "<92"];

export function binBars(bins: Record<string, number>): Bar[] {
  const labels = BIN_ORDER.filter((label) => label in bins);
  const max = Math.max(1, ...labels.map((l) => bins[l]));
  return labels.map((label) => ({
    label,
    count: bins[label],
    frac: bins[label] / max,
  }));
}

export function histBars(hist: [number, number, number][]): Bar[] {
  const max = Math.max(1, ...hist.map(([, , count]) => count));
  return hist.map(([lo, hi, count]) => ({
    label: fmtRange(lo, hi),
    count,
    frac: count / max,
  }));
}

export interface ReportCell {
  header: string;
  /** formatted for display */
  value: string;
  /** raw API value, stringified without reformatting (test hook) */
  raw: string;
}

/** Iteration report columns, in the iteration-table order. */
export function reportCells(report: IterationReport): ReportCell[] {
  return [
    { header: "seeds", value: fmtInt(report.seeds), raw: String(report.seeds) },
    { header: "found", value: fmtInt(report.urls_found), raw: String(report.urls_found) },
    { header: "good", value: fmtInt(report.urls_good), raw: String(report.urls_good) },
    { header: "%good", value: fmtPercent(report.percent_good), raw: String(report.percent_good) },
    { header: "sentences", value: fmtInt(report.new_sentences), raw: String(report.new_sentences) },
    { header: "domains", value: fmtInt(report.new_domains), raw: String(report.new_domains) },
    { header: "urls", value: fmtInt(report.new_urls), raw: String(report.new_urls) },
    { header: "runtime", value: fmtDuration(report.runtime), raw: String(report.runtime) },
  ];
}

export function statsSummary(stats: StatsPayload): Tile[] {
  const tiles: Tile[] = [
    { label: "sentences", value: fmtInt(stats.total_sentences) },
    { label: "URLs", value: fmtInt(stats.distinct_urls) },
    { label: "domains", value: fmtInt(stats.distinct_domains) },
  ];
  if ("median" in stats.char_len) {
    tiles.push({ label: "chars (median)", value: fmtInt(stats.char_len.median) });
  }
  if ("median" in stats.word_len) {
    tiles.push({ label: "words (median)", value: fmtInt(stats.word_len.median) });
  }
  return tiles;
}
