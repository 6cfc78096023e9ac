/** Typed client for the crawler's JSON API (see docs/api.md). */

export interface StatusPayload {
  state: string;
  queue_depth: number;
  visited: number;
  saved: number;
  blacklisted: number;
  errors: number;
  new_sentences: number;
  sentences_per_minute: number;
  workers: Record<string, string>;
  sentences_total: number;
  tasks: Record<string, number>;
  current_iteration: number | null;
}

export interface LengthSummary {
  mean: number;
  std: number;
  median: number;
}

export interface DomainRow {
  domain: string;
  url_count: number;
  sentence_count: number;
  percent: number;
}

export interface StatsPayload {
  total_sentences: number;
  distinct_urls: number;
  distinct_domains: number;
  proba_bins: Record<string, number>;
  char_len: LengthSummary | Record<string, never>;
  word_len: LengthSummary | Record<string, never>;
  char_hist: [number, number, number][];
  word_hist: [number, number, number][];
  top_domains: DomainRow[];
}

export interface SentenceRow {
  text: string;
  url: string;
  domain: string;
  crawl_proba: number;
  date: string;
}

export interface IterationReport {
  seeds: number;
  urls_found: number;
  urls_good: number;
  percent_good: number;
  new_sentences: number;
  new_domains: number;
  new_urls: number;
  runtime: number;
}

export interface IterationInfo {
  id: number;
  started_at: string;
  status: "running" | "done" | "failed";
  progress: Record<string, unknown>;
  report: IterationReport | null;
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  if (!response.ok) {
    let detail = `HTTP ${response.status}`;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = String(body.detail);
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  status(): Promise<StatusPayload> {
    return request(`${this.base}/api/status`);
  }

  stats(): Promise<StatsPayload> {
    return request(`${this.base}/api/stats`);
  }

  domains(sort: "sentences" | "urls" = "sentences", limit = 25): Promise<DomainRow[]> {
    return request<{ domains: DomainRow[] }>(
      `${this.base}/api/domains?sort=${sort}&limit=${limit}`,
    ).then((r) => r.domains);
  }

  sentences(params: { domain?: string; minProba?: number; limit?: number }): Promise<SentenceRow[]> {
    const query = new URLSearchParams();
    if (params.domain) query.set("domain", params.domain);
    if (params.minProba !== undefined) query.set("min_proba", String(params.minProba));
    query.set("limit", String(params.limit ?? 20));
    return request<{ sentences: SentenceRow[] }>(
      `${this.base}/api/sentences?${query.toString()}`,
    ).then((r) => r.sentences);
  }

  blacklist(domain: string): Promise<{ domain: string; cancelled: number; ok: boolean }> {
    return request(`${this.base}/api/blacklist`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ domain }),
    });
  }

  startIteration(seedCount: number, rngSeed?: number): Promise<{ id: number }> {
    const body: Record<string, number> = { seed_count: seedCount };
    if (rngSeed !== undefined) body.rng_seed = rngSeed;
    return request(`${this.base}/api/iterations`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  iteration(id: number): Promise<IterationInfo> {
    return request(`${this.base}/api/iterations/${id}`);
  }
}
