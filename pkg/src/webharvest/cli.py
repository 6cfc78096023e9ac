"""Command-line interface.

Exit codes: 0 success, 1 configuration error, 2 runtime failure.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from webharvest import lid as lid_mod
from webharvest import orchestrator, seeder, sentfilter
from webharvest.config import ConfigError, CrawlConfig, load_config
from webharvest.models import SentenceRecord, utcnow
from webharvest.store import Store, dedup_key


class CliError(click.ClickException):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.exit_code = code


def _load_cfg(config_path: str | None, **overrides) -> CrawlConfig:
    try:
        cfg = load_config(config_path) if config_path else CrawlConfig()
        cleaned = {k: v for k, v in overrides.items() if v is not None}
        if cleaned:
            cfg = cfg.replace(**cleaned)
        return cfg
    except ConfigError as exc:
        raise CliError(str(exc), 1) from exc


def _open_store(db: str) -> Store:
    return Store(db)


def _load_model(path: str) -> lid_mod.LidModel:
    try:
        return lid_mod.load_model(path)
    except (OSError, lid_mod.LidError) as exc:
        raise CliError(f"cannot load LID model: {exc}", 1) from exc


def _make_engine(endpoint: str | None, pattern: str, delay: float):
    if not endpoint:
        raise CliError("this command needs --engine-endpoint", 1)
    return seeder.HtmlSearchEngine(endpoint, result_pattern=pattern, politeness_delay=delay)


def _read_corpus_dir(corpus_dir: str) -> dict[str, list[str]]:
    corpus = {}
    for path in sorted(Path(corpus_dir).glob("*.txt")):
        lines = [l.strip() for l in path.read_text(encoding="utf-8").splitlines()]
        corpus[path.stem] = [l for l in lines if l]
    if not corpus:
        raise CliError(f"no *.txt class files in {corpus_dir}", 1)
    return corpus


threshold_options = [
    click.option("--crawl-lid-threshold", type=float, default=None),
    click.option("--seed-lid-threshold", type=float, default=None),
    click.option("--export-lid-threshold", type=float, default=None),
    click.option("--max-depth", type=int, default=None),
    click.option("--politeness-delay", type=float, default=None),
    click.option("--fetch-workers", type=int, default=None),
    click.option("--ignore-robots", is_flag=True, default=False,
                 help="Do not fetch or honour robots.txt (fixture testing)."),
]


def add_options(options):
    def wrap(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn
    return wrap


@click.group()
def main() -> None:
    """Focused web harvester for low-resource corpus construction."""


def _cfg_from(config, kw) -> CrawlConfig:
    overrides = {
        "crawl_lid_threshold": kw.pop("crawl_lid_threshold"),
        "seed_lid_threshold": kw.pop("seed_lid_threshold"),
        "export_lid_threshold": kw.pop("export_lid_threshold"),
        "max_depth": kw.pop("max_depth"),
        "politeness_delay": kw.pop("politeness_delay"),
        "fetch_workers": kw.pop("fetch_workers"),
    }
    if kw.pop("ignore_robots"):
        overrides["respect_robots"] = False
    return _load_cfg(config, **overrides)


@main.command()
@click.option("--db", default="webharvest.db", show_default=True)
@click.option("--config", "config_path", default=None, type=click.Path(exists=True))
@click.option("--count", default=10, show_default=True, help="Seed queries to generate.")
@click.option("--rng-seed", default=0, show_default=True)
@click.option("--lid-model", required=True, type=click.Path(exists=True))
@click.option("--engine-endpoint", default=None,
              help="Results page template with {query} and {page}; omit to only print queries.")
@click.option("--engine-result-pattern", default=r"^https?://", show_default=True)
@add_options(threshold_options)
def seed(db, config_path, count, rng_seed, lid_model, engine_endpoint,
         engine_result_pattern, **kw) -> None:
    """Generate seed queries from the corpus vocabulary and submit them."""
    cfg = _cfg_from(config_path, kw)
    store = _open_store(db)
    model = _load_model(lid_model)
    try:
        vocab = seeder.filter_vocab(seeder.build_vocab(store), seeder.default_wordlists())
        queries = seeder.generate_seeds(
            vocab, count, rng_seed, model, cfg, known_word_keys=store.known_query_keys()
        )
    except seeder.SeederError as exc:
        raise CliError(str(exc), 2) from exc
    if not engine_endpoint:
        for q in queries:
            click.echo(f"{q.lid_proba:.4f}  {q.query_string()}")
        return
    engine = _make_engine(engine_endpoint, engine_result_pattern, cfg.politeness_delay)
    link_rules = orchestrator.load_link_rules()
    admitted_total = 0
    for q in queries:
        store.record_query(q)
        admitted = seeder.submit_seed(q, engine, store, link_rules, cfg)
        admitted_total += len(admitted)
        click.echo(f"{q.query_string()} -> {len(admitted)} new URLs")
    click.echo(f"admitted {admitted_total} seed URLs")


@main.command()
@click.option("--db", default="webharvest.db", show_default=True)
@click.option("--config", "config_path", default=None, type=click.Path(exists=True))
@click.option("--lid-model", required=True, type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True)
@add_options(threshold_options)
def crawl(db, config_path, lid_model, as_json, **kw) -> None:
    """Process all pending tasks."""
    cfg = _cfg_from(config_path, kw)
    store = _open_store(db)
    model = _load_model(lid_model)
    crawler = orchestrator.Crawler(store, cfg, model)
    try:
        report = crawler.run_crawl()
    except Exception as exc:
        raise CliError(f"crawl failed: {exc}", 2) from exc
    _emit_report(report, as_json)


@main.command()
@click.option("--db", default="webharvest.db", show_default=True)
@click.option("--config", "config_path", default=None, type=click.Path(exists=True))
@click.option("--seeds", "seed_count", default=10, show_default=True)
@click.option("--rng-seed", default=0, show_default=True)
@click.option("--lid-model", required=True, type=click.Path(exists=True))
@click.option("--engine-endpoint", required=True)
@click.option("--engine-result-pattern", default=r"^https?://", show_default=True)
@click.option("--json", "as_json", is_flag=True)
@add_options(threshold_options)
def iterate(db, config_path, seed_count, rng_seed, lid_model, engine_endpoint,
            engine_result_pattern, as_json, **kw) -> None:
    """One full seed -> crawl -> report cycle."""
    cfg = _cfg_from(config_path, kw)
    store = _open_store(db)
    model = _load_model(lid_model)
    engine = _make_engine(engine_endpoint, engine_result_pattern, cfg.politeness_delay)
    try:
        report = orchestrator.run_iteration(
            cfg, store, engine, model, seed_count=seed_count, rng_seed=rng_seed
        )
    except seeder.SeederError as exc:
        raise CliError(str(exc), 2) from exc
    _emit_report(report, as_json)


def _emit_report(report, as_json: bool) -> None:
    data = report.as_dict()
    if as_json:
        click.echo(json.dumps(data, indent=2))
        return
    headers = ["seeds", "found", "good", "%good", "sentences", "domains", "urls", "runtime"]
    values = [
        data["seeds"], data["urls_found"], data["urls_good"],
        f"{data['percent_good']:.2f}", data["new_sentences"], data["new_domains"],
        data["new_urls"], f"{data['runtime']:.1f}s",
    ]
    widths = [max(len(h), len(str(v))) for h, v in zip(headers, values)]
    click.echo("  ".join(h.rjust(w) for h, w in zip(headers, widths)))
    click.echo("  ".join(str(v).rjust(w) for v, w in zip(values, widths)))


@main.command()
@click.option("--db", default="webharvest.db", show_default=True)
@click.option("--config", "config_path", default=None, type=click.Path(exists=True))
@click.option("--min-proba", type=float, default=None,
              help="Defaults to the configured export threshold.")
@click.option("--out", type=click.Path(), default="-", show_default=True)
@add_options(threshold_options)
def export(db, config_path, min_proba, out, **kw) -> None:
    """Export the deduplicated corpus as CSV (text,url,crawl_proba,date)."""
    cfg = _cfg_from(config_path, kw)
    store = _open_store(db)
    threshold = min_proba if min_proba is not None else cfg.export_lid_threshold
    if not 0.0 <= threshold <= 1.0:
        raise CliError("--min-proba must be in [0, 1]", 1)
    if out == "-":
        count = store.export_csv(threshold, sys.stdout)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            count = store.export_csv(threshold, fh)
    click.echo(f"exported {count} rows", err=True)


@main.command()
@click.option("--db", default="webharvest.db", show_default=True)
@click.option("--json", "as_json", is_flag=True)
def stats(db, as_json) -> None:
    """Corpus statistics: size, probability bins, lengths, top domains."""
    store = _open_store(db)
    data = store.compute_stats().as_dict()
    if as_json:
        click.echo(json.dumps(data, indent=2))
        return
    click.echo(f"sentences: {data['total_sentences']}")
    click.echo(f"urls:      {data['distinct_urls']}")
    click.echo(f"domains:   {data['distinct_domains']}")
    click.echo("probability bins:")
    for label, count in data["proba_bins"].items():
        click.echo(f"  {label:>4} {count}")
    if data["char_len"]:
        c, w = data["char_len"], data["word_len"]
        click.echo(f"chars: mean {c['mean']} ± {c['std']}, median {c['median']}")
        click.echo(f"words: mean {w['mean']} ± {w['std']}, median {w['median']}")
    if data["top_domains"]:
        click.echo("top domains:")
        for row in data["top_domains"]:
            click.echo(
                f"  {row['domain']:<30} {row['url_count']:>6} urls "
                f"{row['sentence_count']:>7} sentences {row['percent']:>6.2f}%"
            )


@main.command()
@click.option("--db", default="webharvest.db", show_default=True)
@click.argument("domain")
def blacklist_domain(db, domain) -> None:
    """Blacklist a registrable domain and cancel its pending tasks."""
    store = _open_store(db)
    try:
        cancelled = store.blacklist_domain(domain)
    except ValueError as exc:
        raise CliError(str(exc), 1) from exc
    click.echo(f"blacklisted {domain} ({cancelled} pending tasks cancelled)")


@main.command()
@click.option("--db", default="webharvest.db", show_default=True)
@click.option("--file", "path", required=True, type=click.Path(exists=True),
              help="One sentence per line.")
@click.option("--lid-model", default=None, type=click.Path(exists=True),
              help="Score bootstrap sentences; unscored ones get probability 1.0.")
def bootstrap(db, path, lid_model) -> None:
    """Load a bootstrap sentence file so the seeder has a vocabulary."""
    store = _open_store(db)
    model = _load_model(lid_model) if lid_model else None
    inserted = 0
    now = utcnow()
    name = Path(path).name
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines()):
        line = line.strip()
        if not line:
            continue
        proba = lid_mod.prob_target(model, line) if model else 1.0
        record = SentenceRecord(
            text=line,
            url=f"bootstrap://{name}/{i + 1}",
            crawl_proba=proba,
            date=now,
            dedup_key=dedup_key(line),
        )
        if store.add_sentence(record) == "inserted":
            inserted += 1
    click.echo(f"bootstrapped {inserted} sentences")


@main.command()
@click.option("--port", default=8765, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--db", default="webharvest.db", show_default=True)
@click.option("--config", "config_path", default=None, type=click.Path(exists=True))
@click.option("--lid-model", default=None, type=click.Path(exists=True))
@click.option("--engine-endpoint", default=None)
@click.option("--engine-result-pattern", default=r"^https?://", show_default=True)
@click.option("--static-dir", default=None, type=click.Path(),
              help="Dashboard build directory served at /.")
@add_options(threshold_options)
def serve(port, host, db, config_path, lid_model, engine_endpoint,
          engine_result_pattern, static_dir, **kw) -> None:
    """Run the monitoring/control HTTP service."""
    import uvicorn

    from webharvest.service import ServiceState, create_app

    cfg = _cfg_from(config_path, kw)
    store = _open_store(db)
    model = _load_model(lid_model) if lid_model else None
    engine = (
        seeder.HtmlSearchEngine(
            engine_endpoint, result_pattern=engine_result_pattern,
            politeness_delay=cfg.politeness_delay,
        )
        if engine_endpoint
        else None
    )
    state = ServiceState(store, cfg, lid_model=model, engine=engine)
    default_static = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    app = create_app(state, static_dir=static_dir or (default_static if default_static.is_dir() else None))
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command("lid-train")
@click.option("--corpus-dir", required=True, type=click.Path(exists=True),
              help="One <CLASS>.txt per class, one sentence per line.")
@click.option("--order", default=4, show_default=True)
@click.option("--smoothing", default=1.0, show_default=True)
@click.option("--target", default="GSW", show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.option("--holdout/--no-holdout", default=True, show_default=True,
              help="Train on a 75% split and report held-out accuracy.")
@click.option("--rng-seed", default=0, show_default=True)
def lid_train(corpus_dir, order, smoothing, target, out, holdout, rng_seed) -> None:
    """Train the character n-gram LID model."""
    corpus = _read_corpus_dir(corpus_dir)
    try:
        if holdout:
            train_c, _dev, test_c = lid_mod.split_corpus(corpus, rng_seed=rng_seed)
            model = lid_mod.train(train_c, order=order, smoothing=smoothing, target_class=target)
            result = lid_mod.evaluate(model, test_c)
            click.echo(f"held-out accuracy: {result.accuracy:.4f}")
        else:
            model = lid_mod.train(corpus, order=order, smoothing=smoothing, target_class=target)
    except lid_mod.LidError as exc:
        raise CliError(str(exc), 1) from exc
    lid_mod.save_model(model, out)
    click.echo(f"model written to {out}")


@main.command("lid-eval")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--corpus-dir", required=True, type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True)
def lid_eval(model_path, corpus_dir, as_json) -> None:
    """Evaluate a model on a labeled corpus directory."""
    model = _load_model(model_path)
    corpus = _read_corpus_dir(corpus_dir)
    try:
        result = lid_mod.evaluate(model, corpus)
    except lid_mod.LidError as exc:
        raise CliError(str(exc), 2) from exc
    if as_json:
        click.echo(json.dumps(result.as_dict(), indent=2))
        return
    click.echo("confusion (rows: true, cols: predicted)")
    header = "      " + " ".join(f"{c:>9}" for c in result.classes)
    click.echo(header)
    for cls, row in zip(result.classes, result.confusion):
        click.echo(f"{cls:>9} " + " ".join(f"{int(v):>9}" for v in row))
    click.echo(f"accuracy: {result.accuracy:.4f}")


@main.command("lid-predict")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--threshold", default=0.92, show_default=True)
@click.argument("text", required=False)
def lid_predict(model_path, threshold, text) -> None:
    """Score TEXT (or each stdin line): target probability and keep/discard."""
    model = _load_model(model_path)
    lines = [text] if text else [l.strip() for l in sys.stdin if l.strip()]
    for line in lines:
        proba = lid_mod.prob_target(model, line)
        decision = "keep" if proba >= threshold else "discard"
        click.echo(f"{proba:.4f}\t{decision}\t{line}")


@main.command("filter-check")
@click.argument("path", type=click.Path(exists=True))
def filter_check(path) -> None:
    """Run the default well-formedness rules over each line of PATH."""
    sentfilter.main([path])


if __name__ == "__main__":
    main()
