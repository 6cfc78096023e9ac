"""webharvest: focused web harvesting of sentences in a low-resource language.

Pipeline stages (one module each): fetch/extract, normalize, split, filter,
language ID, link filtering, crawl decisions, persistence/export, plus a
seeder that turns corpus vocabulary into search queries and an orchestrator
that drives full iterations. ``webharvest.service`` exposes the HTTP
monitoring/control surface used by the dashboard.
"""

__version__ = "0.1.0"
