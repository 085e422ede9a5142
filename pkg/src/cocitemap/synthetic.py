"""Deterministic synthetic corpora with planted topic structure.

The citation corpus plants three topics: each topic has its own pool of
cited references (dense within-topic co-citation), a unique title phrase,
and two of the topics share a high-frequency boilerplate phrase. A few
bridge records connect the topics so the integrated network is one
component with three planted communities.
"""

from __future__ import annotations

import numpy as np

from .ingest import BibRecord

BOILERPLATE_PHRASE = "sloan digital sky survey"
# Phrase tokens are chosen to be fixed points of plural stemming so the
# extracted surfaces match these constants verbatim.
TOPIC_PHRASES = (
    "methane brown dwarf",
    "high redshift quasar",
    "giant red galaxy",
)
# Topics 0 and 1 carry the boilerplate phrase in every title; topic 2 does
# not, so the boilerplate's cross-cluster document frequency stays below the
# cluster count and its tf-idf weight stays positive.
BOILERPLATE_TOPICS = (0, 1)
UNIQUE_PHRASE_PERIOD = 4  # every 4th record of a topic carries its phrase

_FILLERS = (
    "deep imaging",
    "photometric catalog",
    "spectral energy",
    "stellar population",
    "dark matter",
    "sky coverage",
    "velocity dispersion",
    "color magnitude",
    "angular correlation",
    "light curve",
    "point source",
    "absolute magnitude",
)

_INDEX_TERMS = (
    "astronomy",
    "large-scale structure",
    "photometry",
    "spectroscopy",
)


def _topic_refs(topic: int, n_refs: int = 8) -> list[str]:
    return [f"T{topic}R{j}" for j in range(n_refs)]


def _join_with_stopwords(parts: list[str]) -> str:
    # Stopword connectors keep the planted phrases in separate chunks.
    connectors = (" of the ", " with ", " and ")
    title = parts[0]
    for part, conn in zip(parts[1:], connectors):
        title += conn + part
    return title


def synthetic_citation_corpus(
    seed: int = 7,
    records_per_topic: int = 38,
    n_bridges: int = 6,
    start_year: int = 2000,
    end_year: int = 2005,
) -> list[BibRecord]:
    """120-record corpus (3 x 38 topic records + 6 bridges by default)."""
    rng = np.random.default_rng(seed)
    years = list(range(start_year, end_year + 1))
    records: list[BibRecord] = []
    counter = 0
    for topic in range(3):
        refs = _topic_refs(topic)
        for i in range(records_per_topic):
            cited = sorted(str(r) for r in rng.choice(refs, size=4, replace=False))
            unique = TOPIC_PHRASES[topic] if i % UNIQUE_PHRASE_PERIOD == 0 else None
            filler_a = _FILLERS[(counter + i) % len(_FILLERS)]
            filler_b = _FILLERS[(counter + i + 5) % len(_FILLERS)]
            parts = []
            if topic in BOILERPLATE_TOPICS:
                parts.append(BOILERPLATE_PHRASE)
            if unique:
                parts.append(unique)
            parts.extend((filler_a, filler_b))
            title = _join_with_stopwords(parts)
            records.append(
                BibRecord(
                    id=f"rec-{counter:03d}",
                    year=years[i % len(years)],
                    title=title,
                    index_terms=(_INDEX_TERMS[i % len(_INDEX_TERMS)],),
                    cited_refs=tuple(cited),
                    times_cited=int(rng.integers(1, 60)),
                )
            )
            counter += 1
    pairs = [(0, 1), (1, 2), (0, 2)]
    for b in range(n_bridges):
        ta, tb = pairs[b % len(pairs)]
        cited = sorted(
            [str(r) for r in rng.choice(_topic_refs(ta), size=2, replace=False)]
            + [str(r) for r in rng.choice(_topic_refs(tb), size=2, replace=False)]
        )
        filler_a = _FILLERS[b % len(_FILLERS)]
        filler_b = _FILLERS[(b + 3) % len(_FILLERS)]
        records.append(
            BibRecord(
                id=f"rec-{counter:03d}",
                year=years[b % len(years)],
                title=f"{filler_a} with {filler_b}",
                index_terms=(_INDEX_TERMS[b % len(_INDEX_TERMS)],),
                cited_refs=tuple(cited),
                times_cited=int(rng.integers(1, 60)),
            )
        )
        counter += 1
    return records


def synthetic_award_corpus(
    seed: int = 11,
    start_year: int = 2000,
    end_year: int = 2009,
    records_per_year: int = 12,
) -> list[BibRecord]:
    """Citation-free award-style corpus whose frequent terms drift by year."""
    rng = np.random.default_rng(seed)
    themes = (
        "void galaxy",
        "galaxy formation",
        "weak lensing",
        "survey telescope",
        "data pipeline",
        "stellar spectra",
        "quasar luminosity",
        "cosmic web",
        "redshift catalog",
        "dwarf companion",
    )
    records = []
    counter = 0
    for year in range(start_year, end_year + 1):
        era = year - start_year
        for i in range(records_per_year):
            theme = themes[(era + int(rng.integers(0, 3))) % len(themes)]
            filler = _FILLERS[(counter + i) % len(_FILLERS)]
            records.append(
                BibRecord(
                    id=f"award-{counter:03d}",
                    year=year,
                    title=f"{theme} study of {filler}",
                    index_terms=(),
                    cited_refs=(),
                    times_cited=0,
                    source_tag="term_only",
                )
            )
            counter += 1
    return records
