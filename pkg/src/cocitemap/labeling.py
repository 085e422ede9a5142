"""Cluster labeling from the citing side: citer sets, tf-idf, log-likelihood
ratio, and latent-semantic-analysis term selection."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .ingest import BibRecord, record_phrases

ALGORITHM_TFIDF = "tfidf"
ALGORITHM_LLR = "llr"
ALGORITHM_LSA_DIM1 = "lsa_dim1"
ALGORITHM_LSA_DIM2 = "lsa_dim2"


@dataclass(frozen=True)
class CiterSet:
    cluster_id: int
    citers: tuple[tuple[str, int], ...]  # (record id, coverage), sorted


@dataclass(frozen=True)
class LabelCandidate:
    term: str
    score: float
    algorithm: str
    frequency: int


@dataclass(frozen=True)
class LsaResult:
    dim1: tuple[LabelCandidate, ...]
    dim2: tuple[LabelCandidate, ...]
    rank_deficient: bool = False


class DegenerateCiterSetError(ValueError):
    pass


def citer_set(
    cluster_id: int,
    cluster_members: Iterable[str],
    corpus: Sequence[BibRecord],
    keys_of: Callable[[BibRecord], Iterable[str]] | None = None,
) -> CiterSet:
    """Records citing at least one cluster member, with coverage counts.

    ``keys_of`` extracts the member keys a record points at; the default is
    its cited references. Term networks pass the record's phrase surfaces
    instead. Citers sort by descending coverage, ties by ascending id.
    """
    members = set(cluster_members)
    keys_of = keys_of or (lambda r: r.cited_refs)
    citers = []
    for rec in corpus:
        coverage = len(members.intersection(keys_of(rec)))
        if coverage:
            citers.append((rec.id, coverage))
    citers.sort(key=lambda item: (-item[1], item[0]))
    return CiterSet(cluster_id, tuple(citers))


def representative_citers(cs: CiterSet, top_n: int) -> tuple[tuple[str, int], ...]:
    return cs.citers[:top_n]


def _phrase_bag(
    cs: CiterSet,
    corpus_by_id: Mapping[str, BibRecord],
    source: str,
    stopwords: frozenset[str] | None,
) -> Counter[str]:
    bag: Counter[str] = Counter()
    for rec_id, _ in cs.citers:
        for phrase in record_phrases(corpus_by_id[rec_id], source, stopwords):
            bag[phrase.surface] += 1
    return bag


def _rank(candidates: list[LabelCandidate], top_n: int) -> tuple[LabelCandidate, ...]:
    candidates.sort(key=lambda c: (-c.score, -c.frequency, c.term))
    return tuple(candidates[:top_n])


def tfidf_weight(tf: int, df: int, n_clusters: int) -> float:
    """tf * ln(K / df) with cluster citer sets as the document unit."""
    return tf * math.log(n_clusters / df)


def tfidf_labels(
    citer_sets: Sequence[CiterSet],
    corpus: Sequence[BibRecord],
    source: str = "title",
    top_n: int = 5,
    stopwords: frozenset[str] | None = None,
    per_article_idf: bool = False,
) -> dict[int, tuple[LabelCandidate, ...]]:
    """Per-cluster labels weighted by within-cluster frequency times the log
    inverse document frequency.

    The document unit for idf is the cluster citer set; with
    ``per_article_idf`` it is the individual citing article instead.
    """
    corpus_by_id = {r.id: r for r in corpus}
    bags = {cs.cluster_id: _phrase_bag(cs, corpus_by_id, source, stopwords) for cs in citer_sets}
    df: Counter[str] = Counter()
    if per_article_idf:
        citing_ids = {rec_id for cs in citer_sets for rec_id, _ in cs.citers}
        n_documents = len(citing_ids)
        for rec_id in citing_ids:
            df.update(
                {p.surface for p in record_phrases(corpus_by_id[rec_id], source, stopwords)}
            )
    else:
        populated = [cid for cid, bag in bags.items() if bag]
        n_documents = len(populated)
        for cid in populated:
            df.update(set(bags[cid]))
    labels: dict[int, tuple[LabelCandidate, ...]] = {}
    for cs in citer_sets:
        bag = bags[cs.cluster_id]
        candidates = [
            LabelCandidate(term, tfidf_weight(tf, df[term], n_documents), ALGORITHM_TFIDF, tf)
            for term, tf in bag.items()
        ]
        labels[cs.cluster_id] = _rank(candidates, top_n)
    return labels


def llr_score(k11: float, k12: float, k21: float, k22: float) -> float:
    """Dunning's G-squared over the 2x2 contingency table (0*ln 0 = 0)."""
    total = k11 + k12 + k21 + k22
    if total <= 0:
        return 0.0
    row1, row2 = k11 + k12, k21 + k22
    col1, col2 = k11 + k21, k12 + k22
    g = 0.0
    for observed, expected in (
        (k11, row1 * col1 / total),
        (k12, row1 * col2 / total),
        (k21, row2 * col1 / total),
        (k22, row2 * col2 / total),
    ):
        if observed > 0:
            g += observed * math.log(observed / expected)
    return max(2.0 * g, 0.0)


def llr_labels(
    citer_sets: Sequence[CiterSet],
    corpus: Sequence[BibRecord],
    source: str = "title",
    top_n: int = 5,
    stopwords: frozenset[str] | None = None,
) -> dict[int, tuple[LabelCandidate, ...]]:
    """Per-cluster labels ranked by G-squared against the other clusters'
    citer sets, restricted to over-represented phrases."""
    corpus_by_id = {r.id: r for r in corpus}
    bags = {cs.cluster_id: _phrase_bag(cs, corpus_by_id, source, stopwords) for cs in citer_sets}
    if sum(1 for bag in bags.values() if bag) < 2:
        raise DegenerateCiterSetError(
            "log-likelihood labeling needs at least two clusters with citers"
        )
    term_totals: Counter[str] = Counter()
    for bag in bags.values():
        term_totals.update(bag)
    grand_total = sum(term_totals.values())
    labels: dict[int, tuple[LabelCandidate, ...]] = {}
    for cs in citer_sets:
        bag = bags[cs.cluster_id]
        cluster_total = sum(bag.values())
        candidates = []
        for term, k11 in bag.items():
            k12 = term_totals[term] - k11
            k21 = cluster_total - k11
            k22 = grand_total - term_totals[term] - k21
            inside_rate = k11 / cluster_total
            outside_rate = k12 / (grand_total - cluster_total)
            if inside_rate <= outside_rate:
                continue
            candidates.append(
                LabelCandidate(term, llr_score(k11, k12, k21, k22), ALGORITHM_LLR, k11)
            )
        labels[cs.cluster_id] = _rank(candidates, top_n)
    return labels


def lsa_term_scores(
    matrix: np.ndarray, weight_by_sigma: bool = True
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coefficient magnitudes on latent dimensions 1 and 2.

    Scores are |u_j| weighted by the singular value so the first dimension
    dominates; ``weight_by_sigma=False`` gives raw coefficients. Left
    singular vectors are sign-normalized so their largest-magnitude entry is
    positive; returns (dim1 scores, dim2 scores, singular values).
    """
    u, sigma, _ = np.linalg.svd(matrix, full_matrices=False)
    for j in range(u.shape[1]):
        pivot = int(np.argmax(np.abs(u[:, j])))
        if u[pivot, j] < 0:
            u[:, j] = -u[:, j]
    scale1 = sigma[0] if weight_by_sigma else 1.0
    dim1 = scale1 * np.abs(u[:, 0])
    if len(sigma) > 1:
        scale2 = sigma[1] if weight_by_sigma else (1.0 if sigma[1] > 1e-12 else 0.0)
        dim2 = scale2 * np.abs(u[:, 1])
    else:
        dim2 = np.zeros_like(dim1)
    return dim1, dim2, sigma


def lsa_labels(
    cs: CiterSet,
    corpus: Sequence[BibRecord],
    source: str = "title",
    per_dim: int = 5,
    stopwords: frozenset[str] | None = None,
    weight_by_sigma: bool = True,
) -> LsaResult:
    """Top terms along the first two latent dimensions of the cluster's
    phrase-by-document count matrix."""
    corpus_by_id = {r.id: r for r in corpus}
    doc_ids = sorted(rec_id for rec_id, _ in cs.citers)
    doc_bags = {
        rec_id: Counter(p.surface for p in record_phrases(corpus_by_id[rec_id], source, stopwords))
        for rec_id in doc_ids
    }
    terms = sorted({t for bag in doc_bags.values() for t in bag})
    if len(doc_ids) < 2 or len(terms) < 2:
        raise DegenerateCiterSetError(
            f"cluster {cs.cluster_id} needs >= 2 citing documents and >= 2 phrases"
        )
    term_index = {t: i for i, t in enumerate(terms)}
    matrix = np.zeros((len(terms), len(doc_ids)))
    for j, rec_id in enumerate(doc_ids):
        for term, count in doc_bags[rec_id].items():
            matrix[term_index[term], j] = count
    dim1, dim2, sigma = lsa_term_scores(matrix, weight_by_sigma)
    frequency = {t: sum(bag[t] for bag in doc_bags.values()) for t in terms}
    rank_deficient = len(sigma) < 2 or sigma[1] <= 1e-12 * max(sigma[0], 1.0)

    def select(scores: np.ndarray, algorithm: str) -> tuple[LabelCandidate, ...]:
        candidates = [
            LabelCandidate(terms[i], float(scores[i]), algorithm, frequency[terms[i]])
            for i in range(len(terms))
            if scores[i] > 1e-12
        ]
        candidates.sort(key=lambda c: (-c.score, c.term))
        return tuple(candidates[:per_dim])

    dim1_labels = select(dim1, ALGORITHM_LSA_DIM1)
    dim2_labels = () if rank_deficient else select(dim2, ALGORITHM_LSA_DIM2)
    return LsaResult(dim1_labels, dim2_labels, rank_deficient)
