"""Time slicing, per-slice co-citation / term co-occurrence networks, and
slice merging into one integrated network."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .ingest import CITATION_INDEXED, BibRecord, record_phrases


class ConfigError(ValueError):
    pass


class ContractError(ValueError):
    pass


@dataclass(frozen=True)
class TimeSlice:
    index: int
    start_year: int
    end_year: int

    def contains(self, year: int) -> bool:
        return self.start_year <= year <= self.end_year


@dataclass(frozen=True)
class NodeRecord:
    key: str
    total_citations: int
    first_slice: int


@dataclass(frozen=True, eq=True)
class EdgeRecord:
    u: str
    v: str
    weight: float
    per_slice_counts: Mapping[int, int]

    def __post_init__(self):
        if self.u == self.v:
            raise ContractError(f"self-loop on {self.u!r}")
        if self.u > self.v:
            raise ContractError("edge endpoints must be in sorted order")


@dataclass(frozen=True)
class CoCitationNetwork:
    """Weighted undirected network with per-slice edge count breakdown.

    ``nodes`` are sorted by key and ``edges`` by endpoint pair, so equal
    networks compare equal and serialize identically.
    """

    nodes: tuple[NodeRecord, ...]
    edges: tuple[EdgeRecord, ...]
    slice_indices: tuple[int, ...] = (0,)

    @cached_property
    def node_keys(self) -> tuple[str, ...]:
        return tuple(n.key for n in self.nodes)

    @cached_property
    def _weights(self) -> dict[tuple[str, str], float]:
        return {(e.u, e.v): e.weight for e in self.edges}

    def weight(self, a: str, b: str) -> float:
        if a > b:
            a, b = b, a
        return self._weights.get((a, b), 0.0)

    @cached_property
    def adjacency(self) -> dict[str, dict[str, float]]:
        adj: dict[str, dict[str, float]] = {n.key: {} for n in self.nodes}
        for e in self.edges:
            adj[e.u][e.v] = e.weight
            adj[e.v][e.u] = e.weight
        return adj

    @cached_property
    def degree(self) -> dict[str, float]:
        return {k: sum(nbrs.values()) for k, nbrs in self.adjacency.items()}

    def total_edge_weight(self) -> float:
        return sum(e.weight for e in self.edges)


def _sorted_network(
    node_info: Mapping[str, tuple[int, int]],
    edge_info: Mapping[tuple[str, str], tuple[float, dict[int, int]]],
    slice_indices: Iterable[int],
) -> CoCitationNetwork:
    nodes = tuple(
        NodeRecord(key, citations, first_slice)
        for key, (citations, first_slice) in sorted(node_info.items())
    )
    edges = tuple(
        EdgeRecord(u, v, weight, dict(sorted(counts.items())))
        for (u, v), (weight, counts) in sorted(edge_info.items())
    )
    return CoCitationNetwork(nodes, edges, tuple(sorted(set(slice_indices))))


def slice_interval(t_start: int, t_end: int, slice_len: int) -> tuple[TimeSlice, ...]:
    """Partition [t_start, t_end] into contiguous slices of slice_len years;
    the last slice may be shorter."""
    if slice_len < 1:
        raise ConfigError(f"slice length must be >= 1, got {slice_len}")
    if t_start > t_end:
        raise ConfigError(f"empty study interval: {t_start} > {t_end}")
    slices = []
    start = t_start
    index = 0
    while start <= t_end:
        end = min(start + slice_len - 1, t_end)
        slices.append(TimeSlice(index, start, end))
        start = end + 1
        index += 1
    return tuple(slices)


def slice_of_year(slices: Sequence[TimeSlice], year: int) -> TimeSlice:
    for sl in slices:
        if sl.contains(year):
            return sl
    raise ContractError(f"year {year} is outside the sliced interval")


def select_top_cited(
    records: Sequence[BibRecord], time_slice: TimeSlice, n: int
) -> tuple[BibRecord, ...]:
    """The n most cited records published inside the slice; ties break by
    ascending id."""
    if n < 1:
        raise ConfigError(f"top-n must be >= 1, got {n}")
    inside = [r for r in records if time_slice.contains(r.year)]
    inside.sort(key=lambda r: (-r.times_cited, r.id))
    return tuple(inside[:n])


def build_cocitation_slice(
    top_records: Sequence[BibRecord], time_slice: TimeSlice
) -> CoCitationNetwork:
    """Co-citation counts from one slice's records.

    Each unordered pair of distinct cited keys in a record adds 1 to that
    pair's count. Nodes are the references appearing in at least one pair.
    """
    pair_counts: Counter[tuple[str, str]] = Counter()
    for rec in top_records:
        if not time_slice.contains(rec.year):
            raise ContractError(f"record {rec.id!r} ({rec.year}) outside slice {time_slice}")
        if rec.source_tag != CITATION_INDEXED:
            raise ContractError(f"record {rec.id!r} carries no citation data")
        refs = sorted(set(rec.cited_refs))
        for a, b in itertools.combinations(refs, 2):
            pair_counts[(a, b)] += 1
    node_keys = {k for pair in pair_counts for k in pair}
    citations: Counter[str] = Counter()
    for rec in top_records:
        for ref in set(rec.cited_refs):
            if ref in node_keys:
                citations[ref] += 1
    node_info = {k: (citations[k], time_slice.index) for k in node_keys}
    edge_info = {
        pair: (float(c), {time_slice.index: c}) for pair, c in pair_counts.items()
    }
    return _sorted_network(node_info, edge_info, [time_slice.index])


def merge_slices(slices: Sequence[CoCitationNetwork]) -> CoCitationNetwork:
    """Union of per-slice networks: summed edge weights, merged per-slice
    counts, earliest first_slice per node."""
    seen_indices: list[int] = []
    for net in slices:
        for idx in net.slice_indices:
            if idx in seen_indices:
                raise ContractError(f"duplicate slice index {idx}")
            seen_indices.append(idx)
    node_info: dict[str, tuple[int, int]] = {}
    edge_info: dict[tuple[str, str], tuple[float, dict[int, int]]] = {}
    for net in slices:
        for node in net.nodes:
            if node.key in node_info:
                citations, first = node_info[node.key]
                node_info[node.key] = (
                    citations + node.total_citations,
                    min(first, node.first_slice),
                )
            else:
                node_info[node.key] = (node.total_citations, node.first_slice)
        for edge in net.edges:
            pair = (edge.u, edge.v)
            if pair in edge_info:
                weight, counts = edge_info[pair]
                merged = dict(counts)
                for idx, c in edge.per_slice_counts.items():
                    merged[idx] = merged.get(idx, 0) + c
                edge_info[pair] = (weight + edge.weight, merged)
            else:
                edge_info[pair] = (edge.weight, dict(edge.per_slice_counts))
    return _sorted_network(node_info, edge_info, seen_indices)


def build_term_cooccurrence(
    records: Sequence[BibRecord],
    top_terms: int,
    per_slice: bool = False,
    slices: Sequence[TimeSlice] | None = None,
    stopwords: frozenset[str] | None = None,
) -> CoCitationNetwork:
    """Term co-occurrence network over title noun phrases.

    Global mode keeps the top_terms most frequent phrases over the whole
    corpus; per-slice mode keeps top_terms per slice, builds one network per
    slice, and merges. A phrase pair is counted once per record. All selected
    terms become nodes, even when they end up without links.
    """
    if top_terms < 1:
        raise ConfigError(f"top-terms must be >= 1, got {top_terms}")
    if per_slice and not slices:
        raise ConfigError("per-slice term selection requires slice definitions")
    if slices:
        groups: dict[int, list[BibRecord]] = {sl.index: [] for sl in slices}
        for rec in records:
            groups[slice_of_year(slices, rec.year).index].append(rec)
    else:
        groups = {0: list(records)}

    if per_slice:
        parts = [
            _term_slice(groups[sl.index], top_terms, sl.index, stopwords)
            for sl in slices  # type: ignore[union-attr]
        ]
        return merge_slices(parts)

    # Global selection; co-occurrence counts stay attributed to each
    # record's slice so per-year link filtering keeps working.
    record_terms: dict[str, list[str]] = {}
    freq: Counter[str] = Counter()
    for rec in records:
        surfaces = sorted({p.surface for p in record_phrases(rec, "title", stopwords)})
        record_terms[rec.id] = surfaces
        freq.update(surfaces)
    kept = _top_terms(freq, top_terms)
    node_info: dict[str, tuple[int, int]] = {}
    edge_info: dict[tuple[str, str], tuple[float, dict[int, int]]] = {}
    indices = [sl.index for sl in slices] if slices else [0]
    for group_idx, group in sorted(groups.items()):
        for rec in group:
            present = [t for t in record_terms[rec.id] if t in kept]
            for term in present:
                if term in node_info:
                    citations, first = node_info[term]
                    node_info[term] = (citations + 1, min(first, group_idx))
                else:
                    node_info[term] = (1, group_idx)
            for a, b in itertools.combinations(present, 2):
                weight, counts = edge_info.get((a, b), (0.0, {}))
                counts = dict(counts)
                counts[group_idx] = counts.get(group_idx, 0) + 1
                edge_info[(a, b)] = (weight + 1.0, counts)
    return _sorted_network(node_info, edge_info, indices)


def _term_slice(
    records: Sequence[BibRecord],
    top_terms: int,
    slice_index: int,
    stopwords: frozenset[str] | None,
) -> CoCitationNetwork:
    freq: Counter[str] = Counter()
    record_terms: list[list[str]] = []
    for rec in records:
        surfaces = sorted({p.surface for p in record_phrases(rec, "title", stopwords)})
        record_terms.append(surfaces)
        freq.update(surfaces)
    kept = _top_terms(freq, top_terms)
    node_info: dict[str, tuple[int, int]] = {}
    edge_info: dict[tuple[str, str], tuple[float, dict[int, int]]] = {}
    for surfaces in record_terms:
        present = [t for t in surfaces if t in kept]
        for term in present:
            citations, first = node_info.get(term, (0, slice_index))
            node_info[term] = (citations + 1, slice_index)
        for a, b in itertools.combinations(present, 2):
            weight, counts = edge_info.get((a, b), (0.0, {}))
            counts = dict(counts)
            counts[slice_index] = counts.get(slice_index, 0) + 1
            edge_info[(a, b)] = (weight + 1.0, counts)
    return _sorted_network(node_info, edge_info, [slice_index])


def _top_terms(freq: Counter[str], top_terms: int) -> set[str]:
    ranked = sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))
    return {term for term, _ in ranked[:top_terms]}


def cosine_normalized(net: CoCitationNetwork) -> CoCitationNetwork:
    """Edge weights rescaled to w(u,v)/sqrt(deg(u)*deg(v)); per-slice counts
    are kept as raw counts."""
    degree = net.degree
    edges = tuple(
        EdgeRecord(
            e.u,
            e.v,
            e.weight / math.sqrt(degree[e.u] * degree[e.v]),
            dict(e.per_slice_counts),
        )
        for e in net.edges
    )
    return CoCitationNetwork(net.nodes, edges, net.slice_indices)


def apply_weight_floor(
    net: CoCitationNetwork, floor: float, drop_isolated: bool = True
) -> CoCitationNetwork:
    """Drop edges below the weight floor; optionally drop nodes left with no
    incident edge (co-citation semantics keep only paired references)."""
    if floor <= 1:
        return net
    edges = tuple(e for e in net.edges if e.weight >= floor)
    if drop_isolated:
        keep = {k for e in edges for k in (e.u, e.v)}
        nodes = tuple(n for n in net.nodes if n.key in keep)
    else:
        nodes = net.nodes
    return CoCitationNetwork(nodes, edges, net.slice_indices)


def from_edge_list(
    edges: Iterable[tuple[str, str, float]],
    slice_index: int = 0,
    isolated_nodes: Iterable[str] = (),
) -> CoCitationNetwork:
    """Build a network directly from weighted edges (fixtures, tests)."""
    edge_info: dict[tuple[str, str], tuple[float, dict[int, int]]] = {}
    node_keys: set[str] = set(isolated_nodes)
    for a, b, w in edges:
        if a == b:
            raise ContractError(f"self-loop on {a!r}")
        if a > b:
            a, b = b, a
        if (a, b) in edge_info:
            raise ContractError(f"duplicate edge ({a!r}, {b!r})")
        count = int(w) if float(w).is_integer() and w >= 1 else 1
        edge_info[(a, b)] = (float(w), {slice_index: count})
        node_keys.update((a, b))
    node_info = {k: (0, slice_index) for k in node_keys}
    return _sorted_network(node_info, edge_info, [slice_index])
