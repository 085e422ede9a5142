"""Structural node analytics: weighted betweenness, pivotal brokerage nodes,
and per-slice co-citation activity."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Mapping

from .clustering import ClusterPartition
from .network import CoCitationNetwork, EdgeRecord


@dataclass(frozen=True)
class NodeMetrics:
    betweenness: Mapping[str, float]
    pivotal: frozenset[str]
    slice_activity: Mapping[int, int]


def betweenness(net: CoCitationNetwork) -> dict[str, float]:
    """Exact shortest-path betweenness with edge length 1/weight.

    Values are normalized by (n-1)(n-2)/2 within each connected component of
    size n >= 3 (Brandes accumulation, undirected).
    """
    keys = list(net.node_keys)
    adj = {
        k: sorted((v, 1.0 / w) for v, w in net.adjacency[k].items()) for k in keys
    }
    bc = {k: 0.0 for k in keys}
    for source in keys:
        stack: list[str] = []
        preds: dict[str, list[str]] = {k: [] for k in keys}
        sigma = {k: 0.0 for k in keys}
        sigma[source] = 1.0
        dist: dict[str, float] = {}
        seen = {source: 0.0}
        heap: list[tuple[float, str]] = [(0.0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if u in dist:
                continue
            dist[u] = d
            stack.append(u)
            for v, length in adj[u]:
                if v in dist:
                    continue
                nd = d + length
                if v not in seen or nd < seen[v]:
                    seen[v] = nd
                    sigma[v] = sigma[u]
                    preds[v] = [u]
                    heapq.heappush(heap, (nd, v))
                elif nd == seen[v]:
                    sigma[v] += sigma[u]
                    preds[v].append(u)
        delta = {k: 0.0 for k in stack}
        for w in reversed(stack):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != source:
                bc[w] += delta[w]
    for comp in _component_sizes(net):
        size = len(comp)
        scale = (size - 1) * (size - 2) if size >= 3 else 1
        for k in comp:
            bc[k] = bc[k] / scale  # includes the 1/2 for undirected pairs
    return bc


def _component_sizes(net: CoCitationNetwork) -> list[list[str]]:
    seen: set[str] = set()
    comps = []
    for key in net.node_keys:
        if key in seen:
            continue
        stack, comp = [key], []
        seen.add(key)
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in net.adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        comps.append(comp)
    return comps


def pivotal_nodes(
    net: CoCitationNetwork,
    partition: ClusterPartition,
    node_betweenness: Mapping[str, float],
    quantile: float = 0.9,
) -> frozenset[str]:
    """Nodes in the top (1 - quantile) betweenness tail that touch edges of
    at least two clusters."""
    if not 0.0 < quantile < 1.0:
        raise ValueError(f"quantile must lie in (0, 1), got {quantile}")
    keys = list(net.node_keys)
    if not keys:
        return frozenset()
    values = sorted(node_betweenness[k] for k in keys)
    # "higher" quantile interpolation: as q -> 1 the threshold reaches the
    # maximum, so only top-value nodes survive
    threshold = values[math.ceil(quantile * (len(values) - 1))]
    crossing: set[str] = set()
    for e in net.edges:
        if partition.assignment[e.u] != partition.assignment[e.v]:
            crossing.add(e.u)
            crossing.add(e.v)
    return frozenset(
        k for k in keys if node_betweenness[k] >= threshold and k in crossing
    )


def slice_edge_filter(net: CoCitationNetwork, slice_index: int) -> tuple[EdgeRecord, ...]:
    """Edges carrying at least one co-citation made in the given slice."""
    if slice_index not in net.slice_indices:
        raise ValueError(f"unknown slice index {slice_index}")
    return tuple(e for e in net.edges if e.per_slice_counts.get(slice_index, 0) >= 1)


def slice_activity(net: CoCitationNetwork) -> dict[int, int]:
    totals = {idx: 0 for idx in net.slice_indices}
    for e in net.edges:
        for idx, count in e.per_slice_counts.items():
            totals[idx] += count
    return totals


def compute_metrics(
    net: CoCitationNetwork, partition: ClusterPartition, quantile: float = 0.9
) -> NodeMetrics:
    bc = betweenness(net)
    return NodeMetrics(
        betweenness=bc,
        pivotal=pivotal_nodes(net, partition, bc, quantile),
        slice_activity=slice_activity(net),
    )
