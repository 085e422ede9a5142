"""Spectral graph partitioning on link strengths, with modularity and
silhouette validation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .network import CoCitationNetwork, ConfigError


@dataclass(frozen=True)
class SpectralConfig:
    k: int | None = None  # fixed cluster count; None selects k by modularity
    k_min: int = 2
    k_max: int = 8
    kmeans_restarts: int = 4
    kmeans_max_iter: int = 100
    seed: int = 0
    min_component_size: int = 3
    row_normalize: bool = True

    def __post_init__(self):
        if self.k_min < 1:
            raise ConfigError(f"k_min must be >= 1, got {self.k_min}")
        if self.k_max < self.k_min:
            raise ConfigError("k_max must be >= k_min")
        if self.kmeans_restarts < 1:
            raise ConfigError("kmeans_restarts must be >= 1")
        if self.k is not None and self.k < 1:
            raise ConfigError("fixed k must be >= 1")


@dataclass(frozen=True)
class ClusterPartition:
    assignment: Mapping[str, int]
    k: int
    modularity: float
    node_silhouette: Mapping[str, float]
    cluster_mean_silhouette: Mapping[int, float]
    mean_silhouette: float
    silhouette_degenerate: bool = False


@dataclass(frozen=True)
class SilhouetteResult:
    node_silhouette: dict[str, float]
    cluster_mean: dict[int, float]
    mean: float
    degenerate: bool = False


class EigenSolverError(RuntimeError):
    def __init__(self, component: str, cause: Exception):
        super().__init__(f"eigen-solver failed on component at {component!r}: {cause}")
        self.component = component


def _adjacency_matrix(net: CoCitationNetwork, keys: Sequence[str]) -> np.ndarray:
    index = {k: i for i, k in enumerate(keys)}
    W = np.zeros((len(keys), len(keys)))
    for e in net.edges:
        if e.u in index and e.v in index:
            i, j = index[e.u], index[e.v]
            W[i, j] = e.weight
            W[j, i] = e.weight
    return W


def normalized_laplacian(net: CoCitationNetwork) -> tuple[np.ndarray, tuple[str, ...]]:
    """L_sym = I - D^(-1/2) W D^(-1/2) over the non-isolated nodes.

    Returns the matrix together with the node keys indexing its rows.
    Isolated nodes are excluded; they become singleton clusters downstream.
    """
    if not net.nodes:
        raise ValueError("empty network has no Laplacian")
    keys = tuple(k for k in net.node_keys if net.degree[k] > 0)
    W = _adjacency_matrix(net, keys)
    return _laplacian_from_adjacency(W), keys


def _laplacian_from_adjacency(W: np.ndarray) -> np.ndarray:
    deg = W.sum(axis=1)
    inv_sqrt = 1.0 / np.sqrt(deg)
    L = -W * inv_sqrt[:, None] * inv_sqrt[None, :]
    np.fill_diagonal(L, 1.0)
    return L


def _components(net: CoCitationNetwork) -> list[list[str]]:
    """Connected components, each sorted by key, ordered by first key."""
    adj = net.adjacency
    seen: set[str] = set()
    comps: list[list[str]] = []
    for key in net.node_keys:
        if key in seen:
            continue
        stack = [key]
        comp = []
        seen.add(key)
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        comps.append(sorted(comp))
    comps.sort(key=lambda c: c[0])
    return comps


def _spectral_embedding(W: np.ndarray, k: int, row_normalize: bool) -> np.ndarray:
    L = _laplacian_from_adjacency(W)
    eigvals, eigvecs = np.linalg.eigh(L)
    X = eigvecs[:, :k]
    if row_normalize:
        norms = np.linalg.norm(X, axis=1)
        norms[norms < 1e-12] = 1.0
        X = X / norms[:, None]
    return X


def _farthest_point_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centroids = [int(rng.integers(n))]
    d2 = np.sum((X - X[centroids[0]]) ** 2, axis=1)
    while len(centroids) < k:
        nxt = int(np.argmax(d2))  # argmax takes the lowest index on ties
        centroids.append(nxt)
        d2 = np.minimum(d2, np.sum((X - X[nxt]) ** 2, axis=1))
    return X[centroids].copy()


def _kmeans_once(
    X: np.ndarray, k: int, rng: np.random.Generator, max_iter: int
) -> tuple[np.ndarray, float]:
    centroids = _farthest_point_init(X, k, rng)
    labels = np.full(X.shape[0], -1)
    for _ in range(max_iter):
        d2 = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_labels = np.argmin(d2, axis=1)  # ties resolve to the lower index
        for c in range(k):
            if not np.any(new_labels == c):
                # Re-seed an emptied centroid at the point farthest from its
                # current assignment.
                worst = int(np.argmax(d2[np.arange(len(new_labels)), new_labels]))
                new_labels[worst] = c
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for c in range(k):
            centroids[c] = X[labels == c].mean(axis=0)
    d2 = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    wcss = float(d2[np.arange(len(labels)), labels].sum())
    return labels, wcss


def _kmeans(X: np.ndarray, k: int, cfg: SpectralConfig) -> np.ndarray:
    best_labels: np.ndarray | None = None
    best_wcss = np.inf
    for restart in range(cfg.kmeans_restarts):
        rng = np.random.default_rng((cfg.seed, k, restart))
        labels, wcss = _kmeans_once(X, k, rng, cfg.kmeans_max_iter)
        if wcss < best_wcss:
            best_labels, best_wcss = labels, wcss
    assert best_labels is not None
    return best_labels


def _allocate_fixed_k(components: list[list[str]], k: int) -> list[int]:
    """Distribute a global fixed cluster budget over components.

    Every component gets at least one cluster (disconnected components can
    never merge); the remainder goes proportionally to the largest
    components, capped by component size.
    """
    counts = [1] * len(components)
    sizes = [len(c) for c in components]
    extra = k - len(components)
    while extra > 0:
        candidates = [i for i in range(len(components)) if counts[i] < sizes[i]]
        if not candidates:
            break
        # Most under-split component first; ties by size then first key.
        target = max(
            candidates,
            key=lambda i: (sizes[i] / counts[i], sizes[i], components[i][0]),
        )
        counts[target] += 1
        extra -= 1
    return counts


def _cluster_component(
    net: CoCitationNetwork, comp: list[str], cfg: SpectralConfig, ks: list[int]
) -> list[list[str]]:
    """Cluster one connected component, trying the given cluster counts and
    keeping the split with the highest component modularity (ties prefer
    fewer clusters)."""
    n = len(comp)
    W = _adjacency_matrix(net, comp)
    best: list[list[str]] | None = None
    best_q = -np.inf
    for k in ks:
        if k <= 1:
            clusters = [list(comp)]
        else:
            try:
                X = _spectral_embedding(W, k, cfg.row_normalize)
            except np.linalg.LinAlgError as exc:
                raise EigenSolverError(comp[0], exc) from exc
            labels = _kmeans(X, k, cfg)
            clusters = [
                [comp[i] for i in range(n) if labels[i] == c]
                for c in range(k)
                if np.any(labels == c)
            ]
        if len(ks) == 1:
            return clusters
        q = _subgraph_modularity(W, comp, clusters)
        if q > best_q + 1e-12:
            best, best_q = clusters, q
    assert best is not None
    return best


def _subgraph_modularity(W: np.ndarray, comp: list[str], clusters: list[list[str]]) -> float:
    index = {k: i for i, k in enumerate(comp)}
    m2 = W.sum()  # 2m
    if m2 == 0:
        return 0.0
    deg = W.sum(axis=1)
    q = 0.0
    for members in clusters:
        idx = [index[k] for k in members]
        q += W[np.ix_(idx, idx)].sum() / m2 - (deg[idx].sum() / m2) ** 2
    return float(q)


def spectral_partition(net: CoCitationNetwork, cfg: SpectralConfig) -> ClusterPartition:
    """Partition the network per connected component via the normalized
    Laplacian embedding and deterministic k-means.

    Components below min_component_size become whole-component clusters.
    A fixed k is a global budget spread over components (one cluster
    minimum each); otherwise the cluster count per component maximizes
    modularity over [k_min, k_max] (ties prefer fewer clusters). Cluster
    ids are renumbered globally by descending size, ties by first member
    key.
    """
    if not net.nodes:
        raise ValueError("cannot partition an empty network")
    small = [c for c in _components(net) if len(c) < cfg.min_component_size]
    large = [c for c in _components(net) if len(c) >= cfg.min_component_size]
    clusters: list[list[str]] = list(small)
    if cfg.k is not None:
        allocation = _allocate_fixed_k(large, cfg.k)
        for comp, k in zip(large, allocation):
            clusters.extend(_cluster_component(net, comp, cfg, [min(k, len(comp))]))
    else:
        for comp in large:
            ks = list(range(min(cfg.k_min, len(comp)), min(cfg.k_max, len(comp)) + 1))
            clusters.extend(_cluster_component(net, comp, cfg, ks))
    clusters.sort(key=lambda members: (-len(members), min(members)))
    assignment = {key: cid for cid, members in enumerate(clusters) for key in members}
    q = modularity(net, assignment) if net.edges else 0.0
    sil = silhouette(net, assignment)
    return ClusterPartition(
        assignment=assignment,
        k=len(clusters),
        modularity=q,
        node_silhouette=sil.node_silhouette,
        cluster_mean_silhouette=sil.cluster_mean,
        mean_silhouette=sil.mean,
        silhouette_degenerate=sil.degenerate,
    )


def modularity(net: CoCitationNetwork, assignment: Mapping[str, int]) -> float:
    """Weighted Newman modularity of the given cluster assignment."""
    missing = [k for k in net.node_keys if k not in assignment]
    if missing:
        raise ValueError(f"assignment misses {len(missing)} nodes, e.g. {missing[0]!r}")
    m = net.total_edge_weight()
    if m == 0:
        raise ValueError("modularity is undefined for a network without edge weight")
    within = sum(e.weight for e in net.edges if assignment[e.u] == assignment[e.v])
    cluster_degree: dict[int, float] = {}
    for key, deg in net.degree.items():
        cid = assignment[key]
        cluster_degree[cid] = cluster_degree.get(cid, 0.0) + deg
    q = within / m - sum((d / (2.0 * m)) ** 2 for d in cluster_degree.values())
    return float(q)


def silhouette(net: CoCitationNetwork, assignment: Mapping[str, int]) -> SilhouetteResult:
    """Per-node silhouettes from cosine dissimilarity of adjacency rows.

    The self-weight of a row is the node's maximum incident weight. With a
    single cluster every silhouette is 0 and the result is flagged.
    """
    keys = list(net.node_keys)
    clusters: dict[int, list[str]] = {}
    for key in keys:
        clusters.setdefault(assignment[key], []).append(key)
    if len(clusters) < 2:
        zeros = {k: 0.0 for k in keys}
        cmeans = {cid: 0.0 for cid in clusters}
        return SilhouetteResult(zeros, cmeans, 0.0, degenerate=True)

    index = {k: i for i, k in enumerate(keys)}
    W = _adjacency_matrix(net, keys)
    for i, key in enumerate(keys):
        incident = W[i]
        W[i, i] = incident.max() if incident.size else 0.0
    norms = np.linalg.norm(W, axis=1)
    norms[norms < 1e-300] = 1.0
    unit = W / norms[:, None]
    dissim = 1.0 - unit @ unit.T
    np.clip(dissim, 0.0, 2.0, out=dissim)

    node_sil: dict[str, float] = {}
    for key in keys:
        i = index[key]
        own = assignment[key]
        if len(clusters[own]) == 1:
            node_sil[key] = 0.0
            continue
        intra = [dissim[i, index[o]] for o in clusters[own] if o != key]
        a = float(np.mean(intra))
        b = min(
            float(np.mean([dissim[i, index[o]] for o in members]))
            for cid, members in clusters.items()
            if cid != own
        )
        denom = max(a, b)
        node_sil[key] = 0.0 if denom == 0.0 else (b - a) / denom

    cluster_mean = {
        cid: sum(node_sil[k] for k in members) / len(members)
        for cid, members in sorted(clusters.items())
    }
    mean = sum(node_sil[k] for k in keys) / len(keys)
    return SilhouetteResult(node_sil, cluster_mean, mean)
