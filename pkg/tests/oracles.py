"""Independent brute-force oracles used to check the library's results.

Everything here is written from the definitions: naive double loops,
exhaustive path enumeration, Gram-matrix eigendecomposition. None of it
shares code with the implementations under test.
"""

from __future__ import annotations

import math
from collections import Counter
from itertools import combinations

import numpy as np


def brute_force_cocitation(records, slices, top_n):
    """Pair counts over the whole corpus restricted to per-slice top-n sets."""
    counts: Counter[tuple[str, str]] = Counter()
    for sl in slices:
        inside = [r for r in records if sl.start_year <= r.year <= sl.end_year]
        inside.sort(key=lambda r: (-r.times_cited, r.id))
        for rec in inside[:top_n]:
            refs = sorted(set(rec.cited_refs))
            for i in range(len(refs)):
                for j in range(i + 1, len(refs)):
                    counts[(refs[i], refs[j])] += 1
    return counts


def naive_modularity(net, assignment):
    """O(n^2) double sum straight from the definition."""
    keys = list(net.node_keys)
    m = sum(e.weight for e in net.edges)
    deg = {u: sum(net.weight(u, v) for v in keys) for u in keys}
    total = 0.0
    for u in keys:
        for v in keys:
            if assignment[u] == assignment[v]:
                total += net.weight(u, v) - deg[u] * deg[v] / (2.0 * m)
    return total / (2.0 * m)


def naive_silhouette(net, assignment):
    """Per-node silhouettes computed with explicit loops."""
    keys = list(net.node_keys)
    rows = {}
    for u in keys:
        row = {v: net.weight(u, v) for v in keys if v != u}
        row[u] = max(row.values()) if row else 0.0
        rows[u] = row

    def dissim(u, v):
        dot = sum(rows[u][k] * rows[v][k] for k in keys)
        nu = math.sqrt(sum(x * x for x in rows[u].values()))
        nv = math.sqrt(sum(x * x for x in rows[v].values()))
        if nu == 0 or nv == 0:
            return 1.0
        return 1.0 - dot / (nu * nv)

    clusters: dict[int, list[str]] = {}
    for k in keys:
        clusters.setdefault(assignment[k], []).append(k)
    if len(clusters) < 2:
        return {u: 0.0 for u in keys}
    result = {}
    for u in keys:
        own = clusters[assignment[u]]
        if len(own) == 1:
            result[u] = 0.0
            continue
        a = sum(dissim(u, v) for v in own if v != u) / (len(own) - 1)
        b = min(
            sum(dissim(u, v) for v in members) / len(members)
            for cid, members in clusters.items()
            if cid != assignment[u]
        )
        result[u] = 0.0 if max(a, b) == 0 else (b - a) / max(a, b)
    return result


def brute_force_betweenness(net):
    """Betweenness by enumerating every simple path between every pair."""
    keys = sorted(net.node_keys)
    adj = {u: {v: 1.0 / w for v, w in net.adjacency[u].items()} for u in keys}

    def all_paths(s, t):
        paths = []
        best = [math.inf]

        def walk(u, length, visited, trail):
            if length > best[0]:
                return
            if u == t:
                paths.append((length, list(trail)))
                best[0] = min(best[0], length)
                return
            for v, l in sorted(adj[u].items()):
                if v not in visited:
                    visited.add(v)
                    trail.append(v)
                    walk(v, length + l, visited, trail)
                    trail.pop()
                    visited.remove(v)

        walk(s, 0.0, {s}, [s])
        if not paths:
            return []
        shortest = min(l for l, _ in paths)
        return [p for l, p in paths if l == shortest]

    bc = {k: 0.0 for k in keys}
    comp = _components(net)
    comp_of = {k: i for i, members in enumerate(comp) for k in members}
    for s, t in combinations(keys, 2):
        if comp_of[s] != comp_of[t]:
            continue
        shortest = all_paths(s, t)
        for path in shortest:
            for inner in path[1:-1]:
                bc[inner] += 1.0 / len(shortest)
    for members in comp:
        size = len(members)
        if size >= 3:
            scale = (size - 1) * (size - 2) / 2.0
            for k in members:
                bc[k] /= scale
    return bc


def _components(net):
    seen, comps = set(), []
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


def contingency_g2(k11, k12, k21, k22):
    """G-squared via the log-count identity (not the O*ln(O/E) sum)."""

    def xlogx(x):
        return x * math.log(x) if x > 0 else 0.0

    n = k11 + k12 + k21 + k22
    cells = xlogx(k11) + xlogx(k12) + xlogx(k21) + xlogx(k22)
    rows = xlogx(k11 + k12) + xlogx(k21 + k22)
    cols = xlogx(k11 + k21) + xlogx(k12 + k22)
    return 2.0 * (cells - rows - cols + xlogx(n))


def gram_lsa_scores(matrix):
    """Dimension scores via eigendecomposition of M M^T (not an SVD call)."""
    gram = matrix @ matrix.T
    vals, vecs = np.linalg.eigh(gram)
    order = np.argsort(vals)[::-1]
    sigma = np.sqrt(np.clip(vals[order], 0.0, None))
    u = vecs[:, order]
    dim1 = sigma[0] * np.abs(u[:, 0])
    dim2 = sigma[1] * np.abs(u[:, 1]) if len(sigma) > 1 else np.zeros_like(dim1)
    return dim1, dim2, sigma


def adjusted_rand_index(labels_a, labels_b):
    keys = sorted(labels_a)
    assert sorted(labels_b) == keys
    pair_counts: Counter[tuple] = Counter((labels_a[k], labels_b[k]) for k in keys)
    a_counts: Counter = Counter(labels_a[k] for k in keys)
    b_counts: Counter = Counter(labels_b[k] for k in keys)
    n = len(keys)
    sum_ij = sum(math.comb(v, 2) for v in pair_counts.values())
    sum_a = sum(math.comb(v, 2) for v in a_counts.values())
    sum_b = sum(math.comb(v, 2) for v in b_counts.values())
    expected = sum_a * sum_b / math.comb(n, 2)
    maximum = (sum_a + sum_b) / 2.0
    if maximum == expected:
        return 1.0
    return (sum_ij - expected) / (maximum - expected)


def point_in_convex_polygon(point, polygon, tol=1e-9):
    """True when the point is inside or on the counter-clockwise polygon."""
    if len(polygon) == 1:
        return math.dist(point, polygon[0]) <= tol
    if len(polygon) == 2:
        (x1, y1), (x2, y2) = polygon
        px, py = point
        cross = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)
        if abs(cross) > tol:
            return False
        dot = (px - x1) * (x2 - x1) + (py - y1) * (y2 - y1)
        return -tol <= dot <= (x2 - x1) ** 2 + (y2 - y1) ** 2 + tol
    for i in range(len(polygon)):
        x1, y1 = polygon[i]
        x2, y2 = polygon[(i + 1) % len(polygon)]
        cross = (x2 - x1) * (point[1] - y1) - (y2 - y1) * (point[0] - x1)
        if cross < -tol:
            return False
    return True


def random_network(rng, n_nodes, edge_prob=0.35, max_weight=5, continuous=False):
    """Random weighted network fixture built directly from edge tuples.

    Continuous weights avoid exact shortest-path length ties, which keeps
    path-counting oracles and Dijkstra tie detection consistent.
    """
    from cocitemap.network import from_edge_list

    nodes = [f"n{i:02d}" for i in range(n_nodes)]
    edges = []
    for i in range(n_nodes):
        for j in range(i + 1, n_nodes):
            if rng.uniform() < edge_prob:
                if continuous:
                    weight = float(rng.uniform(0.5, max_weight))
                else:
                    weight = float(rng.integers(1, max_weight + 1))
                edges.append((nodes[i], nodes[j], weight))
    if not edges:
        edges.append((nodes[0], nodes[1], 1.0))
    return from_edge_list(edges)
