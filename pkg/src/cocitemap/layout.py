"""Deterministic spring-embedder layout with between-cluster edge
attenuation, plus padded cluster hull polygons."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .clustering import ClusterPartition
from .network import CoCitationNetwork, ConfigError

BOX_SIZE = 1000.0
HULL_CIRCLE_POINTS = 16


@dataclass(frozen=True)
class LayoutConfig:
    between_cluster_factor: float = 0.1
    iterations: int = 300
    seed: int = 0
    cooling_initial: float = 0.1
    cooling_decay: float = 0.98

    def __post_init__(self):
        if self.iterations < 1:
            raise ConfigError("layout iterations must be >= 1")
        if not 0.0 <= self.between_cluster_factor <= 1.0:
            raise ConfigError("between-cluster factor must lie in [0, 1]")


@dataclass(frozen=True)
class LayoutResult:
    positions: Mapping[str, tuple[float, float]]
    hulls: Mapping[int, tuple[tuple[float, float], ...]]
    bounds: tuple[float, float, float, float]


def attenuate_weights(
    net: CoCitationNetwork, partition: ClusterPartition, beta: float
) -> dict[tuple[str, str], float]:
    """Within-cluster edges keep their weight; between-cluster edges scale by
    beta. With beta = 0 they disappear from the attractive forces."""
    if not 0.0 <= beta <= 1.0:
        raise ConfigError(f"beta must lie in [0, 1], got {beta}")
    weights: dict[tuple[str, str], float] = {}
    for e in net.edges:
        within = partition.assignment[e.u] == partition.assignment[e.v]
        if within:
            weights[(e.u, e.v)] = e.weight
        elif beta > 0.0:
            weights[(e.u, e.v)] = beta * e.weight
    return weights


def _initial_disk(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    radius = np.sqrt(rng.uniform(0.0, 1.0, n))
    theta = rng.uniform(0.0, 2.0 * math.pi, n)
    return np.column_stack((radius * np.cos(theta), radius * np.sin(theta)))


def run_spring_iterations(
    keys: Sequence[str],
    edge_weights: Mapping[tuple[str, str], float],
    cfg: LayoutConfig,
    initial_positions: np.ndarray | None = None,
) -> np.ndarray:
    """Raw spring-embedder iteration in unit-disk coordinates.

    Attraction along an edge is weight * d^2 / ideal; repulsion between all
    pairs is ideal^2 / d; displacements are capped by a geometric cooling
    schedule. Coincident points get a deterministic index-derived jitter.
    """
    n = len(keys)
    pos = _initial_disk(n, cfg.seed) if initial_positions is None else initial_positions.copy()
    if n <= 1:
        return pos
    ideal = 1.0 / math.sqrt(n)
    index = {k: i for i, k in enumerate(keys)}
    if edge_weights:
        ei = np.array([index[u] for u, _ in edge_weights])
        ej = np.array([index[v] for _, v in edge_weights])
        ew = np.array(list(edge_weights.values()))
    else:
        ei = ej = np.zeros(0, dtype=int)
        ew = np.zeros(0)

    temperature = cfg.cooling_initial
    eye = np.eye(n, dtype=bool)
    for _ in range(cfg.iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.hypot(delta[..., 0], delta[..., 1])
        close = (dist < 1e-12) & ~eye
        if np.any(close):
            ii, jj = np.nonzero(close)
            angle = 2.0 * math.pi * (((ii * 73856093 + jj * 19349663) % 3600) / 3600.0)
            delta[ii, jj, 0] = 1e-9 * np.cos(angle)
            delta[ii, jj, 1] = 1e-9 * np.sin(angle)
            dist[ii, jj] = 1e-9
        np.fill_diagonal(dist, 1.0)
        repulse = ideal * ideal / (dist * dist)
        np.fill_diagonal(repulse, 0.0)
        disp = (delta * repulse[..., None]).sum(axis=1)
        if len(ew):
            edge_delta = pos[ei] - pos[ej]
            edge_dist = np.hypot(edge_delta[:, 0], edge_delta[:, 1])
            edge_dist[edge_dist < 1e-12] = 1e-12
            pull = (ew * edge_dist / ideal)[:, None] * edge_delta
            disp[:, 0] -= np.bincount(ei, weights=pull[:, 0], minlength=n)
            disp[:, 1] -= np.bincount(ei, weights=pull[:, 1], minlength=n)
            disp[:, 0] += np.bincount(ej, weights=pull[:, 0], minlength=n)
            disp[:, 1] += np.bincount(ej, weights=pull[:, 1], minlength=n)
        norm = np.hypot(disp[:, 0], disp[:, 1])
        scale = np.minimum(norm, temperature) / np.maximum(norm, 1e-12)
        pos = pos + disp * scale[:, None]
        temperature *= cfg.cooling_decay
    return pos


def force_layout(
    net: CoCitationNetwork,
    edge_weights: Mapping[tuple[str, str], float],
    cfg: LayoutConfig,
    partition: ClusterPartition | None = None,
    hull_padding: float = 20.0,
    initial_positions: np.ndarray | None = None,
) -> LayoutResult:
    """Spring layout re-centered on the origin and uniformly scaled into a
    fixed square box, with optional per-cluster hulls."""
    if not net.nodes:
        raise ValueError("cannot lay out an empty network")
    keys = list(net.node_keys)
    pos = run_spring_iterations(keys, edge_weights, cfg, initial_positions)
    pos = pos - pos.mean(axis=0)
    extent = float(np.abs(pos).max())
    if extent > 0.0:
        pos = pos * (BOX_SIZE / 2.0 / extent)
    positions = {k: (float(pos[i, 0]), float(pos[i, 1])) for i, k in enumerate(keys)}
    hulls: dict[int, tuple[tuple[float, float], ...]] = {}
    if partition is not None:
        hulls = cluster_hulls(positions, partition, hull_padding)
    bounds = (
        float(pos[:, 0].min()),
        float(pos[:, 1].min()),
        float(pos[:, 0].max()),
        float(pos[:, 1].max()),
    )
    return LayoutResult(positions, hulls, bounds)


def _convex_hull(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Andrew's monotone chain; returns counter-clockwise hull vertices."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple[float, float]] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def cluster_hulls(
    positions: Mapping[str, tuple[float, float]],
    partition: ClusterPartition,
    padding: float,
) -> dict[int, tuple[tuple[float, float], ...]]:
    """Convex hull per cluster, expanded outward by the padding radius.

    Padding is applied by hulling a small circle of points around each
    member, so 1-node clusters become a regular polygon approximating a
    disk and 2-node clusters a capsule.
    """
    members: dict[int, list[str]] = {}
    for key, cid in sorted(partition.assignment.items()):
        members.setdefault(cid, []).append(key)
    hulls: dict[int, tuple[tuple[float, float], ...]] = {}
    for cid, keys in sorted(members.items()):
        pts = [positions[k] for k in keys]
        if padding > 0.0:
            cloud = [
                (
                    x + padding * math.cos(2.0 * math.pi * i / HULL_CIRCLE_POINTS),
                    y + padding * math.sin(2.0 * math.pi * i / HULL_CIRCLE_POINTS),
                )
                for (x, y) in pts
                for i in range(HULL_CIRCLE_POINTS)
            ]
        else:
            cloud = pts
        hulls[cid] = tuple(_convex_hull(cloud))
    return hulls
