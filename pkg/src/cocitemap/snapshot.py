"""Project snapshot: the immutable, deterministic JSON bundle consumed by
the CLI reports and the viewer."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Mapping

from .clustering import ClusterPartition
from .labeling import LabelCandidate
from .layout import LayoutResult
from .metrics import NodeMetrics
from .network import CoCitationNetwork, EdgeRecord, NodeRecord, TimeSlice

SCHEMA_VERSION = "1"
LABEL_ALGORITHMS = ("tfidf", "llr", "lsa_dim1", "lsa_dim2")


@dataclass(frozen=True)
class ProjectSnapshot:
    schema_version: str
    config: Mapping[str, Any]
    slices: tuple[TimeSlice, ...]
    network: CoCitationNetwork
    partition: ClusterPartition
    labels: Mapping[int, Mapping[str, tuple[LabelCandidate, ...]]]
    representative_citers: Mapping[int, tuple[tuple[str, int], ...]]
    layout: LayoutResult
    metrics: NodeMetrics


def _round_floats(obj: Any) -> Any:
    """Round every float to 9 significant digits so the shortest-form JSON
    rendering is stable."""
    if isinstance(obj, float):
        return float(format(obj, ".9g"))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def snapshot_to_document(snap: ProjectSnapshot) -> dict[str, Any]:
    part = snap.partition
    doc = {
        "schema_version": snap.schema_version,
        "config": dict(snap.config),
        "slices": [
            {"index": s.index, "start_year": s.start_year, "end_year": s.end_year}
            for s in snap.slices
        ],
        "nodes": [
            {
                "key": n.key,
                "total_citations": n.total_citations,
                "first_slice": n.first_slice,
            }
            for n in snap.network.nodes
        ],
        "edges": [
            {
                "source": e.u,
                "target": e.v,
                "weight": e.weight,
                "per_slice_counts": {str(i): c for i, c in sorted(e.per_slice_counts.items())},
            }
            for e in snap.network.edges
        ],
        "partition": {
            "assignment": {k: part.assignment[k] for k in sorted(part.assignment)},
            "k": part.k,
            "modularity": part.modularity,
            "node_silhouette": {k: part.node_silhouette[k] for k in sorted(part.node_silhouette)},
            "cluster_mean_silhouette": {
                str(c): part.cluster_mean_silhouette[c]
                for c in sorted(part.cluster_mean_silhouette)
            },
            "mean_silhouette": part.mean_silhouette,
            "silhouette_degenerate": part.silhouette_degenerate,
        },
        "labels": {
            str(cid): {
                algorithm: [
                    {"term": c.term, "score": c.score, "frequency": c.frequency}
                    for c in candidates
                ]
                for algorithm, candidates in sorted(by_algorithm.items())
            }
            for cid, by_algorithm in sorted(snap.labels.items())
        },
        "representative_citers": {
            str(cid): [{"id": rec_id, "coverage": cov} for rec_id, cov in citers]
            for cid, citers in sorted(snap.representative_citers.items())
        },
        "layout": {
            "positions": {
                k: [x, y] for k, (x, y) in sorted(snap.layout.positions.items())
            },
            "hulls": {
                str(cid): [[x, y] for x, y in hull]
                for cid, hull in sorted(snap.layout.hulls.items())
            },
            "bounds": list(snap.layout.bounds),
        },
        "metrics": {
            "betweenness": {
                k: snap.metrics.betweenness[k] for k in sorted(snap.metrics.betweenness)
            },
            "pivotal": sorted(snap.metrics.pivotal),
            "slice_activity": {
                str(i): c for i, c in sorted(snap.metrics.slice_activity.items())
            },
        },
    }
    return _round_floats(doc)


def dumps_snapshot(snap: ProjectSnapshot) -> str:
    """Deterministic serialization: sorted keys, 9-significant-digit floats,
    LF line endings."""
    doc = snapshot_to_document(snap)
    return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False, allow_nan=False) + "\n"


def write_snapshot(snap: ProjectSnapshot, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_snapshot(snap))


def document_from_path(path: str) -> dict[str, Any]:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def snapshot_from_document(doc: Mapping[str, Any]) -> ProjectSnapshot:
    """Rebuild a ProjectSnapshot from its JSON document."""
    slices = tuple(
        TimeSlice(s["index"], s["start_year"], s["end_year"]) for s in doc["slices"]
    )
    nodes = tuple(
        NodeRecord(n["key"], n["total_citations"], n["first_slice"]) for n in doc["nodes"]
    )
    edges = tuple(
        EdgeRecord(
            e["source"],
            e["target"],
            float(e["weight"]),
            {int(i): c for i, c in e["per_slice_counts"].items()},
        )
        for e in doc["edges"]
    )
    network = CoCitationNetwork(nodes, edges, tuple(s.index for s in slices))
    p = doc["partition"]
    partition = ClusterPartition(
        assignment=dict(p["assignment"]),
        k=p["k"],
        modularity=float(p["modularity"]),
        node_silhouette={k: float(v) for k, v in p["node_silhouette"].items()},
        cluster_mean_silhouette={
            int(c): float(v) for c, v in p["cluster_mean_silhouette"].items()
        },
        mean_silhouette=float(p["mean_silhouette"]),
        silhouette_degenerate=bool(p.get("silhouette_degenerate", False)),
    )
    labels = {
        int(cid): {
            algorithm: tuple(
                LabelCandidate(c["term"], float(c["score"]), algorithm, int(c["frequency"]))
                for c in candidates
            )
            for algorithm, candidates in by_algorithm.items()
        }
        for cid, by_algorithm in doc["labels"].items()
    }
    citers = {
        int(cid): tuple((c["id"], int(c["coverage"])) for c in entries)
        for cid, entries in doc["representative_citers"].items()
    }
    lay = doc["layout"]
    layout = LayoutResult(
        positions={k: (float(x), float(y)) for k, (x, y) in lay["positions"].items()},
        hulls={
            int(cid): tuple((float(x), float(y)) for x, y in hull)
            for cid, hull in lay["hulls"].items()
        },
        bounds=tuple(float(b) for b in lay["bounds"]),
    )
    met = doc["metrics"]
    metrics = NodeMetrics(
        betweenness={k: float(v) for k, v in met["betweenness"].items()},
        pivotal=frozenset(met["pivotal"]),
        slice_activity={int(i): int(c) for i, c in met["slice_activity"].items()},
    )
    return ProjectSnapshot(
        schema_version=doc["schema_version"],
        config=dict(doc["config"]),
        slices=slices,
        network=network,
        partition=partition,
        labels=labels,
        representative_citers=citers,
        layout=layout,
        metrics=metrics,
    )


def load_snapshot(path: str) -> ProjectSnapshot:
    return snapshot_from_document(document_from_path(path))


def validate_document(doc: Mapping[str, Any]) -> list[str]:
    """Structural validation; returns a list of violations (empty = valid).

    Each violation starts with a stable category prefix.
    """
    violations: list[str] = []
    if not isinstance(doc, Mapping):
        return ["not-json: document is not a key-value object"]
    if doc.get("schema_version") != SCHEMA_VERSION:
        violations.append(
            f"schema-version: expected {SCHEMA_VERSION!r}, got {doc.get('schema_version')!r}"
        )
    required = (
        "config",
        "slices",
        "nodes",
        "edges",
        "partition",
        "labels",
        "representative_citers",
        "layout",
        "metrics",
    )
    missing = [f for f in required if f not in doc]
    if missing:
        violations.append(f"missing-field: {', '.join(missing)}")
        return violations

    slice_indices = {s["index"] for s in doc["slices"]}
    node_keys = [n["key"] for n in doc["nodes"]]
    node_set = set(node_keys)
    if len(node_keys) != len(node_set):
        violations.append("duplicate-node: node keys are not unique")

    seen_pairs = set()
    for e in doc["edges"]:
        u, v = e["source"], e["target"]
        for endpoint in (u, v):
            if endpoint not in node_set:
                violations.append(f"dangling-edge-endpoint: {endpoint!r} not in nodes")
        if u == v:
            violations.append(f"self-loop: {u!r}")
        pair = (min(u, v), max(u, v))
        if pair in seen_pairs:
            violations.append(f"duplicate-edge: {pair!r}")
        seen_pairs.add(pair)
        if not e["weight"] > 0:
            violations.append(f"edge-weight: {pair!r} weight must be positive")
        for idx, count in e["per_slice_counts"].items():
            if int(idx) not in slice_indices:
                violations.append(f"unknown-slice: edge {pair!r} references slice {idx}")
            if count < 1:
                violations.append(f"slice-count: edge {pair!r} slice {idx} count < 1")

    part = doc["partition"]
    assignment = part["assignment"]
    assigned = set(assignment)
    for key in node_set - assigned:
        violations.append(f"unassigned-node: {key!r} missing from partition")
    for key in assigned - node_set:
        violations.append(f"dangling-assignment: {key!r} not in nodes")
    cluster_ids = set(assignment.values())
    k = part["k"]
    if cluster_ids != set(range(k)):
        violations.append(
            f"cluster-contiguity: ids {sorted(cluster_ids)} are not 0..{k - 1}"
        )
    if not -0.5 - 1e-9 <= part["modularity"] <= 1.0 + 1e-9:
        violations.append(f"modularity-range: {part['modularity']}")
    for key, s in part["node_silhouette"].items():
        if not -1.0 - 1e-9 <= s <= 1.0 + 1e-9:
            violations.append(f"silhouette-range: {key!r} -> {s}")
    sil = part["node_silhouette"]
    if set(sil) != node_set:
        violations.append("silhouette-coverage: node_silhouette keys differ from nodes")
    elif sil:
        mean = sum(sil[k] for k in sorted(sil)) / len(sil)
        if not math.isclose(mean, part["mean_silhouette"], rel_tol=1e-6, abs_tol=1e-6):
            violations.append(
                f"silhouette-mean: stored {part['mean_silhouette']} != computed {mean}"
            )

    cluster_sizes: dict[int, int] = {}
    for cid in assignment.values():
        cluster_sizes[cid] = cluster_sizes.get(cid, 0) + 1
    for cid_str, by_algorithm in doc["labels"].items():
        if int(cid_str) not in cluster_ids:
            violations.append(f"dangling-label-cluster: {cid_str}")
        for algorithm, candidates in by_algorithm.items():
            if algorithm not in LABEL_ALGORITHMS:
                violations.append(f"unknown-algorithm: {algorithm!r}")
            scores = [c["score"] for c in candidates]
            if any(b > a + 1e-9 for a, b in zip(scores, scores[1:])):
                violations.append(
                    f"label-order: cluster {cid_str} {algorithm} scores increase"
                )
            for c in candidates:
                if c["frequency"] < 1:
                    violations.append(
                        f"label-frequency: {c['term']!r} in cluster {cid_str}"
                    )
    for cid_str, citers in doc["representative_citers"].items():
        if int(cid_str) not in cluster_ids:
            violations.append(f"dangling-citer-cluster: {cid_str}")
            continue
        for c in citers:
            if not 1 <= c["coverage"] <= cluster_sizes.get(int(cid_str), 0):
                violations.append(
                    f"citer-coverage: {c['id']!r} coverage {c['coverage']} out of range"
                )

    positions = doc["layout"]["positions"]
    if set(positions) != node_set:
        violations.append("position-coverage: layout positions differ from nodes")
    for key, (x, y) in positions.items():
        if not (math.isfinite(x) and math.isfinite(y)):
            violations.append(f"position-finite: {key!r}")

    met = doc["metrics"]
    if set(met["betweenness"]) != node_set:
        violations.append("betweenness-coverage: keys differ from nodes")
    for key in met["pivotal"]:
        if key not in node_set:
            violations.append(f"dangling-pivotal: {key!r}")
    for idx in met["slice_activity"]:
        if int(idx) not in slice_indices:
            violations.append(f"unknown-slice: slice_activity references {idx}")
    return violations


def validate_snapshot(path: str) -> list[str]:
    """Validate a snapshot file; unreadable files raise OSError."""
    try:
        doc = document_from_path(path)
    except json.JSONDecodeError as exc:
        return [f"not-json: {exc}"]
    return validate_document(doc)
