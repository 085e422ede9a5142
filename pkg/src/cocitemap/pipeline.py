"""End-to-end pipeline: ingest, slice, build networks, cluster, measure,
label, lay out, and assemble the project snapshot."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Sequence

from . import ingest
from .clustering import ClusterPartition, SpectralConfig, spectral_partition
from .ingest import BibRecord, record_phrases
from .labeling import (
    DegenerateCiterSetError,
    citer_set,
    llr_labels,
    lsa_labels,
    representative_citers,
    tfidf_labels,
)
from .layout import LayoutConfig, attenuate_weights, force_layout
from .metrics import compute_metrics
from .network import (
    CoCitationNetwork,
    ConfigError,
    apply_weight_floor,
    build_cocitation_slice,
    build_term_cooccurrence,
    cosine_normalized,
    merge_slices,
    select_top_cited,
    slice_interval,
)
from .snapshot import SCHEMA_VERSION, ProjectSnapshot

log = logging.getLogger(__name__)

MODE_COCITATION = "cocitation"
MODE_TERMS = "terms"
MODE_TERMS_PER_SLICE = "terms-per-slice"
MODES = (MODE_COCITATION, MODE_TERMS, MODE_TERMS_PER_SLICE)


class PipelineStageError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


class EmptyNetworkError(RuntimeError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    input_path: str
    from_year: int
    to_year: int
    input_format: str = "wos"  # wos | lines
    slice_years: int = 1
    top_n: int = 30
    mode: str = MODE_COCITATION
    weight_mode: str = "raw"  # raw | cosine
    min_edge_count: int = 1
    spectral: SpectralConfig = field(default_factory=SpectralConfig)
    label_source: str = "title"  # title | index
    label_top_n: int = 5
    label_algorithms: tuple[str, ...] = ("tfidf", "llr", "lsa")
    representative_top_n: int = 5
    layout: LayoutConfig = field(default_factory=LayoutConfig)
    hull_padding: float = 20.0
    pivot_quantile: float = 0.9
    seed: int = 0
    stopword_path: str | None = None

    def __post_init__(self):
        if self.from_year > self.to_year:
            raise ConfigError(f"from_year {self.from_year} > to_year {self.to_year}")
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.input_format not in ("wos", "lines"):
            raise ConfigError(f"unknown input format {self.input_format!r}")
        if self.weight_mode not in ("raw", "cosine"):
            raise ConfigError(f"unknown weight mode {self.weight_mode!r}")
        if self.label_source not in ("title", "index"):
            raise ConfigError(f"unknown label source {self.label_source!r}")

    def seeded(self) -> "PipelineConfig":
        """Propagate the master seed into sub-configs."""
        return replace(
            self,
            spectral=replace(self.spectral, seed=self.seed),
            layout=replace(self.layout, seed=self.seed),
        )

    def to_document(self) -> dict[str, Any]:
        doc = asdict(self)
        doc["label_algorithms"] = list(self.label_algorithms)
        return doc


def _stage(name: str):
    class _StageContext:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and not isinstance(exc, PipelineStageError):
                raise PipelineStageError(name, exc) from exc
            return False

    return _StageContext()


def load_records(cfg: PipelineConfig) -> tuple[list[BibRecord], int]:
    with open(cfg.input_path, "rb") as fh:
        data = fh.read()
    if cfg.input_format == "wos":
        result = ingest.parse_field_tagged(data)
    else:
        result = ingest.parse_line_records(data)
    in_interval = [r for r in result.records if cfg.from_year <= r.year <= cfg.to_year]
    dropped = len(result.records) - len(in_interval)
    log.info(
        "ingest: %d records read, %d skipped, %d outside %d-%d",
        len(result.records),
        result.skipped,
        dropped,
        cfg.from_year,
        cfg.to_year,
    )
    return in_interval, result.skipped


def build_network(
    cfg: PipelineConfig, records: Sequence[BibRecord], stopwords: frozenset[str] | None
) -> tuple[CoCitationNetwork, tuple]:
    slices = slice_interval(cfg.from_year, cfg.to_year, cfg.slice_years)
    if cfg.mode == MODE_COCITATION:
        per_slice = []
        for sl in slices:
            top = select_top_cited(records, sl, cfg.top_n)
            per_slice.append(build_cocitation_slice(top, sl))
        net = merge_slices(per_slice)
        net = apply_weight_floor(net, cfg.min_edge_count, drop_isolated=True)
    else:
        net = build_term_cooccurrence(
            records,
            cfg.top_n,
            per_slice=(cfg.mode == MODE_TERMS_PER_SLICE),
            slices=slices,
            stopwords=stopwords,
        )
        net = apply_weight_floor(net, cfg.min_edge_count, drop_isolated=False)
    if not net.nodes:
        raise EmptyNetworkError("empty network after slicing and thresholds")
    log.info("network: %d nodes, %d edges", len(net.nodes), len(net.edges))
    return net, slices


def _citer_key_fn(cfg: PipelineConfig, records: Sequence[BibRecord], stopwords):
    if cfg.mode == MODE_COCITATION:
        return None
    phrase_map = {
        r.id: frozenset(p.surface for p in record_phrases(r, "title", stopwords))
        for r in records
    }
    return lambda rec: phrase_map[rec.id]


def build_labels(
    cfg: PipelineConfig,
    records: Sequence[BibRecord],
    partition: ClusterPartition,
    stopwords: frozenset[str] | None,
) -> tuple[dict[int, dict[str, tuple]], dict[int, tuple]]:
    members: dict[int, list[str]] = {}
    for key, cid in partition.assignment.items():
        members.setdefault(cid, []).append(key)
    keys_of = _citer_key_fn(cfg, records, stopwords)
    citer_sets = [
        citer_set(cid, members[cid], records, keys_of) for cid in sorted(members)
    ]
    labels: dict[int, dict[str, tuple]] = {cs.cluster_id: {} for cs in citer_sets}
    if "tfidf" in cfg.label_algorithms:
        for cid, cands in tfidf_labels(
            citer_sets, records, cfg.label_source, cfg.label_top_n, stopwords
        ).items():
            labels[cid]["tfidf"] = cands
    if "llr" in cfg.label_algorithms:
        try:
            llr = llr_labels(citer_sets, records, cfg.label_source, cfg.label_top_n, stopwords)
        except DegenerateCiterSetError as exc:
            log.warning("labeling: %s", exc)
            llr = {cs.cluster_id: () for cs in citer_sets}
        for cid, cands in llr.items():
            labels[cid]["llr"] = cands
    if "lsa" in cfg.label_algorithms:
        for cs in citer_sets:
            try:
                lsa = lsa_labels(cs, records, cfg.label_source, cfg.label_top_n, stopwords)
                labels[cs.cluster_id]["lsa_dim1"] = lsa.dim1
                labels[cs.cluster_id]["lsa_dim2"] = lsa.dim2
            except DegenerateCiterSetError:
                labels[cs.cluster_id]["lsa_dim1"] = ()
                labels[cs.cluster_id]["lsa_dim2"] = ()
    citers = {
        cs.cluster_id: representative_citers(cs, cfg.representative_top_n)
        for cs in citer_sets
    }
    return labels, citers


def run_pipeline(cfg: PipelineConfig) -> ProjectSnapshot:
    """Execute every stage and assemble the deterministic snapshot."""
    cfg = cfg.seeded()
    with _stage("ingest"):
        stopwords = (
            ingest.load_stopwords(cfg.stopword_path) if cfg.stopword_path else None
        )
        records, _ = load_records(cfg)
    with _stage("network"):
        net, slices = build_network(cfg, records, stopwords)
    with _stage("clustering"):
        cluster_input = cosine_normalized(net) if cfg.weight_mode == "cosine" else net
        partition = spectral_partition(cluster_input, cfg.spectral)
        log.info(
            "clustering: k=%d modularity=%.4f mean_silhouette=%.4f",
            partition.k,
            partition.modularity,
            partition.mean_silhouette,
        )
    with _stage("metrics"):
        metrics = compute_metrics(net, partition, cfg.pivot_quantile)
    with _stage("labeling"):
        labels, citers = build_labels(cfg, records, partition, stopwords)
    with _stage("layout"):
        attenuated = attenuate_weights(net, partition, cfg.layout.between_cluster_factor)
        layout = force_layout(
            net, attenuated, cfg.layout, partition, hull_padding=cfg.hull_padding
        )
    with _stage("snapshot"):
        snap = ProjectSnapshot(
            schema_version=SCHEMA_VERSION,
            config=cfg.to_document(),
            slices=slices,
            network=net,
            partition=partition,
            labels=labels,
            representative_citers=citers,
            layout=layout,
            metrics=metrics,
        )
    return snap
