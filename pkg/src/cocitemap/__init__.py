"""cocitemap: time-sliced co-citation and term co-occurrence network
analysis with spectral clustering, citer-based cluster labeling, and
deterministic layout."""

__version__ = "0.1.0"

from .clustering import ClusterPartition, SpectralConfig, modularity, silhouette, spectral_partition
from .ingest import (
    BibRecord,
    NounPhrase,
    extract_noun_phrases,
    normalize_reference,
    parse_field_tagged,
    parse_line_records,
)
from .labeling import citer_set, llr_labels, lsa_labels, representative_citers, tfidf_labels
from .layout import LayoutConfig, attenuate_weights, cluster_hulls, force_layout
from .metrics import betweenness, compute_metrics, pivotal_nodes, slice_edge_filter
from .network import (
    CoCitationNetwork,
    TimeSlice,
    build_cocitation_slice,
    build_term_cooccurrence,
    merge_slices,
    select_top_cited,
    slice_interval,
)
from .pipeline import PipelineConfig, run_pipeline
from .snapshot import ProjectSnapshot, dumps_snapshot, load_snapshot, validate_snapshot

__all__ = [
    "BibRecord",
    "ClusterPartition",
    "CoCitationNetwork",
    "LayoutConfig",
    "NounPhrase",
    "PipelineConfig",
    "ProjectSnapshot",
    "SpectralConfig",
    "TimeSlice",
    "attenuate_weights",
    "betweenness",
    "build_cocitation_slice",
    "build_term_cooccurrence",
    "citer_set",
    "cluster_hulls",
    "compute_metrics",
    "dumps_snapshot",
    "extract_noun_phrases",
    "force_layout",
    "llr_labels",
    "load_snapshot",
    "lsa_labels",
    "merge_slices",
    "modularity",
    "normalize_reference",
    "parse_field_tagged",
    "parse_line_records",
    "pivotal_nodes",
    "representative_citers",
    "run_pipeline",
    "select_top_cited",
    "silhouette",
    "slice_edge_filter",
    "slice_interval",
    "spectral_partition",
    "tfidf_labels",
    "validate_snapshot",
]
