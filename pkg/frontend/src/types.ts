/** Snapshot document model (schema_version "1") and viewer state. */

export interface SliceDef {
  index: number;
  start_year: number;
  end_year: number;
}

export interface NodeDef {
  key: string;
  total_citations: number;
  first_slice: number;
}

export interface EdgeDef {
  source: string;
  target: string;
  weight: number;
  per_slice_counts: Record<string, number>;
}

export interface LabelCandidate {
  term: string;
  score: number;
  frequency: number;
}

export interface PartitionDef {
  assignment: Record<string, number>;
  k: number;
  modularity: number;
  node_silhouette: Record<string, number>;
  cluster_mean_silhouette: Record<string, number>;
  mean_silhouette: number;
  silhouette_degenerate?: boolean;
}

export interface LayoutDef {
  positions: Record<string, [number, number]>;
  hulls: Record<string, [number, number][]>;
  bounds: [number, number, number, number];
}

export interface MetricsDef {
  betweenness: Record<string, number>;
  pivotal: string[];
  slice_activity: Record<string, number>;
}

export interface SnapshotDocument {
  schema_version: string;
  config: Record<string, unknown>;
  slices: SliceDef[];
  nodes: NodeDef[];
  edges: EdgeDef[];
  partition: PartitionDef;
  labels: Record<string, Record<string, LabelCandidate[]>>;
  representative_citers: Record<string, { id: string; coverage: number }[]>;
  layout: LayoutDef;
  metrics: MetricsDef;
}

export type LabelAlgorithm = "tfidf" | "llr" | "lsa";

export interface ViewTransform {
  x: number;
  y: number;
  k: number;
}

/** Every render derives purely from (snapshot, ViewState). */
export interface ViewState {
  selectedSlice: number | null;
  labelAlgorithm: LabelAlgorithm;
  selectedCluster: number | null;
  selectedNode: string | null;
  transform: ViewTransform;
  notice: string | null;
}

export type EdgeStyle = "base" | "highlighted" | "dimmed";

export interface SceneNode {
  key: string;
  x: number;
  y: number;
  radius: number;
  clusterId: number;
  pivotal: boolean;
  selected: boolean;
}

export interface SceneEdge {
  source: string;
  target: string;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  width: number;
  style: EdgeStyle;
}

export interface SceneHull {
  clusterId: number;
  points: [number, number][];
  caption: string;
  fontSize: number;
  anchorX: number;
  anchorY: number;
  selected: boolean;
}

export interface Scene {
  nodes: SceneNode[];
  edges: SceneEdge[];
  hulls: SceneHull[];
  notice: string | null;
}

export interface ClusterPanel {
  clusterId: number;
  size: number;
  meanSilhouette: number;
  algorithms: Record<string, LabelCandidate[]>;
  citers: { id: string; coverage: number; outOf: number }[];
}

export function initialViewState(): ViewState {
  return {
    selectedSlice: null,
    labelAlgorithm: "tfidf",
    selectedCluster: null,
    selectedNode: null,
    transform: { x: 0, y: 0, k: 1 },
    notice: null,
  };
}
