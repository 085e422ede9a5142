/** Pure scene computation: every render is a function of (snapshot, state).
 *  No function here mutates the snapshot or the incoming state. */

import type {
  ClusterPanel,
  LabelAlgorithm,
  LabelCandidate,
  Scene,
  SceneEdge,
  SceneHull,
  SceneNode,
  SnapshotDocument,
  ViewState,
} from "./types.js";

const MAX_EDGE_WIDTH = 6;
const MIN_NODE_RADIUS = 3;
const CAPTION_FONT_PER_MEMBER = 2.0;
const CAPTION_FONT_MIN = 11;
const CAPTION_FONT_MAX = 44;

/** Caption source per algorithm; lsa captions use the top dim-1 term. */
const CAPTION_KEYS: Record<LabelAlgorithm, string> = {
  tfidf: "tfidf",
  llr: "llr",
  lsa: "lsa_dim1",
};

export function clusterSizes(snapshot: SnapshotDocument): Map<number, number> {
  const sizes = new Map<number, number>();
  for (const cid of Object.values(snapshot.partition.assignment)) {
    sizes.set(cid, (sizes.get(cid) ?? 0) + 1);
  }
  return sizes;
}

export function hullCaption(
  snapshot: SnapshotDocument,
  clusterId: number,
  algorithm: LabelAlgorithm,
): string {
  const table = snapshot.labels[String(clusterId)];
  const candidates = table?.[CAPTION_KEYS[algorithm]];
  const top = candidates?.[0];
  return top ? top.term : `cluster ${clusterId}`;
}

export function captionFontSize(clusterSize: number): number {
  const size = CAPTION_FONT_PER_MEMBER * clusterSize;
  return Math.max(CAPTION_FONT_MIN, Math.min(CAPTION_FONT_MAX, size));
}

function edgeStyle(edge: { per_slice_counts: Record<string, number> }, selectedSlice: number | null) {
  if (selectedSlice === null) return "base" as const;
  const count = edge.per_slice_counts[String(selectedSlice)] ?? 0;
  return count >= 1 ? ("highlighted" as const) : ("dimmed" as const);
}

/** Build the full scene description for the current view state. */
export function buildScene(snapshot: SnapshotDocument, state: ViewState): Scene {
  const positions = snapshot.layout.positions;
  const assignment = snapshot.partition.assignment;
  const pivotal = new Set(snapshot.metrics.pivotal);
  const maxCitations = Math.max(1, ...snapshot.nodes.map((n) => n.total_citations));
  const maxWeight = Math.max(1e-12, ...snapshot.edges.map((e) => e.weight));

  const nodes: SceneNode[] = snapshot.nodes.map((n) => {
    const [x, y] = positions[n.key]!;
    return {
      key: n.key,
      x,
      y,
      radius: MIN_NODE_RADIUS + 5 * Math.sqrt(n.total_citations / maxCitations),
      clusterId: assignment[n.key]!,
      pivotal: pivotal.has(n.key),
      selected: state.selectedNode === n.key,
    };
  });

  const edges: SceneEdge[] = snapshot.edges.map((e) => {
    const [x1, y1] = positions[e.source]!;
    const [x2, y2] = positions[e.target]!;
    return {
      source: e.source,
      target: e.target,
      x1,
      y1,
      x2,
      y2,
      width: Math.max(0.5, (e.weight / maxWeight) * MAX_EDGE_WIDTH),
      style: edgeStyle(e, state.selectedSlice),
    };
  });

  const sizes = clusterSizes(snapshot);
  const hulls: SceneHull[] = Object.entries(snapshot.layout.hulls)
    .map(([cidText, points]) => {
      const clusterId = Number(cidText);
      const size = sizes.get(clusterId) ?? 0;
      const top = points.reduce((best, p) => (p[1] < best[1] ? p : best), points[0]!);
      return {
        clusterId,
        points: points.map(([x, y]) => [x, y] as [number, number]),
        caption: hullCaption(snapshot, clusterId, state.labelAlgorithm),
        fontSize: captionFontSize(size),
        anchorX: top[0],
        anchorY: top[1],
        selected: state.selectedCluster === clusterId,
      };
    })
    .sort((a, b) => a.clusterId - b.clusterId);

  return { nodes, edges, hulls, notice: state.notice };
}

/** Select a time slice for highlighting; unknown slices are a no-op with a
 *  user-visible notice. Passing null clears the selection. */
export function highlightSlice(
  snapshot: SnapshotDocument,
  state: ViewState,
  sliceIndex: number | null,
): ViewState {
  if (sliceIndex === null) {
    return { ...state, selectedSlice: null, notice: null };
  }
  if (!snapshot.slices.some((s) => s.index === sliceIndex)) {
    return { ...state, notice: `unknown time slice ${sliceIndex}` };
  }
  const marked = snapshot.edges.filter(
    (e) => (e.per_slice_counts[String(sliceIndex)] ?? 0) >= 1,
  ).length;
  const notice = marked === 0 ? `no co-citation links in slice ${sliceIndex}` : null;
  return { ...state, selectedSlice: sliceIndex, notice };
}

export function setLabelAlgorithm(state: ViewState, algorithm: LabelAlgorithm): ViewState {
  return { ...state, labelAlgorithm: algorithm };
}

export function selectCluster(state: ViewState, clusterId: number | null): ViewState {
  return { ...state, selectedCluster: clusterId };
}

export function selectNode(state: ViewState, key: string | null): ViewState {
  return { ...state, selectedNode: key };
}

export function setTransform(state: ViewState, x: number, y: number, k: number): ViewState {
  return { ...state, transform: { x, y, k } };
}

/** Detail panel for one cluster: the viewer-side rendering of a label
 *  comparison row (sizes, silhouette, all algorithms, coverage counts). */
export function clusterPanel(snapshot: SnapshotDocument, clusterId: number): ClusterPanel {
  const size = clusterSizes(snapshot).get(clusterId) ?? 0;
  const table = snapshot.labels[String(clusterId)] ?? {};
  const algorithms: Record<string, LabelCandidate[]> = {};
  for (const key of ["tfidf", "llr", "lsa_dim1", "lsa_dim2"]) {
    algorithms[key] = [...(table[key] ?? [])];
  }
  const citers = (snapshot.representative_citers[String(clusterId)] ?? []).map((c) => ({
    id: c.id,
    coverage: c.coverage,
    outOf: size,
  }));
  return {
    clusterId,
    size,
    meanSilhouette: snapshot.partition.cluster_mean_silhouette[String(clusterId)] ?? 0,
    algorithms,
    citers,
  };
}
