/** SVG rendering of a Scene plus pan/zoom wiring. The scene is data; this
 *  module is the only place that touches the DOM tree for the graph. */

import type { Scene, ViewTransform } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const CLUSTER_COLORS = [
  "#4e79a7",
  "#f28e2b",
  "#59a14f",
  "#b07aa1",
  "#76b7b2",
  "#edc948",
  "#ff9da7",
  "#9c755f",
  "#bab0ac",
  "#e15759",
];

export function clusterColor(clusterId: number): string {
  return CLUSTER_COLORS[clusterId % CLUSTER_COLORS.length]!;
}

function el(tag: string, attrs: Record<string, string | number>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

export interface RenderCallbacks {
  onClusterClick?: (clusterId: number) => void;
  onNodeClick?: (key: string) => void;
}

export function renderScene(
  svg: SVGSVGElement,
  scene: Scene,
  transform: ViewTransform,
  callbacks: RenderCallbacks = {},
): void {
  svg.textContent = "";
  const root = el("g", {
    transform: `translate(${transform.x} ${transform.y}) scale(${transform.k})`,
  });
  svg.appendChild(root);

  const hullLayer = el("g", { class: "hulls" });
  for (const hull of scene.hulls) {
    if (!hull.points.length) continue;
    const path = hull.points.map(([x, y], i) => `${i ? "L" : "M"}${x},${y}`).join(" ") + " Z";
    const shape = el("path", {
      d: path,
      fill: clusterColor(hull.clusterId),
      "fill-opacity": hull.selected ? 0.28 : 0.12,
      stroke: clusterColor(hull.clusterId),
      "stroke-opacity": 0.5,
      "stroke-width": hull.selected ? 2.5 : 1,
    });
    shape.addEventListener("click", () => callbacks.onClusterClick?.(hull.clusterId));
    hullLayer.appendChild(shape);
    const caption = el("text", {
      x: hull.anchorX,
      y: hull.anchorY - 8,
      "font-size": hull.fontSize,
      "text-anchor": "middle",
      fill: clusterColor(hull.clusterId),
      class: "hull-caption",
    });
    caption.textContent = hull.caption;
    caption.addEventListener("click", () => callbacks.onClusterClick?.(hull.clusterId));
    hullLayer.appendChild(caption);
  }
  root.appendChild(hullLayer);

  const edgeLayer = el("g", { class: "edges" });
  for (const edge of scene.edges) {
    const stroke =
      edge.style === "highlighted" ? "#d62728" : edge.style === "dimmed" ? "#d8d8d8" : "#9aa5b1";
    edgeLayer.appendChild(
      el("line", {
        x1: edge.x1,
        y1: edge.y1,
        x2: edge.x2,
        y2: edge.y2,
        stroke,
        "stroke-width": edge.style === "highlighted" ? edge.width + 1 : edge.width,
        "stroke-opacity": edge.style === "dimmed" ? 0.25 : 0.8,
      }),
    );
  }
  root.appendChild(edgeLayer);

  const nodeLayer = el("g", { class: "nodes" });
  for (const node of scene.nodes) {
    if (node.pivotal) {
      nodeLayer.appendChild(
        el("circle", {
          cx: node.x,
          cy: node.y,
          r: node.radius + 3,
          fill: "none",
          stroke: "#7d3c98",
          "stroke-width": 2.5,
        }),
      );
    }
    const circle = el("circle", {
      cx: node.x,
      cy: node.y,
      r: node.radius,
      fill: clusterColor(node.clusterId),
      stroke: node.selected ? "#111" : "#fff",
      "stroke-width": node.selected ? 2 : 0.8,
    });
    circle.addEventListener("click", (event) => {
      event.stopPropagation();
      callbacks.onNodeClick?.(node.key);
    });
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = node.key;
    circle.appendChild(title);
    nodeLayer.appendChild(circle);
  }
  root.appendChild(nodeLayer);
}

/** Wire wheel-zoom and drag-pan; reports the new transform, never mutates. */
export function attachPanZoom(
  svg: SVGSVGElement,
  getTransform: () => ViewTransform,
  onTransform: (t: ViewTransform) => void,
): void {
  svg.addEventListener("wheel", (event) => {
    event.preventDefault();
    const t = getTransform();
    const factor = event.deltaY < 0 ? 1.15 : 1 / 1.15;
    const k = Math.min(20, Math.max(0.05, t.k * factor));
    const rect = svg.getBoundingClientRect();
    const px = event.clientX - rect.left;
    const py = event.clientY - rect.top;
    onTransform({
      k,
      x: px - ((px - t.x) * k) / t.k,
      y: py - ((py - t.y) * k) / t.k,
    });
  });
  let dragging: { startX: number; startY: number; originX: number; originY: number } | null = null;
  svg.addEventListener("mousedown", (event) => {
    const t = getTransform();
    dragging = { startX: event.clientX, startY: event.clientY, originX: t.x, originY: t.y };
  });
  window.addEventListener("mousemove", (event) => {
    if (!dragging) return;
    const t = getTransform();
    onTransform({
      k: t.k,
      x: dragging.originX + event.clientX - dragging.startX,
      y: dragging.originY + event.clientY - dragging.startY,
    });
  });
  window.addEventListener("mouseup", () => {
    dragging = null;
  });
}
