/**
 * Seeded force-directed layout for campaign cluster graphs.
 *
 * Spring forces along edges, pairwise repulsion, and mild centering,
 * iterated with a cooling step size. Node radius grows with the square
 * root of its PIP count so area is proportional to pip_count.
 */

import type { ClusterDetail } from "./api.js";

export interface LayoutNode {
  id: string;
  kind: string;
  x: number;
  y: number;
  radius: number;
}

export interface LayoutEdge {
  source: string;
  target: string;
  weight: number;
}

export interface Layout {
  nodes: LayoutNode[];
  edges: LayoutEdge[];
  width: number;
  height: number;
}

export const MIN_RADIUS = 4;
export const RADIUS_SCALE = 3;

export function nodeRadius(pipCount: number): number {
  return MIN_RADIUS + RADIUS_SCALE * Math.sqrt(Math.max(0, pipCount));
}

/** Deterministic PRNG (mulberry32) so layouts are reproducible. */
export function seededRandom(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function forceLayout(
  detail: ClusterDetail,
  options: { width?: number; height?: number; iterations?: number; seed?: number } = {},
): Layout {
  const width = options.width ?? 800;
  const height = options.height ?? 600;
  const iterations = options.iterations ?? 150;
  const rand = seededRandom(options.seed ?? 42);

  const nodes: LayoutNode[] = detail.nodes.map((n) => ({
    id: n.id,
    kind: n.kind,
    x: width * (0.2 + 0.6 * rand()),
    y: height * (0.2 + 0.6 * rand()),
    radius: nodeRadius(n.pip_count),
  }));
  const index = new Map(nodes.map((n, i) => [n.id, i]));
  const edges = detail.edges.filter(
    (e) => index.has(e.source) && index.has(e.target),
  );

  const springLength = 80;
  const springK = 0.02;
  const repulsion = 2000;
  for (let iter = 0; iter < iterations; iter++) {
    const step = 1 - iter / iterations; // cooling
    const fx = new Array(nodes.length).fill(0);
    const fy = new Array(nodes.length).fill(0);

    for (let i = 0; i < nodes.length; i++) {
      for (let j = i + 1; j < nodes.length; j++) {
        const dx = nodes[i].x - nodes[j].x;
        const dy = nodes[i].y - nodes[j].y;
        const d2 = Math.max(dx * dx + dy * dy, 1);
        const f = repulsion / d2;
        const d = Math.sqrt(d2);
        fx[i] += (f * dx) / d;
        fy[i] += (f * dy) / d;
        fx[j] -= (f * dx) / d;
        fy[j] -= (f * dy) / d;
      }
    }
    for (const e of edges) {
      const i = index.get(e.source)!;
      const j = index.get(e.target)!;
      const dx = nodes[j].x - nodes[i].x;
      const dy = nodes[j].y - nodes[i].y;
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const f = springK * (d - springLength) * Math.min(e.weight, 5);
      fx[i] += (f * dx) / d;
      fy[i] += (f * dy) / d;
      fx[j] -= (f * dx) / d;
      fy[j] -= (f * dy) / d;
    }
    for (let i = 0; i < nodes.length; i++) {
      // gentle pull to the viewport center keeps components on screen
      fx[i] += (width / 2 - nodes[i].x) * 0.005;
      fy[i] += (height / 2 - nodes[i].y) * 0.005;
      nodes[i].x += Math.max(-10, Math.min(10, fx[i] * step));
      nodes[i].y += Math.max(-10, Math.min(10, fy[i] * step));
      nodes[i].x = Math.max(nodes[i].radius, Math.min(width - nodes[i].radius, nodes[i].x));
      nodes[i].y = Math.max(nodes[i].radius, Math.min(height - nodes[i].radius, nodes[i].y));
    }
  }
  return { nodes, edges, width, height };
}
