/**
 * Deterministic force-directed layout with pinned positions.
 *
 * Mutation keeps the vertex set, so a session's vertices must not jump
 * around when the arrows change — the user tracks vertices across
 * mutations.  We therefore compute positions once per session (ring start,
 * a fixed number of spring iterations, no randomness) and afterwards reuse
 * them verbatim: `layoutFor` returns the previous map untouched whenever
 * it already covers the quiver.
 */

import type { QuiverDoc } from "./api.js";

export interface Point {
  x: number;
  y: number;
}

/** vertex (1-based) -> position in a 100x100 viewBox */
export type LayoutMap = Map<number, Point>;

const ITERATIONS = 120;
const SPRING_LENGTH = 34;
const REPULSION = 1400;
const STEP = 0.04;

export function ringPositions(n: number): LayoutMap {
  const out: LayoutMap = new Map();
  const r = 38;
  for (let v = 1; v <= n; v++) {
    const angle = (2 * Math.PI * (v - 1)) / n - Math.PI / 2;
    out.set(v, { x: 50 + r * Math.cos(angle), y: 50 + r * Math.sin(angle) });
  }
  return out;
}

function undirectedEdges(qp: QuiverDoc): Array<[number, number]> {
  const seen = new Set<string>();
  const edges: Array<[number, number]> = [];
  for (const a of qp.arrows) {
    const i = Math.min(a.src, a.tgt);
    const j = Math.max(a.src, a.tgt);
    const key = `${i}-${j}`;
    if (i !== j && !seen.has(key)) {
      seen.add(key);
      edges.push([i, j]);
    }
  }
  return edges;
}

export function relax(start: LayoutMap, edges: Array<[number, number]>): LayoutMap {
  const pos: LayoutMap = new Map(Array.from(start, ([v, p]) => [v, { ...p }]));
  const vertices = Array.from(pos.keys());
  for (let it = 0; it < ITERATIONS; it++) {
    const force = new Map<number, Point>(vertices.map((v) => [v, { x: 0, y: 0 }]));
    // pairwise repulsion
    for (let i = 0; i < vertices.length; i++) {
      for (let j = i + 1; j < vertices.length; j++) {
        const a = pos.get(vertices[i]!)!;
        const b = pos.get(vertices[j]!)!;
        const dx = a.x - b.x;
        const dy = a.y - b.y;
        const d2 = Math.max(dx * dx + dy * dy, 1);
        const f = REPULSION / d2;
        const d = Math.sqrt(d2);
        force.get(vertices[i]!)!.x += (f * dx) / d;
        force.get(vertices[i]!)!.y += (f * dy) / d;
        force.get(vertices[j]!)!.x -= (f * dx) / d;
        force.get(vertices[j]!)!.y -= (f * dy) / d;
      }
    }
    // spring attraction along edges
    for (const [i, j] of edges) {
      const a = pos.get(i);
      const b = pos.get(j);
      if (!a || !b) continue;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 0.01);
      const f = d - SPRING_LENGTH;
      force.get(i)!.x += (f * dx) / d;
      force.get(i)!.y += (f * dy) / d;
      force.get(j)!.x -= (f * dx) / d;
      force.get(j)!.y -= (f * dy) / d;
    }
    for (const v of vertices) {
      const p = pos.get(v)!;
      const f = force.get(v)!;
      p.x = Math.min(96, Math.max(4, p.x + STEP * f.x));
      p.y = Math.min(96, Math.max(4, p.y + STEP * f.y));
    }
  }
  return pos;
}

/** Reuse pinned positions when they cover the quiver; lay out otherwise. */
export function layoutFor(qp: QuiverDoc, previous: LayoutMap): LayoutMap {
  let covered = previous.size === qp.n;
  for (let v = 1; v <= qp.n && covered; v++) {
    if (!previous.has(v)) covered = false;
  }
  if (covered) return previous;
  return relax(ringPositions(qp.n), undirectedEdges(qp));
}
