/**
 * Seeded force simulation for the graph view.
 *
 * Same spring embedding the server uses for its own exports (pairwise
 * k^2/d repulsion, d^2/k edge attraction, linear cooling), written out
 * scalar since the client has no numpy.  One step() per animation frame
 * keeps input handling responsive on large graphs; the same seed always
 * reproduces the same coordinates, which the export tests rely on.
 *
 * No rendering library is involved: zero runtime dependencies keeps the
 * compiled output servable as plain static ES modules.
 */

import type { NodeId } from './types.js';
import type { EdgeStub } from './filters.js';
import type { LayoutMap } from './state.js';

/** Deterministic 32-bit PRNG (mulberry32). */
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

export class ForceSim {
  private ids: NodeId[];
  private index = new Map<NodeId, number>();
  private x: Float64Array;
  private y: Float64Array;
  private springs: Array<[number, number]>;
  private pinned = new Set<number>();
  private k: number;
  private temp: number;
  private readonly cool: number;
  private stepsLeft: number;

  constructor(
    nodes: NodeId[],
    edges: EdgeStub[],
    opts: { seed?: number; iterations?: number } = {},
  ) {
    const iterations = opts.iterations ?? 60;
    this.ids = [...nodes];
    this.ids.forEach((nid, i) => this.index.set(nid, i));
    const n = this.ids.length;
    const rand = seededRandom(opts.seed ?? 0);
    this.x = new Float64Array(n);
    this.y = new Float64Array(n);
    for (let i = 0; i < n; i++) {
      this.x[i] = rand();
      this.y[i] = rand();
    }
    this.springs = [];
    for (const e of edges) {
      const a = this.index.get(e.source);
      const b = this.index.get(e.target);
      if (a !== undefined && b !== undefined) this.springs.push([a, b]);
    }
    this.k = n > 0 ? Math.sqrt(1 / n) : 1;
    this.temp = 0.1;
    this.cool = this.temp / (iterations + 1);
    this.stepsLeft = n > 1 ? iterations : 0;
  }

  get running(): boolean {
    return this.stepsLeft > 0;
  }

  /** Fix a node at a position (dragging); null releases it. */
  pin(nid: NodeId, at: [number, number] | null): void {
    const i = this.index.get(nid);
    if (i === undefined) return;
    if (at === null) {
      this.pinned.delete(i);
      return;
    }
    this.pinned.add(i);
    this.x[i] = at[0];
    this.y[i] = at[1];
  }

  /** One cooling iteration; no-op once the budget is spent. */
  step(): void {
    if (this.stepsLeft <= 0) return;
    const n = this.ids.length;
    const dx = new Float64Array(n);
    const dy = new Float64Array(n);
    const kk = this.k * this.k;
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        let ex = this.x[i]! - this.x[j]!;
        let ey = this.y[i]! - this.y[j]!;
        let d = Math.hypot(ex, ey);
        if (d < 1e-9) {
          // coincident points repel along a deterministic axis
          ex = 1e-9;
          ey = 0;
          d = 1e-9;
        }
        const f = kk / (d * d);
        dx[i]! += (ex / d) * f;
        dy[i]! += (ey / d) * f;
        dx[j]! -= (ex / d) * f;
        dy[j]! -= (ey / d) * f;
      }
    }
    for (const [a, b] of this.springs) {
      const ex = this.x[a]! - this.x[b]!;
      const ey = this.y[a]! - this.y[b]!;
      const d = Math.max(Math.hypot(ex, ey), 1e-9);
      const pull = (d * d) / this.k;
      dx[a]! -= (ex / d) * pull;
      dy[a]! -= (ey / d) * pull;
      dx[b]! += (ex / d) * pull;
      dy[b]! += (ey / d) * pull;
    }
    for (let i = 0; i < n; i++) {
      if (this.pinned.has(i)) continue;
      const len = Math.max(Math.hypot(dx[i]!, dy[i]!), 1e-9);
      const cap = Math.min(len, this.temp);
      this.x[i]! += (dx[i]! / len) * cap;
      this.y[i]! += (dy[i]! / len) * cap;
    }
    this.temp = Math.max(this.temp - this.cool, 1e-4);
    this.stepsLeft--;
  }

  /** Run the whole remaining budget synchronously. */
  run(): LayoutMap {
    while (this.stepsLeft > 0) this.step();
    return this.positions();
  }

  positions(): LayoutMap {
    const out: LayoutMap = new Map();
    this.ids.forEach((nid, i) => out.set(nid, [this.x[i]!, this.y[i]!]));
    return out;
  }
}

/** Convenience wrapper: lay out the whole graph in one call. */
export function forceLayout(
  nodes: NodeId[],
  edges: EdgeStub[],
  opts: { seed?: number; iterations?: number } = {},
): LayoutMap {
  if (nodes.length === 1) return new Map([[nodes[0]!, [0, 0]]]);
  return new ForceSim(nodes, edges, opts).run();
}
