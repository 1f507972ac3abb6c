/**
 * Client-side filter evaluation against cached measure vectors.
 *
 * Slider ticks must give per-frame feedback, so they never round-trip to
 * the server; the rule here mirrors the server's filter endpoint exactly
 * (conjunctive chain, node expressions shrink nodes, edge expressions
 * shrink edges, an edge needs both endpoints to survive, order never
 * changes the outcome).  The server is consulted only on materialize.
 * The client never computes the measures themselves; the vectors come
 * from the measures endpoint and are cached per version.
 */

import type { EdgeId, FilterExprJson, MeasureId, NodeId } from './types.js';

export type MeasureVector = Map<number, number>;

export interface EdgeStub {
  id: EdgeId;
  source: NodeId;
  target: NodeId;
}

export interface Kept {
  nodes: Set<NodeId>;
  edges: Set<EdgeId>;
}

const CMP: Record<FilterExprJson['op'], (a: number, b: number) => boolean> = {
  '<': (a, b) => a < b,
  '<=': (a, b) => a <= b,
  '=': (a, b) => a === b,
  '>=': (a, b) => a >= b,
  '>': (a, b) => a > b,
};

/**
 * Evaluate a conjunctive chain.  Unlike the server, an empty chain is
 * legal here and keeps everything: a UI with no active sliders shows the
 * whole graph.
 */
export function evaluateChain(
  nodes: Iterable<NodeId>,
  edges: Iterable<EdgeStub>,
  chain: FilterExprJson[],
  vectors: Map<MeasureId, MeasureVector>,
): Kept {
  let keptNodes = new Set<NodeId>(nodes);
  const allEdges = [...edges];
  let keptEdges = new Set<EdgeId>(allEdges.map((e) => e.id));

  for (const expr of chain) {
    const vec = vectors.get(expr.measure);
    if (!vec) throw new Error(`no cached vector for measure ${expr.measure}`);
    const cmp = CMP[expr.op];
    if (expr.target === 'node') {
      keptNodes = new Set(
        [...keptNodes].filter((n) => cmp(vec.get(n) ?? NaN, expr.threshold)),
      );
    } else {
      keptEdges = new Set(
        [...keptEdges].filter((e) => cmp(vec.get(e) ?? NaN, expr.threshold)),
      );
    }
  }
  const surviving = new Set<EdgeId>();
  for (const e of allEdges) {
    if (keptEdges.has(e.id) && keptNodes.has(e.source) && keptNodes.has(e.target)) {
      surviving.add(e.id);
    }
  }
  return { nodes: keptNodes, edges: surviving };
}

/** Values objects arrive JSON-keyed by stringified ids. */
export function toVector(values: Record<string, number>): MeasureVector {
  const vec: MeasureVector = new Map();
  for (const [k, v] of Object.entries(values)) vec.set(Number(k), v);
  return vec;
}

export function vectorRange(vec: MeasureVector): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of vec.values()) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo > hi) return [0, 0]; // empty vector
  return [lo, hi];
}
