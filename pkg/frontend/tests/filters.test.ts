import { describe, expect, it } from 'vitest';

import { evaluateChain, toVector, vectorRange } from '../src/filters.js';
import type { EdgeStub } from '../src/filters.js';
import type { FilterExprJson, MeasureId } from '../src/types.js';

// P3: 0 - 1 - 2, degrees 1, 2, 1
const P3_NODES = [0, 1, 2];
const P3_EDGES: EdgeStub[] = [
  { id: 0, source: 0, target: 1 },
  { id: 1, source: 1, target: 2 },
];
const P3_DEGREE = new Map<MeasureId, Map<number, number>>([
  ['degree', new Map([[0, 1], [1, 2], [2, 1]])],
]);

function nodeSlider(threshold: number): FilterExprJson {
  return { target: 'node', measure: 'degree', op: '>=', threshold };
}

describe('evaluateChain', () => {
  it('degree slider at 2 on P3 keeps only the middle node', () => {
    const kept = evaluateChain(P3_NODES, P3_EDGES, [nodeSlider(2)], P3_DEGREE);
    expect([...kept.nodes]).toEqual([1]);
    // both edges lose an endpoint
    expect(kept.edges.size).toBe(0);
  });

  it('slider at the minimum keeps everything', () => {
    const kept = evaluateChain(P3_NODES, P3_EDGES, [nodeSlider(1)], P3_DEGREE);
    expect(kept.nodes.size).toBe(3);
    expect(kept.edges.size).toBe(2);
  });

  it('empty chain keeps the whole graph', () => {
    const kept = evaluateChain(P3_NODES, P3_EDGES, [], P3_DEGREE);
    expect(kept.nodes.size).toBe(3);
    expect(kept.edges.size).toBe(2);
  });

  it('chain order never changes the outcome', () => {
    const vectors = new Map<MeasureId, Map<number, number>>([
      ['degree', new Map([[0, 1], [1, 2], [2, 1]])],
      ['triangles', new Map([[0, 0], [1, 0], [2, 0]])],
      ['edge-triangles', new Map([[0, 0], [1, 0]])],
    ]);
    const a: FilterExprJson = { target: 'node', measure: 'degree', op: '>=', threshold: 2 };
    const b: FilterExprJson = { target: 'node', measure: 'triangles', op: '<=', threshold: 0 };
    const c: FilterExprJson = { target: 'edge', measure: 'edge-triangles', op: '=', threshold: 0 };
    for (const chain of [[a, b, c], [c, b, a], [b, c, a]]) {
      const kept = evaluateChain(P3_NODES, P3_EDGES, chain, vectors);
      expect([...kept.nodes]).toEqual([1]);
      expect(kept.edges.size).toBe(0);
    }
  });

  it('edge expressions drop edges without touching nodes', () => {
    const vectors = new Map<MeasureId, Map<number, number>>([
      ['edge-triangles', new Map([[0, 1], [1, 0]])],
    ]);
    const chain: FilterExprJson[] = [
      { target: 'edge', measure: 'edge-triangles', op: '>=', threshold: 1 },
    ];
    const kept = evaluateChain(P3_NODES, P3_EDGES, chain, vectors);
    expect(kept.nodes.size).toBe(3);
    expect([...kept.edges]).toEqual([0]);
  });

  it('an edge needs both endpoints to survive node filters', () => {
    // keep nodes {1, 2}: edge 0-1 dies with node 0, edge 1-2 survives
    const vectors = new Map<MeasureId, Map<number, number>>([
      ['pagerank', new Map([[0, 0.1], [1, 0.5], [2, 0.4]])],
    ]);
    const chain: FilterExprJson[] = [
      { target: 'node', measure: 'pagerank', op: '>', threshold: 0.2 },
    ];
    const kept = evaluateChain(P3_NODES, P3_EDGES, chain, vectors);
    expect([...kept.nodes].sort()).toEqual([1, 2]);
    expect([...kept.edges]).toEqual([1]);
  });

  it('throws when the vector for a chained measure is missing', () => {
    expect(() =>
      evaluateChain(P3_NODES, P3_EDGES, [
        { target: 'node', measure: 'kcore', op: '>=', threshold: 1 },
      ], P3_DEGREE),
    ).toThrow(/no cached vector/);
  });
});

describe('toVector / vectorRange', () => {
  it('converts string-keyed JSON values to numeric keys', () => {
    const vec = toVector({ '0': 1.5, '10': 2.5 });
    expect(vec.get(0)).toBe(1.5);
    expect(vec.get(10)).toBe(2.5);
  });

  it('reports [min, max] and a 0,0 fallback for empty vectors', () => {
    expect(vectorRange(new Map([[0, 3], [1, -1], [2, 7]]))).toEqual([-1, 7]);
    expect(vectorRange(new Map())).toEqual([0, 0]);
  });
});
