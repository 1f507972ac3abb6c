import { describe, expect, it } from 'vitest';

import { SplomModel, pixelBrushToData } from '../src/splom.js';
import type { MeasureId } from '../src/types.js';
import type { MeasureVector } from '../src/filters.js';

// star-4: hub 0 with degree 4 / 0 triangles, leaves degree 1
function starVectors(): Map<MeasureId, MeasureVector> {
  return new Map<MeasureId, MeasureVector>([
    ['degree', new Map([[0, 4], [1, 1], [2, 1], [3, 1], [4, 1]])],
    ['triangles', new Map([[0, 0], [1, 0], [2, 0], [3, 0], [4, 0]])],
    ['kcore', new Map([[0, 1], [1, 1], [2, 1], [3, 1], [4, 1]])],
  ]);
}

describe('SplomModel', () => {
  it('two measures give a 2x2 grid with histogram diagonals', () => {
    const m = new SplomModel(['degree', 'triangles'], starVectors());
    expect(m.size).toBe(2);
    expect(m.isDiagonal(0, 0)).toBe(true);
    expect(m.isDiagonal(1, 0)).toBe(false);
    const bins = m.diagonalBins('degree');
    expect(bins.reduce((a, b) => a + b.count, 0)).toBe(5);
    // leaves cluster at the bottom bin, the hub tops out the last one
    expect(bins[0]!.count).toBe(4);
    expect(bins[bins.length - 1]!.count).toBe(1);
  });

  it('rejects fewer than two measures or missing vectors', () => {
    expect(() => new SplomModel(['degree'], starVectors())).toThrow(/two measures/);
    expect(() => new SplomModel(['degree', 'pagerank'], starVectors())).toThrow(
      /no cached vector/,
    );
  });

  it('cell points pair the two measures per node', () => {
    const m = new SplomModel(['degree', 'triangles'], starVectors());
    // row 1 = triangles on y, col 0 = degree on x
    const pts = m.cellPoints(1, 0);
    expect(pts).toHaveLength(5);
    const hub = pts.find((p) => p.id === 0)!;
    expect(hub.x).toBe(4);
    expect(hub.y).toBe(0);
  });

  it('brushing the high-degree corner selects exactly the star hub', () => {
    const m = new SplomModel(['degree', 'triangles'], starVectors());
    const picked = m.brush(1, 0, { x0: 3, x1: 5, y0: -1, y1: 1 });
    expect([...picked]).toEqual([0]);
  });

  it('empty brush selects nothing anywhere', () => {
    const m = new SplomModel(['degree', 'triangles'], starVectors());
    expect(m.brush(1, 0, { x0: 2, x1: 2, y0: 1, y1: 1 }).size).toBe(0);
    expect(m.brush(1, 0, { x0: 5, x1: 3, y0: 0, y1: 1 }).size).toBe(0); // inverted
    expect(m.brush(1, 0, { x0: 90, x1: 99, y0: 90, y1: 99 }).size).toBe(0); // off-range
  });

  it('brush bounds are inclusive so edge-of-cell drags catch extremes', () => {
    const m = new SplomModel(['degree', 'triangles'], starVectors());
    // out to exactly degree=4 (the hub's x)
    const picked = m.brush(1, 0, { x0: 4, x1: 4, y0: -1, y1: 1 });
    expect(picked.has(0)).toBe(true);
  });

  it('constant measures still get a drawable padded range', () => {
    const m = new SplomModel(['degree', 'triangles'], starVectors());
    expect(m.range('triangles')).toEqual([-0.5, 0.5]);
  });
});

describe('pixelBrushToData', () => {
  it('flips pixel y into data y and sorts corners', () => {
    // 100px cell, x range [0, 10], y range [0, 20]
    const rect = pixelBrushToData(
      { x0: 80, x1: 20, y0: 90, y1: 10 },
      100,
      [0, 10],
      [0, 20],
    );
    expect(rect.x0).toBeCloseTo(2);
    expect(rect.x1).toBeCloseTo(8);
    expect(rect.y0).toBeCloseTo(2); // pixel y=90 near the bottom = small data y
    expect(rect.y1).toBeCloseTo(18);
  });

  it('full-cell brush spans the full data range', () => {
    const rect = pixelBrushToData({ x0: 0, x1: 100, y0: 0, y1: 100 }, 100, [1, 4], [0, 1]);
    expect(rect.x0).toBeCloseTo(1);
    expect(rect.x1).toBeCloseTo(4);
    expect(rect.y0).toBeCloseTo(0);
    expect(rect.y1).toBeCloseTo(1);
  });
});
