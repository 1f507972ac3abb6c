/**
 * Scatter-plot matrix over node measures, with brushing and linking.
 *
 * The model is pure data: cells are measure pairs, points live in data
 * space, a brush is an axis-aligned rectangle.  Brushing any cell yields
 * a node set; the app pushes that set into the shared ViewState so every
 * linked view (including the graph) highlights the same nodes.
 *
 * Diagonal cells show value histograms.  Those bins are presentation
 * binning of the cached vectors, not graph statistics; anything
 * authoritative still comes from the server.
 */

import type { MeasureId, NodeId } from './types.js';
import type { MeasureVector } from './filters.js';

export interface SplomPoint {
  id: NodeId;
  x: number;
  y: number;
}

export interface DataRect {
  x0: number;
  x1: number;
  y0: number;
  y1: number;
}

export interface DiagonalBin {
  lo: number;
  hi: number;
  count: number;
}

export class SplomModel {
  readonly measures: MeasureId[];
  private vectors: Map<MeasureId, MeasureVector>;

  constructor(measures: MeasureId[], vectors: Map<MeasureId, MeasureVector>) {
    if (measures.length < 2) {
      throw new Error('a scatter matrix needs at least two measures');
    }
    for (const m of measures) {
      if (!vectors.has(m)) throw new Error(`no cached vector for ${m}`);
    }
    this.measures = [...measures];
    this.vectors = vectors;
  }

  /** Grid side length: an m-measure matrix is m x m cells. */
  get size(): number {
    return this.measures.length;
  }

  isDiagonal(row: number, col: number): boolean {
    return row === col;
  }

  /** Points of the scatter cell at (row, col): x = col measure, y = row measure. */
  cellPoints(row: number, col: number): SplomPoint[] {
    const mx = this.vectors.get(this.measures[col]!)!;
    const my = this.vectors.get(this.measures[row]!)!;
    const pts: SplomPoint[] = [];
    for (const [id, x] of mx) {
      const y = my.get(id);
      if (y !== undefined) pts.push({ id, x, y });
    }
    return pts.sort((a, b) => a.id - b.id);
  }

  /** Value range of one measure, padded so single-value axes still draw. */
  range(measure: MeasureId): [number, number] {
    const vec = this.vectors.get(measure)!;
    let lo = Infinity;
    let hi = -Infinity;
    for (const v of vec.values()) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
    if (lo > hi) return [0, 1];
    if (lo === hi) return [lo - 0.5, hi + 0.5];
    return [lo, hi];
  }

  /**
   * Brush one cell with a data-space rectangle; returns the matching
   * node ids.  Bounds are inclusive (a drag to the cell edge must still
   * catch the extreme point); an empty or inverted rectangle selects
   * nothing.
   */
  brush(row: number, col: number, rect: DataRect): Set<NodeId> {
    const out = new Set<NodeId>();
    if (rect.x1 < rect.x0 || rect.y1 < rect.y0) return out;
    if (rect.x1 === rect.x0 && rect.y1 === rect.y0) return out;
    for (const p of this.cellPoints(row, col)) {
      if (p.x >= rect.x0 && p.x <= rect.x1 && p.y >= rect.y0 && p.y <= rect.y1) {
        out.add(p.id);
      }
    }
    return out;
  }

  /** Display bins for a diagonal cell (equal width over the range). */
  diagonalBins(measure: MeasureId, bins = 10): DiagonalBin[] {
    const vec = this.vectors.get(measure)!;
    const [lo, hi] = this.range(measure);
    const width = (hi - lo) / bins;
    const out: DiagonalBin[] = [];
    for (let i = 0; i < bins; i++) {
      out.push({ lo: lo + i * width, hi: lo + (i + 1) * width, count: 0 });
    }
    for (const v of vec.values()) {
      let i = Math.floor((v - lo) / width);
      if (i >= bins) i = bins - 1; // max lands in the last bin
      if (i < 0) i = 0;
      out[i]!.count++;
    }
    return out;
  }
}

const SVGNS = 'http://www.w3.org/2000/svg';

/**
 * DOM layer over SplomModel: an m x m grid of SVG cells.  Dragging
 * inside any scatter cell brushes it and pushes the matching node set
 * into the callback, which is how the graph view (and every other cell)
 * gets linked.  Grows per-point labels once zoomed past 2x.
 */
export class SplomView {
  readonly root: SVGSVGElement;
  private model: SplomModel;
  private cellSide: number;
  private pad = 8;
  private onSelect: (ids: Set<NodeId>, extend: boolean) => void;
  private highlightIds = new Set<NodeId>();
  private zoom = 1;
  private labels: Map<NodeId, string>;
  private drag: { row: number; col: number; x0: number; y0: number } | null = null;

  constructor(
    host: Element,
    model: SplomModel,
    onSelect: (ids: Set<NodeId>, extend: boolean) => void,
    opts: { cellSide?: number; labels?: Map<NodeId, string> } = {},
  ) {
    this.model = model;
    this.onSelect = onSelect;
    this.cellSide = opts.cellSide ?? 180;
    this.labels = opts.labels ?? new Map();
    const side = model.size * (this.cellSide + this.pad) + this.pad;
    const doc = host.ownerDocument!;
    this.root = doc.createElementNS(SVGNS, 'svg') as SVGSVGElement;
    this.root.setAttribute('class', 'splom');
    this.root.setAttribute('width', String(side));
    this.root.setAttribute('height', String(side));
    host.appendChild(this.root);

    this.root.addEventListener('mousedown', (ev) => this.onDown(ev as MouseEvent));
    this.root.addEventListener('mouseup', (ev) => this.onUp(ev as MouseEvent));
    this.render();
  }

  /** Linking input: these nodes draw highlighted in every cell. */
  setHighlight(ids: Iterable<NodeId>): void {
    this.highlightIds = new Set(ids);
    this.render();
  }

  /** Semantic zoom: labels appear past 2x. */
  setZoom(z: number): void {
    this.zoom = z;
    this.render();
  }

  private cellOrigin(row: number, col: number): [number, number] {
    return [
      this.pad + col * (this.cellSide + this.pad),
      this.pad + row * (this.cellSide + this.pad),
    ];
  }

  private cellAt(px: number, py: number): { row: number; col: number; x: number; y: number } | null {
    const stride = this.cellSide + this.pad;
    const col = Math.floor((px - this.pad) / stride);
    const row = Math.floor((py - this.pad) / stride);
    if (row < 0 || col < 0 || row >= this.model.size || col >= this.model.size) return null;
    const [ox, oy] = this.cellOrigin(row, col);
    const x = px - ox;
    const y = py - oy;
    if (x < 0 || y < 0 || x > this.cellSide || y > this.cellSide) return null;
    return { row, col, x, y };
  }

  private onDown(ev: MouseEvent): void {
    const r = this.root.getBoundingClientRect();
    const hit = this.cellAt(ev.clientX - r.left, ev.clientY - r.top);
    if (hit && !this.model.isDiagonal(hit.row, hit.col)) {
      this.drag = { row: hit.row, col: hit.col, x0: hit.x, y0: hit.y };
    }
  }

  private onUp(ev: MouseEvent): void {
    if (!this.drag) return;
    const r = this.root.getBoundingClientRect();
    const { row, col, x0, y0 } = this.drag;
    this.drag = null;
    const [ox, oy] = this.cellOrigin(row, col);
    const x1 = Math.min(Math.max(ev.clientX - r.left - ox, 0), this.cellSide);
    const y1 = Math.min(Math.max(ev.clientY - r.top - oy, 0), this.cellSide);
    const rect = pixelBrushToData(
      { x0, x1, y0, y1 },
      this.cellSide,
      this.model.range(this.model.measures[col]!),
      this.model.range(this.model.measures[row]!),
    );
    this.onSelect(this.model.brush(row, col, rect), ev.shiftKey);
  }

  render(): void {
    const doc = this.root.ownerDocument;
    this.root.textContent = '';
    const m = this.model.size;
    for (let row = 0; row < m; row++) {
      for (let col = 0; col < m; col++) {
        const [ox, oy] = this.cellOrigin(row, col);
        const cell = doc.createElementNS(SVGNS, 'g') as SVGGElement;
        cell.setAttribute('class', this.model.isDiagonal(row, col) ? 'cell diagonal' : 'cell');
        cell.setAttribute('data-cell', `${row},${col}`);
        cell.setAttribute('transform', `translate(${ox},${oy})`);
        const frame = doc.createElementNS(SVGNS, 'rect');
        frame.setAttribute('width', String(this.cellSide));
        frame.setAttribute('height', String(this.cellSide));
        frame.setAttribute('fill', 'none');
        frame.setAttribute('stroke', '#cccccc');
        cell.appendChild(frame);
        if (this.model.isDiagonal(row, col)) {
          this.renderDiagonal(cell, row);
        } else {
          this.renderScatter(cell, row, col);
        }
        this.root.appendChild(cell);
      }
    }
  }

  private renderScatter(cell: SVGGElement, row: number, col: number): void {
    const doc = cell.ownerDocument;
    const xr = this.model.range(this.model.measures[col]!);
    const yr = this.model.range(this.model.measures[row]!);
    const sx = (v: number) => ((v - xr[0]) / (xr[1] - xr[0])) * this.cellSide;
    const sy = (v: number) => (1 - (v - yr[0]) / (yr[1] - yr[0])) * this.cellSide;
    for (const p of this.model.cellPoints(row, col)) {
      const dot = doc.createElementNS(SVGNS, 'circle');
      const hot = this.highlightIds.has(p.id);
      dot.setAttribute('class', hot ? 'point linked' : 'point');
      dot.setAttribute('data-node-id', String(p.id));
      dot.setAttribute('cx', String(sx(p.x)));
      dot.setAttribute('cy', String(sy(p.y)));
      dot.setAttribute('r', hot ? '4' : '2.5');
      dot.setAttribute('fill', hot ? '#d4762c' : '#4878a8');
      cell.appendChild(dot);
      if (this.zoom >= 2) {
        const label = doc.createElementNS(SVGNS, 'text');
        label.setAttribute('class', 'point-label');
        label.setAttribute('x', String(sx(p.x) + 4));
        label.setAttribute('y', String(sy(p.y) - 4));
        label.textContent = this.labels.get(p.id) ?? String(p.id);
        cell.appendChild(label);
      }
    }
  }

  private renderDiagonal(cell: SVGGElement, row: number): void {
    const doc = cell.ownerDocument;
    const bins = this.model.diagonalBins(this.model.measures[row]!);
    const peak = Math.max(...bins.map((b) => b.count), 1);
    const w = this.cellSide / bins.length;
    bins.forEach((b, i) => {
      const h = (b.count / peak) * (this.cellSide - 6);
      const bar = doc.createElementNS(SVGNS, 'rect');
      bar.setAttribute('class', 'bin');
      bar.setAttribute('x', String(i * w + 1));
      bar.setAttribute('y', String(this.cellSide - h));
      bar.setAttribute('width', String(Math.max(w - 2, 1)));
      bar.setAttribute('height', String(h));
      bar.setAttribute('fill', '#7ba2c4');
      cell.appendChild(bar);
    });
  }
}

/**
 * Map a pixel-space brush inside a square cell onto the cell's data
 * rectangle.  Pixel y grows downward, data y upward, hence the flip.
 */
export function pixelBrushToData(
  px: { x0: number; x1: number; y0: number; y1: number },
  cellSide: number,
  xRange: [number, number],
  yRange: [number, number],
): DataRect {
  const sx = (p: number) => xRange[0] + (p / cellSide) * (xRange[1] - xRange[0]);
  const sy = (p: number) => yRange[0] + (1 - p / cellSide) * (yRange[1] - yRange[0]);
  return {
    x0: sx(Math.min(px.x0, px.x1)),
    x1: sx(Math.max(px.x0, px.x1)),
    y0: sy(Math.max(px.y0, px.y1)),
    y1: sy(Math.min(px.y0, px.y1)),
  };
}
