/**
 * Timeline strip: edge-count histogram over time with a brush that sets
 * the view's time window.  Hidden entirely when the graph carries no
 * timestamps.
 */

import type { HistogramJson } from './types.js';
import { ViewState } from './state.js';

const SVGNS = 'http://www.w3.org/2000/svg';

export class Timeline {
  readonly root: SVGSVGElement;
  private state: ViewState;
  private hist: HistogramJson | null = null;
  private width: number;
  private height: number;
  private dragFrom: number | null = null;

  constructor(host: Element, state: ViewState, opts: { width?: number; height?: number } = {}) {
    this.state = state;
    this.width = opts.width ?? 800;
    this.height = opts.height ?? 60;
    const doc = host.ownerDocument!;
    this.root = doc.createElementNS(SVGNS, 'svg') as SVGSVGElement;
    this.root.setAttribute('class', 'timeline');
    this.root.setAttribute('width', String(this.width));
    this.root.setAttribute('height', String(this.height));
    this.root.style.display = 'none';
    host.appendChild(this.root);

    this.root.addEventListener('mousedown', (ev) => {
      this.dragFrom = this.toTime((ev as MouseEvent).clientX - this.left());
    });
    this.root.addEventListener('mouseup', (ev) => {
      if (this.dragFrom === null) return;
      const a = this.dragFrom;
      const b = this.toTime((ev as MouseEvent).clientX - this.left());
      this.dragFrom = null;
      if (a === b) {
        this.state.setTimeBrush(null); // click clears
      } else {
        this.state.setTimeBrush({ t0: Math.min(a, b), t1: Math.max(a, b) });
      }
      this.render();
    });
  }

  get visible(): boolean {
    return this.hist !== null;
  }

  /** Give the strip its histogram; null hides it (no temporal data). */
  setHistogram(hist: HistogramJson | null): void {
    this.hist = hist;
    this.root.style.display = hist ? '' : 'none';
    this.render();
  }

  timeSpan(): [number, number] | null {
    if (!this.hist || this.hist.bin_edges.length < 2) return null;
    return [this.hist.bin_edges[0]!, this.hist.bin_edges[this.hist.bin_edges.length - 1]!];
  }

  private left(): number {
    return this.root.getBoundingClientRect().left;
  }

  private toTime(px: number): number {
    const span = this.timeSpan();
    if (!span) return 0;
    const t = span[0] + (px / this.width) * (span[1] - span[0]);
    return Math.min(Math.max(t, span[0]), span[1]);
  }

  private toPx(t: number): number {
    const span = this.timeSpan();
    if (!span || span[1] === span[0]) return 0;
    return ((t - span[0]) / (span[1] - span[0])) * this.width;
  }

  render(): void {
    const doc = this.root.ownerDocument;
    this.root.textContent = '';
    if (!this.hist) return;
    const { bin_edges: edges, counts } = this.hist;
    const peak = Math.max(...counts, 1);
    for (let i = 0; i < counts.length; i++) {
      const bar = doc.createElementNS(SVGNS, 'rect');
      const x0 = this.toPx(edges[i]!);
      const x1 = this.toPx(edges[i + 1]!);
      const h = (counts[i]! / peak) * (this.height - 4);
      bar.setAttribute('class', 'bin');
      bar.setAttribute('x', String(x0));
      bar.setAttribute('y', String(this.height - h));
      bar.setAttribute('width', String(Math.max(x1 - x0 - 1, 1)));
      bar.setAttribute('height', String(h));
      bar.setAttribute('fill', '#4878a8');
      this.root.appendChild(bar);
    }
    const brush = this.state.timeBrush();
    if (brush) {
      const sel = doc.createElementNS(SVGNS, 'rect');
      sel.setAttribute('class', 'window');
      sel.setAttribute('x', String(this.toPx(brush.t0)));
      sel.setAttribute('y', '0');
      sel.setAttribute('width', String(this.toPx(brush.t1) - this.toPx(brush.t0)));
      sel.setAttribute('height', String(this.height));
      sel.setAttribute('fill', '#d4762c');
      sel.setAttribute('fill-opacity', '0.25');
      this.root.appendChild(sel);
    }
  }
}
