/**
 * SVG graph view: rendering, brushing, dragging, hover profiles.
 *
 * The view owns its DOM subtree and redraws from ViewState on change.
 * It never talks to the server itself; destructive interactions are
 * delegated through callbacks so the app layer can send one atomic
 * mutation batch per gesture.
 */

import type { NodeId } from './types.js';
import { ViewState } from './state.js';

export interface GraphViewCallbacks {
  /** 'D' with a selection: the app deletes those nodes in one batch. */
  onDeleteSelection?: (ids: NodeId[]) => void;
  /** Double-click on a node opens the attribute editor. */
  onEditNode?: (id: NodeId) => void;
  /** Node drag finished (layout already updated in state). */
  onNodeMoved?: (id: NodeId, at: [number, number]) => void;
}

const SVGNS = 'http://www.w3.org/2000/svg';

interface FitTransform {
  px: (x: number) => number;
  py: (y: number) => number;
  invX: (px: number) => number;
  invY: (py: number) => number;
}

export class GraphView {
  readonly svg: SVGSVGElement;
  private state: ViewState;
  private callbacks: GraphViewCallbacks;
  private width: number;
  private height: number;
  private margin = 24;

  private edgeGroup: SVGGElement;
  private nodeGroup: SVGGElement;
  private brushRect: SVGRectElement;
  private tooltip: SVGTextElement;

  private fit: FitTransform | null = null;
  private brushStart: [number, number] | null = null;
  private dragging: { id: NodeId; moved: boolean } | null = null;
  private hovered: NodeId | null = null;
  private unsubscribe: () => void;

  constructor(
    host: Element,
    state: ViewState,
    opts: { width?: number; height?: number; callbacks?: GraphViewCallbacks } = {},
  ) {
    this.state = state;
    this.callbacks = opts.callbacks ?? {};
    this.width = opts.width ?? 800;
    this.height = opts.height ?? 600;

    const doc = host.ownerDocument!;
    this.svg = doc.createElementNS(SVGNS, 'svg') as SVGSVGElement;
    this.svg.setAttribute('class', 'graph-view');
    this.svg.setAttribute('width', String(this.width));
    this.svg.setAttribute('height', String(this.height));
    this.svg.setAttribute('tabindex', '0'); // focusable for key events

    this.edgeGroup = doc.createElementNS(SVGNS, 'g') as SVGGElement;
    this.edgeGroup.setAttribute('class', 'edges');
    this.nodeGroup = doc.createElementNS(SVGNS, 'g') as SVGGElement;
    this.nodeGroup.setAttribute('class', 'nodes');
    this.brushRect = doc.createElementNS(SVGNS, 'rect') as SVGRectElement;
    this.brushRect.setAttribute('class', 'brush');
    this.brushRect.setAttribute('display', 'none');
    this.tooltip = doc.createElementNS(SVGNS, 'text') as SVGTextElement;
    this.tooltip.setAttribute('class', 'tooltip');
    this.tooltip.setAttribute('display', 'none');

    this.svg.append(this.edgeGroup, this.nodeGroup, this.brushRect, this.tooltip);
    host.appendChild(this.svg);

    this.svg.addEventListener('mousedown', (ev) => this.onMouseDown(ev as MouseEvent));
    this.svg.addEventListener('mousemove', (ev) => this.onMouseMove(ev as MouseEvent));
    this.svg.addEventListener('mouseup', (ev) => this.onMouseUp(ev as MouseEvent));
    this.svg.addEventListener('dblclick', (ev) => this.onDoubleClick(ev as MouseEvent));
    this.svg.addEventListener('keydown', (ev) => this.onKeyDown(ev as KeyboardEvent));

    this.unsubscribe = state.onChange(() => this.render());
    this.render();
  }

  dispose(): void {
    this.unsubscribe();
    this.svg.remove();
  }

  // ---- coordinate mapping ---------------------------------------------

  private computeFit(): FitTransform {
    const layout = this.state.layout;
    let lo = [Infinity, Infinity];
    let hi = [-Infinity, -Infinity];
    for (const [x, y] of layout.values()) {
      lo = [Math.min(lo[0]!, x), Math.min(lo[1]!, y)];
      hi = [Math.max(hi[0]!, x), Math.max(hi[1]!, y)];
    }
    if (lo[0]! > hi[0]!) {
      lo = [0, 0];
      hi = [1, 1];
    }
    const spanX = hi[0]! - lo[0]! || 1;
    const spanY = hi[1]! - lo[1]! || 1;
    const m = this.margin;
    const { x: cx, y: cy, k } = this.state.camera;
    const fx = (this.width - 2 * m) / spanX;
    const fy = (this.height - 2 * m) / spanY;
    return {
      px: (x) => (m + (x - lo[0]!) * fx) * k + cx,
      py: (y) => (m + (y - lo[1]!) * fy) * k + cy,
      invX: (px) => ((px - cx) / k - m) / fx + lo[0]!,
      invY: (py) => ((py - cy) / k - m) / fy + lo[1]!,
    };
  }

  private local(ev: MouseEvent): [number, number] {
    const r = this.svg.getBoundingClientRect();
    return [ev.clientX - r.left, ev.clientY - r.top];
  }

  // ---- rendering ----------------------------------------------------------

  render(): void {
    const doc = this.svg.ownerDocument;
    const fit = (this.fit = this.computeFit());
    const kept = this.state.visible();
    const selection = this.state.selection();
    const hoverhood =
      this.hovered !== null && this.state.node(this.hovered)
        ? this.state.neighbors(this.hovered).add(this.hovered)
        : null;

    this.edgeGroup.textContent = '';
    for (const e of this.state.edgeList().sort((a, b) => a.id - b.id)) {
      const pa = this.state.layout.get(e.source);
      const pb = this.state.layout.get(e.target);
      if (!pa || !pb) continue;
      const line = doc.createElementNS(SVGNS, 'line');
      line.setAttribute('data-edge-id', String(e.id));
      line.setAttribute('x1', fmt(fit.px(pa[0])));
      line.setAttribute('y1', fmt(fit.py(pa[1])));
      line.setAttribute('x2', fmt(fit.px(pb[0])));
      line.setAttribute('y2', fmt(fit.py(pb[1])));
      const classes = ['edge'];
      if (!kept.edges.has(e.id)) classes.push('faded');
      if (hoverhood && !(hoverhood.has(e.source) && hoverhood.has(e.target))) {
        classes.push('dimmed');
      }
      line.setAttribute('class', classes.join(' '));
      line.setAttribute('stroke', '#999999');
      line.setAttribute('stroke-opacity', kept.edges.has(e.id) ? '0.6' : '0.08');
      this.edgeGroup.appendChild(line);
    }

    this.nodeGroup.textContent = '';
    for (const nid of this.state.nodeIds().sort((a, b) => a - b)) {
      const pos = this.state.layout.get(nid);
      if (!pos) continue;
      const c = doc.createElementNS(SVGNS, 'circle');
      c.setAttribute('data-node-id', String(nid));
      c.setAttribute('cx', fmt(fit.px(pos[0])));
      c.setAttribute('cy', fmt(fit.py(pos[1])));
      c.setAttribute('r', String(this.radius(nid)));
      const classes = ['node'];
      if (!kept.nodes.has(nid)) classes.push('faded');
      if (selection.has(nid)) classes.push('selected');
      if (hoverhood && !hoverhood.has(nid)) classes.push('dimmed');
      c.setAttribute('class', classes.join(' '));
      c.setAttribute('fill', this.fill(nid));
      c.setAttribute('fill-opacity', kept.nodes.has(nid) ? '1' : '0.15');
      c.setAttribute('stroke', selection.has(nid) ? '#d4762c' : '#2c3e50');
      c.setAttribute('stroke-width', selection.has(nid) ? '3' : '1');
      this.nodeGroup.appendChild(c);
    }
  }

  private radius(nid: NodeId): number {
    const base = 6;
    if (!this.state.sizeBy) return base;
    const vec = this.state.vectors.get(this.state.sizeBy);
    if (!vec || !vec.size) return base;
    const v = vec.get(nid) ?? 0;
    let lo = Infinity;
    let hi = -Infinity;
    for (const value of vec.values()) {
      lo = Math.min(lo, value);
      hi = Math.max(hi, value);
    }
    if (hi <= lo) return base;
    return 4 + 8 * ((v - lo) / (hi - lo));
  }

  private fill(nid: NodeId): string {
    if (!this.state.colorBy) return '#4878a8';
    const vec = this.state.vectors.get(this.state.colorBy);
    if (!vec || !vec.size) return '#4878a8';
    const v = vec.get(nid) ?? 0;
    let lo = Infinity;
    let hi = -Infinity;
    for (const value of vec.values()) {
      lo = Math.min(lo, value);
      hi = Math.max(hi, value);
    }
    const t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
    // cool blue (240) to warm red (0), same ramp the server export uses
    const hue = 240 * (1 - t);
    return `hsl(${Math.round(hue)}, 62%, 52%)`;
  }

  // ---- hit testing ------------------------------------------------------

  private nodeAt(px: number, py: number): NodeId | null {
    if (!this.fit) return null;
    let best: NodeId | null = null;
    let bestDist = Infinity;
    for (const nid of this.state.nodeIds()) {
      const pos = this.state.layout.get(nid);
      if (!pos) continue;
      const d = Math.hypot(this.fit.px(pos[0]) - px, this.fit.py(pos[1]) - py);
      const r = this.radius(nid) + 3;
      if (d <= r && d < bestDist) {
        best = nid;
        bestDist = d;
      }
    }
    return best;
  }

  private nodesInRect(x0: number, y0: number, x1: number, y1: number): NodeId[] {
    if (!this.fit) return [];
    const lo = [Math.min(x0, x1), Math.min(y0, y1)];
    const hi = [Math.max(x0, x1), Math.max(y0, y1)];
    const out: NodeId[] = [];
    for (const nid of this.state.nodeIds()) {
      const pos = this.state.layout.get(nid);
      if (!pos) continue;
      const px = this.fit.px(pos[0]);
      const py = this.fit.py(pos[1]);
      if (px >= lo[0]! && px <= hi[0]! && py >= lo[1]! && py <= hi[1]!) {
        out.push(nid);
      }
    }
    return out;
  }

  // ---- interactions --------------------------------------------------------

  private onMouseDown(ev: MouseEvent): void {
    const [x, y] = this.local(ev);
    const hit = this.nodeAt(x, y);
    if (hit !== null) {
      this.dragging = { id: hit, moved: false };
      return;
    }
    this.brushStart = [x, y];
    this.brushRect.setAttribute('display', 'inline');
    this.updateBrushRect(x, y, x, y);
  }

  private onMouseMove(ev: MouseEvent): void {
    const [x, y] = this.local(ev);
    if (this.dragging && this.fit) {
      this.dragging.moved = true;
      this.state.layout.set(this.dragging.id, [this.fit.invX(x), this.fit.invY(y)]);
      this.render();
      return;
    }
    if (this.brushStart) {
      this.updateBrushRect(this.brushStart[0], this.brushStart[1], x, y);
      return;
    }
    const hit = this.nodeAt(x, y);
    if (hit !== this.hovered) {
      this.hovered = hit;
      this.updateTooltip(x, y);
      this.render();
    }
  }

  private onMouseUp(ev: MouseEvent): void {
    const [x, y] = this.local(ev);
    if (this.dragging) {
      const { id, moved } = this.dragging;
      this.dragging = null;
      if (moved) {
        const at = this.state.layout.get(id);
        if (at) this.callbacks.onNodeMoved?.(id, at);
        this.render();
      } else {
        // plain click: select just this node (shift extends)
        this.state.select([id], ev.shiftKey);
      }
      return;
    }
    if (this.brushStart) {
      const [x0, y0] = this.brushStart;
      this.brushStart = null;
      this.brushRect.setAttribute('display', 'none');
      const picked = this.nodesInRect(x0, y0, x, y);
      if (picked.length || !ev.shiftKey) {
        this.state.select(picked, ev.shiftKey);
      }
    }
  }

  private onDoubleClick(ev: MouseEvent): void {
    const [x, y] = this.local(ev);
    const hit = this.nodeAt(x, y);
    if (hit !== null) this.callbacks.onEditNode?.(hit);
  }

  private onKeyDown(ev: KeyboardEvent): void {
    if (ev.key === 'd' || ev.key === 'D') {
      const ids = [...this.state.selection()].sort((a, b) => a - b);
      if (ids.length) this.callbacks.onDeleteSelection?.(ids);
    } else if (ev.key === 'Escape') {
      this.state.clearSelection();
    }
  }

  private updateBrushRect(x0: number, y0: number, x1: number, y1: number): void {
    this.brushRect.setAttribute('x', String(Math.min(x0, x1)));
    this.brushRect.setAttribute('y', String(Math.min(y0, y1)));
    this.brushRect.setAttribute('width', String(Math.abs(x1 - x0)));
    this.brushRect.setAttribute('height', String(Math.abs(y1 - y0)));
    this.brushRect.setAttribute('fill', '#4878a8');
    this.brushRect.setAttribute('fill-opacity', '0.15');
    this.brushRect.setAttribute('stroke', '#4878a8');
  }

  private updateTooltip(px: number, py: number): void {
    if (this.hovered === null) {
      this.tooltip.setAttribute('display', 'none');
      return;
    }
    const node = this.state.node(this.hovered);
    if (!node) return;
    const parts = [`${node.label}`];
    for (const mid of ['degree', 'betweenness', 'kcore', 'pagerank'] as const) {
      const vec = this.state.vectors.get(mid);
      const v = vec?.get(this.hovered);
      if (v !== undefined) parts.push(`${mid} ${fmt(v)}`);
    }
    this.tooltip.textContent = parts.join(' | ');
    this.tooltip.setAttribute('x', String(px + 12));
    this.tooltip.setAttribute('y', String(py - 8));
    this.tooltip.setAttribute('display', 'inline');
  }

  /** Tooltip text, exposed for assertions and debugging. */
  tooltipText(): string | null {
    return this.tooltip.getAttribute('display') === 'none'
      ? null
      : this.tooltip.textContent;
  }
}

function fmt(v: number): string {
  return String(Math.round(v * 100) / 100);
}
