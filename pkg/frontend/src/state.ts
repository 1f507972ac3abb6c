/**
 * View state for one open graph.
 *
 * Pure data plus invariant-preserving updates; rendering subscribes and
 * reacts.  Invariants kept here so no component has to re-check them:
 *   - selection is always a subset of the current node set
 *   - slider positions stay inside the measure's observed [min, max]
 *   - interactions are reversible: moving a slider (or brush) and moving
 *     it back yields a state that compares equal
 */

import type { EdgeId, FilterExprJson, MeasureId, NodeId } from './types.js';
import type { EdgeStub, Kept, MeasureVector } from './filters.js';
import { evaluateChain } from './filters.js';

export interface SliderFilter {
  target: 'node' | 'edge';
  measure: MeasureId;
  op: FilterExprJson['op'];
  position: number;
}

export interface TimeBrush {
  t0: number;
  t1: number; // half-open [t0, t1)
}

export interface Camera {
  x: number;
  y: number;
  k: number; // zoom factor
}

export type LayoutMap = Map<NodeId, [number, number]>;

export interface NodeStub {
  id: NodeId;
  label: string;
  ts?: number;
}

export type TimedEdge = EdgeStub & { ts?: number };

type Listener = () => void;

export class ViewState {
  readonly graphId: string;
  colorBy: MeasureId | null = null;
  sizeBy: MeasureId | null = null;

  private nodes = new Map<NodeId, NodeStub>();
  private edges = new Map<EdgeId, TimedEdge>();
  private selected = new Set<NodeId>();
  private sliders: SliderFilter[] = [];
  private brush: TimeBrush | null = null;

  layout: LayoutMap = new Map();
  camera: Camera = { x: 0, y: 0, k: 1 };

  /** Measure vectors cached from the server, keyed by measure id. */
  readonly vectors = new Map<MeasureId, MeasureVector>();

  private listeners: Listener[] = [];

  constructor(graphId: string) {
    this.graphId = graphId;
  }

  // ---- topology ------------------------------------------------------

  setTopology(nodes: NodeStub[], edges: TimedEdge[]): void {
    this.nodes = new Map(nodes.map((n) => [n.id, n]));
    this.edges = new Map(edges.map((e) => [e.id, e]));
    // selection invariant: drop ids that no longer exist
    this.selected = new Set([...this.selected].filter((n) => this.nodes.has(n)));
    for (const nid of [...this.layout.keys()]) {
      if (!this.nodes.has(nid)) this.layout.delete(nid);
    }
    this.emit();
  }

  nodeIds(): NodeId[] {
    return [...this.nodes.keys()];
  }

  edgeList(): TimedEdge[] {
    return [...this.edges.values()];
  }

  node(id: NodeId): NodeStub | undefined {
    return this.nodes.get(id);
  }

  edge(id: EdgeId): TimedEdge | undefined {
    return this.edges.get(id);
  }

  get nodeCount(): number {
    return this.nodes.size;
  }

  get edgeCount(): number {
    return this.edges.size;
  }

  neighbors(id: NodeId): Set<NodeId> {
    const out = new Set<NodeId>();
    for (const e of this.edges.values()) {
      if (e.source === id) out.add(e.target);
      else if (e.target === id) out.add(e.source);
    }
    return out;
  }

  // ---- selection -------------------------------------------------------

  selection(): Set<NodeId> {
    return new Set(this.selected);
  }

  /** Brush result replaces the selection; shift extends it (union). */
  select(ids: Iterable<NodeId>, extend = false): void {
    const picked = [...ids].filter((n) => this.nodes.has(n));
    this.selected = extend
      ? new Set([...this.selected, ...picked])
      : new Set(picked);
    this.emit();
  }

  clearSelection(): void {
    if (!this.selected.size) return;
    this.selected.clear();
    this.emit();
  }

  // ---- sliders -----------------------------------------------------------

  sliderChain(): SliderFilter[] {
    return this.sliders.map((s) => ({ ...s }));
  }

  /**
   * Set (or add) the slider for a measure.  The position is clamped into
   * the cached vector's [min, max] so a slider can never exclude by
   * pointing outside the value range.
   */
  setSlider(slider: SliderFilter): void {
    const vec = this.vectors.get(slider.measure);
    let pos = slider.position;
    if (vec && vec.size) {
      let lo = Infinity;
      let hi = -Infinity;
      for (const v of vec.values()) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
      }
      pos = Math.min(Math.max(pos, lo), hi);
    }
    const next = { ...slider, position: pos };
    const at = this.sliders.findIndex(
      (s) => s.measure === slider.measure && s.target === slider.target,
    );
    if (at >= 0) this.sliders[at] = next;
    else this.sliders.push(next);
    this.emit();
  }

  removeSlider(target: 'node' | 'edge', measure: MeasureId): void {
    this.sliders = this.sliders.filter(
      (s) => !(s.target === target && s.measure === measure),
    );
    this.emit();
  }

  // ---- time brush ----------------------------------------------------------

  timeBrush(): TimeBrush | null {
    return this.brush ? { ...this.brush } : null;
  }

  setTimeBrush(brush: TimeBrush | null): void {
    this.brush = brush ? { ...brush } : null;
    this.emit();
  }

  // ---- visibility ------------------------------------------------------------

  /**
   * The rendered element set: slider chain evaluated client-side against
   * cached vectors, then the time brush drops edges stamped outside
   * [t0, t1).  Unstamped edges always survive the brush.
   */
  visible(): Kept {
    const chain: FilterExprJson[] = this.sliders.map((s) => ({
      target: s.target,
      measure: s.measure,
      op: s.op,
      threshold: s.position,
    }));
    const kept = evaluateChain(
      this.nodes.keys(),
      this.edges.values(),
      chain,
      this.vectors,
    );
    if (this.brush) {
      const { t0, t1 } = this.brush;
      for (const e of this.edges.values()) {
        if (e.ts !== undefined && (e.ts < t0 || e.ts >= t1)) {
          kept.edges.delete(e.id);
        }
      }
    }
    return kept;
  }

  // ---- change notification -----------------------------------------------------

  onChange(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  /** Structural fingerprint used by reversibility checks. */
  snapshot(): string {
    return JSON.stringify({
      selection: [...this.selected].sort((a, b) => a - b),
      sliders: this.sliders,
      brush: this.brush,
      colorBy: this.colorBy,
      sizeBy: this.sizeBy,
      camera: this.camera,
    });
  }
}
