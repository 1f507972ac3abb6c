/**
 * Application layer: one open graph, its view state, and every server
 * interaction.
 *
 * The rules that matter:
 *   - anything that mutates the graph goes through the mutation endpoints
 *     as one atomic batch per gesture;
 *   - the client never computes authoritative statistics, it caches
 *     measure vectors from the server and re-fetches the ones a mutation
 *     response or event reports changed;
 *   - the view version converges to the server's event-stream version
 *     (own mutations fast-forward the queue so the echo is not re-applied).
 */

import { ApiClient, ApiError } from './api.js';
import { EventQueue } from './events.js';
import { toVector } from './filters.js';
import { forceLayout } from './layout.js';
import { MacroPanel } from './panel.js';
import { ViewState } from './state.js';
import type { NodeStub, TimedEdge } from './state.js';
import type {
  Attrs,
  GeneratorSpecJson,
  GraphCreated,
  GraphEvent,
  HistogramJson,
  InsertResult,
  MeasureId,
  MutationResult,
  Mutation,
  NodeId,
} from './types.js';

export interface AppOptions {
  layoutSeed?: number;
  layoutIterations?: number;
  /** Measures fetched eagerly on load; degree drives the default slider. */
  preloadMeasures?: MeasureId[];
}

export class App {
  readonly api: ApiClient;
  readonly panel: MacroPanel;
  state: ViewState | null = null;

  private opts: Required<AppOptions>;
  private queue: EventQueue | null = null;
  private stopEvents: (() => void) | null = null;
  private refreshing: Promise<void> = Promise.resolve();

  /** Last surfaced error, toast-ready ("parse-error at line 1, ..."). */
  lastError: string | null = null;

  constructor(api: ApiClient, panelHost: Element, opts: AppOptions = {}) {
    this.api = api;
    this.panel = new MacroPanel(panelHost);
    this.opts = {
      layoutSeed: opts.layoutSeed ?? 0,
      layoutIterations: opts.layoutIterations ?? 60,
      preloadMeasures: opts.preloadMeasures ?? ['degree'],
    };
  }

  get graphId(): string | null {
    return this.state?.graphId ?? null;
  }

  /** Event-stream version the view has converged to. */
  get viewVersion(): number {
    return this.queue?.version ?? 0;
  }

  // ---- loading ---------------------------------------------------------

  /**
   * Drop handler: upload the file, render, populate the panel.  On a
   * parse failure the server's positioned message lands in lastError and
   * the current view is left untouched.
   */
  async openFile(data: string | Uint8Array | Blob, filename?: string): Promise<void> {
    let created: GraphCreated;
    try {
      created = await this.api.uploadGraph(data, filename);
    } catch (e) {
      this.fail(e);
      throw e;
    }
    await this.load(created);
  }

  async openGenerated(spec: GeneratorSpecJson): Promise<void> {
    let created: GraphCreated;
    try {
      created = await this.api.generateGraph(spec);
    } catch (e) {
      this.fail(e);
      throw e;
    }
    await this.load(created);
  }

  private async load(created: GraphCreated): Promise<void> {
    this.close();
    const gid = created['graph-id'];
    const state = new ViewState(gid);
    this.state = state;

    await this.refreshTopology();
    state.layout = forceLayout(state.nodeIds(), state.edgeList(), {
      seed: this.opts.layoutSeed,
      iterations: this.opts.layoutIterations,
    });
    for (const mid of this.opts.preloadMeasures) {
      await this.ensureMeasure(mid);
    }
    this.panel.setSummary(await this.api.summary(gid));

    const queue = new EventQueue(0, (ev) => this.onRemoteEvent(ev));
    this.queue = queue;
    this.stopEvents = this.api.subscribeEvents(gid, (ev) => queue.push(ev), {
      onError: (e) => this.fail(e),
    });
    // wire redraws after the initial state is complete
    state.setTopology(
      state.nodeIds().map((id) => state.node(id)!),
      state.edgeList(),
    );
  }

  close(): void {
    this.stopEvents?.();
    this.stopEvents = null;
    this.queue = null;
    this.state = null;
  }

  // ---- topology and measures ----------------------------------------------

  async refreshTopology(): Promise<void> {
    const state = this.must();
    const doc = await this.api.graphData(state.graphId);
    const nodes: NodeStub[] = doc.nodes.map((n) => ({
      id: n.id,
      label: n.label,
      ...(n.ts !== undefined ? { ts: n.ts } : {}),
    }));
    const edges: TimedEdge[] = doc.links.map((l) => ({
      id: l.id,
      source: l.source,
      target: l.target,
      ...(l.ts !== undefined ? { ts: l.ts } : {}),
    }));
    state.setTopology(nodes, edges);
  }

  /** Fetch and cache a measure vector (no-op when already cached). */
  async ensureMeasure(mid: MeasureId, force = false): Promise<void> {
    const state = this.must();
    if (!force && state.vectors.has(mid)) return;
    const target = mid === 'edge-triangles' || mid === 'triangle-core' ? 'edge' : 'node';
    const res = await this.api.measure(state.graphId, target, mid);
    state.vectors.set(mid, toVector(res.values));
  }

  // ---- mutation gestures -------------------------------------------------------

  /** 'D' on a brush selection: one atomic batch, panel from deltas. */
  async deleteSelection(): Promise<MutationResult | null> {
    const state = this.must();
    const ids = [...state.selection()].sort((a, b) => a - b);
    if (!ids.length) return null;
    const batch: Mutation[] = ids.map((id) => ({ kind: 'delete-node', id }));
    const res = await this.send(batch);
    state.clearSelection();
    return res;
  }

  /** Attribute editor commit: one update-attrs mutation. */
  async updateNodeAttrs(id: NodeId, attrs: Attrs): Promise<MutationResult> {
    return this.send([{ kind: 'update-attrs', target: 'node', id, attrs }]);
  }

  private async send(batch: Mutation[]): Promise<MutationResult> {
    const state = this.must();
    let res: MutationResult;
    try {
      res = await this.api.mutate(state.graphId, batch);
    } catch (e) {
      this.fail(e);
      throw e;
    }
    this.queue?.fastForward(res.version);
    this.panel.applyDeltas(res.changed);
    await this.afterMutation(Object.keys(res.changed), res.stale);
    return res;
  }

  /** Generator panel: insert a pattern, optionally attached to the selection. */
  async insertPattern(spec: GeneratorSpecJson, attachToSelection = false): Promise<InsertResult> {
    const state = this.must();
    const attach = attachToSelection
      ? [...state.selection()].sort((a, b) => a - b)
      : undefined;
    let res: InsertResult;
    try {
      res = await this.api.insertPattern(state.graphId, spec, attach);
    } catch (e) {
      this.fail(e);
      throw e;
    }
    this.queue?.fastForward(res.version);
    this.panel.applyDeltas(res.changed);

    // seat the new nodes near their attachment before the refetch renders
    const center = this.centroid(attach && attach.length ? attach : state.nodeIds());
    const fresh = res['new-nodes'];
    fresh.forEach((nid, i) => {
      const angle = (2 * Math.PI * i) / Math.max(fresh.length, 1);
      state.layout.set(nid, [
        center[0] + 0.08 * Math.cos(angle),
        center[1] + 0.08 * Math.sin(angle),
      ]);
    });
    await this.afterMutation(Object.keys(res.changed), res.stale);
    return res;
  }

  private async afterMutation(changed: string[], stale: string[]): Promise<void> {
    await this.refreshTopology();
    await this.refetchMeasures(new Set([...changed, ...stale]));
  }

  private async refetchMeasures(dirty: Set<string>): Promise<void> {
    const state = this.must();
    for (const mid of [...state.vectors.keys()]) {
      // topology changes always dirty the id space, so a missing hint
      // still refreshes whatever is cached
      if (dirty.size === 0 || dirty.has(mid) || dirty.has('node_count') || dirty.has('edge_count')) {
        await this.ensureMeasure(mid, true);
      }
    }
  }

  private centroid(ids: NodeId[]): [number, number] {
    const state = this.must();
    let sx = 0;
    let sy = 0;
    let k = 0;
    for (const id of ids) {
      const p = state.layout.get(id);
      if (!p) continue;
      sx += p[0];
      sy += p[1];
      k++;
    }
    return k ? [sx / k, sy / k] : [0.5, 0.5];
  }

  // ---- events from other sessions ------------------------------------------------

  private onRemoteEvent(ev: GraphEvent): void {
    // serialize refreshes; events already arrive version-ordered
    this.refreshing = this.refreshing.then(async () => {
      if (!this.state) return;
      try {
        await this.refreshTopology();
        await this.refetchMeasures(new Set(ev['changed-measures']));
        this.panel.setSummary(await this.api.summary(this.state.graphId));
      } catch (e) {
        this.fail(e);
      }
    });
  }

  /** Resolves once queued event refreshes have landed (tests wait on this). */
  async settled(): Promise<void> {
    this.queue?.flush();
    await this.refreshing;
  }

  // ---- export ------------------------------------------------------------------------

  /**
   * SVG export posts the client layout first, so what the server renders
   * is exactly the arrangement on screen; the returned bytes equal a
   * direct server export for the same stored layout.
   */
  async exportSvg(opts: { colorBy?: MeasureId; sizeBy?: MeasureId } = {}): Promise<Uint8Array> {
    const state = this.must();
    await this.api.putLayout(state.graphId, state.layout);
    const byteOpts: { colorBy?: string; sizeBy?: string } = {};
    if (opts.colorBy) byteOpts.colorBy = opts.colorBy;
    if (opts.sizeBy) byteOpts.sizeBy = opts.sizeBy;
    return this.api.exportBytes(state.graphId, 'svg', byteOpts);
  }

  async exportData(format: string): Promise<Uint8Array> {
    return this.api.exportBytes(this.must().graphId, format);
  }

  // ---- temporal -----------------------------------------------------------------------

  async timeline(width: number): Promise<HistogramJson | null> {
    const state = this.must();
    try {
      return await this.api.timeline(state.graphId, width);
    } catch (e) {
      if (e instanceof ApiError && e.code === 'no-temporal-data') return null;
      throw e;
    }
  }

  /** Materialize the current time brush as a derived graph and open it. */
  async materializeWindow(): Promise<void> {
    const state = this.must();
    const brush = state.timeBrush();
    if (!brush) return;
    const created = await this.api.window(state.graphId, brush.t0, brush.t1);
    await this.load(created);
  }

  // ---- plumbing ------------------------------------------------------------------------

  private must(): ViewState {
    if (!this.state) throw new Error('no graph is open');
    return this.state;
  }

  private fail(e: unknown): void {
    this.lastError = e instanceof ApiError ? e.display() : String(e);
  }
}
