/**
 * Thin typed client over the service REST API.
 *
 * Every non-2xx response carries the uniform error envelope
 * {status, code, message, position}; it is rethrown as ApiError so UI
 * code can surface the server's own line/column diagnostics.
 */

import type {
  ApiErrorBody,
  DistributionResponse,
  FilterExprJson,
  FilterResult,
  GeneratorSpecJson,
  GraphCreated,
  GraphEvent,
  GraphListing,
  HistogramJson,
  InsertResult,
  LayoutResponse,
  MacroSummary,
  MeasureResponse,
  Mutation,
  MutationResult,
  NodeLinkDoc,
  PartitionJson,
} from './types.js';

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly position: [number, number] | null;

  constructor(body: ApiErrorBody) {
    super(body.message);
    this.name = 'ApiError';
    this.status = body.status;
    this.code = body.code;
    this.position = body.position;
  }

  /** "parse-error at line 3, column 5: ..." style toast text. */
  display(): string {
    const where = this.position
      ? ` at line ${this.position[0]}, column ${this.position[1]}`
      : '';
    return `${this.code}${where}: ${this.message}`;
  }
}

async function fail(res: Response): Promise<never> {
  let body: ApiErrorBody;
  try {
    body = (await res.json()) as ApiErrorBody;
  } catch {
    body = {
      status: res.status,
      code: 'internal-error',
      message: res.statusText || 'request failed',
      position: null,
    };
  }
  throw new ApiError(body);
}

export class ApiClient {
  readonly base: string;

  constructor(base = '') {
    // trailing slash would double up in template paths
    this.base = base.replace(/\/$/, '');
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(this.base + path, init);
    if (!res.ok) await fail(res);
    return (await res.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.json<T>(path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  // ---- graph lifecycle ----------------------------------------------

  uploadGraph(data: string | Uint8Array | Blob, filename?: string): Promise<GraphCreated> {
    const q = filename ? `?filename=${encodeURIComponent(filename)}` : '';
    return this.json<GraphCreated>(`/graphs${q}`, {
      method: 'POST',
      headers: { 'content-type': 'application/octet-stream' },
      body: data as BodyInit,
    });
  }

  generateGraph(spec: GeneratorSpecJson): Promise<GraphCreated> {
    return this.post<GraphCreated>('/graphs', spec);
  }

  listGraphs(): Promise<GraphListing[]> {
    return this.json<GraphListing[]>('/graphs');
  }

  async deleteGraph(gid: string): Promise<void> {
    const res = await fetch(`${this.base}/graphs/${gid}`, { method: 'DELETE' });
    if (!res.ok) await fail(res);
  }

  // ---- inspection -----------------------------------------------------

  summary(gid: string): Promise<MacroSummary> {
    return this.json<MacroSummary>(`/graphs/${gid}/summary`);
  }

  measure(
    gid: string,
    target: 'node' | 'edge',
    measureId: string,
    sample?: number,
  ): Promise<MeasureResponse> {
    const q = sample !== undefined ? `?sample=${sample}` : '';
    return this.json<MeasureResponse>(
      `/graphs/${gid}/measures/${target}/${measureId}${q}`,
    );
  }

  distribution(
    gid: string,
    measureId: string,
    opts: { bins?: number; kind?: 'hist' | 'cdf' | 'ccdf' } = {},
  ): Promise<DistributionResponse> {
    const params = new URLSearchParams();
    if (opts.bins !== undefined) params.set('bins', String(opts.bins));
    if (opts.kind) params.set('kind', opts.kind);
    const q = params.size ? `?${params}` : '';
    return this.json<DistributionResponse>(
      `/graphs/${gid}/distributions/${measureId}${q}`,
    );
  }

  /** Full topology via the node-link export; link ids key edge measures. */
  graphData(gid: string): Promise<NodeLinkDoc> {
    return this.json<NodeLinkDoc>(`/graphs/${gid}/export?format=json`);
  }

  // ---- mutation -------------------------------------------------------

  mutate(gid: string, batch: Mutation[]): Promise<MutationResult> {
    return this.post<MutationResult>(`/graphs/${gid}/mutations`, batch);
  }

  insertPattern(
    gid: string,
    spec: GeneratorSpecJson,
    attachTo?: number[],
  ): Promise<InsertResult> {
    const body: Record<string, unknown> = { ...spec };
    if (attachTo && attachTo.length) body['attach-to'] = attachTo;
    return this.post<InsertResult>(`/graphs/${gid}/insert`, body);
  }

  // ---- filtering and temporal views ------------------------------------

  filter(gid: string, chain: FilterExprJson[]): Promise<FilterResult> {
    return this.post<FilterResult>(`/graphs/${gid}/filter`, chain);
  }

  materializeFilter(gid: string, chain: FilterExprJson[]): Promise<GraphCreated> {
    return this.post<GraphCreated>(`/graphs/${gid}/filter?materialize=true`, chain);
  }

  window(gid: string, t0: number, t1: number): Promise<GraphCreated> {
    return this.json<GraphCreated>(`/graphs/${gid}/window?t0=${t0}&t1=${t1}`);
  }

  timeline(gid: string, width: number): Promise<HistogramJson> {
    return this.json<HistogramJson>(`/graphs/${gid}/timeline?width=${width}`);
  }

  partitions(
    gid: string,
    method: 'community' | 'role' | 'coloring',
    opts: { seed?: number; roleCount?: number } = {},
  ): Promise<PartitionJson> {
    const body: Record<string, unknown> = { method };
    if (opts.seed !== undefined) body['seed'] = opts.seed;
    if (opts.roleCount !== undefined) body['role-count'] = opts.roleCount;
    return this.post<PartitionJson>(`/graphs/${gid}/partitions`, body);
  }

  // ---- layout and export ------------------------------------------------

  getLayout(gid: string, opts: { seed?: number; iterations?: number; recompute?: boolean } = {}): Promise<LayoutResponse> {
    const params = new URLSearchParams();
    if (opts.seed !== undefined) params.set('seed', String(opts.seed));
    if (opts.iterations !== undefined) params.set('iterations', String(opts.iterations));
    if (opts.recompute) params.set('recompute', 'true');
    const q = params.size ? `?${params}` : '';
    return this.json<LayoutResponse>(`/graphs/${gid}/layout${q}`);
  }

  putLayout(gid: string, positions: Map<number, [number, number]>): Promise<{ stored: number }> {
    const obj: Record<string, [number, number]> = {};
    for (const [nid, xy] of positions) obj[String(nid)] = xy;
    return this.json<{ stored: number }>(`/graphs/${gid}/layout`, {
      method: 'PUT',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ positions: obj }),
    });
  }

  /** Raw export bytes; svg honors color_by/size_by node measures. */
  async exportBytes(
    gid: string,
    format: string,
    opts: { colorBy?: string; sizeBy?: string } = {},
  ): Promise<Uint8Array> {
    const params = new URLSearchParams({ format });
    if (opts.colorBy) params.set('color_by', opts.colorBy);
    if (opts.sizeBy) params.set('size_by', opts.sizeBy);
    const res = await fetch(`${this.base}/graphs/${gid}/export?${params}`);
    if (!res.ok) await fail(res);
    return new Uint8Array(await res.arrayBuffer());
  }

  // ---- workspace, settings, views -----------------------------------------

  async workspaceBytes(): Promise<Uint8Array> {
    const res = await fetch(`${this.base}/workspace`);
    if (!res.ok) await fail(res);
    return new Uint8Array(await res.arrayBuffer());
  }

  restoreWorkspace(data: Uint8Array | string): Promise<{ graphs: number; 'graph-ids': string[] }> {
    return this.json(`/workspace`, { method: 'PUT', body: data as BodyInit });
  }

  getSettings(): Promise<Record<string, string | number | boolean>> {
    return this.json('/settings');
  }

  putSettings(settings: Record<string, string | number | boolean>): Promise<Record<string, string | number | boolean>> {
    return this.json('/settings', {
      method: 'PUT',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(settings),
    });
  }

  // ---- events ---------------------------------------------------------------

  /**
   * Subscribe to the graph's mutation stream.
   *
   * Frames arrive as `data: {json}` lines.  The handler gets every event
   * with version > since, in stream order; dedup/buffering is the caller's
   * job (see events.ts).  Returns an abort function.
   */
  subscribeEvents(
    gid: string,
    onEvent: (ev: GraphEvent) => void,
    opts: { since?: number; maxEvents?: number; onEnd?: () => void; onError?: (e: unknown) => void } = {},
  ): () => void {
    const params = new URLSearchParams();
    if (opts.since !== undefined) params.set('since', String(opts.since));
    if (opts.maxEvents !== undefined) params.set('max_events', String(opts.maxEvents));
    const q = params.size ? `?${params}` : '';
    const ctrl = new AbortController();

    (async () => {
      const res = await fetch(`${this.base}/graphs/${gid}/events${q}`, {
        signal: ctrl.signal,
      });
      if (!res.ok) await fail(res);
      if (!res.body) throw new Error('event stream has no body');
      const reader = res.body.getReader();
      const decoder = new TextDecoder();
      let buf = '';
      for (;;) {
        const { done, value } = await reader.read();
        if (done) break;
        buf += decoder.decode(value, { stream: true });
        let idx;
        while ((idx = buf.indexOf('\n\n')) >= 0) {
          const frame = buf.slice(0, idx);
          buf = buf.slice(idx + 2);
          for (const line of frame.split('\n')) {
            if (line.startsWith('data: ')) {
              onEvent(JSON.parse(line.slice(6)) as GraphEvent);
            }
          }
        }
      }
      opts.onEnd?.();
    })().catch((e) => {
      if (!ctrl.signal.aborted) opts.onError?.(e);
    });

    return () => ctrl.abort();
  }
}
