/**
 * Macro statistics panel.
 *
 * Populated from GET /summary on load; after a mutation it updates from
 * the response deltas alone (no refetch), which is what keeps the panel
 * honest about per-interaction latency.
 */

import type { FieldDelta, MacroSummary } from './types.js';

const SHOWN: Array<[keyof MacroSummary, string]> = [
  ['node_count', 'nodes'],
  ['edge_count', 'edges'],
  ['max_degree', 'max degree'],
  ['avg_degree', 'avg degree'],
  ['total_triangles', 'triangles'],
  ['global_clustering', 'clustering'],
  ['max_kcore', 'max k-core'],
  ['component_count', 'components'],
  ['community_count', 'communities'],
  ['role_count', 'roles'],
];

export class MacroPanel {
  private host: Element;
  private fields = new Map<string, number | null>();

  constructor(host: Element) {
    this.host = host;
  }

  setSummary(s: MacroSummary): void {
    this.fields.clear();
    for (const [key] of SHOWN) {
      const v = s[key];
      this.fields.set(key, typeof v === 'number' ? v : v === null ? null : NaN);
    }
    this.render();
  }

  /** Apply {field: {before, after}} deltas from a mutation response. */
  applyDeltas(changed: Record<string, FieldDelta>): void {
    for (const [key, delta] of Object.entries(changed)) {
      if (this.fields.has(key)) this.fields.set(key, delta.after);
    }
    this.render();
  }

  value(key: string): number | null {
    const v = this.fields.get(key);
    return v === undefined ? null : v;
  }

  private render(): void {
    const doc = this.host.ownerDocument!;
    this.host.textContent = '';
    const dl = doc.createElement('dl');
    dl.className = 'macro-panel';
    for (const [key, label] of SHOWN) {
      const v = this.fields.get(key);
      if (v === null || v === undefined) continue; // absent partition counts
      const dt = doc.createElement('dt');
      dt.textContent = label;
      const dd = doc.createElement('dd');
      dd.setAttribute('data-field', key);
      dd.textContent = format(v);
      dl.append(dt, dd);
    }
    this.host.appendChild(dl);
  }
}

function format(v: number): string {
  if (Number.isInteger(v)) return String(v);
  return v.toFixed(4);
}
