/**
 * Wire types for the graphvis REST service.
 *
 * Field names mirror the JSON exactly: endpoint payloads use kebab-case
 * for their own fields and keep snake_case on nested engine objects
 * (summaries, partitions, histograms).
 */

export type NodeId = number;
export type EdgeId = number;

export const NODE_MEASURES = [
  'degree',
  'triangles',
  'local-clustering',
  'kcore',
  'betweenness',
  'pagerank',
  'eccentricity',
] as const;

export const EDGE_MEASURES = ['edge-triangles', 'triangle-core'] as const;

export type NodeMeasureId = (typeof NODE_MEASURES)[number];
export type EdgeMeasureId = (typeof EDGE_MEASURES)[number];
export type MeasureId = NodeMeasureId | EdgeMeasureId;

export interface GraphCreated {
  'graph-id': string;
  'node-count': number;
  'edge-count': number;
  'detected-format': string | null;
}

export interface GraphListing {
  'graph-id': string;
  name: string | null;
  'node-count': number;
  'edge-count': number;
  version: number;
  'created-at': number | null;
  'source-format': string | null;
}

/** Snake_case mirror of the engine's macro summary dataclass. */
export interface MacroSummary {
  node_count: number;
  edge_count: number;
  max_degree: number;
  avg_degree: number;
  total_triangles: number;
  global_clustering: number;
  max_kcore: number;
  diameter: number;
  mean_distance: number;
  approx_chromatic_number: number;
  max_triangle_core: number;
  component_count: number;
  aggregates: Record<string, Record<string, number>>;
  approx: Record<string, boolean>;
  community_count: number | null;
  role_count: number | null;
}

export interface MeasureResponse {
  measure: string;
  target: 'node' | 'edge';
  values: Record<string, number>;
  exact: boolean;
  sample: number | null;
}

/** Flat mutation objects, exactly what POST /mutations accepts. */
export type Mutation =
  | { kind: 'insert-node'; label?: string; ts?: number; attrs?: Attrs }
  | { kind: 'insert-edge'; u: NodeId; v: NodeId; weight?: number; ts?: number; attrs?: Attrs }
  | { kind: 'delete-node'; id: NodeId }
  | { kind: 'delete-edge'; id: EdgeId }
  | { kind: 'update-attrs'; target: 'node' | 'edge'; id: number; attrs: Attrs }
  | { kind: 'insert-subgraph'; nodes: unknown[]; edges: unknown[] };

export type Attrs = Record<string, string | number | boolean>;

export interface FieldDelta {
  before: number;
  after: number;
}

export interface MutationResult {
  version: number;
  changed: Record<string, FieldDelta>;
  stale: string[];
}

export interface InsertResult extends MutationResult {
  'new-nodes': NodeId[];
}

export interface FilterExprJson {
  target: 'node' | 'edge';
  measure: MeasureId;
  op: '<' | '<=' | '=' | '>=' | '>';
  threshold: number;
}

export interface FilterResult {
  'kept-nodes': NodeId[];
  'kept-edges': EdgeId[];
  'node-count': number;
  'edge-count': number;
}

export interface HistogramJson {
  bin_edges: number[];
  counts: number[];
  total: number;
}

export interface DistributionResponse extends HistogramJson {
  kind: 'hist' | 'cdf' | 'ccdf';
  measure: string;
  curve?: number[];
}

export interface PartitionJson {
  method: string;
  assignment: Record<string, number>;
  group_count: number;
  quality: number | null;
  params: Record<string, unknown>;
}

export interface LayoutResponse {
  positions: Record<string, [number, number]>;
}

export interface GraphEvent {
  version: number;
  'changed-measures': string[];
}

export interface ApiErrorBody {
  status: number;
  code: string;
  message: string;
  position: [number, number] | null;
}

export interface GeneratorSpecJson {
  model: 'er' | 'cl' | 'pa' | 'pattern' | 'block';
  n?: number;
  seed?: number;
  [param: string]: unknown;
}

/** Node-link document served by GET /export?format=json. */
export interface NodeLinkDoc {
  directed: boolean;
  nodes: Array<{ id: NodeId; label: string; ts?: number; attrs?: Attrs }>;
  links: Array<{
    id: EdgeId;
    source: NodeId;
    target: NodeId;
    weight?: number;
    ts?: number;
    attrs?: Attrs;
  }>;
}
