// Payload shapes mirrored from the explorer API; field names match the
// wire format exactly.

export interface LabelEntry {
  text: string;
  key: number;
}

export type NodeStatus = "open" | "tick" | "cross";

export interface NodeView {
  id: number;
  label: LabelEntry[];
  rule: string | null;
  principal: string | null;
  children: number[];
  status: NodeStatus;
  evidence: number[];
}

export interface ModelState {
  id: number;
  atoms: string[];
}

export interface ModelView {
  states: ModelState[];
  edges: [number, number][];
  prefix_len: number;
  period_len: number;
}

export interface VerdictView {
  satisfiable: boolean;
  model: ModelView | null;
}

export interface TreePayload {
  id: string;
  formula: string;
  nodes: NodeView[];
  verdict: VerdictView | null;
}

export interface Move {
  rule: string;
  principal: string | null;
  principal_key: number | null;
}

export interface ApplyResult {
  node: NodeView;
  new_nodes: NodeView[];
  open_leaves: number[];
  model: ModelView | null;
}

export interface AutoStats {
  steps: number;
  millis: number;
}

export interface AutoResult {
  verdict: { satisfiable: boolean; model: ModelView | null; stats: AutoStats };
  tree: TreePayload;
}
