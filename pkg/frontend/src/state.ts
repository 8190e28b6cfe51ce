import type { Move, ModelView, NodeView, TreePayload } from "./types";

/** Client-side session mirror: always exactly the last API payloads.
 *  No rule evaluation happens here; the server decides every move. */
export class SessionState {
  sessionId: string | null = null;
  tree: TreePayload | null = null;
  selected: number | null = null;
  moves: Move[] = [];
  model: ModelView | null = null;

  reset(sessionId: string): void {
    this.sessionId = sessionId;
    this.tree = null;
    this.selected = null;
    this.moves = [];
    this.model = null;
  }

  setTree(tree: TreePayload): void {
    this.tree = tree;
    if (this.selected !== null && !this.isOpenLeaf(this.selected)) {
      this.selected = null;
      this.moves = [];
    }
    if (tree.verdict?.model) {
      this.model = tree.verdict.model;
    }
  }

  node(id: number): NodeView | undefined {
    return this.tree?.nodes[id];
  }

  isOpenLeaf(id: number): boolean {
    const node = this.node(id);
    return !!node && node.status === "open" && node.children.length === 0;
  }

  openLeaves(): number[] {
    if (!this.tree) return [];
    return this.tree.nodes
      .filter((n) => n.status === "open" && n.children.length === 0)
      .map((n) => n.id);
  }

  /** Nodes another node points at as LOOP/PRUNE evidence. */
  evidenceTargets(): Map<number, number[]> {
    const marks = new Map<number, number[]>();
    if (!this.tree) return marks;
    for (const node of this.tree.nodes) {
      for (const target of node.evidence) {
        const list = marks.get(target) ?? [];
        list.push(node.id);
        marks.set(target, list);
      }
    }
    return marks;
  }

  select(id: number | null, moves: Move[]): void {
    this.selected = id;
    this.moves = moves;
  }
}
