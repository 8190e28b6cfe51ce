import { ApiError, ExplorerApi } from "./api";
import { SessionState } from "./state";
import { renderModel, renderMoves, renderTree } from "./view";
import type { Move } from "./types";

export interface AppElements {
  formula: HTMLInputElement;
  newSession: HTMLButtonElement;
  undo: HTMLButtonElement;
  auto: HTMLButtonElement;
  tree: HTMLElement;
  moves: HTMLElement;
  model: HTMLElement;
  status: HTMLElement;
}

/** Wires the DOM to the API.  Every mutation round-trips and re-renders
 *  from the fresh payload; there is no optimistic state. */
export class ExplorerApp {
  readonly state = new SessionState();
  private tail: Promise<void> = Promise.resolve();

  constructor(
    private doc: Document,
    private api: ExplorerApi,
    private el: AppElements,
  ) {
    el.newSession.addEventListener("click", () =>
      this.enqueue(() => this.newSession(el.formula.value)),
    );
    el.undo.addEventListener("click", () => this.enqueue(() => this.undo()));
    el.auto.addEventListener("click", () => this.enqueue(() => this.auto()));
  }

  /** Serialize user actions; tests await idle() after dispatching clicks. */
  private enqueue(action: () => Promise<void>): void {
    this.tail = this.tail.then(action).catch((err) => this.showError(err));
  }

  idle(): Promise<void> {
    return this.tail;
  }

  private showError(err: unknown): void {
    const text =
      err instanceof ApiError
        ? `error: ${err.message}`
        : `error: ${String(err)}`;
    this.el.status.textContent = text;
  }

  private setStatus(text: string): void {
    this.el.status.textContent = text;
  }

  async newSession(formula: string): Promise<void> {
    const sid = await this.api.createSession(formula);
    this.state.reset(sid);
    await this.refresh();
    this.setStatus(`session ${sid.slice(0, 8)} created`);
  }

  async refresh(): Promise<void> {
    if (!this.state.sessionId) return;
    const tree = await this.api.getTree(this.state.sessionId);
    this.state.setTree(tree);
    this.renderAll();
  }

  async selectNode(nodeId: number): Promise<void> {
    if (!this.state.sessionId) return;
    if (!this.state.isOpenLeaf(nodeId)) {
      this.state.select(null, []);
      this.renderAll();
      return;
    }
    const moves = await this.api.getMoves(this.state.sessionId, nodeId);
    this.state.select(nodeId, moves);
    this.renderAll();
  }

  async pickMove(move: Move): Promise<void> {
    const sid = this.state.sessionId;
    const node = this.state.selected;
    if (sid === null || node === null) return;
    const result = await this.api.applyMove(sid, node, move);
    if (result.model) {
      this.state.model = result.model;
      this.setStatus("branch ticked: model extracted");
    } else {
      this.setStatus(`${move.rule} applied at node ${node}`);
    }
    await this.refresh();
  }

  async undo(): Promise<void> {
    if (!this.state.sessionId) return;
    const tree = await this.api.undo(this.state.sessionId);
    this.state.model = null;
    this.state.setTree(tree);
    this.state.select(null, []);
    this.renderAll();
    this.setStatus("undid last move");
  }

  async auto(): Promise<void> {
    if (!this.state.sessionId) return;
    const out = await this.api.autoRun(this.state.sessionId);
    this.state.setTree(out.tree);
    if (out.verdict.model) this.state.model = out.verdict.model;
    this.renderAll();
    this.setStatus(out.verdict.satisfiable ? "SAT" : "UNSAT");
  }

  renderAll(): void {
    this.el.tree.replaceChildren();
    if (this.state.tree) {
      this.el.tree.appendChild(
        renderTree(this.doc, this.state.tree, this.state.selected, {
          onSelect: (id) => this.enqueue(() => this.selectNode(id)),
        }),
      );
    }
    this.el.moves.replaceChildren(
      renderMoves(this.doc, this.state.moves, (move) =>
        this.enqueue(() => this.pickMove(move)),
      ),
    );
    this.el.model.replaceChildren();
    if (this.state.model) {
      this.el.model.appendChild(renderModel(this.doc, this.state.model));
    }
  }
}

export function mount(doc: Document, baseUrl: string): ExplorerApp {
  const byId = <T extends HTMLElement>(id: string): T => {
    const el = doc.getElementById(id);
    if (!el) throw new Error(`missing element #${id}`);
    return el as T;
  };
  return new ExplorerApp(doc, new ExplorerApi(baseUrl), {
    formula: byId<HTMLInputElement>("formula"),
    newSession: byId<HTMLButtonElement>("new-session"),
    undo: byId<HTMLButtonElement>("undo"),
    auto: byId<HTMLButtonElement>("auto"),
    tree: byId("tree"),
    moves: byId("moves"),
    model: byId("model"),
    status: byId("status"),
  });
}
