"""Session service for manual, step-by-step tableau construction.

Sessions live in memory with TTL eviction.  Every tree mutation goes
through the same rules module the automatic solver uses, so the tree is
rule-consistent by construction; undo reverts exactly the last mutation.
"""

from __future__ import annotations

import threading
import time
import uuid
from typing import Optional

from .formula import Formula, ParseError, format_formula, parse_formula
from .lasso import LassoModel
from .rules import (
    Branch, Label, RuleId, RuleOutcome, TableauContext, branch_outcome,
    loop_check, make_label, prune0_check, prune_check, static_children,
    static_moves, transition,
)
from .search import CapExceeded, SearchOptions, extract_model

_STATIC_RULES = frozenset(r for r in RuleId
                          if r not in (RuleId.LOOP, RuleId.PRUNE,
                                       RuleId.PRUNE0, RuleId.TRANSITION))


class ExplorerError(Exception):
    def __init__(self, status: int, message: str, **payload):
        self.status = status
        self.payload = {"error": message, **payload}
        super().__init__(message)


class _Node:
    __slots__ = ("id", "parent", "label", "rule", "principal", "children",
                 "status", "evidence", "model")

    def __init__(self, node_id: int, parent: Optional[int], label: Label):
        self.id = node_id
        self.parent = parent
        self.label = label
        self.rule: RuleId | None = None
        self.principal: Formula | None = None
        self.children: list[int] = []
        self.status = "open"
        self.evidence: list[int] = []
        self.model: LassoModel | None = None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "label": [{"text": format_formula(f), "key": f.key}
                      for f in self.label],
            "rule": self.rule.value if self.rule else None,
            "principal": (format_formula(self.principal)
                          if self.principal else None),
            "children": list(self.children),
            "status": self.status,
            "evidence": list(self.evidence),
        }


class Session:
    """One tableau under manual construction; single writer at a time."""

    def __init__(self, formula: Formula, opts: SearchOptions | None = None):
        self.id = uuid.uuid4().hex
        self.formula = formula
        self.opts = opts or SearchOptions()
        self.ctx = TableauContext(formula, seed=self.opts.seed,
                                  prune0=self.opts.prune0)
        self.nodes: list[_Node] = [_Node(0, None, make_label([formula]))]
        self.undo_log: list[list[tuple[int, tuple[int, ...]]]] = []
        self.lock = threading.RLock()
        self.touched = time.monotonic()

    # -- tree helpers ------------------------------------------------

    def node(self, node_id: int) -> _Node:
        if 0 <= node_id < len(self.nodes):
            return self.nodes[node_id]
        raise ExplorerError(404, f"unknown node {node_id}")

    def _path_ids(self, node_id: int) -> list[int]:
        path = []
        cur: int | None = node_id
        while cur is not None:
            path.append(cur)
            cur = self.nodes[cur].parent
        path.reverse()
        return path

    def _branch_to(self, node_id: int) -> tuple[Branch, list[int]]:
        path = self._path_ids(node_id)
        branch = Branch(self.ctx)
        for nid in path:
            node = self.nodes[nid]
            via = self.nodes[node.parent].rule if node.parent is not None \
                else None
            branch.push(node.label, via)
        return branch, path

    def _open_leaf(self, node_id: int) -> _Node:
        node = self.node(node_id)
        if node.status != "open" or node.children:
            raise ExplorerError(409, f"node {node_id} is not an open leaf")
        return node

    # -- moves -------------------------------------------------------

    def list_moves(self, node_id: int) -> list[dict]:
        with self.lock:
            node = self._open_leaf(node_id)
            moves = static_moves(node.label)
            if not moves:
                branch, _ = self._branch_to(node_id)
                outcome = self._history_outcome(branch)
                moves = [(outcome.rule, None)]
            return [{"rule": rule.value,
                     "principal": (format_formula(p) if p else None),
                     "principal_key": p.key if p else None}
                    for rule, p in moves]

    def _history_outcome(self, branch: Branch) -> RuleOutcome:
        # Earlier rules suppress later ones: LOOP, PRUNE, PRUNE0,
        # TRANSITION, mirroring the automatic search.
        out = loop_check(branch)
        if out is None:
            out = prune_check(branch)
        if out is None and self.ctx.prune0:
            out = prune0_check(branch)
        if out is None:
            out = RuleOutcome(RuleId.TRANSITION, "children",
                              (transition(branch.current),))
        return out

    def _resolve_principal(self, node: _Node, spec) -> Formula | None:
        if spec is None:
            return None
        if isinstance(spec, int):
            for f in node.label:
                if f.key == spec:
                    return f
            raise ExplorerError(409, f"no label member with key {spec}")
        try:
            f = parse_formula(spec)
        except ParseError as exc:
            raise ExplorerError(400, str(exc))
        if f not in set(node.label):
            raise ExplorerError(409, f"{spec!r} is not in the node label")
        return f

    def apply_move(self, node_id: int, rule_name: str, principal_spec) -> dict:
        with self.lock:
            node = self._open_leaf(node_id)
            try:
                rule = RuleId(rule_name)
            except ValueError:
                raise ExplorerError(400, f"unknown rule {rule_name!r}")
            principal = self._resolve_principal(node, principal_spec)
            branch, path = self._branch_to(node_id)
            if rule in _STATIC_RULES:
                try:
                    outcome = static_children(node.label, rule, principal)
                except ValueError as exc:
                    raise ExplorerError(409, str(exc))
            else:
                outcome = self._history_outcome(branch)
                if outcome.rule is not rule:
                    raise ExplorerError(
                        409, f"{rule.value} does not fire here "
                             f"({outcome.rule.value} applies instead)")
            created = self._expand(node, outcome, branch, path)
            self.undo_log.append([(node.id, created)])
            model = self.nodes[node_id].model
            return {
                "node": node.to_json(),
                "new_nodes": [self.nodes[c].to_json() for c in created],
                "open_leaves": self.open_leaves(),
                "model": model.to_json() if model else None,
            }

    def _expand(self, node: _Node, outcome: RuleOutcome, branch: Branch,
                path: list[int]) -> tuple[int, ...]:
        node.rule = outcome.rule
        node.principal = outcome.principal
        node.evidence = [path[p] for p in outcome.evidence]
        created = []
        if outcome.kind == "tick":
            node.status = "tick"
            node.model = extract_model(branch, outcome)
        elif outcome.kind == "cross":
            node.status = "cross"
        else:
            for child_label in outcome.children:
                child = _Node(len(self.nodes), node.id, child_label)
                self.nodes.append(child)
                node.children.append(child.id)
                created.append(child.id)
        return tuple(created)

    def open_leaves(self) -> list[int]:
        return [n.id for n in self.nodes
                if n.status == "open" and not n.children]

    # -- undo / auto -------------------------------------------------

    def undo(self) -> None:
        with self.lock:
            if not self.undo_log:
                raise ExplorerError(409, "nothing to undo")
            entry = self.undo_log.pop()
            for node_id, created in reversed(entry):
                for cid in sorted(created, reverse=True):
                    popped = self.nodes.pop()
                    assert popped.id == cid, "undo log out of sync"
                node = self.nodes[node_id]
                node.children = []
                node.rule = None
                node.principal = None
                node.evidence = []
                node.status = "open"
                node.model = None

    def auto_run(self) -> dict:
        """Complete every open leaf with the automatic policy; the verdict
        matches what `solve` returns on the root formula regardless of
        the manual moves made before."""
        with self.lock:
            entry: list[tuple[int, tuple[int, ...]]] = []
            steps = 0
            start = time.perf_counter()
            result: LassoModel | None = None
            for leaf_id in sorted(self.open_leaves(), reverse=True):
                branch, path = self._branch_to(leaf_id)
                prefix = len(branch) - 1
                branch.truncate(prefix)
                todo: list[tuple[int, Label, int]] = \
                    [(prefix, self.nodes[leaf_id].label, leaf_id)]
                while todo:
                    plen, label, nid = todo.pop()
                    branch.truncate(plen)
                    del path[plen:]
                    branch.push(label, None)
                    path.append(nid)
                    node = self.nodes[nid]
                    outcome = branch_outcome(branch)
                    steps += 1
                    if steps > self.opts.max_steps:
                        raise CapExceeded("steps", self.opts.max_steps)
                    created = self._expand(node, outcome, branch, path)
                    entry.append((nid, created))
                    if outcome.kind == "tick":
                        result = node.model
                        break
                    here = len(branch)
                    for child_label, cid in zip(reversed(outcome.children),
                                                reversed(created)):
                        todo.append((here, child_label, cid))
                if result is not None:
                    break
            if entry:
                self.undo_log.append(entry)
            wall = time.perf_counter() - start
            return {
                "satisfiable": result is not None,
                "model": result.to_json() if result else None,
                "stats": {"steps": steps,
                          "millis": round(wall * 1000.0, 3)},
            }

    def to_json(self) -> dict:
        with self.lock:
            ticked = next((n for n in self.nodes if n.status == "tick"), None)
            return {
                "id": self.id,
                "formula": format_formula(self.formula),
                "nodes": [n.to_json() for n in self.nodes],
                "verdict": ({"satisfiable": True,
                             "model": ticked.model.to_json()
                             if ticked.model else None}
                            if ticked else None),
            }


class SessionStore:
    """In-memory sessions with last-touch TTL eviction."""

    def __init__(self, ttl_seconds: float = 3600.0):
        self.ttl = ttl_seconds
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def sweep(self, now: float | None = None) -> None:
        now = time.monotonic() if now is None else now
        with self._lock:
            stale = [sid for sid, s in self._sessions.items()
                     if now - s.touched > self.ttl]
            for sid in stale:
                del self._sessions[sid]

    def create(self, formula: Formula) -> Session:
        self.sweep()
        session = Session(formula)
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        self.sweep()
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise ExplorerError(404, f"unknown session {session_id}")
        session.touched = time.monotonic()
        return session


def create_app(store: SessionStore | None = None):
    """FastAPI app exposing the session operations over HTTP+JSON."""
    from fastapi import FastAPI, Request
    from fastapi.middleware.cors import CORSMiddleware
    from fastapi.responses import JSONResponse

    store = store or SessionStore()
    app = FastAPI(title="ltltab explorer")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    app.state.store = store

    @app.exception_handler(ExplorerError)
    async def _explorer_error(request: Request, exc: ExplorerError):
        return JSONResponse(status_code=exc.status, content=exc.payload)

    @app.post("/sessions")
    def create_session(body: dict):
        text = body.get("formula", "")
        try:
            formula = parse_formula(text)
        except ParseError as exc:
            raise ExplorerError(400, str(exc), offset=exc.offset,
                                expected=list(exc.expected))
        session = store.create(formula)
        return {"id": session.id}

    @app.get("/sessions/{sid}")
    def get_tree(sid: str):
        return store.get(sid).to_json()

    @app.get("/sessions/{sid}/nodes/{node_id}/moves")
    def get_moves(sid: str, node_id: int):
        return {"moves": store.get(sid).list_moves(node_id)}

    @app.post("/sessions/{sid}/nodes/{node_id}/moves")
    def post_move(sid: str, node_id: int, body: dict):
        rule = body.get("rule")
        if not isinstance(rule, str):
            raise ExplorerError(400, "move body needs a 'rule' name")
        return store.get(sid).apply_move(node_id, rule,
                                         body.get("principal"))

    @app.post("/sessions/{sid}/undo")
    def post_undo(sid: str):
        session = store.get(sid)
        session.undo()
        return session.to_json()

    @app.post("/sessions/{sid}/auto")
    def post_auto(sid: str):
        session = store.get(sid)
        verdict = session.auto_run()
        return {"verdict": verdict, "tree": session.to_json()}

    return app
