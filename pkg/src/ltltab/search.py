"""Tableau search: depth-first construction, model extraction, parallel mode.

The search only ever holds one branch in memory per worker; a verdict is
SAT as soon as any branch ticks, UNSAT once every branch has crossed.
Resource caps raise CapExceeded and are never conflated with UNSAT.
"""

from __future__ import annotations

import os
import sys
import threading
import time
from dataclasses import dataclass, field
from typing import Optional

from .formula import Formula
from .lasso import LassoModel
from .rules import (
    Branch, Label, RuleId, RuleOutcome, TableauContext, branch_outcome,
    make_label,
)
from .trace import TraceEvent


@dataclass
class SearchOptions:
    prune0: bool = True
    seed: int | None = None
    max_steps: int = 10 ** 8
    max_poised_depth: int = 10 ** 5
    trace: bool = False


@dataclass(frozen=True)
class SearchStats:
    steps: int
    max_poised_depth: int
    branches_explored: int
    wall_time: float


@dataclass(frozen=True)
class Verdict:
    satisfiable: bool
    model: Optional[LassoModel]
    stats: SearchStats
    trace: Optional[list[TraceEvent]] = None
    branch_trace: Optional[tuple[tuple[Label, Optional[RuleId]], ...]] = None
    tick: Optional[RuleOutcome] = None


class CapExceeded(RuntimeError):
    """A configured resource cap was hit before a verdict was reached."""

    def __init__(self, kind: str, limit: int):
        self.kind = kind
        self.limit = limit
        super().__init__(f"{kind} cap of {limit} exceeded")


class TableauBugError(AssertionError):
    """Internal safety net: a poised label recurred more often than the
    PRUNE rule permits, which indicates a rules bug, never a verdict."""


def extract_model(branch: Branch,
                  outcome: RuleOutcome | None = None) -> LassoModel:
    """Build the lasso encoded by a branch whose last node ticks.

    Ticks via the empty label yield one state per transition plus a
    self-looping empty final state; ticks via LOOP reuse the matched
    ancestor's position as the loop-back point.
    """
    if outcome is None:
        outcome = branch_outcome(branch)
    if outcome.kind != "tick":
        raise ValueError("branch does not end in a tick")
    ctx = branch.ctx
    if outcome.rule is RuleId.EMPTY:
        positions = branch.poised_positions
        k = len(positions)
        states = [(i, ctx.info(branch.labels[p]).atoms)
                  for i, p in enumerate(positions)]
        states.append((k, frozenset()))
        return LassoModel(tuple(states), prefix_len=k, period_len=1)
    positions = branch.poised_positions[:-1]
    k = len(positions)
    loop_to = positions.index(outcome.evidence[0])
    states = [(i, ctx.info(branch.labels[p]).atoms)
              for i, p in enumerate(positions)]
    return LassoModel(tuple(states), prefix_len=loop_to,
                      period_len=k - loop_to)


class _Cancelled(Exception):
    pass


class _Searcher:
    """Sequential depth-first engine over an explicit alternatives stack.

    ``todo`` entries are (branch prefix length, label, producing rule,
    trace id); popping one rewinds the branch and pushes the node.  A
    shared-state hook lets the parallel driver cancel and offload work.
    """

    def __init__(self, ctx: TableauContext, opts: SearchOptions,
                 collect_trace: bool):
        self.ctx = ctx
        self.opts = opts
        self.branch = Branch(ctx)
        self.id_path: list[int] = []
        self.events: list[TraceEvent] | None = [] if collect_trace else None
        self.steps = 0
        self.max_poised_depth = 0
        self.branches = 0
        self.result: tuple[LassoModel, RuleOutcome] | None = None

    def new_event(self, parent: int | None, label: Label) -> int:
        if self.events is None:
            return -1
        ev = TraceEvent(len(self.events), parent, label)
        self.events.append(ev)
        if parent is not None:
            self.events[parent].children.append(ev.id)
        return ev.id

    def run(self, todo: list[tuple[int, Label, RuleId | None, int]],
            shared=None, budget: int | None = None) -> bool:
        """Exhaust ``todo``; True when finished (tick found or all crossed),
        False when the step budget ran out with work left over."""
        ctx = self.ctx
        opts = self.opts
        branch = self.branch
        push = branch.push
        truncate = branch.truncate
        tracing = self.events is not None
        seed = opts.seed
        max_steps = opts.max_steps
        max_depth = opts.max_poised_depth
        occurrence_cap = ctx.occurrence_cap
        poised_positions = branch.poised_positions
        spent = 0
        while todo:
            if shared is not None and shared.cancel:
                raise _Cancelled()
            if budget is not None and spent >= budget:
                return False
            prefix_len, label, via, node_id = todo.pop()
            truncate(prefix_len)
            if tracing:
                del self.id_path[prefix_len:]
                self.id_path.append(node_id)
            info = push(label, via)
            if info.poised:
                depth = len(poised_positions)
                if depth > max_depth:
                    raise CapExceeded("depth", max_depth)
                if depth > self.max_poised_depth:
                    self.max_poised_depth = depth
                if len(branch.occurrences[label]) > occurrence_cap:
                    raise TableauBugError(
                        "poised label recurred past the PRUNE safety cap")
            outcome = branch_outcome(branch)
            self.steps += 1
            spent += 1
            if self.steps > max_steps:
                raise CapExceeded("steps", max_steps)
            if tracing:
                self.events[node_id].record(
                    outcome, [self.id_path[p] for p in outcome.evidence])
            kind = outcome.kind
            if kind == "children":
                children = outcome.children
                here = prefix_len + 1
                rule = outcome.rule
                if len(children) == 1:
                    cid = (self.new_event(node_id, children[0])
                           if tracing else -1)
                    todo.append((here, children[0], rule, cid))
                else:
                    left, right = children
                    if seed is not None and hash(
                            (seed, 0x5bd1, outcome.principal.key)) & 1:
                        left, right = right, left
                    if tracing:
                        # Trace children keep the rule's own order, not
                        # the (possibly seeded) exploration order.
                        ids = {c: self.new_event(node_id, c)
                               for c in children}
                        lid, rid = ids[left], ids[right]
                    else:
                        lid = rid = -1
                    todo.append((here, right, rule, rid))
                    todo.append((here, left, rule, lid))
            elif kind == "cross":
                self.branches += 1
            else:  # tick
                self.branches += 1
                self.result = (extract_model(branch, outcome), outcome)
                return True
        return True


def _initial_todo(searcher: _Searcher, root: Label):
    node_id = searcher.new_event(None, root)
    return [(0, root, None, node_id)]


def solve(f: Formula, opts: SearchOptions | None = None) -> Verdict:
    """Decide satisfiability of ``f`` with a single-threaded search."""
    opts = opts or SearchOptions()
    ctx = TableauContext(f, seed=opts.seed, prune0=opts.prune0)
    searcher = _Searcher(ctx, opts, collect_trace=opts.trace)
    start = time.perf_counter()
    searcher.run(_initial_todo(searcher, make_label([f])))
    wall = time.perf_counter() - start
    stats = SearchStats(searcher.steps, searcher.max_poised_depth,
                        searcher.branches, wall)
    if searcher.result is not None:
        model, tick = searcher.result
        return Verdict(True, model, stats, searcher.events,
                       searcher.branch.snapshot(), tick)
    return Verdict(False, None, stats, searcher.events)


_CHUNK = 8192


class _SharedSearch:
    def __init__(self, max_steps: int, workers: int):
        self.lock = threading.Lock()
        self.cond = threading.Condition(self.lock)
        self.stack: list[tuple] = []
        self.pending = 0
        self.waiting = 0
        self.cancel = False
        self.result: tuple | None = None
        self.error: BaseException | None = None
        self.steps = 0
        self.max_steps = max_steps
        self.max_poised_depth = 0
        self.branches = 0
        # The gate bounds how many workers execute a chunk at once, not
        # the pool size.  Under the GIL only one bytecode stream runs
        # anyway, so extra simultaneous compute threads are pure switch
        # churn: serialize per chunk.  Free-threaded builds get one lane
        # per core.
        if getattr(sys, "_is_gil_enabled", lambda: True)():
            lanes = 1
        else:
            lanes = max(1, min(workers, os.cpu_count() or 1))
        self.exec_gate = threading.BoundedSemaphore(lanes)

    def finish_error(self, exc: BaseException) -> None:
        with self.lock:
            if self.error is None:
                self.error = exc
            self.cancel = True
            self.cond.notify_all()


def _worker(ctx: TableauContext, opts: SearchOptions,
            shared: _SharedSearch) -> None:
    try:
        while True:
            with shared.lock:
                while not shared.stack and not shared.cancel \
                        and shared.pending > 0:
                    shared.waiting += 1
                    shared.cond.wait()
                    shared.waiting -= 1
                if shared.cancel or shared.pending == 0:
                    return
                snap, plen, label, via = shared.stack.pop()
            searcher = _Searcher(ctx, opts, collect_trace=False)
            branch_push = searcher.branch.push
            for plabel, pvia in snap[:plen]:
                branch_push(plabel, pvia)
            todo = [(plen, label, via, -1)]
            # The gate is held for the whole task: execution stays
            # contiguous on one branch (cache-warm), and workers hand
            # over only between tasks.
            with shared.exec_gate:
                if shared.cancel:
                    raise _Cancelled()
                _run_task(searcher, todo, shared)
    except _Cancelled:
        pass
    except BaseException as exc:  # propagate caps and bugs to the caller
        shared.finish_error(exc)


def _run_task(searcher: _Searcher, todo: list,
              shared: _SharedSearch) -> None:
    """Drive one task to completion, flushing counters and offloading
    work to idle workers at every chunk boundary."""
    done = False
    while not done:
        done = searcher.run(todo, shared=shared, budget=_CHUNK)
        over_cap = False
        with shared.lock:
            shared.steps += searcher.steps
            over_cap = shared.steps > shared.max_steps
            searcher.steps = 0
            if searcher.max_poised_depth > shared.max_poised_depth:
                shared.max_poised_depth = searcher.max_poised_depth
            shared.branches += searcher.branches
            searcher.branches = 0
            if done:
                if searcher.result is not None:
                    if shared.result is None:
                        model, tick = searcher.result
                        shared.result = (model, tick,
                                         searcher.branch.snapshot())
                    shared.cancel = True
                    shared.cond.notify_all()
                shared.pending -= 1
                if shared.pending == 0:
                    shared.cond.notify_all()
            elif shared.waiting > 0 and len(todo) > 1:
                # Hand idle workers the shallowest alternatives: the
                # biggest subtrees, and the cheapest prefixes to replay.
                # One shared snapshot serves them all.
                snap = searcher.branch.snapshot()
                give = min(len(todo) - 1, shared.waiting)
                for plen, lab, via2, _ in todo[:give]:
                    shared.stack.append((snap, plen, lab, via2))
                del todo[:give]
                shared.pending += give
                shared.cond.notify(give)
        if over_cap:
            raise CapExceeded("steps", shared.max_steps)


def run_parallel(f: Formula, workers: int,
                 opts: SearchOptions | None = None) -> Verdict:
    """Same verdict as solve; branches are explored by a worker pool.

    With workers=1 this is exactly solve, trace included.  The model on
    SAT may differ from solve's because any ticked branch wins.
    """
    opts = opts or SearchOptions()
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1:
        return solve(f, opts)
    if opts.trace:
        raise ValueError("trace collection requires workers=1")
    ctx = TableauContext(f, seed=opts.seed, prune0=opts.prune0)
    shared = _SharedSearch(opts.max_steps, workers)
    shared.stack.append(((), 0, make_label([f]), None))
    shared.pending = 1
    start = time.perf_counter()
    # Workers are pure CPU under the GIL; fewer forced handoffs means
    # less cache churn on small machines.
    old_interval = sys.getswitchinterval()
    sys.setswitchinterval(0.05)
    try:
        threads = [threading.Thread(target=_worker,
                                    args=(ctx, opts, shared), daemon=True)
                   for _ in range(workers)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
    finally:
        sys.setswitchinterval(old_interval)
    wall = time.perf_counter() - start
    if shared.error is not None:
        raise shared.error
    stats = SearchStats(shared.steps, shared.max_poised_depth,
                        shared.branches, wall)
    if shared.result is not None:
        model, tick, snapshot = shared.result
        return Verdict(True, model, stats, None, snapshot, tick)
    return Verdict(False, None, stats)
