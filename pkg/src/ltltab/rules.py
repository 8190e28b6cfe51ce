"""Tableau rules: pure decisions mapping a branch to tick, cross or children.

A label is a deduplicated tuple of formulas sorted by intern key.  The
static rules look at one label only; LOOP, PRUNE, PRUNE0 and TRANSITION
additionally read the branch history and are considered in exactly that
order once a label is poised.
"""

from __future__ import annotations

import enum
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .formula import (
    AND, ATOM, FALSE, FINALLY, GLOBALLY, IFF, IMPLIES, NEXT, NOT, OR, TRUE,
    UNTIL, FALSE_F, TRUE_F, Formula, Next, Not, closure_set,
    eventuality_targets,
)

Label = tuple[Formula, ...]


class RuleId(enum.Enum):
    EMPTY = "EMPTY"
    TOP = "TOP"
    BOT = "BOT"
    AND = "AND"
    OR = "OR"
    IMPLIES = "IMPLIES"
    IFF = "IFF"
    UNTIL = "UNTIL"
    FINALLY = "FINALLY"
    GLOBALLY = "GLOBALLY"
    CONTRADICTION = "CONTRADICTION"
    NOTNOT = "NOTNOT"
    NOTBOT = "NOTBOT"
    NOTTOP = "NOTTOP"
    NOTAND = "NOTAND"
    NOTOR = "NOTOR"
    NOTIMPLIES = "NOTIMPLIES"
    NOTIFF = "NOTIFF"
    NOTUNTIL = "NOTUNTIL"
    NOTGLOBALLY = "NOTGLOBALLY"
    NOTFINALLY = "NOTFINALLY"
    LOOP = "LOOP"
    PRUNE = "PRUNE"
    PRUNE0 = "PRUNE0"
    TRANSITION = "TRANSITION"


@dataclass(frozen=True)
class RuleOutcome:
    """Result of applying one rule at the current node.

    ``kind`` is "tick", "cross" or "children"; ``evidence`` holds branch
    positions of the ancestors a LOOP/PRUNE/PRUNE0 decision matched.
    """

    rule: RuleId
    kind: str
    children: tuple[Label, ...] = ()
    principal: Optional[Formula] = None
    evidence: tuple[int, ...] = ()


def make_label(formulas) -> Label:
    """Deduplicate and sort by intern key."""
    return tuple(sorted(set(formulas), key=lambda f: f.key))


def label_weight(label: Label) -> int:
    """Progress measure over the non-elementary members.

    One leading negation is free: the negated child of the <-> rule adds
    two fresh negations, which a plain node count would charge for.
    """
    total = 0
    for f in label:
        if not f.elementary:
            total += f.left.size if f.op == NOT else f.size
    return total


# (rule, branching?, additions per child) for every decomposable formula.
def _decomposition(f: Formula):
    op = f.op
    if op == TRUE:
        return RuleId.TOP, ((),)
    if op == AND:
        return RuleId.AND, ((f.left, f.right),)
    if op == OR:
        return RuleId.OR, ((f.left,), (f.right,))
    if op == IMPLIES:
        return RuleId.IMPLIES, ((Not(f.left),), (f.right,))
    if op == IFF:
        return RuleId.IFF, ((f.left, f.right), (Not(f.left), Not(f.right)))
    if op == UNTIL:
        return RuleId.UNTIL, ((f.right,), (f.left, Next(f)))
    if op == FINALLY:
        return RuleId.FINALLY, ((f.left,), (Next(f),))
    if op == GLOBALLY:
        return RuleId.GLOBALLY, ((f.left, Next(f)),)
    if op == NOT:
        g = f.left
        gop = g.op
        if gop == NOT:
            return RuleId.NOTNOT, ((g.left,),)
        if gop == FALSE:
            return RuleId.NOTBOT, ((),)
        if gop == AND:
            return RuleId.NOTAND, ((Not(g.left),), (Not(g.right),))
        if gop == OR:
            return RuleId.NOTOR, ((Not(g.left), Not(g.right)),)
        if gop == IMPLIES:
            return RuleId.NOTIMPLIES, ((g.left, Not(g.right)),)
        if gop == IFF:
            return RuleId.NOTIFF, ((g.left, Not(g.right)),
                                   (Not(g.left), g.right))
        if gop == UNTIL:
            return RuleId.NOTUNTIL, ((Not(g.left), Not(g.right)),
                                     (Not(g.right), Next(f)))
        if gop == FINALLY:
            return RuleId.NOTFINALLY, ((Not(g.left), Next(f)),)
        if gop == GLOBALLY:
            return RuleId.NOTGLOBALLY, ((Not(g.left),), (Next(f),))
    return None


class _LabelInfo:
    __slots__ = ("fset", "poised", "cross", "candidates", "eventualities",
                 "ev_targets", "atoms", "key_tuple", "targets_present")

    def __init__(self, label: Label):
        fset = frozenset(label)
        self.fset = fset
        self.key_tuple = tuple(f.key for f in label)
        cross = None
        if FALSE_F in fset:
            cross = RuleOutcome(RuleId.BOT, "cross", principal=FALSE_F)
        elif TRUE_F.neg in fset:
            cross = RuleOutcome(RuleId.NOTTOP, "cross", principal=TRUE_F.neg)
        else:
            for f in label:
                if f.neg in fset:
                    cross = RuleOutcome(RuleId.CONTRADICTION, "cross",
                                        principal=f)
                    break
        self.cross = cross
        cands = []
        for f in label:
            if f.elementary:
                continue
            dec = _decomposition(f)
            if dec is not None:
                rule, adds = dec
                cands.append((len(adds) > 1, f.key, rule, f, adds))
        cands.sort(key=lambda c: (c[0], c[1]))
        self.candidates = tuple(cands)
        self.poised = bool(label) and cross is None and not cands
        evs = tuple((f, f.evt_target) for f in label
                    if f.evt_target is not None)
        self.eventualities = evs
        seen = []
        for _, t in evs:
            if t not in seen:
                seen.append(t)
        self.ev_targets = tuple(seen)
        self.atoms = frozenset(f.name for f in label if f.op == ATOM)
        self.targets_present: tuple[Formula, ...] = ()


class TableauContext:
    """Per-root caches shared by every branch of one search.

    Static rule outcomes are pure functions of the label (given a fixed
    principal-selection seed), so they are memoized here.
    """

    def __init__(self, root: Formula, seed: int | None = None,
                 prune0: bool = True):
        self.root = root
        self.seed = seed
        self.prune0 = prune0
        self.closure = closure_set(root)
        self.targets = eventuality_targets(root)
        eventuality_forms = {m for m in self.closure.members
                             if m.evt_target is not None}
        self.occurrence_cap = 2 ** len(eventuality_forms) + 2
        self._info: dict[Label, _LabelInfo] = {}
        self._static: dict[Label, RuleOutcome | None] = {}

    def info(self, label: Label) -> _LabelInfo:
        inf = self._info.get(label)
        if inf is None:
            inf = _LabelInfo(label)
            inf.targets_present = tuple(f for f in label
                                        if f in self.targets)
            self._info[label] = inf
        return inf

    def static_outcome(self, label: Label) -> RuleOutcome | None:
        try:
            return self._static[label]
        except KeyError:
            out = _static_outcome(label, self.info(label), self.seed)
            self._static[label] = out
            return out


def is_poised(label: Label, ctx: TableauContext | None = None) -> bool:
    """Nonempty, no direct contradiction, every member elementary."""
    if ctx is not None:
        return ctx.info(label).poised
    return _LabelInfo(label).poised


def _choose_candidate(info: _LabelInfo, seed: int | None):
    cands = info.candidates
    if seed is None or len(cands) == 1:
        return cands[0]
    # Pure function of (seed, label): reproducible and branch-local.
    return cands[hash((seed,) + info.key_tuple) % len(cands)]


def _static_outcome(label: Label, info: _LabelInfo,
                    seed: int | None) -> RuleOutcome | None:
    if not label:
        return RuleOutcome(RuleId.EMPTY, "tick")
    if info.cross is not None:
        return info.cross
    if not info.candidates:
        return None  # poised
    _, _, rule, principal, adds = _choose_candidate(info, seed)
    rest = [f for f in label if f is not principal]
    children = tuple(make_label(rest + list(extra)) for extra in adds)
    return RuleOutcome(rule, "children", children, principal)


def apply_static(label: Label, seed: int | None = None) -> RuleOutcome | None:
    """Tick on the empty label, cross on bot/~top/contradiction, otherwise
    decompose one non-elementary formula; None exactly when poised."""
    return _static_outcome(label, _LabelInfo(label), seed)


def static_moves(label: Label) -> list[tuple[RuleId, Formula | None]]:
    """Every applicable (static rule, principal) pair, solver order."""
    if not label:
        return [(RuleId.EMPTY, None)]
    info = _LabelInfo(label)
    moves: list[tuple[RuleId, Formula | None]] = []
    if info.cross is not None:
        moves.append((info.cross.rule, info.cross.principal))
    for _, _, rule, principal, _ in info.candidates:
        moves.append((rule, principal))
    return moves


def static_children(label: Label, rule: RuleId,
                    principal: Formula | None) -> RuleOutcome:
    """Outcome of one chosen static move (for step-by-step drivers)."""
    if not label and rule is RuleId.EMPTY:
        return RuleOutcome(RuleId.EMPTY, "tick")
    info = _LabelInfo(label)
    if info.cross is not None and info.cross.rule is rule:
        return info.cross
    for _, _, r, p, adds in info.candidates:
        if r is rule and p is principal:
            rest = [f for f in label if f is not p]
            children = tuple(make_label(rest + list(extra)) for extra in adds)
            return RuleOutcome(rule, "children", children, p)
    raise ValueError(f"rule {rule.value} does not apply to this label")


def transition(label: Label) -> Label:
    """Keep exactly the content nested under X and ~X, one step later."""
    out = []
    for f in label:
        if f.op == NEXT:
            out.append(f.left)
        elif f.op == NOT and f.left.op == NEXT:
            out.append(Not(f.left.left))
    return make_label(out)


class Branch:
    """Root-to-current node sequence plus the bookkeeping the history
    rules need: poised positions, per-label occurrence lists (poised
    labels only) and positions at which each eventuality target occurs
    (every node, poised or not)."""

    __slots__ = ("ctx", "labels", "via", "infos", "poised_positions",
                 "occurrences", "target_positions")

    def __init__(self, ctx: TableauContext):
        self.ctx = ctx
        self.labels: list[Label] = []
        self.via: list[RuleId | None] = []
        self.infos: list[_LabelInfo] = []
        self.poised_positions: list[int] = []
        self.occurrences: dict[Label, list[int]] = {}
        self.target_positions: dict[Formula, list[int]] = {
            t: [] for t in ctx.targets}

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def current(self) -> Label:
        return self.labels[-1]

    def push(self, label: Label, via: RuleId | None) -> _LabelInfo:
        info = self.ctx.info(label)
        pos = len(self.labels)
        self.labels.append(label)
        self.via.append(via)
        self.infos.append(info)
        tpos = self.target_positions
        for t in info.targets_present:
            tpos[t].append(pos)
        if info.poised:
            self.poised_positions.append(pos)
            occ = self.occurrences.get(label)
            if occ is None:
                self.occurrences[label] = [pos]
            else:
                occ.append(pos)
        return info

    def pop(self) -> None:
        pos = len(self.labels) - 1
        label = self.labels.pop()
        self.via.pop()
        info = self.infos.pop()
        tpos = self.target_positions
        for t in info.targets_present:
            tpos[t].pop()
        if info.poised:
            self.poised_positions.pop()
            self.occurrences[label].pop()

    def truncate(self, length: int) -> None:
        while len(self.labels) > length:
            self.pop()

    def occurrence_count(self, label: Label) -> int:
        return len(self.occurrences.get(label, ()))

    def has_target_between(self, target: Formula, lo: int, hi: int) -> bool:
        """Is the target present in some label at position lo < pos <= hi?"""
        positions = self.target_positions.get(target)
        if not positions:
            return False
        i = bisect_right(positions, lo)
        return i < len(positions) and positions[i] <= hi

    def fulfilled_targets(self, targets: Sequence[Formula], lo: int,
                          hi: int) -> frozenset[Formula]:
        return frozenset(t for t in targets
                         if self.has_target_between(t, lo, hi))

    def snapshot(self) -> tuple[tuple[Label, RuleId | None], ...]:
        return tuple(zip(self.labels, self.via))

    @classmethod
    def restore(cls, ctx: TableauContext,
                entries: Sequence[tuple[Label, RuleId | None]]) -> "Branch":
        b = cls(ctx)
        for label, via in entries:
            b.push(label, via)
        return b


def loop_check(branch: Branch) -> RuleOutcome | None:
    """Tick if a poised proper ancestor subsumes the current label and all
    of the ancestor's X-eventualities were fulfilled strictly after it.
    The nearest qualifying ancestor is reported (smallest loop)."""
    infos = branch.infos
    v_pos = len(branch.labels) - 1
    v_fset = infos[v_pos].fset
    tpos = branch.target_positions
    for u_pos in reversed(branch.poised_positions):
        if u_pos == v_pos:
            continue
        u_info = infos[u_pos]
        if not u_info.fset >= v_fset:
            continue
        # A query ending at the branch tip only needs the last position.
        ok = True
        for _, t in u_info.eventualities:
            tp = tpos[t]
            if not tp or tp[-1] <= u_pos:
                ok = False
                break
        if ok:
            return RuleOutcome(RuleId.LOOP, "tick", evidence=(u_pos,))
    return None


def prune_check(branch: Branch) -> RuleOutcome | None:
    """Cross if two earlier occurrences u < v of the current poised label
    exist such that the segment after v fulfilled no eventuality target
    the segment (u, v] had not already fulfilled."""
    v_pos = len(branch.labels) - 1
    label = branch.labels[v_pos]
    occs = branch.occurrences.get(label, ())
    m = len(occs)
    if m < 3:
        return None
    targets = branch.infos[v_pos].ev_targets
    tpos = branch.target_positions
    fulfilled_after: dict[int, list] = {}

    def useless(u: int, v: int) -> bool:
        # Targets fulfilled in (v, w] with w the branch tip; the pair is
        # useless if (u, v] already fulfilled each of them.
        late = fulfilled_after.get(v)
        if late is None:
            late = [t for t in targets if tpos[t] and tpos[t][-1] > v]
            fulfilled_after[v] = late
        for t in late:
            if not branch.has_target_between(t, u, v):
                return False
        return True

    # Consecutive occurrence pairs first (nearest first), then the rest.
    for j in range(m - 2, 0, -1):
        if useless(occs[j - 1], occs[j]):
            return RuleOutcome(RuleId.PRUNE, "cross",
                               evidence=(occs[j - 1], occs[j]))
    for j in range(m - 2, 1, -1):
        for i in range(j - 2, -1, -1):
            if useless(occs[i], occs[j]):
                return RuleOutcome(RuleId.PRUNE, "cross",
                                   evidence=(occs[i], occs[j]))
    return None


def prune0_check(branch: Branch) -> RuleOutcome | None:
    """Cross if the poised label repeats, carries an X-eventuality, and
    nothing was fulfilled since the previous occurrence.  The fulfilled
    set only grows as the earlier occurrence moves up, so the nearest
    occurrence is the only one that can witness emptiness."""
    v_pos = len(branch.labels) - 1
    label = branch.labels[v_pos]
    occs = branch.occurrences.get(label, ())
    if len(occs) < 2:
        return None
    info = branch.infos[v_pos]
    if not info.eventualities:
        return None
    u = occs[-2]
    tpos = branch.target_positions
    for t in info.ev_targets:
        tp = tpos[t]
        if tp and tp[-1] > u:
            return None
    return RuleOutcome(RuleId.PRUNE0, "cross", evidence=(u,))


def branch_outcome(branch: Branch) -> RuleOutcome:
    """The single rule the tableau applies at the current node: a static
    rule if one fires, otherwise LOOP, PRUNE, PRUNE0, TRANSITION in order."""
    ctx = branch.ctx
    label = branch.labels[-1]
    try:
        out = ctx._static[label]
    except KeyError:
        out = ctx.static_outcome(label)
    if out is not None:
        return out
    out = loop_check(branch)
    if out is not None:
        return out
    out = prune_check(branch)
    if out is not None:
        return out
    if ctx.prune0:
        out = prune0_check(branch)
        if out is not None:
            return out
    return RuleOutcome(RuleId.TRANSITION, "children", (transition(label),))
