"""Independent ground truth for differential testing.

Two separate routes to the same answers as the tree search: an exact
evaluator for formulas over lasso models (fixpoint over the period, no
bounded unrolling) and a classic multi-pass graph tableau that decides
satisfiability by iterated node elimination.
"""

from __future__ import annotations

import random

from .formula import (
    AND, ATOM, FALSE, FINALLY, GLOBALLY, IFF, IMPLIES, NEXT, NOT, OR, TRUE,
    UNTIL, FALSE_F, TRUE_F, And, Atom, Finally, Formula, Globally, Iff,
    Implies, Next, Not, Or, Until, closure_set, subformulas,
)
from .lasso import LassoModel


def evaluate(model: LassoModel, f: Formula) -> bool:
    """Exact truth of ``f`` on the fullpath induced by ``model``.

    Truth vectors are computed bottom-up over all prefix and period
    positions; U, F and G are solved as fixpoints over the loop (least
    for U/F, greatest for G), so deeply postponed eventualities need no
    unrolling.
    """
    n, m = model.prefix_len, model.period_len
    total = n + m
    atoms = [a for _, a in model.states]

    def succ(i: int) -> int:
        return n if i == total - 1 else i + 1

    vals: dict[Formula, list[bool]] = {}
    for g in sorted(subformulas(f), key=lambda h: (h.size, h.key)):
        if g.op == ATOM:
            v = [g.name in atoms[i] for i in range(total)]
        elif g.op == TRUE:
            v = [True] * total
        elif g.op == FALSE:
            v = [False] * total
        elif g.op == NOT:
            c = vals[g.left]
            v = [not x for x in c]
        elif g.op == AND:
            a, b = vals[g.left], vals[g.right]
            v = [x and y for x, y in zip(a, b)]
        elif g.op == OR:
            a, b = vals[g.left], vals[g.right]
            v = [x or y for x, y in zip(a, b)]
        elif g.op == IMPLIES:
            a, b = vals[g.left], vals[g.right]
            v = [(not x) or y for x, y in zip(a, b)]
        elif g.op == IFF:
            a, b = vals[g.left], vals[g.right]
            v = [x == y for x, y in zip(a, b)]
        elif g.op == NEXT:
            c = vals[g.left]
            v = [c[succ(i)] for i in range(total)]
        elif g.op == UNTIL:
            a, b = vals[g.left], vals[g.right]
            v = _least_fixpoint(total, succ,
                                lambda i, nxt: b[i] or (a[i] and nxt))
        elif g.op == FINALLY:
            b = vals[g.left]
            v = _least_fixpoint(total, succ, lambda i, nxt: b[i] or nxt)
        elif g.op == GLOBALLY:
            a = vals[g.left]
            v = _greatest_fixpoint(total, succ, lambda i, nxt: a[i] and nxt)
        else:  # pragma: no cover
            raise AssertionError(f"unknown constructor {g.op}")
        vals[g] = v
    return vals[f][0]


def _least_fixpoint(total, succ, step) -> list[bool]:
    v = [False] * total
    changed = True
    while changed:
        changed = False
        for i in range(total - 1, -1, -1):
            new = step(i, v[succ(i)])
            if new and not v[i]:
                v[i] = True
                changed = True
    return v


def _greatest_fixpoint(total, succ, step) -> list[bool]:
    v = [True] * total
    changed = True
    while changed:
        changed = False
        for i in range(total - 1, -1, -1):
            new = step(i, v[succ(i)])
            if v[i] and not new:
                v[i] = False
                changed = True
    return v


class ClosureLimitExceeded(ValueError):
    pass


def decide_graph(f: Formula, closure_limit: int = 24) -> bool:
    """Wolper-style decision: enumerate locally coherent valuations of the
    closure, connect them by the X-form successor relation, then repeatedly
    delete nodes without successors or with unfulfillable eventualities.

    Satisfiable iff a surviving node makes ``f`` true.  Membership of a
    negated formula is the complement of its positive side, so only the
    positive closure half is assigned.
    """
    clo = closure_set(f)
    if clo.size > closure_limit:
        raise ClosureLimitExceeded(
            f"closure size {clo.size} exceeds limit {closure_limit}")

    subs = subformulas(f)
    pos = set(subs)
    for s in subs:
        if s.op in (UNTIL, FINALLY, GLOBALLY):
            pos.add(Next(s))
    free = sorted((g for g in pos if g.op in (ATOM, NEXT)),
                  key=lambda g: g.key)
    derived = sorted((g for g in pos if g.op not in (ATOM, NEXT)),
                     key=lambda g: (g.size, g.key))
    xforms = sorted((g for g in pos if g.op == NEXT), key=lambda g: g.key)

    truths: list[dict[Formula, bool]] = []
    key_out: list[tuple] = []
    key_in: list[tuple] = []
    for bits in range(1 << len(free)):
        t: dict[Formula, bool] = {}
        for j, g in enumerate(free):
            t[g] = bool((bits >> j) & 1)
        for g in derived:
            if g.op == TRUE:
                t[g] = True
            elif g.op == FALSE:
                t[g] = False
            elif g.op == NOT:
                t[g] = not t[g.left]
            elif g.op == AND:
                t[g] = t[g.left] and t[g.right]
            elif g.op == OR:
                t[g] = t[g.left] or t[g.right]
            elif g.op == IMPLIES:
                t[g] = (not t[g.left]) or t[g.right]
            elif g.op == IFF:
                t[g] = t[g.left] == t[g.right]
            elif g.op == UNTIL:
                t[g] = t[g.right] or (t[g.left] and t[Next(g)])
            elif g.op == FINALLY:
                t[g] = t[g.left] or t[Next(g)]
            elif g.op == GLOBALLY:
                t[g] = t[g.left] and t[Next(g)]
        truths.append(t)
        key_out.append(tuple(t[x] for x in xforms))
        key_in.append(tuple(t[x.left] for x in xforms))

    # (pending at node?, fulfilled at node?) per eventuality.
    eventualities = []
    for s in subs:
        if s.op == UNTIL:
            eventualities.append((s, s.right, True))
        elif s.op == FINALLY:
            eventualities.append((s, s.left, True))
        elif s.op == GLOBALLY:
            eventualities.append((s, s.left, False))

    alive = set(range(len(truths)))
    while True:
        in_keys = {key_in[i] for i in alive}
        dead = {i for i in alive if key_out[i] not in in_keys}
        if dead:
            alive -= dead
            continue
        changed = False
        for guard, target, polarity in eventualities:
            sat = {i for i in alive if truths[i][target] == polarity}
            reached = set(sat)
            reach_buckets: dict[tuple, list[int]] = {}
            for i in alive:
                reach_buckets.setdefault(key_out[i], []).append(i)
            queue = list(sat)
            while queue:
                j = queue.pop()
                for i in reach_buckets.get(key_in[j], ()):
                    if i not in reached:
                        reached.add(i)
                        queue.append(i)
            dead = {i for i in alive
                    if truths[i][guard] == polarity and i not in reached}
            if dead:
                alive -= dead
                changed = True
        if not changed:
            break
    return any(truths[i][f] for i in alive)


_ATOM_NAMES = "pqrstuvw"

_LEAF_BUILDERS = (lambda rng, names: Atom(rng.choice(names)),
                  lambda rng, names: TRUE_F,
                  lambda rng, names: FALSE_F)
_UNARY_BUILDERS = (Not, Next, Finally, Globally)
_BINARY_BUILDERS = (And, Or, Implies, Iff, Until)


def random_formula(seed: int, size: int, atoms: int = 3) -> Formula:
    """Deterministic random syntax tree with exactly ``size`` nodes,
    picking uniformly among the constructors feasible for the budget."""
    if size < 1:
        raise ValueError("size must be >= 1")
    if atoms < 1:
        raise ValueError("atoms must be >= 1")
    names = [_ATOM_NAMES[i] if i < len(_ATOM_NAMES) else f"x{i}"
             for i in range(atoms)]
    rng = random.Random(seed)

    def build(budget: int) -> Formula:
        if budget == 1:
            return rng.choice(_LEAF_BUILDERS)(rng, names)
        if budget == 2:
            return rng.choice(_UNARY_BUILDERS)(build(1))
        choice = rng.randrange(len(_UNARY_BUILDERS) + len(_BINARY_BUILDERS))
        if choice < len(_UNARY_BUILDERS):
            return _UNARY_BUILDERS[choice](build(budget - 1))
        ctor = _BINARY_BUILDERS[choice - len(_UNARY_BUILDERS)]
        left = rng.randint(1, budget - 2)
        return ctor(build(left), build(budget - 1 - left))

    return build(size)
