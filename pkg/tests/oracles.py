"""Independent reference computations used by the tests.

Everything here is deliberately written against the definitions, not
against the library internals: node counting walks the tree, the path
evaluator unrolls positions with bounded quantifiers, and the random
builders only use the public constructors.
"""

from __future__ import annotations

import random
from functools import lru_cache

from ltltab import Atom, And, Next, Not, Until, formula_length
from ltltab.formula import (
    AND, ATOM, FALSE, FINALLY, GLOBALLY, IFF, IMPLIES, NEXT, NOT, OR, TRUE,
    UNTIL,
)


def count_nodes(f) -> int:
    """Syntax tree node count, computed by walking the structure."""
    n = 1
    if f.left is not None:
        n += count_nodes(f.left)
    if f.right is not None:
        n += count_nodes(f.right)
    return n


def naive_evaluate(model, f, horizon: int | None = None) -> bool:
    """Truth by bounded unrolling of the ultimately periodic path.

    Temporal quantifiers scan an explicit window instead of solving
    fixpoints; the default window (twice prefix+period per tree node,
    plus one extra lap) is past the stabilization depth of any
    subformula, so this agrees with the exact evaluator.
    """
    n, m = model.prefix_len, model.period_len
    if horizon is None:
        horizon = 2 * (n + m) * formula_length(f) + (n + m)
    atoms = [a for _, a in model.states]

    def state(i: int) -> int:
        return i if i < n else (i - n) % m + n

    @lru_cache(maxsize=None)
    def val(g, i: int) -> bool:
        op = g.op
        if op == ATOM:
            return g.name in atoms[state(i)]
        if op == TRUE:
            return True
        if op == FALSE:
            return False
        if op == NOT:
            return not val(g.left, i)
        if op == AND:
            return val(g.left, i) and val(g.right, i)
        if op == OR:
            return val(g.left, i) or val(g.right, i)
        if op == IMPLIES:
            return (not val(g.left, i)) or val(g.right, i)
        if op == IFF:
            return val(g.left, i) == val(g.right, i)
        if op == NEXT:
            return val(g.left, i + 1)
        if op == UNTIL:
            for d in range(horizon + 1):
                if val(g.right, i + d):
                    return all(val(g.left, i + e) for e in range(d))
            return False
        if op == FINALLY:
            return any(val(g.left, i + d) for d in range(horizon + 1))
        if op == GLOBALLY:
            return all(val(g.left, i + d) for d in range(horizon + 1))
        raise AssertionError(op)

    result = val(f, 0)
    val.cache_clear()
    return result


def random_core_formula(rng: random.Random, size: int):
    """Random formula over the ~ / & / X / U fragment with `size` nodes."""
    if size == 1:
        return Atom(rng.choice("pqr"))
    if size == 2:
        return rng.choice((Not, Next))(random_core_formula(rng, 1))
    pick = rng.randrange(4)
    if pick == 0:
        return Not(random_core_formula(rng, size - 1))
    if pick == 1:
        return Next(random_core_formula(rng, size - 1))
    left = rng.randint(1, size - 2)
    ctor = And if pick == 2 else Until
    return ctor(random_core_formula(rng, left),
                random_core_formula(rng, size - 1 - left))


def random_lasso(rng: random.Random):
    """Small random lasso model over atoms p and q."""
    from ltltab import LassoModel

    prefix = rng.randint(0, 3)
    period = rng.randint(1, 4)
    states = tuple(
        (i, frozenset(a for a in ("p", "q") if rng.random() < 0.5))
        for i in range(prefix + period))
    return LassoModel(states, prefix, period)
