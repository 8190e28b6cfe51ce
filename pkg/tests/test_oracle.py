"""Semantic evaluator, graph-tableau reference, random formula generator."""

import random
from collections import Counter

import pytest

from ltltab import (
    Atom, Globally, Iff, LassoModel, Next, Not, evaluate, decide_graph,
    parse_formula, random_formula, solve,
)
from ltltab.oracle import ClosureLimitExceeded

from oracles import count_nodes, naive_evaluate, random_lasso

p, q = Atom("p"), Atom("q")

ONE_STATE_P = LassoModel(((0, frozenset({"p"})),), 0, 1)
ALTERNATING = LassoModel(((0, frozenset({"a"})), (1, frozenset())), 0, 2)


class TestEvaluate:
    def test_globally_on_self_loop(self):
        assert evaluate(ONE_STATE_P, parse_formula("G p"))

    def test_eventually_not_p_fails_on_constant_loop(self):
        assert not evaluate(ONE_STATE_P, parse_formula("F ~p"))

    def test_alternation_law_on_two_state_loop(self):
        # Hand evaluation: `a` holds exactly at even positions, so
        # a <-> X ~a holds everywhere.
        f = Globally(Iff(Atom("a"), Next(Not(Atom("a")))))
        assert evaluate(ALTERNATING, f)
        assert naive_evaluate(ALTERNATING, f,
                              horizon=4 * (ALTERNATING.prefix_len
                                           + ALTERNATING.period_len))

    def test_until_needs_witness_inside_period(self):
        m = LassoModel(((0, frozenset({"q"})), (1, frozenset({"q"})),
                        (2, frozenset({"p"}))), 0, 3)
        assert evaluate(m, parse_formula("q U p"))
        assert not evaluate(m, parse_formula("q U (p & q)"))

    def test_next_wraps_into_period(self):
        m = LassoModel(((0, frozenset()), (1, frozenset({"p"}))), 1, 1)
        assert evaluate(m, parse_formula("X p"))
        assert evaluate(m, parse_formula("X X p"))

    def test_agrees_with_bounded_unrolling(self):
        rng = random.Random(987)
        for trial in range(1000):
            model = random_lasso(rng)
            f = random_formula(rng.randrange(10 ** 9),
                               rng.randint(1, 10), atoms=2)
            assert evaluate(model, f) == naive_evaluate(model, f), \
                f"trial {trial}: {f} on {model}"


class TestDecideGraph:
    def test_contradiction_is_unsat(self):
        assert not decide_graph(parse_formula("p & ~p"))

    def test_eventually_is_sat(self):
        assert decide_graph(parse_formula("F p"))

    def test_until_is_sat(self):
        assert decide_graph(parse_formula("a U b"))

    def test_postponed_globally_violation_is_unsat(self):
        assert not decide_graph(parse_formula("G p & F ~p"))

    def test_closure_limit_enforced(self):
        f = parse_formula("(a U b) U (c U d)")
        with pytest.raises(ClosureLimitExceeded):
            decide_graph(f, closure_limit=8)

    def test_agrees_with_tree_search(self):
        checked = 0
        for seed in range(400):
            f = random_formula(seed, 1 + seed % 9, atoms=3)
            try:
                by_graph = decide_graph(f)
            except ClosureLimitExceeded:
                continue
            checked += 1
            assert by_graph == solve(f).satisfiable, str(f)
        assert checked >= 250


class TestRandomFormula:
    def test_deterministic_in_seed(self):
        a = random_formula(42, 9, atoms=3)
        b = random_formula(42, 9, atoms=3)
        assert a is b

    def test_single_node(self):
        f = random_formula(1, 1, atoms=1)
        assert count_nodes(f) == 1

    def test_exact_size(self):
        for seed in range(200):
            size = 1 + seed % 14
            f = random_formula(seed, size, atoms=3)
            assert count_nodes(f) == size

    def test_every_constructor_appears(self):
        ops = Counter()
        for seed in range(10 ** 4):
            f = random_formula(seed, 9, atoms=2)
            stack = [f]
            while stack:
                g = stack.pop()
                ops[g.op] += 1
                if g.left is not None:
                    stack.append(g.left)
                if g.right is not None:
                    stack.append(g.right)
        assert len(ops) == 12, f"constructors seen: {sorted(ops)}"

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            random_formula(0, 0)
        with pytest.raises(ValueError):
            random_formula(0, 3, atoms=0)
