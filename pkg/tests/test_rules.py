"""Rule table, poised-label checks, and branch-history rules."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from ltltab import (
    And, Atom, Branch, FALSE_F, Finally, Globally, Iff, Implies, Next, Not,
    Or, RuleId, SearchOptions, TRUE_F, TableauContext, Until, apply_static,
    closure_set, evaluate, is_poised, label_weight, loop_check, make_label,
    prune0_check, prune_check, solve, transition,
)
from ltltab.oracle import random_formula

p, q, r, a, b = Atom("p"), Atom("q"), Atom("r"), Atom("a"), Atom("b")


def lbl(*fs):
    return make_label(fs)


class TestRuleInventory:
    def test_exactly_twenty_five_rules(self):
        assert len(RuleId) == 25

    def test_names(self):
        names = {rule.value for rule in RuleId}
        assert {"EMPTY", "LOOP", "PRUNE", "PRUNE0", "TRANSITION",
                "CONTRADICTION", "NOTIFF", "NOTUNTIL"} <= names


class TestLabels:
    def test_label_is_sorted_and_deduplicated(self):
        label = make_label([q, p, q, p])
        assert label == tuple(sorted({p, q}, key=lambda f: f.key))

    def test_poised_examples(self):
        assert is_poised(lbl(p, Not(q), Next(Globally(p))))
        assert not is_poised(())  # empty: EMPTY ticks it, not poised
        assert not is_poised(lbl(p, Globally(q)))  # G q not elementary
        assert not is_poised(lbl(p, Not(p)))  # direct contradiction


class TestApplyStatic:
    def test_empty_label_ticks(self):
        out = apply_static(())
        assert out.kind == "tick" and out.rule is RuleId.EMPTY

    def test_and_consumes_outermost_conjunction(self):
        # Right-nested rendering of the two-transition example formula.
        f = And(Not(p), And(Next(Not(p)), Until(q, p)))
        out = apply_static(lbl(f))
        assert out.rule is RuleId.AND
        assert out.children == (lbl(Not(p), And(Next(Not(p)), Until(q, p))),)

    def test_contradiction_crosses(self):
        out = apply_static(lbl(a, Not(a), q))
        assert out.kind == "cross" and out.rule is RuleId.CONTRADICTION

    def test_bot_crosses(self):
        out = apply_static(lbl(FALSE_F, q))
        assert out.kind == "cross" and out.rule is RuleId.BOT

    def test_not_top_crosses(self):
        out = apply_static(lbl(Not(TRUE_F)))
        assert out.kind == "cross" and out.rule is RuleId.NOTTOP

    def test_globally_unfolds(self):
        g = Globally(p)
        out = apply_static(lbl(g))
        assert out.rule is RuleId.GLOBALLY
        assert out.children == (lbl(p, Next(g)),)

    def test_until_splits(self):
        # Hand application of the U schema on {q U p, ~p}: the left child
        # gets {p, ~p} (later crossed), the right {q, X(q U p), ~p}.
        u = Until(q, p)
        out = apply_static(lbl(u, Not(p)))
        assert out.rule is RuleId.UNTIL
        assert out.children == (lbl(p, Not(p)),
                                lbl(q, Next(u), Not(p)))

    def test_top_consumes_constant(self):
        out = apply_static(lbl(TRUE_F, p))
        assert out.rule is RuleId.TOP and out.children == (lbl(p),)

    def test_poised_label_returns_none(self):
        assert apply_static(lbl(p, Next(q))) is None

    def test_conclusions_union_no_duplicates(self):
        out = apply_static(lbl(And(p, q), p, q))
        assert out.children == (lbl(p, q),)

    def test_nonbranching_preferred_over_branching(self):
        out = apply_static(lbl(Or(p, q), And(a, b)))
        assert out.rule is RuleId.AND


class TestTransition:
    def test_keeps_next_content(self):
        assert transition(lbl(p, Next(Globally(p)))) == lbl(Globally(p))

    def test_empty_when_no_next_forms(self):
        assert transition(lbl(p, Not(q))) == ()

    def test_negated_next_carries_negation(self):
        label = lbl(Not(p), Next(Not(p)), Next(Until(q, p)))
        assert transition(label) == lbl(Not(p), Until(q, p))


def _branch(root, labels):
    branch = Branch(TableauContext(root))
    for label in labels:
        branch.push(label, None)
    return branch


class TestLoopCheck:
    def test_repeated_globally_state_ticks(self):
        g = Globally(p)
        state = lbl(p, Next(g))
        branch = _branch(g, [lbl(g), state, lbl(g), state])
        out = loop_check(branch)
        assert out is not None and out.rule is RuleId.LOOP
        assert out.evidence == (1,)  # nearest qualifying ancestor

    def test_unfulfilled_eventuality_blocks(self):
        root = And(p, And(Finally(q), Until(r, q)))
        state = lbl(p, Next(Finally(q)), Next(Until(r, q)))
        mid = lbl(Finally(q), Until(r, q))  # q itself never appears
        branch = _branch(root, [state, mid, state])
        assert loop_check(branch) is None

    def test_superset_ancestor_ticks_and_model_is_sound(self):
        f = And(Or(Globally(p), p), Globally(p))
        verdict = solve(f)
        assert verdict.satisfiable
        assert evaluate(verdict.model, f)

    def test_eventualities_quantified_over_ancestor_label(self):
        # The ancestor's own eventualities must be fulfilled even when
        # they are not members of the current (smaller) label.
        root = And(Finally(q), p)
        big = lbl(p, Next(Finally(q)))
        small = lbl(p)
        branch = _branch(root, [big, small])
        assert loop_check(branch) is None  # q never fulfilled after big


class TestPruneCheck:
    def _ctx_root(self):
        return And(Globally(Finally(p)), Globally(Finally(q)))

    def test_two_occurrences_are_not_enough(self):
        state = lbl(Next(Finally(p)), a)
        branch = _branch(And(Finally(p), a), [state, lbl(a), state])
        assert prune_check(branch) is None

    def test_three_stale_occurrences_cross(self):
        state = lbl(Next(Finally(p)), a)
        branch = _branch(And(Finally(p), a),
                         [state, lbl(a), state, lbl(a), state])
        out = prune_check(branch)
        assert out is not None and out.rule is RuleId.PRUNE
        assert out.evidence == (0, 2)

    def test_new_fulfillment_in_last_segment_blocks(self):
        # (u, v] fulfills p but (v, w] fulfills q: progress was made.
        state = lbl(Next(Finally(p)), Next(Finally(q)), a)
        branch = _branch(self._ctx_root(),
                         [state, lbl(p), state, lbl(q), state])
        assert prune_check(branch) is None

    def test_repeat_of_old_fulfillment_crosses(self):
        state = lbl(Next(Finally(p)), Next(Finally(q)), a)
        branch = _branch(self._ctx_root(),
                         [state, lbl(p), state, lbl(p), state])
        out = prune_check(branch)
        assert out is not None and out.evidence == (0, 2)


class TestPrune0Check:
    def test_second_stale_occurrence_crosses(self):
        state = lbl(Next(Finally(p)), a)
        branch = _branch(And(Finally(p), a), [state, lbl(a), state])
        out = prune0_check(branch)
        assert out is not None and out.rule is RuleId.PRUNE0
        assert out.evidence == (0,)

    def test_without_eventualities_does_not_apply(self):
        g = Globally(p)
        state = lbl(p, Next(g))
        branch = _branch(g, [state, lbl(g), state])
        assert prune0_check(branch) is None
        assert loop_check(branch) is not None  # LOOP handles this repeat

    def test_fulfillment_since_last_occurrence_blocks(self):
        state = lbl(Next(Finally(p)), a)
        branch = _branch(And(Finally(p), a), [state, lbl(p), state])
        assert prune0_check(branch) is None


class TestProgressMeasure:
    def test_iff_negated_child_still_decreases(self):
        # Node counting alone would increase on the negated child of <->
        # (two fresh negations); the measure strips one negation.
        f = Iff(And(a, b), And(p, q))
        label = lbl(f)
        out = apply_static(label)
        assert out.rule is RuleId.IFF
        for child in out.children:
            assert label_weight(child) < label_weight(label)

    @settings(max_examples=400, deadline=None)
    @given(st.integers(0, 10 ** 9))
    def test_static_children_strictly_decrease_weight(self, seed):
        rng = random.Random(seed)
        f = random_formula(seed, size=rng.randint(1, 12), atoms=3)
        label = make_label([f])
        for _ in range(200):
            out = apply_static(label, seed=seed)
            if out is None or out.kind != "children":
                break
            w = label_weight(label)
            for child in out.children:
                assert label_weight(child) < w
            label = rng.choice(out.children)

    @settings(max_examples=300, deadline=None)
    @given(st.integers(0, 10 ** 9))
    def test_static_none_iff_poised(self, seed):
        rng = random.Random(seed)
        f = random_formula(seed, size=rng.randint(1, 10), atoms=2)
        label = make_label([f])
        for _ in range(50):
            out = apply_static(label)
            assert (out is None) == is_poised(label)
            if out is None or out.kind != "children":
                break
            label = rng.choice(out.children)


class TestLabelClosureInvariant:
    def test_reachable_labels_stay_inside_closure(self):
        for seed in range(80):
            f = random_formula(seed, size=1 + seed % 12, atoms=3)
            clo = closure_set(f)
            verdict = solve(f, SearchOptions(trace=True))
            for event in verdict.trace:
                assert set(event.label) <= clo.members
