"""One-pass tree-shaped tableau for LTL satisfiability.

Decides propositional linear temporal logic formulas by building a
traditional tree tableau whose branches need no cross-branch
communication, extracts a lasso-shaped model from any successful
branch, and ships an independent semantic oracle plus a graph-tableau
reference procedure for cross-checking.
"""

from .formula import (
    And, Atom, ClosureSet, FALSE_F, Finally, Formula, Globally, Iff,
    Implies, Next, Not, Or, ParseError, TRUE_F, Until, atoms_of,
    closure_set, eventuality_target, format_formula, formula_length,
    is_elementary, parse_formula, subformulas,
)
from .lasso import LassoModel
from .rules import (
    Branch, Label, RuleId, RuleOutcome, TableauContext, apply_static,
    branch_outcome, is_poised, label_weight, loop_check, make_label,
    prune0_check, prune_check, transition,
)
from .search import (
    CapExceeded, SearchOptions, SearchStats, TableauBugError, Verdict,
    extract_model, run_parallel, solve,
)
from .oracle import ClosureLimitExceeded, decide_graph, evaluate, random_formula
from .bench import PATTERNS, generate_foo, run_bench

__all__ = [
    "And", "Atom", "Branch", "CapExceeded", "ClosureLimitExceeded",
    "ClosureSet", "FALSE_F", "Finally", "Formula", "Globally", "Iff",
    "Implies", "Label", "LassoModel", "Next", "Not", "Or", "ParseError",
    "PATTERNS", "RuleId", "RuleOutcome", "SearchOptions", "SearchStats",
    "TableauBugError", "TableauContext", "TRUE_F", "Until", "Verdict",
    "apply_static", "atoms_of", "branch_outcome", "closure_set",
    "decide_graph", "evaluate", "eventuality_target", "extract_model",
    "format_formula", "formula_length", "generate_foo", "is_elementary",
    "is_poised", "label_weight", "loop_check", "make_label",
    "parse_formula", "prune0_check", "prune_check", "random_formula",
    "run_bench", "run_parallel", "solve", "subformulas", "transition",
]
