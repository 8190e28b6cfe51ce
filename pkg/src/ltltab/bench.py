"""Benchmark formulas and the CSV benchmark runner."""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import reduce

from .formula import (
    And, Atom, Finally, Formula, Globally, Iff, Implies, Next, Not,
    formula_length, parse_formula,
)
from .search import SearchOptions, solve

# Small built-in pattern set: known satisfiable / unsatisfiable shapes.
PATTERNS: tuple[tuple[str, str], ...] = (
    ("sat1", "true"),
    ("sat2", "p"),
    ("sat3", "F p"),
    ("sat4", "p & X p & F ~p"),
    ("sat5", "G p"),
    ("unsat1", "false"),
    ("unsat2", "p & ~p"),
    ("unsat3", "F p & G ~p"),
    ("unsat4", "p & G(p -> X p) & F ~p"),
)


def generate_foo(n: int) -> Formula:
    """The alternating-counter family foo_n: `a` flips every step, the
    b_i are mutually exclusive, each excluded while `a` holds, and each
    must recur forever.  Satisfiable for every n >= 2; conjunctions are
    chained left-associatively."""
    if n < 2:
        raise ValueError("foo_n requires n >= 2")
    a = Atom("a")
    bs = [Atom(f"b{i}") for i in range(1, n + 1)]
    parts: list[Formula] = [a, Globally(Iff(a, Next(Not(a))))]
    parts += [Globally(Finally(b)) for b in bs]
    parts += [Globally(Implies(b, Not(a))) for b in bs]
    parts += [Globally(Not(And(bs[i], bs[j])))
              for i in range(n) for j in range(i + 1, n)]
    return reduce(And, parts)


CSV_HEADER = ("name", "length", "verdict", "steps", "depth", "millis")


@dataclass(frozen=True)
class BenchRow:
    name: str
    length: int
    verdict: str
    steps: int
    depth: int
    millis: float

    def as_csv(self) -> tuple:
        return (self.name, self.length, self.verdict, self.steps,
                self.depth, f"{self.millis:.3f}")


def _series_formulas(series: str, n: int) -> list[tuple[str, Formula]]:
    if series == "foo":
        return [(f"foo{k}", generate_foo(k)) for k in range(2, n + 1)]
    if series == "patterns":
        return [(name, parse_formula(text)) for name, text in PATTERNS]
    if series.startswith("@"):
        out = []
        with open(series[1:], encoding="utf-8") as fh:
            for i, line in enumerate(fh, 1):
                line = line.strip()
                if line and not line.startswith("#"):
                    out.append((f"line{i}", parse_formula(line)))
        return out
    raise ValueError(f"unknown benchmark series {series!r} "
                     "(expected foo, patterns, or @file)")


def run_bench(series: str, n: int = 4, repeat: int = 1,
              opts: SearchOptions | None = None) -> list[BenchRow]:
    """Solve every formula of the series ``repeat`` times; one row each.

    Steps and depth are deterministic for a fixed seed and flags; only
    millis varies between repeats.
    """
    opts = opts or SearchOptions()
    rows = []
    for name, f in _series_formulas(series, n):
        for _ in range(max(1, repeat)):
            start = time.perf_counter()
            verdict = solve(f, opts)
            millis = (time.perf_counter() - start) * 1000.0
            rows.append(BenchRow(name, formula_length(f),
                                 "SAT" if verdict.satisfiable else "UNSAT",
                                 verdict.stats.steps,
                                 verdict.stats.max_poised_depth, millis))
    return rows
