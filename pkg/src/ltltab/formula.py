"""LTL formulas: hash-consed syntax trees, parser, printer, closure sets.

The language keeps the usual abbreviations (true/false, |, ->, <->, F, G)
as first-class constructors; nothing is rewritten into a core fragment.
Formulas are interned, so structural equality is object identity and every
formula carries a stable integer key usable for ordering and hashing.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from typing import Iterator, Optional

# Constructor tags.
ATOM = 0
TRUE = 1
FALSE = 2
NOT = 3
AND = 4
OR = 5
IMPLIES = 6
IFF = 7
NEXT = 8
UNTIL = 9
FINALLY = 10
GLOBALLY = 11

_UNARY = (NOT, NEXT, FINALLY, GLOBALLY)
_BINARY = (AND, OR, IMPLIES, IFF, UNTIL)
_LEAF = (ATOM, TRUE, FALSE)


class Formula:
    """One interned LTL formula node.

    Never constructed directly; use the factory functions below (or
    ``parse_formula``).  Interning guarantees that structurally equal
    formulas are the same object, so identity comparison, the default
    hash and the ``key`` attribute all agree.
    """

    __slots__ = ("op", "left", "right", "name", "key", "size", "elementary",
                 "_neg", "_evt")

    op: int
    left: Optional["Formula"]
    right: Optional["Formula"]
    name: Optional[str]
    key: int
    size: int
    elementary: bool

    def __repr__(self) -> str:
        return f"<{format_formula(self)}>"

    def __str__(self) -> str:
        return format_formula(self)

    @property
    def neg(self) -> "Formula":
        """The interned negation ``~self`` (cached)."""
        n = self._neg
        if n is None:
            n = Not(self)
            self._neg = n
        return n

    @property
    def evt_target(self) -> Optional["Formula"]:
        """Target the branch owes when this formula is an X-eventuality.

        X(a U b) and X F b owe b; X ~G a owes ~a, since postponing a
        negated G forever would wrongly certify it.  Negated U and F
        forms owe nothing: holding them off forever is how they are
        satisfied.
        """
        t = self._evt
        if t is False:
            g = self.left if self.op == NEXT else None
            t = None
            if g is not None:
                if g.op == UNTIL:
                    t = g.right
                elif g.op == FINALLY:
                    t = g.left
                elif g.op == NOT and g.left.op == GLOBALLY:
                    t = Not(g.left.left)
            self._evt = t
        return t


_intern_lock = threading.Lock()
_interned: dict[tuple, Formula] = {}
_next_key = 0


def _mk(op: int, left: Formula | None = None, right: Formula | None = None,
        name: str | None = None) -> Formula:
    sig = (op, name if op == ATOM else
           (left.key if left is not None else -1,
            right.key if right is not None else -1))
    f = _interned.get(sig)
    if f is not None:
        return f
    with _intern_lock:
        f = _interned.get(sig)
        if f is not None:
            return f
        global _next_key
        f = Formula.__new__(Formula)
        f.op = op
        f.left = left
        f.right = right
        f.name = name
        f.key = _next_key
        _next_key += 1
        f.size = 1 + (left.size if left is not None else 0) \
                   + (right.size if right is not None else 0)
        f.elementary = (
            op == ATOM or op == NEXT
            or (op == NOT and left.op in (ATOM, NEXT))
        )
        f._neg = None
        f._evt = False
        _interned[sig] = f
        return f


def Atom(name: str) -> Formula:
    return _mk(ATOM, name=name)


def Not(f: Formula) -> Formula:
    return _mk(NOT, f)


def And(left: Formula, right: Formula) -> Formula:
    return _mk(AND, left, right)


def Or(left: Formula, right: Formula) -> Formula:
    return _mk(OR, left, right)


def Implies(left: Formula, right: Formula) -> Formula:
    return _mk(IMPLIES, left, right)


def Iff(left: Formula, right: Formula) -> Formula:
    return _mk(IFF, left, right)


def Next(f: Formula) -> Formula:
    return _mk(NEXT, f)


def Until(left: Formula, right: Formula) -> Formula:
    return _mk(UNTIL, left, right)


def Finally(f: Formula) -> Formula:
    return _mk(FINALLY, f)


def Globally(f: Formula) -> Formula:
    return _mk(GLOBALLY, f)


TRUE_F = _mk(TRUE)
FALSE_F = _mk(FALSE)


def formula_length(f: Formula) -> int:
    """Node count of the syntax tree (abbreviations count as single nodes)."""
    return f.size


def is_elementary(f: Formula) -> bool:
    """True for atoms, negated atoms, X-formulas and negated X-formulas."""
    return f.elementary


def eventuality_target(f: Formula) -> Formula | None:
    """For an X-eventuality ``X(a U b)`` or ``X F b`` return ``b``, else None."""
    return f.evt_target


def subformulas(f: Formula) -> frozenset[Formula]:
    """All subformulas of ``f``, including ``f`` itself."""
    seen: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        if g.left is not None:
            stack.append(g.left)
        if g.right is not None:
            stack.append(g.right)
    return frozenset(seen)


def atoms_of(f: Formula) -> frozenset[str]:
    """Names of the atomic propositions occurring in ``f``."""
    return frozenset(g.name for g in subformulas(f) if g.op == ATOM)


@dataclass(frozen=True)
class ClosureSet:
    """The finite universe of formulas that tableau labels can draw from."""

    members: frozenset[Formula]
    size: int

    def __contains__(self, f: Formula) -> bool:
        return f in self.members

    def __iter__(self) -> Iterator[Formula]:
        return iter(sorted(self.members, key=lambda g: g.key))


def closure_set(f: Formula) -> ClosureSet:
    """Subformulas and their negations, plus the X-wrapped companions.

    For every U/F/G subformula s the set also holds X s, ~X s, X ~s and
    ~X ~s, since the decomposition rules for s and ~s introduce exactly
    the X-wrapped forms.  Size is bounded by 6 * formula_length(f), and
    by 4 * formula_length(f) on the ~/&/X/U fragment.
    """
    members: set[Formula] = set()
    for s in subformulas(f):
        members.add(s)
        members.add(Not(s))
        if s.op in (UNTIL, FINALLY, GLOBALLY):
            xs = Next(s)
            xn = Next(Not(s))
            members.update((xs, Not(xs), xn, Not(xn)))
    return ClosureSet(frozenset(members), len(members))


def eventuality_targets(f: Formula) -> frozenset[Formula]:
    """Targets of every X-eventuality in closure_set(f)."""
    out = set()
    for s in subformulas(f):
        if s.op == UNTIL:
            out.add(s.right)
        elif s.op == FINALLY:
            out.add(s.left)
        elif s.op == GLOBALLY:
            out.add(Not(s.left))
    return frozenset(out)


# ---------------------------------------------------------------------------
# Concrete syntax
# ---------------------------------------------------------------------------
#
# atoms        [a-zA-Z_][a-zA-Z0-9_]*  (keywords excluded, maximal munch)
# literals     true false
# unary        ~ X F G        (tightest, stack to the right)
# binary       U  (right-assoc, tighter than &), &, |  (left-assoc),
#              -> and <->  (right-assoc, <-> loosest)

_KEYWORDS = {"true": TRUE, "false": FALSE}
_UNARY_KEYWORDS = {"X": NEXT, "F": FINALLY, "G": GLOBALLY}

_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|<->|->|[~&|()]")


class ParseError(ValueError):
    """Syntax error with a byte offset and the expected token set."""

    def __init__(self, message: str, text: str, offset: int,
                 expected: tuple[str, ...]):
        self.offset = len(text[:offset].encode("utf-8"))
        self.expected = expected
        want = ", ".join(expected)
        super().__init__(f"{message} at byte {self.offset} (expected: {want})")


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        n = len(text)
        while pos < n:
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise ParseError(f"unexpected character {text[pos]!r}",
                                 text, pos, ("formula",))
            tok = m.group()
            self.tokens.append((self._kind(tok), tok, pos))
            pos = m.end()
        self.tokens.append(("eof", "", n))
        self.i = 0

    @staticmethod
    def _kind(tok: str) -> str:
        if tok in ("true", "false", "U", "X", "F", "G", "~", "&", "|",
                   "->", "<->", "(", ")"):
            return tok
        return "ident"

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, str, int]:
        t = self.tokens[self.i]
        self.i += 1
        return t


def parse_formula(text: str) -> Formula:
    """Parse the concrete syntax above into an interned Formula."""
    lx = _Lexer(text)
    f = _parse_iff(lx)
    kind, tok, pos = lx.peek()
    if kind != "eof":
        raise ParseError(f"unexpected token {tok!r}", text, pos,
                         ("end of input", "binary operator"))
    return f


def _parse_iff(lx: _Lexer) -> Formula:
    left = _parse_implies(lx)
    if lx.peek()[0] == "<->":
        lx.next()
        return Iff(left, _parse_iff(lx))
    return left


def _parse_implies(lx: _Lexer) -> Formula:
    left = _parse_or(lx)
    if lx.peek()[0] == "->":
        lx.next()
        return Implies(left, _parse_implies(lx))
    return left


def _parse_or(lx: _Lexer) -> Formula:
    f = _parse_and(lx)
    while lx.peek()[0] == "|":
        lx.next()
        f = Or(f, _parse_and(lx))
    return f


def _parse_and(lx: _Lexer) -> Formula:
    f = _parse_until(lx)
    while lx.peek()[0] == "&":
        lx.next()
        f = And(f, _parse_until(lx))
    return f


def _parse_until(lx: _Lexer) -> Formula:
    left = _parse_unary(lx)
    if lx.peek()[0] == "U":
        lx.next()
        return Until(left, _parse_until(lx))
    return left


def _parse_unary(lx: _Lexer) -> Formula:
    kind, tok, pos = lx.peek()
    if kind == "~":
        lx.next()
        return Not(_parse_unary(lx))
    if kind in _UNARY_KEYWORDS:
        lx.next()
        child = _parse_unary(lx)
        return _mk(_UNARY_KEYWORDS[kind], child)
    return _parse_primary(lx)


def _parse_primary(lx: _Lexer) -> Formula:
    kind, tok, pos = lx.next()
    if kind == "ident":
        return Atom(tok)
    if kind == "true":
        return TRUE_F
    if kind == "false":
        return FALSE_F
    if kind == "(":
        f = _parse_iff(lx)
        kind, tok, pos = lx.next()
        if kind != ")":
            raise ParseError(f"unexpected token {tok!r}", lx.text, pos, (")",))
        return f
    raise ParseError(f"unexpected token {tok!r}", lx.text, pos,
                     ("atom", "true", "false", "~", "X", "F", "G", "("))


_PREC_LEAF = 7
_PREC_UNARY = 6
_PREC = {UNTIL: 5, AND: 4, OR: 3, IMPLIES: 2, IFF: 1}
_RIGHT_ASSOC = (UNTIL, IMPLIES, IFF)

_ASCII_OPS = {AND: "&", OR: "|", IMPLIES: "->", IFF: "<->", UNTIL: "U"}
_UNICODE_OPS = {AND: "∧", OR: "∨", IMPLIES: "→",
                IFF: "↔", UNTIL: "U"}


def _prec(f: Formula) -> int:
    if f.op in _LEAF:
        return _PREC_LEAF
    if f.op in _UNARY:
        return _PREC_UNARY
    return _PREC[f.op]


def format_formula(f: Formula, unicode: bool = False) -> str:
    """Render ``f`` so that parse_formula(format_formula(f)) is f again.

    ASCII by default; ``unicode=True`` switches the boolean connectives
    and constants to their usual glyphs.
    """
    ops = _UNICODE_OPS if unicode else _ASCII_OPS

    def wrap(g: Formula, need: int) -> str:
        s = fmt(g)
        return f"({s})" if _prec(g) < need else s

    def fmt(g: Formula) -> str:
        op = g.op
        if op == ATOM:
            return g.name
        if op == TRUE:
            return "⊤" if unicode else "true"
        if op == FALSE:
            return "⊥" if unicode else "false"
        if op == NOT:
            inner = fmt(g.left)
            if _prec(g.left) < _PREC_UNARY:
                inner = f"({inner})"
            return ("¬" if unicode else "~") + inner
        if op in (NEXT, FINALLY, GLOBALLY):
            letter = {NEXT: "X", FINALLY: "F", GLOBALLY: "G"}[op]
            if _prec(g.left) < _PREC_UNARY:
                return f"{letter}({fmt(g.left)})"
            return f"{letter} {fmt(g.left)}"
        p = _PREC[op]
        if op in _RIGHT_ASSOC:
            return f"{wrap(g.left, p + 1)} {ops[op]} {wrap(g.right, p)}"
        return f"{wrap(g.left, p)} {ops[op]} {wrap(g.right, p + 1)}"

    return fmt(f)
