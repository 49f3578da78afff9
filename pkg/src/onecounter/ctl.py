"""CTL syntax trees, a small parser/renderer, and the size and lud measures.

Core connectives are atoms, true/false, negation, conjunction, EX, EU and
EW (weak until).  Or, implication, AX, EF and EG are kept as sugar nodes so
formulas render the way they were written; measures are always taken on
the desugared tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache


class CtlSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class Formula:
    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self):
        return render(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class TrueF(Formula):
    def __repr__(self):
        return "TrueF()"


@dataclass(frozen=True, repr=False)
class FalseF(Formula):
    def __repr__(self):
        return "FalseF()"


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class ExistsNext(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class ExistsUntil(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class ExistsWeakUntil(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


# sugar


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class ForallNext(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class ExistsFinally(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class ExistsGlobally(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


CORE = (Atom, TrueF, FalseF, Not, And, ExistsNext, ExistsUntil, ExistsWeakUntil)

TRUE = TrueF()
FALSE = FalseF()


def conj(*fs: Formula) -> Formula:
    """Left-nested conjunction; ``true`` when empty."""
    if not fs:
        return TRUE
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    if not fs:
        return FALSE
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


@lru_cache(maxsize=None)
def desugar(f: Formula) -> Formula:
    """Rewrite sugar into the core connectives."""
    if isinstance(f, (Atom, TrueF, FalseF)):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.arg))
    if isinstance(f, And):
        return And(desugar(f.left), desugar(f.right))
    if isinstance(f, ExistsNext):
        return ExistsNext(desugar(f.arg))
    if isinstance(f, ExistsUntil):
        return ExistsUntil(desugar(f.left), desugar(f.right))
    if isinstance(f, ExistsWeakUntil):
        return ExistsWeakUntil(desugar(f.left), desugar(f.right))
    if isinstance(f, Or):
        return Not(And(Not(desugar(f.left)), Not(desugar(f.right))))
    if isinstance(f, Implies):
        return Not(And(desugar(f.left), Not(desugar(f.right))))
    if isinstance(f, ForallNext):
        return Not(ExistsNext(Not(desugar(f.arg))))
    if isinstance(f, ExistsFinally):
        return ExistsUntil(TRUE, desugar(f.arg))
    if isinstance(f, ExistsGlobally):
        return ExistsWeakUntil(desugar(f.arg), FALSE)
    raise TypeError(f"not a formula: {f!r}")


@lru_cache(maxsize=None)
def _size_core(f: Formula) -> int:
    if isinstance(f, (Atom, TrueF, FalseF)):
        return 1
    return 1 + sum(_size_core(c) for c in f.children())


def size(f: Formula) -> int:
    """|f| on the desugared tree; binary nodes add 1 to the sum of their parts."""
    return _size_core(desugar(f))


@lru_cache(maxsize=None)
def _lud_core(f: Formula) -> int:
    if isinstance(f, (Atom, TrueF, FalseF)):
        return 0
    if isinstance(f, (ExistsUntil, ExistsWeakUntil)):
        return max(_lud_core(f.left) + 1, _lud_core(f.right))
    return max(_lud_core(c) for c in f.children())


def lud(f: Formula) -> int:
    """Leftward until depth: nesting depth through the left side of (weak) untils."""
    return _lud_core(desugar(f))


def is_ef(f: Formula) -> bool:
    if isinstance(f, (Atom, TrueF, FalseF)):
        return True
    if isinstance(f, (Not, And, Or, Implies, ExistsNext, ForallNext, ExistsFinally)):
        return all(is_ef(c) for c in f.children())
    if isinstance(f, ExistsUntil):
        return isinstance(f.left, TrueF) and is_ef(f.right)
    return False


def subformulas(f: Formula) -> list[Formula]:
    """Distinct subformulas, children before parents."""
    seen: dict[Formula, None] = {}

    def walk(g):
        if g in seen:
            return
        for c in g.children():
            walk(c)
        seen[g] = None

    walk(f)
    return list(seen)


def atoms(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Atom)}


# rendering

_PREC = {Implies: 1, Or: 2, And: 3}


def render(f: Formula) -> str:
    return _render(f, 0)


def _render(f: Formula, ctx: int) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Not):
        return "~" + _render(f.arg, 4)
    if isinstance(f, ExistsNext):
        return "EX " + _render(f.arg, 4)
    if isinstance(f, ForallNext):
        return "AX " + _render(f.arg, 4)
    if isinstance(f, ExistsFinally):
        return "EF " + _render(f.arg, 4)
    if isinstance(f, ExistsGlobally):
        return "EG " + _render(f.arg, 4)
    if isinstance(f, ExistsUntil):
        return f"E[ {_render(f.left, 0)} U {_render(f.right, 0)} ]"
    if isinstance(f, ExistsWeakUntil):
        return f"E[ {_render(f.left, 0)} W {_render(f.right, 0)} ]"
    prec = _PREC[type(f)]
    if isinstance(f, Implies):
        text = f"{_render(f.left, prec + 1)} -> {_render(f.right, prec)}"
    else:
        op = " & " if isinstance(f, And) else " | "
        # left-nested chains print flat; a right operand of the same kind needs parens
        text = _render(f.left, prec) + op + _render(f.right, prec + 1)
    return f"({text})" if prec < ctx else text


# parsing

_TOKEN = re.compile(r"\s*(?:(E\[)|(->)|([~&|()\]])|([A-Za-z_][A-Za-z0-9_']*))")
_KEYWORDS = {"EX", "AX", "EF", "EG", "U", "W", "true", "false"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise CtlSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        toks.append((m.group(m.lastindex), start))
        pos = m.end()
    toks.append(("<end>", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def take(self, expected=None):
        tok, pos = self.toks[self.i]
        if expected is not None and tok != expected:
            raise CtlSyntaxError(f"expected {expected!r}, found {tok!r}", pos)
        self.i += 1
        return tok

    def where(self):
        return self.toks[self.i][1]

    def formula(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.formula())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.peek() == "|":
            self.take()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.peek() == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok in ("EX", "AX", "EF", "EG"):
            self.take()
            ctor = {"EX": ExistsNext, "AX": ForallNext, "EF": ExistsFinally, "EG": ExistsGlobally}[tok]
            return ctor(self.unary())
        if tok == "E[":
            self.take()
            left = self.formula()
            kind = self.peek()
            if kind not in ("U", "W"):
                raise CtlSyntaxError(f"expected 'U' or 'W', found {kind!r}", self.where())
            self.take()
            right = self.formula()
            self.take("]")
            return ExistsUntil(left, right) if kind == "U" else ExistsWeakUntil(left, right)
        if tok == "(":
            self.take()
            inner = self.formula()
            self.take(")")
            return inner
        if tok == "true":
            self.take()
            return TRUE
        if tok == "false":
            self.take()
            return FALSE
        if tok not in _KEYWORDS and re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok):
            self.take()
            return Atom(tok)
        raise CtlSyntaxError(f"unexpected token {tok!r}", self.where())


def parse(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.peek() != "<end>":
        raise CtlSyntaxError(f"trailing input {p.peek()!r}", p.where())
    return f
