"""Plain Boolean formulas over named variables, QBFs, and DIMACS CNF input."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Mapping

from ..ocp import StructuralError


class BoolFormula:
    __slots__ = ()


@dataclass(frozen=True)
class BVar(BoolFormula):
    name: str


@dataclass(frozen=True)
class BConst(BoolFormula):
    value: bool


@dataclass(frozen=True)
class BNot(BoolFormula):
    arg: BoolFormula


@dataclass(frozen=True)
class BAnd(BoolFormula):
    left: BoolFormula
    right: BoolFormula


@dataclass(frozen=True)
class BOr(BoolFormula):
    left: BoolFormula
    right: BoolFormula


def bool_eval(f: BoolFormula, env: Mapping[str, bool]) -> bool:
    if isinstance(f, BVar):
        return bool(env[f.name])
    if isinstance(f, BConst):
        return f.value
    if isinstance(f, BNot):
        return not bool_eval(f.arg, env)
    if isinstance(f, BAnd):
        return bool_eval(f.left, env) and bool_eval(f.right, env)
    if isinstance(f, BOr):
        return bool_eval(f.left, env) or bool_eval(f.right, env)
    raise TypeError(f"not a Boolean formula: {f!r}")


def bool_vars(f: BoolFormula) -> set[str]:
    if isinstance(f, BVar):
        return {f.name}
    if isinstance(f, BConst):
        return set()
    if isinstance(f, BNot):
        return bool_vars(f.arg)
    return bool_vars(f.left) | bool_vars(f.right)


def bool_size(f: BoolFormula) -> int:
    if isinstance(f, (BVar, BConst)):
        return 1
    if isinstance(f, BNot):
        return 1 + bool_size(f.arg)
    return 1 + bool_size(f.left) + bool_size(f.right)


def render_bool(f: BoolFormula) -> str:
    if isinstance(f, BVar):
        return f.name
    if isinstance(f, BConst):
        return "true" if f.value else "false"
    if isinstance(f, BNot):
        return "~" + render_bool(f.arg)
    op = " & " if isinstance(f, BAnd) else " | "
    return "(" + render_bool(f.left) + op + render_bool(f.right) + ")"


_BTOK = re.compile(r"\s*(?:(->|<->|[~&|()])|([A-Za-z_][A-Za-z0-9_]*))")


def parse_bool(text: str) -> BoolFormula:
    """Parse ``~ & | -> <->`` with the usual precedence; ``->`` and ``<->`` are expanded."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _BTOK.match(text, pos)
        if not m or m.end() == pos:
            raise StructuralError(f"bad Boolean formula near position {pos}")
        toks.append(m.group(1) or m.group(2))
        pos = m.end()
    toks.append(None)
    i = 0

    def peek():
        return toks[i]

    def take(expected=None):
        nonlocal i
        tok = toks[i]
        if expected is not None and tok != expected:
            raise StructuralError(f"expected {expected!r}, found {tok!r}")
        i += 1
        return tok

    def iff():
        left = imp()
        while peek() == "<->":
            take()
            right = imp()
            left = BOr(BAnd(left, right), BAnd(BNot(left), BNot(right)))
        return left

    def imp():
        left = disj()
        if peek() == "->":
            take()
            return BOr(BNot(left), imp())
        return left

    def disj():
        left = conj()
        while peek() == "|":
            take()
            left = BOr(left, conj())
        return left

    def conj():
        left = unary()
        while peek() == "&":
            take()
            left = BAnd(left, unary())
        return left

    def unary():
        tok = peek()
        if tok == "~":
            take()
            return BNot(unary())
        if tok == "(":
            take()
            inner = iff()
            take(")")
            return inner
        if tok in ("true", "false"):
            take()
            return BConst(tok == "true")
        if tok is not None and re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            take()
            return BVar(tok)
        raise StructuralError(f"unexpected token {tok!r} in Boolean formula")

    f = iff()
    if peek() is not None:
        raise StructuralError(f"trailing input {peek()!r} in Boolean formula")
    return f


def parse_dimacs(text: str) -> tuple[BoolFormula, int]:
    """DIMACS CNF to a formula over x1..xn; returns (formula, number of variables)."""
    nvars = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise StructuralError("expected 'p cnf VARS CLAUSES'")
            nvars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(current)
    if nvars is None:
        raise StructuralError("missing DIMACS problem line")
    f: BoolFormula = BConst(True)
    first = True
    for clause in clauses:
        c: BoolFormula = BConst(False)
        for j, lit in enumerate(clause):
            if abs(lit) > nvars:
                raise StructuralError(f"literal {lit} exceeds declared variable count")
            atom = BVar(f"x{abs(lit)}")
            atom = atom if lit > 0 else BNot(atom)
            c = atom if j == 0 else BOr(c, atom)
        f = c if first else BAnd(f, c)
        first = False
    return f, nvars


# quantified Boolean formulas


@dataclass(frozen=True)
class Qbf:
    """``prefix`` lists (quantifier, variable) from the outermost inwards."""

    prefix: tuple[tuple[str, str], ...]
    matrix: BoolFormula

    def __post_init__(self):
        names = [v for _, v in self.prefix]
        if len(set(names)) != len(names):
            raise StructuralError("a variable is quantified twice")
        for q, _ in self.prefix:
            if q not in ("exists", "forall"):
                raise StructuralError(f"unknown quantifier {q!r}")
        free = bool_vars(self.matrix) - set(names)
        if free:
            raise StructuralError(f"free variables {sorted(free)}; the prefix must bind the matrix")


def qbf_valid(alpha: Qbf) -> bool:
    """Brute-force truth of a closed prenex QBF."""

    def go(j, env):
        if j == len(alpha.prefix):
            return bool_eval(alpha.matrix, env)
        q, v = alpha.prefix[j]
        results = (go(j + 1, {**env, v: b}) for b in (False, True))
        return any(results) if q == "exists" else all(results)

    return go(0, {})


def parse_qbf(text: str) -> Qbf:
    """``forall x2 exists x1 : matrix``"""
    if ":" not in text:
        raise StructuralError("QBF needs a ':' between prefix and matrix")
    head, body = text.split(":", 1)
    toks = head.split()
    if len(toks) % 2:
        raise StructuralError("prefix must alternate quantifier and variable")
    prefix = tuple((toks[j], toks[j + 1]) for j in range(0, len(toks), 2))
    return Qbf(prefix, parse_bool(body))


def render_qbf(alpha: Qbf) -> str:
    head = " ".join(f"{q} {v}" for q, v in alpha.prefix)
    return f"{head} : {render_bool(alpha.matrix)}"


def truth_table(f: BoolFormula, names: list[str]):
    """All assignments to ``names`` with the value of f, in binary counting order."""
    for bits in product((False, True), repeat=len(names)):
        env = dict(zip(names, bits))
        yield env, bool_eval(f, env)
