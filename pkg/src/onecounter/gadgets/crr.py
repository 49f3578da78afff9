"""Boolean formulas over residue variables x_{i,r} and the OCN gadgets built from them."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from ..arith import CrrAssignment, DomainError, crr
from ..ctl import (And, Atom, ExistsFinally, ExistsNext, ExistsUntil, ExistsWeakUntil, FALSE,
                   Formula, Implies, Not)
from ..ocp import Nfa, Ocp, StructuralError, nfa_accepts
from .boolean import BAnd, BConst, BNot, BOr, BVar, parse_bool


class CrrFormula:
    __slots__ = ()


@dataclass(frozen=True)
class Lit(CrrFormula):
    """The variable x_{i,r}; ``i`` is 1-based."""

    i: int
    r: int


@dataclass(frozen=True)
class Neg(CrrFormula):
    arg: CrrFormula


@dataclass(frozen=True)
class Conj(CrrFormula):
    left: CrrFormula
    right: CrrFormula


@dataclass(frozen=True)
class Disj(CrrFormula):
    left: CrrFormula
    right: CrrFormula


@dataclass(frozen=True)
class Top(CrrFormula):
    pass


@dataclass(frozen=True)
class Bot(CrrFormula):
    pass


def big_and(parts: Sequence[CrrFormula]) -> CrrFormula:
    if not parts:
        return Top()
    out = parts[0]
    for p in parts[1:]:
        out = Conj(out, p)
    return out


def big_or(parts: Sequence[CrrFormula]) -> CrrFormula:
    if not parts:
        return Bot()
    out = parts[0]
    for p in parts[1:]:
        out = Disj(out, p)
    return out


def crr_eval(F: CrrFormula, x: CrrAssignment | Mapping[tuple[int, int], int]) -> bool:
    bits = x.bits if isinstance(x, CrrAssignment) else x
    if isinstance(F, Lit):
        return bool(bits.get((F.i, F.r), 0))
    if isinstance(F, Neg):
        return not crr_eval(F.arg, bits)
    if isinstance(F, Conj):
        return crr_eval(F.left, bits) and crr_eval(F.right, bits)
    if isinstance(F, Disj):
        return crr_eval(F.left, bits) or crr_eval(F.right, bits)
    if isinstance(F, Top):
        return True
    if isinstance(F, Bot):
        return False
    raise TypeError(f"not a CRR formula: {F!r}")


def crr_size(F: CrrFormula) -> int:
    """Node count."""
    if isinstance(F, Neg):
        return 1 + crr_size(F.arg)
    if isinstance(F, (Conj, Disj)):
        return 1 + crr_size(F.left) + crr_size(F.right)
    return 1


def is_negation_free(F: CrrFormula) -> bool:
    if isinstance(F, Neg):
        return False
    if isinstance(F, (Conj, Disj)):
        return is_negation_free(F.left) and is_negation_free(F.right)
    return True


def check_vars(F: CrrFormula, primes: Sequence[int]):
    if isinstance(F, Lit):
        if not (1 <= F.i <= len(primes) and 0 <= F.r < primes[F.i - 1]):
            raise DomainError(f"x_{{{F.i},{F.r}}} is out of range for primes {list(primes)}")
    elif isinstance(F, Neg):
        check_vars(F.arg, primes)
    elif isinstance(F, (Conj, Disj)):
        check_vars(F.left, primes)
        check_vars(F.right, primes)


def push_negations(F: CrrFormula, negate: bool = False) -> CrrFormula:
    """Negation normal form; double negations cancel."""
    if isinstance(F, Neg):
        return push_negations(F.arg, not negate)
    if isinstance(F, Lit):
        return Neg(F) if negate else F
    if isinstance(F, Top):
        return Bot() if negate else F
    if isinstance(F, Bot):
        return Top() if negate else F
    left, right = push_negations(F.left, negate), push_negations(F.right, negate)
    if isinstance(F, Conj):
        return Disj(left, right) if negate else Conj(left, right)
    return Conj(left, right) if negate else Disj(left, right)


def eliminate_negations(F: CrrFormula, primes: Sequence[int]) -> CrrFormula:
    """Replace each negated x_{i,r} by the disjunction of x_{i,k}, k != r."""
    check_vars(F, primes)

    def go(G):
        if isinstance(G, Neg):
            lit = G.arg
            return big_or([Lit(lit.i, k) for k in range(primes[lit.i - 1]) if k != lit.r])
        if isinstance(G, Conj):
            return Conj(go(G.left), go(G.right))
        if isinstance(G, Disj):
            return Disj(go(G.left), go(G.right))
        return G

    return go(push_negations(F))


def render_crr(F: CrrFormula) -> str:
    if isinstance(F, Lit):
        return f"x{F.i}_{F.r}"
    if isinstance(F, Neg):
        return "~" + render_crr(F.arg)
    if isinstance(F, Top):
        return "true"
    if isinstance(F, Bot):
        return "false"
    op = " & " if isinstance(F, Conj) else " | "
    return "(" + render_crr(F.left) + op + render_crr(F.right) + ")"


def parse_crr(text: str) -> CrrFormula:
    """Boolean syntax with variables written ``x<i>_<r>``."""
    def conv(b):
        if isinstance(b, BVar):
            m = re.fullmatch(r"x(\d+)_(\d+)", b.name)
            if not m:
                raise StructuralError(f"CRR variables look like x1_0, got {b.name!r}")
            return Lit(int(m.group(1)), int(m.group(2)))
        if isinstance(b, BConst):
            return Top() if b.value else Bot()
        if isinstance(b, BNot):
            return Neg(conv(b.arg))
        ctor = Conj if isinstance(b, BAnd) else Disj
        assert isinstance(b, (BAnd, BOr))
        return ctor(conv(b.left), conv(b.right))

    return conv(parse_bool(text))


def crr_equals_formula(primes: Sequence[int], target: int) -> CrrFormula:
    if target < 0:
        raise DomainError("target must be >= 0")
    return big_and([Lit(i, target % p) for i, p in enumerate(primes, start=1)])


def crr_formula_of_predicate(truth: Mapping[int, int] | Sequence[int], primes: Sequence[int],
                             m: int) -> CrrFormula:
    """DNF with one residue conjunction per M < 2^m where truth(M) = 1."""
    if 2**m > math.prod(primes):
        raise DomainError("need 2^m <= product of the primes")
    return big_or([crr_equals_formula(primes, M) for M in range(2**m) if truth[M]])


def leafstring(F: CrrFormula, primes: Sequence[int], m: int) -> str:
    if 2**m > math.prod(primes):
        raise DomainError("need 2^m <= product of the primes")
    return "".join("1" if crr_eval(F, crr(primes, M)) else "0" for M in range(2**m))


def leafstring_oracle(A: Nfa, F: CrrFormula, primes: Sequence[int], m: int) -> bool:
    return nfa_accepts(A, leafstring(F, primes, m))


# OCN gadgets


ALPHA, BETA, GAMMA = "alpha", "beta", "gamma"


@dataclass(frozen=True)
class GadgetOcn:
    ocp: Ocp
    in_loc: str
    out_loc: str | None = None


class _Builder:
    """Accumulates locations, labels and transitions for composed gadgets."""

    def __init__(self):
        self.locations: list[str] = []
        self._seen: set[str] = set()
        self.labels: dict[str, set[str]] = {}
        self.zero: set = set()
        self.pos: set = set()

    def loc(self, name, *props):
        if name not in self._seen:
            self._seen.add(name)
            self.locations.append(name)
        for p in props:
            self.labels.setdefault(p, set()).add(name)
        return name

    def both(self, src, d, dst):
        self.zero.add((src, d, dst))
        self.pos.add((src, d, dst))

    def div_gadget(self, prefix, primes):
        bot = self.loc(f"{prefix}bot", GAMMA)
        for p in primes:
            d = self.loc(f"{prefix}div{p}", BETA)
            self.pos.add((d, -p, d))
            self.pos.add((d, -1, bot))

    def branch(self, prefix, src, lit: Lit, primes):
        """Residue test for x_{i,r}: subtract r, then strip multiples of p_i."""
        p = primes[lit.i - 1]
        d = f"{prefix}div{p}"
        self.pos.add((src, -lit.r, d))
        if lit.r == 0:
            self.zero.add((src, 0, d))

    def ocp(self) -> Ocp:
        return Ocp.build(self.locations, self.labels, self.zero, self.pos)


def _add_crr_gadget(b: _Builder, F: CrrFormula, primes, prefix: str) -> tuple[str, str]:
    b.div_gadget(prefix, primes)

    def go(G, path):
        i = b.loc(f"{prefix}in[{path}]")
        o = b.loc(f"{prefix}out[{path}]")
        if isinstance(G, Lit):
            b.labels.setdefault(ALPHA, set()).add(i)
            b.both(i, 0, o)
            b.branch(prefix, i, G, primes)
        elif isinstance(G, Top):
            b.both(i, 0, o)
        elif isinstance(G, Bot):
            pass
        elif isinstance(G, Disj):
            i1, o1 = go(G.left, path + "0")
            i2, o2 = go(G.right, path + "1")
            b.both(i, 0, i1)
            b.both(i, 0, i2)
            b.both(o1, 0, o)
            b.both(o2, 0, o)
        elif isinstance(G, Conj):
            i1, o1 = go(G.left, path + "0")
            i2, o2 = go(G.right, path + "1")
            b.both(i, 0, i1)
            b.both(o1, 0, i2)
            b.both(o2, 0, o)
        else:
            raise StructuralError("gadget formulas must be negation-free; eliminate negations first")
        return i, o

    return go(F, "r")


def ocn_of_crr_formula(F: CrrFormula, primes: Sequence[int], prefix: str = "") -> GadgetOcn:
    """OCN with a path from (in, M) to (out, M) along states satisfying
    :func:`fixed_ef_formula` iff F holds on CRR(M).

    Residue branches subtract r and p_i in single weighted steps.  The
    ``at_out`` proposition marks the out location.
    """
    check_vars(F, primes)
    b = _Builder()
    i, o = _add_crr_gadget(b, F, primes, prefix)
    b.loc(o, "at_out")
    return GadgetOcn(b.ocp(), i, o)


def fixed_ef_formula() -> Formula:
    """alpha -> EX(beta & EF(beta & ~EX gamma)).

    The inner ``beta`` pins the zero test to a div location: the bottom
    location is itself a deadlock, so without it the formula would hold
    whenever a div location is entered with a positive counter.
    """
    a, b, c = Atom(ALPHA), Atom(BETA), Atom(GAMMA)
    return Implies(a, ExistsNext(And(b, ExistsFinally(And(b, Not(ExistsNext(c)))))))


def prop1_goal() -> Formula:
    return ExistsUntil(fixed_ef_formula(), Atom("at_out"))


# serial composition with an NFA


def _is_leaf_conjunction(G: CrrFormula) -> bool:
    if isinstance(G, Lit):
        return True
    if isinstance(G, Conj):
        return _is_leaf_conjunction(G.left) and _is_leaf_conjunction(G.right)
    return False


RHO = "rho"


def serial_compose(A: Nfa, F: CrrFormula, G: CrrFormula, primes: Sequence[int],
                   variant: str = "until") -> tuple[Ocp, str, Formula]:
    """NFA states become locations; each transition (s, b, t) runs through a
    gadget copy for F & ~G (b = 1) or ~F & ~G (b = 0) and increments on exit.
    Final states enter a copy of the G gadget.

    ``until``: goal E[phi U rho] with rho on the exit of the G copy.
    ``eg``: the G copy loops back to its entry, goal EG phi.
    """
    if variant not in ("until", "eg"):
        raise ValueError("variant is 'until' or 'eg'")
    if not _is_leaf_conjunction(G):
        raise StructuralError("G must be a conjunction of variables")
    check_vars(F, primes)
    check_vars(G, primes)
    one = eliminate_negations(Conj(F, Neg(G)), primes)
    zero = eliminate_negations(Conj(Neg(F), Neg(G)), primes)
    b = _Builder()
    for s in A.states:
        b.loc(s)
    order = {s: j for j, s in enumerate(A.states)}
    trans = sorted(A.transitions, key=lambda x: (order[x[0]], x[1], order[x[2]]))
    for j, (s, bit, t) in enumerate(trans):
        i, o = _add_crr_gadget(b, one if bit else zero, primes, f"T{j}.")
        b.both(s, 0, i)
        b.both(o, 1, t)
    for s in A.states:
        if s in A.finals:
            i, o = _add_crr_gadget(b, G, primes, f"G.{s}.")
            b.both(s, 0, i)
            if variant == "until":
                b.loc(o, RHO)
            else:
                b.both(o, 0, i)
    phi = fixed_ef_formula()
    goal = ExistsUntil(phi, Atom(RHO)) if variant == "until" else ExistsWeakUntil(phi, FALSE)
    return b.ocp(), A.initial, goal
