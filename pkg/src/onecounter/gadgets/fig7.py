"""The fixed ten-location one-counter net, divisibility and bit formulas, and QBF encoding.

Every location is labeled by a proposition with its own name.  The
location written t-bar in the literature is called ``tb`` here.
"""

from __future__ import annotations

from functools import lru_cache

from ..ctl import (FALSE, TRUE, And, Atom, ExistsFinally, ExistsNext, ExistsUntil, ForallNext,
                   Formula, Implies, Not, Or, disj)
from ..ocp import Ocp, StructuralError
from .boolean import BAnd, BConst, BNot, BOr, BoolFormula, BVar, Qbf

LOCATIONS = ("t", "tb", "q0", "q1", "q2", "q3", "f", "g", "p0", "p1")

POS = (
    ("q0", -1, "q1"), ("q1", -1, "q2"), ("q2", -1, "q3"), ("q3", -1, "q0"),
    ("q1", -1, "q1"), ("q3", -1, "q3"),
    ("q0", 0, "t"), ("t", 0, "q0"), ("q1", 0, "tb"), ("tb", 0, "q1"),
    ("tb", 0, "q2"), ("q2", 0, "t"), ("q3", 0, "tb"), ("tb", 0, "q3"),
    ("t", 0, "f"), ("tb", -1, "f"), ("g", -1, "f"), ("f", -1, "g"),
    ("tb", 1, "p1"), ("p1", 0, "tb"), ("p1", 1, "p1"), ("p0", 0, "tb"), ("tb", 0, "p0"),
)
ZERO = (("t", 0, "q0"), ("t", 0, "f"), ("tb", 1, "p1"), ("p0", 0, "tb"), ("tb", 0, "p0"))


def figure7() -> Ocp:
    return Ocp.build(LOCATIONS, {q: [q] for q in LOCATIONS}, ZERO, POS)


t, tb, f, g = Atom("t"), Atom("tb"), Atom("f"), Atom("g")
q0, q1, q2, q3 = (Atom(f"q{j}") for j in range(4))
p0, p1 = Atom("p0"), Atom("p1")
TEST = Or(t, tb)
DIAMOND = disj(q0, q1, q2, q3)
AT_ZERO = And(q0, Not(ExistsNext(q1)))


@lru_cache(maxsize=None)
def mu(i: int) -> Formula:
    if i < 2:
        raise ValueError("mu is defined for i >= 2")
    return ExistsUntil(And(DIAMOND, ExistsNext(phi_div(i - 1))), AT_ZERO)


@lru_cache(maxsize=None)
def phi_div(i: int) -> Formula:
    """At t: 2^i divides n.  At tb: it does not."""
    if i < 1:
        raise ValueError("i must be >= 1")
    if i == 1:
        return And(TEST, ExistsNext(And(f, ExistsFinally(And(f, Not(ExistsNext(g)))))))
    return And(TEST, ExistsNext(mu(i)))


@lru_cache(maxsize=None)
def psi_bit(i: int) -> Formula:
    """At tb: the i-th least significant bit of n is 1."""
    if i < 1:
        raise ValueError("i must be >= 1")
    if i == 1:
        return phi_div(1)
    return And(tb, ExistsNext(And(Or(q1, q2), mu(i))))


def _hat(beta: BoolFormula, index: dict[str, int]) -> Formula:
    if isinstance(beta, BVar):
        return psi_bit(index[beta.name])
    if isinstance(beta, BConst):
        return TRUE if beta.value else FALSE
    if isinstance(beta, BNot):
        return Not(_hat(beta.arg, index))
    if isinstance(beta, BAnd):
        return And(_hat(beta.left, index), _hat(beta.right, index))
    if isinstance(beta, BOr):
        return Or(_hat(beta.left, index), _hat(beta.right, index))
    raise StructuralError(f"not a Boolean formula: {beta!r}")


def qbf_reduce(alpha: Qbf) -> Formula:
    """Formula that holds at (tb, 0) iff the prenex QBF is valid.

    The innermost quantified variable becomes x_1, the outermost x_k.
    Setting x_i to 1 walks tb -> p1 and loops at p1 up to the next multiple
    of 2^(i-1); setting it to 0 walks tb -> p0.  The until target is
    ``EX(tb & ~phi_{i-1} & theta_{i-1})`` and the innermost step checks
    ``EX(tb & beta_hat)``: the return edge into tb must be part of the
    witness, otherwise the p1 branch can never finish and p1 states would
    satisfy negated literals of beta_hat vacuously.
    """
    if not isinstance(alpha, Qbf):
        raise StructuralError("qbf_reduce needs a prenex Qbf")
    k = len(alpha.prefix)
    if k == 0:
        raise StructuralError("QBF prefix is empty")
    index = {v: k - j for j, (_, v) in enumerate(alpha.prefix)}
    quant = {k - j: q for j, (q, _) in enumerate(alpha.prefix)}
    choice = Or(p0, p1)

    def wrap(i, body):
        if quant[i] == "exists":
            return ExistsNext(And(choice, body))
        return ForallNext(Implies(choice, body))

    theta = wrap(1, ExistsNext(And(tb, _hat(alpha.matrix, index))))
    for i in range(2, k + 1):
        phi = phi_div(i - 1)
        step = ExistsUntil(Or(p0, ExistsNext(And(tb, phi))),
                           ExistsNext(And(And(tb, Not(phi)), theta)))
        theta = wrap(i, step)
    return theta
