"""Cross-validation suites shared by the test-suite and ``onecounter selftest``.

Each suite compares a construction or engine against an independent
brute-force oracle and returns a :class:`SuiteResult`.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .arith import bit, crr, lcm_upto, parity_divisible_count, primes_first
from .checker import BoundedOracle, evaluate_periodic, evaluate_three_valued
from .ctl import (FALSE, TRUE, And, Atom, ExistsNext, ExistsUntil, ExistsWeakUntil, Not, lud,
                  render, size)
from .gadgets.boolean import BAnd, BNot, BOr, BVar, Qbf, qbf_valid, render_bool, render_qbf
from .gadgets.circuits import LayeredCircuit, ef_of_circuit, ocn_of_circuit
from .gadgets.crr import (Conj, Disj, Lit, Neg, crr_equals_formula, crr_eval,
                          crr_formula_of_predicate, crr_size, eliminate_negations,
                          leafstring_oracle, ocn_of_crr_formula, prop1_goal, render_crr,
                          serial_compose)
from .gadgets.fig7 import figure7, phi_div, psi_bit, qbf_reduce
from .gadgets.wagner import lexmax_even_oracle, wagner_reduce
from .ocmdp import (almost_sure_reach, bellman_residual, exact_max_reach_values,
                    induced_finite_mdp, mdp_of_crr_formula, mdp_serial_compose, prepare_nfa)
from .ocp import Nfa, Ocp


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    total: int = 0
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.total > 0 and self.passed == self.total and not self.notes.get("violations")

    def record(self, good: bool, case=None):
        self.total += 1
        if good:
            self.passed += 1
        elif len(self.failures) < 10:
            self.failures.append(case)

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = "".join(f" {k}={v}" for k, v in self.notes.items())
        first = f" first_failure={self.failures[0]}" if self.failures else ""
        return f"{status} {self.passed}/{self.total} cases in {self.seconds:.1f}s{extra}{first}"


def _timed(fn: Callable[..., SuiteResult]):
    def run(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# fixed net


@_timed
def lemma2(imax=6, nmax=300, B0=512, oracle=None) -> SuiteResult:
    """phi_i at t iff 2^i | n, at tb iff not."""
    res = SuiteResult("lemma2")
    orc = oracle or BoundedOracle(figure7())
    for i in range(1, imax + 1):
        phi = phi_div(i)
        for n in range(nmax + 1):
            div = n % 2**i == 0
            at_t = orc.check(phi, "t", n, B0)
            at_tb = orc.check(phi, "tb", n, B0)
            res.record(at_t is div and at_tb is (not div), (i, n, at_t, at_tb))
    return res


@_timed
def lemma4(imax=6, nmax=300, B0=512, oracle=None) -> SuiteResult:
    """psi_i at tb iff bit_i(n) = 1."""
    res = SuiteResult("lemma4")
    orc = oracle or BoundedOracle(figure7())
    for i in range(1, imax + 1):
        psi = psi_bit(i)
        for n in range(nmax + 1):
            v = orc.check(psi, "tb", n, B0)
            res.record(v is bool(bit(i, n)), (i, n, v))
    return res


@_timed
def fact14(nmax=10**4, imax=12) -> SuiteResult:
    """Divisibility-parity facts, checked against running counts; Nair's LCM bounds."""
    res = SuiteResult("fact14")
    for i in range(1, imax + 1):
        step = 2 ** (i - 1)
        count = 0
        for n in range(0, nmax + 1):
            if n > 0 and n % step == 0:
                count += 1
            parity = parity_divisible_count(i, n)
            res.record(parity == ("odd" if count % 2 else "even"), ("count", i, n))
            fact1 = (n % 2**i == 0) == (n % step == 0 and parity == "even")
            res.record(fact1, ("fact1", i, n))
            res.record((bit(i, n) == 1) == (parity == "odd"), ("fact4", i, n))
    for k in range(9, 65):
        L = lcm_upto(k)
        res.record(2**k <= L <= 4**k, ("nair", k))
    return res


# periodicity


def random_ocp(rng: random.Random, kmax=3, props=("a", "b")) -> Ocp:
    k = rng.randint(1, kmax)
    Q = [f"q{j}" for j in range(k)]
    density = rng.choice([0.2, 0.35, 0.5])
    zero = [(s, d, t) for s in Q for t in Q for d in (0, 1) if rng.random() < density]
    pos = [(s, d, t) for s in Q for t in Q for d in (-1, 0, 1) if rng.random() < density]
    labels = {p: [q for q in Q if rng.random() < 0.5] for p in props}
    return Ocp.build(Q, labels, zero, pos)


def random_core_formula(rng: random.Random, budget: int, props=("a", "b")):
    """Core formula with size <= budget and lud <= 1."""

    def go(s, allow_until):
        if s <= 1:
            return rng.choice([Atom(p) for p in props] + [TRUE, FALSE])
        choice = rng.randrange(5 if s >= 3 else 2)
        if choice == 0:
            return Not(go(s - 1, allow_until))
        if choice == 1:
            return ExistsNext(go(s - 1, allow_until))
        left = rng.randint(1, s - 2)
        right = rng.randint(1, s - 1 - left)
        if choice == 2 or not allow_until:
            return And(go(left, allow_until), go(right, allow_until))
        ctor = ExistsUntil if choice == 3 else ExistsWeakUntil
        return ctor(go(left, False), go(right, True))

    return go(rng.randint(1, budget), True)


@_timed
def periodicity(instances=200, seed=2024, max_size=9) -> SuiteResult:
    """Wrapped-graph engine against the three-valued oracle at B = t + 3K."""
    res = SuiteResult("periodicity")
    rng = random.Random(seed)
    definite = states = 0
    made = 0
    while made < instances:
        O = random_ocp(rng)
        phi = random_core_formula(rng, max_size)
        if size(phi) > max_size or lud(phi) > 1:
            continue
        made += 1
        table = evaluate_periodic(O, phi)
        t, K = table.params.threshold, table.params.period
        tv = evaluate_three_valued(O, phi, t + 3 * K)
        agree = True
        bad = None
        for q in O.locations:
            for n in range(t + 3 * K + 1):
                v = tv.value(q, n)
                if n <= t + K:
                    states += 1
                    definite += v is not None
                if v is not None and v != table.holds(q, n):
                    agree = False
                    bad = bad or (render(phi), q, n)
            # sampled congruent pairs above the threshold
            for _ in range(20):
                n1 = rng.randint(t + 1, t + 3 * K)
                n2 = n1 + K * rng.randint(1, 3)
                if table.holds(q, n1) != table.holds(q, n2):
                    agree = False
                    bad = bad or (render(phi), q, n1, n2)
        res.record(agree, bad)
    coverage = definite / states
    res.notes["coverage"] = f"{coverage:.3f}"
    if coverage < 0.7:
        res.notes["violations"] = "coverage below 0.70"
    return res


# QBF


def _bool_formulas(names, max_size):
    """All formulas over ``names`` with ~, &, | up to the given size."""
    by_size = {1: [BVar(v) for v in names]}
    for s in range(2, max_size + 1):
        out = [BNot(f) for f in by_size[s - 1]]
        for ls in range(1, s - 1):
            rs = s - 1 - ls
            for a in by_size[ls]:
                for b in by_size[rs]:
                    out.append(BAnd(a, b))
                    out.append(BOr(a, b))
        by_size[s] = out
    return [f for s in range(1, max_size + 1) for f in by_size[s]]


def _random_bool(rng, names, s):
    if s <= 1:
        return BVar(rng.choice(names))
    c = rng.randrange(3)
    if c == 0 or s == 2:
        return BNot(_random_bool(rng, names, s - 1))
    left = rng.randint(1, s - 2)
    ctor = BAnd if c == 1 else BOr
    return ctor(_random_bool(rng, names, left), _random_bool(rng, names, s - 1 - left))


def qbf_instances(seed=7, exhaustive_size=3, random_count=150, max_size=9):
    rng = random.Random(seed)
    out = []
    for k in range(1, 4):
        names = [f"x{j}" for j in range(k, 0, -1)]
        prefixes = list(itertools.product(("exists", "forall"), repeat=k))
        for matrix in _bool_formulas(names, exhaustive_size):
            for qs in prefixes:
                out.append(Qbf(tuple(zip(qs, names)), matrix))
    for _ in range(random_count):
        k = rng.randint(1, 3)
        names = [f"x{j}" for j in range(k, 0, -1)]
        qs = [rng.choice(("exists", "forall")) for _ in names]
        out.append(Qbf(tuple(zip(qs, names)), _random_bool(rng, names, rng.randint(1, max_size))))
    return out


@_timed
def qbf(seed=7) -> SuiteResult:
    """Capped verdict at (tb, 0) with B = 2^(k+2), stable at 2B, equals validity."""
    res = SuiteResult("qbf")
    orc = BoundedOracle(figure7())
    for alpha in qbf_instances(seed):
        k = len(alpha.prefix)
        theta = qbf_reduce(alpha)
        B = 2 ** (k + 2)
        v1 = orc.table(theta, B, "capped").value("tb", 0)
        v2 = orc.table(theta, 2 * B, "capped").value("tb", 0)
        res.record(v1 == v2 == qbf_valid(alpha), (render_qbf(alpha), v1, v2))
    return res


# residue formulas


def _random_crr(rng, primes, s, negations=True):
    if s <= 1 or (s == 2 and not negations):
        i = rng.randint(1, len(primes))
        return Lit(i, rng.randrange(primes[i - 1]))
    ops = (["and", "or"] if s >= 3 else []) + (["not"] if negations else [])
    op = rng.choice(ops)
    if op == "not":
        return Neg(_random_crr(rng, primes, s - 1, negations))
    left = rng.randint(1, s - 2)
    ctor = Conj if op == "and" else Disj
    return ctor(_random_crr(rng, primes, left, negations),
                _random_crr(rng, primes, s - 1 - left, negations))


def _crr_formulas(primes, max_size, negations=True):
    """All formulas over residue literals up to a node-count bound."""
    lits = [Lit(i, r) for i, p in enumerate(primes, start=1) for r in range(p)]
    by_size = {1: lits}
    for s in range(2, max_size + 1):
        out = [Neg(f) for f in by_size[s - 1]] if negations else []
        for ls in range(1, s - 1):
            for a in by_size[ls]:
                for b in by_size[s - 1 - ls]:
                    out.append(Conj(a, b))
                    out.append(Disj(a, b))
        by_size[s] = out
    return [f for s in range(1, max_size + 1) for f in by_size[s]]


def prop1_formulas(seed=11, random_count=400):
    rng = random.Random(seed)
    family = []
    for m in (1, 2):
        family += [(m, F) for F in _crr_formulas(primes_first(m), 3)]
    for _ in range(random_count):
        m = rng.randint(1, 3)
        family.append((m, _random_crr(rng, primes_first(m), rng.randint(1, 12))))
    return family


@_timed
def prop1(seed=11) -> SuiteResult:
    """E[phi U at_out] at (in, M) iff F holds on CRR(M)."""
    res = SuiteResult("prop1")
    goal = prop1_goal()
    for m, F in prop1_formulas(seed):
        primes = primes_first(m)
        P = math.prod(primes)
        gad = ocn_of_crr_formula(eliminate_negations(F, primes), primes)
        # no transition increments, so capping at P - 1 is exact
        table = BoundedOracle(gad.ocp).table(goal, P - 1, "capped")
        for M in range(P):
            want = crr_eval(F, crr(primes, M))
            res.record(table.value(gad.in_loc, M) is want, (render_crr(F), M))
    return res


def random_nfa(rng, kmax=3) -> Nfa:
    k = rng.randint(1, kmax)
    S = [f"s{j}" for j in range(k)]
    trans = [(s, b, t) for s in S for b in (0, 1) for t in S if rng.random() < 0.45]
    finals = [s for s in S if rng.random() < 0.5] or [S[-1]]
    return Nfa.build(S, trans, "s0", finals)


def thm8_instances(count=30, seed=5):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        A = random_nfa(rng)
        truth = [rng.randint(0, 1) for _ in range(4)]
        out.append((A, truth))
    return out


@_timed
def thm8(count=30, seed=5) -> SuiteResult:
    """Serial composition (until and EG variants) against the leaf-string oracle."""
    res = SuiteResult("thm8")
    primes, m = [2, 3], 2
    G = crr_equals_formula(primes, 2**m)
    yes = 0
    for A, truth in thm8_instances(count, seed):
        F = crr_formula_of_predicate(truth, primes, m)
        want = leafstring_oracle(A, F, primes, m)
        yes += want
        for variant in ("until", "eg"):
            O, s0, goal = serial_compose(A, F, G, primes, variant)
            orc = BoundedOracle(O)
            B = math.prod(primes) + 2
            v1 = orc.table(goal, B, "capped").value(s0, 0)
            v2 = orc.table(goal, 2 * B, "capped").value(s0, 0)
            res.record(v1 == v2 == want, (variant, truth, sorted(A.transitions), sorted(A.finals)))
    res.notes["accepting"] = f"{yes}/{count}"
    return res


# circuits


def layered_circuits(primes=(2, 3), max_gates=6):
    """Every layered circuit with at most 3 layers and ``max_gates`` gates.

    Input gates carry distinct variables; each layer-2 gate picks a non-empty
    set of inputs (as a multiset of gates); the output gate sees all of layer 2.
    """
    lits = [Lit(i, r) for i, p in enumerate(primes, start=1) for r in range(p)]
    for v in lits:
        yield LayeredCircuit((), (), (v,))
    for w in range(1, min(len(lits), max_gates - 1) + 1):
        for ins in itertools.combinations(lits, w):
            for kind in ("AND", "OR"):
                yield LayeredCircuit((kind,), ((tuple(range(w)),),), ins)
    for w2 in range(1, max_gates - 1):
        for w3 in range(1, max_gates - w2):
            if w3 > len(lits):
                continue
            subsets = [s for r in range(1, w3 + 1) for s in itertools.combinations(range(w3), r)]
            for ins in itertools.combinations(lits, w3):
                for layer2 in itertools.combinations_with_replacement(subsets, w2):
                    if set().union(*layer2) != set(range(w3)):
                        continue
                    for k1, k2 in itertools.product(("AND", "OR"), repeat=2):
                        yield LayeredCircuit((k1, k2), ((tuple(range(w2)),), layer2), ins)


@_timed
def prop2(primes=(2, 3)) -> SuiteResult:
    """(in, M) satisfies phi(C) iff C(CRR(M)) = 1."""
    res = SuiteResult("prop2")
    P = math.prod(primes)
    circuits = 0
    for C in layered_circuits(primes):
        circuits += 1
        gad = ocn_of_circuit(C, list(primes))
        table = BoundedOracle(gad.ocp).table(ef_of_circuit(C), P - 1, "capped")
        for M in range(P):
            want = C.evaluate(crr(primes, M))
            res.record(table.value(gad.in_loc, M) is want, (C, M))
    res.notes["circuits"] = circuits
    return res


# lexicographic maximum


def wagner_formulas():
    out = []
    for m, max_size in ((1, 4), (2, 4), (3, 4)):
        names = [f"x{j}" for j in range(1, m + 1)]
        out += [(m, f) for f in _bool_formulas(names, max_size)]
    return out


@_timed
def wagner() -> SuiteResult:
    """Reduction verdict at (q0, 0) against the brute-force lexicographic maximum."""
    res = SuiteResult("wagner")
    for m, psi in wagner_formulas():
        O, q0, goal = wagner_reduce(psi, m)
        P = math.prod(primes_first(max(m, 2)))
        v = BoundedOracle(O).table(goal, P + 2, "capped").value(q0, 0)
        res.record(v is lexmax_even_oracle(psi, m), (m, render_bool(psi), v))
    return res


# OC-MDPs


def _canonical(F):
    """Orders the children of commutative nodes; used to skip mirror images."""
    if isinstance(F, (Conj, Disj)):
        a, b = _canonical(F.left), _canonical(F.right)
        if repr(b) < repr(a):
            a, b = b, a
        return type(F)(a, b)
    return F


def lemma5_formulas(max_size=8):
    out = []
    for m in (1, 2):
        seen = set()
        for F in _crr_formulas(primes_first(m), max_size - 1 if max_size % 2 == 0 else max_size,
                               negations=False):
            key = _canonical(F)
            if key not in seen:
                seen.add(key)
                out.append((m, F))
    return out


@_timed
def lemma5mdp(max_size=8) -> SuiteResult:
    """F true: (q_F, M) almost sure.  F false: exact value <= 1 - 2^-|F|."""
    res = SuiteResult("lemma5mdp")
    worst = Fraction(0)
    for m, F in lemma5_formulas(max_size):
        primes = primes_first(m)
        A, qF, R = mdp_of_crr_formula(F, primes)
        bound = 1 - Fraction(1, 2 ** crr_size(F))
        for M in range(math.prod(primes)):
            # no transition increments, so B = M loses nothing
            fm = induced_finite_mdp(A, (qF, M), M)
            T = fm.targets_at_zero(R)
            if crr_eval(F, crr(primes, M)):
                ok = 0 in almost_sure_reach(fm, T)
            else:
                val = exact_max_reach_values(fm, T)[0]
                ok = val <= bound
                worst = max(worst, val / bound)
            res.record(ok, (render_crr(F), M))
    res.notes["max_value_over_bound"] = f"{float(worst):.4f}"
    return res


def thm10_instances(count=12, seed=9):
    """Half built from the exact leaf string (yes), half random NFAs."""
    rng = random.Random(seed)
    out = []
    primes, m = [2, 3], 2
    while len(out) < count:
        truth = [rng.randint(0, 1) for _ in range(2**m)]
        F = crr_formula_of_predicate(truth, primes, m)
        if len(out) % 2 == 0:
            word = "".join(map(str, truth))
            S = [f"s{j}" for j in range(len(word) + 1)]
            A = Nfa.build(S, [(S[j], int(c), S[j + 1]) for j, c in enumerate(word)], "s0", [S[-1]])
        else:
            A = random_nfa(rng)
            if leafstring_oracle(A, F, primes, m):
                continue
        out.append((A, truth, F))
    return out


@_timed
def thm10mdp(count=12, seed=9) -> SuiteResult:
    """Yes: pessimistic value 1 at B = 2^m + 1.  No: optimistic value within the bound."""
    res = SuiteResult("thm10mdp")
    primes, m = [2, 3], 2
    G = crr_equals_formula(primes, 2**m)
    for A, truth, F in thm10_instances(count, seed):
        yes = leafstring_oracle(A, F, primes, m)
        mdp, s0, R = mdp_serial_compose(prepare_nfa(A), F, G, primes)
        if yes:
            fm = induced_finite_mdp(mdp, (s0, 0), 2**m + 1, "pessimistic")
            T = fm.targets_at_zero(R)
            vals = exact_max_reach_values(fm, T)
            ok = vals[0] == 1 and bellman_residual(fm, T, vals) == 0
        else:
            B = 2**m + crr_size(F) + 10
            fm = induced_finite_mdp(mdp, (s0, 0), B, "optimistic")
            T = fm.targets_at_zero(R)
            vals = exact_max_reach_values(fm, T)
            neg = eliminate_negations(Conj(Neg(F), Neg(G)), primes)
            bound = 1 - Fraction(1, 2 ** (2**m + 1 + crr_size(neg))) + Fraction(1, 2 ** (B - 2**m))
            ok = vals[0] <= bound and bellman_residual(fm, T, vals) == 0
        res.record(ok, ("yes" if yes else "no", truth, sorted(A.transitions)))
    return res


# bound monotonicity


def _monotone(orc: BoundedOracle, phi, B) -> bool:
    lo = orc.table(phi, B, "tv")
    hi = orc.table(phi, 2 * B, "tv")
    for q in orc.O.locations:
        for n in range(B + 1):
            v = lo.value(q, n)
            if v is not None and hi.value(q, n) is not v:
                return False
    return True


@_timed
def honesty(seed=3) -> SuiteResult:
    """Doubling the three-valued bound never flips a definite verdict."""
    res = SuiteResult("honesty")
    fig = BoundedOracle(figure7())
    for i in range(1, 7):
        res.record(_monotone(fig, phi_div(i), 512), ("phi_div", i))
        res.record(_monotone(fig, psi_bit(i), 512), ("psi_bit", i))
    rng = random.Random(seed)
    for _ in range(100):
        O, phi = random_ocp(rng), random_core_formula(rng, 9)
        res.record(_monotone(BoundedOracle(O), phi, 24), ("random", render(phi)))
    for alpha in qbf_instances(seed, exhaustive_size=2, random_count=20):
        res.record(_monotone(fig, qbf_reduce(alpha), 2 ** (len(alpha.prefix) + 2)),
                   ("qbf", render_qbf(alpha)))
    for m, F in prop1_formulas(seed, random_count=40):
        primes = primes_first(m)
        gad = ocn_of_crr_formula(eliminate_negations(F, primes), primes)
        res.record(_monotone(BoundedOracle(gad.ocp), prop1_goal(), math.prod(primes)),
                   ("prop1", render_crr(F)))
    for m, psi in wagner_formulas()[::7]:
        O, _, goal = wagner_reduce(psi, m)
        res.record(_monotone(BoundedOracle(O), goal, math.prod(primes_first(max(m, 2))) + 2),
                   ("wagner", render_bool(psi)))
    return res


SUITES = {
    "lemma2": lemma2,
    "lemma4": lemma4,
    "fact14": fact14,
    "periodicity": periodicity,
    "qbf": qbf,
    "prop1": prop1,
    "thm8": thm8,
    "prop2": prop2,
    "wagner": wagner,
    "lemma5mdp": lemma5mdp,
    "thm10mdp": thm10mdp,
    "honesty": honesty,
}
