import itertools
import math

import pytest
from hypothesis import given, strategies as st

from onecounter.arith import DomainError, crr, primes_first
from onecounter.checker import BoundedOracle, evaluate_capped, oracle_check
from onecounter.ctl import ExistsNext, ForallNext, is_ef, lud, render, size
from onecounter.gadgets import (BAnd, BConst, BNot, BOr, BVar, Bot, Conj, Disj, LayeredCircuit, Lit,
                                Neg, Top, bool_eval, crr_equals_formula, crr_eval,
                                crr_formula_of_predicate, eliminate_negations, ef_of_circuit,
                                fixed_ef_formula, leafstring, leafstring_oracle,
                                lexmax_even_oracle, ocn_of_circuit, ocn_of_crr_formula, parse_bool,
                                parse_crr, parse_dimacs, parse_qbf, phi_div, prop1_goal, psi_bit,
                                push_negations, qbf_reduce, qbf_valid, render_bool, render_crr,
                                render_qbf, serial_compose, wagner_reduce)
from onecounter.gadgets.crr import is_negation_free
from onecounter.ocp import Nfa, StructuralError, is_net, successors

x1, x2 = BVar("x1"), BVar("x2")


# Boolean formulas and QBF


def test_parse_bool():
    assert parse_bool("x1 & ~x2 | true") == BOr(BAnd(x1, BNot(x2)), BConst(True))
    f = parse_bool("x1 <-> x2")
    assert [bool_eval(f, {"x1": a, "x2": b}) for a in (0, 1) for b in (0, 1)] == [1, 0, 0, 1]


def test_parse_bool_errors():
    for bad in ("x1 &", "(x1", "x1 x2", "&"):
        with pytest.raises(StructuralError):
            parse_bool(bad)


def test_dimacs():
    f, n = parse_dimacs("c demo\np cnf 3 2\n1 -2 0\n3 0\n")
    assert n == 3
    assert bool_eval(f, {"x1": 0, "x2": 0, "x3": 1})
    assert not bool_eval(f, {"x1": 0, "x2": 1, "x3": 1})
    with pytest.raises(StructuralError):
        parse_dimacs("p cnf 1 1\n2 0\n")


def test_qbf_round_trip_and_validity():
    a = parse_qbf("forall x2 exists x1 : (x1 & ~x2) | (~x1 & x2)")
    assert parse_qbf(render_qbf(a)) == a
    assert qbf_valid(a)
    assert not qbf_valid(parse_qbf("exists x1 forall x2 : (x1 & ~x2) | (~x1 & x2)"))
    with pytest.raises(StructuralError):
        parse_qbf("exists x1 : x1 & x2")


bools = st.recursive(st.sampled_from(["x1", "x2", "x3"]).map(BVar) | st.booleans().map(BConst),
                     lambda s: s.map(BNot) | st.tuples(s, s).map(lambda t: BAnd(*t))
                     | st.tuples(s, s).map(lambda t: BOr(*t)), max_leaves=8)


@given(bools)
def test_bool_render_round_trip(f):
    g = parse_bool(render_bool(f))
    for bits in itertools.product((False, True), repeat=3):
        env = dict(zip(["x1", "x2", "x3"], bits))
        assert bool_eval(f, env) == bool_eval(g, env)


# Figure 7 gadget


def test_figure7_shape(fig7):
    assert len(fig7.locations) == 10
    assert is_net(fig7)
    assert successors(fig7, ("f", 0)) == []
    assert successors(fig7, ("q0", 0)) == []


def test_figure7_zero_detection(fig7):
    T = evaluate_capped(fig7, parse_ctl("~EX g"), 10)
    assert T.value("f", 0) is True
    T = evaluate_capped(fig7, parse_ctl("q0 & ~EX q1"), 10)
    assert T.value("q0", 0) is True and T.value("q0", 3) is False


def parse_ctl(text):
    from onecounter.ctl import parse

    return parse(text)


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_phi_div_lud(i):
    assert lud(phi_div(i)) == i and is_ef(phi_div(1))


@pytest.mark.parametrize("loc,n,i,expected", [("tb", 2, 2, True), ("tb", 4, 2, False),
                                              ("tb", 1, 1, True), ("tb", 6, 2, True)])
def test_psi_bit_instances(fig7, loc, n, i, expected):
    assert oracle_check(fig7, psi_bit(i), loc, n, 32) is expected


def test_phi_div_instances(fig7):
    orc = BoundedOracle(fig7)
    assert orc.check(phi_div(2), "t", 8, 64) is True
    assert orc.check(phi_div(2), "tb", 5, 64) is True
    assert orc.check(phi_div(2), "t", 6, 64) is False


@pytest.mark.parametrize("text,valid", [
    ("exists x1 : x1", True),
    ("forall x1 : x1", False),
    ("forall x1 exists x2 : (x1 & x2) | (~x1 & ~x2)", True),
])
def test_qbf_reduce_examples(fig7, text, valid):
    a = parse_qbf(text)
    assert qbf_valid(a) is valid
    theta = qbf_reduce(a)
    B = 2 ** (len(a.prefix) + 2)
    orc = BoundedOracle(fig7)
    assert orc.table(theta, B, "capped").value("tb", 0) is valid
    assert orc.table(theta, 2 * B, "capped").value("tb", 0) is valid


def test_qbf_reduce_rejects_non_prenex():
    with pytest.raises(StructuralError):
        qbf_reduce(BAnd(x1, x2))


# residue formulas


def test_eliminate_negations_examples():
    assert eliminate_negations(Neg(Lit(1, 0)), [2]) == Lit(1, 1)
    assert eliminate_negations(Neg(Lit(2, 1)), [2, 3]) == Disj(Lit(2, 0), Lit(2, 2))


def test_crr_equals_formula():
    assert crr_equals_formula([2, 3], 4) == Conj(Lit(1, 0), Lit(2, 1))
    assert crr_equals_formula([2, 3, 5], 0) == Conj(Conj(Lit(1, 0), Lit(2, 0)), Lit(3, 0))


def test_predicate_formula():
    assert crr_formula_of_predicate([0, 0, 0, 0], [2, 3], 2) == Bot()
    assert crr_formula_of_predicate([0, 0, 1, 0], [2, 3], 2) == Conj(Lit(1, 0), Lit(2, 2))
    with pytest.raises(DomainError):
        crr_formula_of_predicate([0] * 8, [2], 3)


@given(st.lists(st.integers(0, 1), min_size=8, max_size=8))
def test_predicate_round_trip(truth):
    primes = [2, 3, 5]
    F = crr_formula_of_predicate(truth, primes, 3)
    assert [int(crr_eval(F, crr(primes, M))) for M in range(8)] == truth


def crr_formulas(primes):
    lits = st.integers(1, len(primes)).flatmap(
        lambda i: st.integers(0, primes[i - 1] - 1).map(lambda r: Lit(i, r)))
    return st.recursive(lits | st.just(Top()) | st.just(Bot()),
                        lambda s: s.map(Neg) | st.tuples(s, s).map(lambda t: Conj(*t))
                        | st.tuples(s, s).map(lambda t: Disj(*t)), max_leaves=6)


@given(crr_formulas([2, 3, 5]))
def test_negation_handling_preserves_meaning(F):
    primes = [2, 3, 5]
    pushed, free = push_negations(F), eliminate_negations(F, primes)
    assert is_negation_free(free)
    for M in range(30):
        x = crr(primes, M)
        assert crr_eval(F, x) == crr_eval(pushed, x) == crr_eval(free, x)


@given(crr_formulas([2, 3]))
def test_crr_render_parse_round_trip(F):
    G = parse_crr(render_crr(F))
    for M in range(6):
        assert crr_eval(F, crr([2, 3], M)) == crr_eval(G, crr([2, 3], M))


def test_fixed_formula_is_ef():
    assert is_ef(fixed_ef_formula())


@pytest.mark.parametrize("F", [Lit(1, 0), Disj(Lit(1, 1), Lit(2, 2)), Conj(Lit(1, 0), Lit(2, 0)),
                               Top(), Bot()])
def test_prop1_gadget(F):
    primes = [2, 3]
    gad = ocn_of_crr_formula(F, primes)
    assert is_net(gad.ocp)
    orc = BoundedOracle(gad.ocp)
    T = orc.table(prop1_goal(), 12, "capped")
    for M in range(6):
        assert T.value(gad.in_loc, M) is crr_eval(F, crr(primes, M))


def test_leafstring():
    starts_with_one = Nfa.build(["s", "f"], [("s", 1, "f"), ("f", 0, "f"), ("f", 1, "f")], "s", ["f"])
    assert leafstring(Lit(1, 0), [2, 3], 2) == "1010"
    assert leafstring_oracle(starts_with_one, Lit(1, 0), [2, 3], 2)
    assert leafstring(Bot(), [2, 3], 2) == "0000"
    with pytest.raises(DomainError):
        leafstring(Lit(1, 0), [2], 2)


def test_leafstring_m0_has_one_letter():
    # the product over M in [0, 2^0 - 1] has a single factor
    assert leafstring(Top(), [2], 0) == "1"


STARTS_WITH_ONE = Nfa.build(["s0", "sf"], [("s0", 1, "sf"), ("sf", 0, "sf"), ("sf", 1, "sf")],
                            "s0", ["sf"])


@pytest.mark.parametrize("variant", ["until", "eg"])
@pytest.mark.parametrize("truth,expected", [([1, 0, 0, 0], True), ([0, 0, 0, 0], False),
                                            ([0, 1, 1, 1], False)])
def test_serial_compose_examples(variant, truth, expected):
    primes, m = [2, 3], 2
    F = crr_formula_of_predicate(truth, primes, m)
    G = crr_equals_formula(primes, 2**m)
    assert leafstring_oracle(STARTS_WITH_ONE, F, primes, m) is expected
    O, s0, goal = serial_compose(STARTS_WITH_ONE, F, G, primes, variant)
    B = math.prod(primes) + 2
    orc = BoundedOracle(O)
    assert orc.table(goal, B, "capped").value(s0, 0) is expected
    assert orc.table(goal, 2 * B, "capped").value(s0, 0) is expected


def test_serial_compose_counter_stays_small():
    primes, m = [2, 3], 2
    F = crr_formula_of_predicate([1, 1, 1, 1], primes, m)
    G = crr_equals_formula(primes, 2**m)
    O, s0, _ = serial_compose(STARTS_WITH_ONE, F, G, primes, "until")
    good = evaluate_capped(O, fixed_ef_formula(), 20)
    seen, work = {(s0, 0)}, [(s0, 0)]
    while work:
        c = work.pop()
        for d in successors(O, c):
            if d[1] <= 20 and good.value(*d) and d not in seen:
                seen.add(d)
                work.append(d)
    assert max(n for q, n in seen if q in STARTS_WITH_ONE.states) <= 2**m


def test_serial_compose_needs_leaf_conjunction():
    with pytest.raises(StructuralError):
        serial_compose(STARTS_WITH_ONE, Lit(1, 0), Disj(Lit(1, 0), Lit(2, 0)), [2, 3])


# circuits


def test_ef_of_circuit_shape():
    C = LayeredCircuit(("OR", "OR"), (((0, 1),), ((0,), (1,))), (Lit(1, 0), Lit(2, 1)))
    f = ef_of_circuit(C)
    assert isinstance(f, ExistsNext) and isinstance(f.arg, ExistsNext)
    assert render(f) == "EX EX EX EF (beta & ~EX gamma)"
    assert is_ef(f)
    C2 = LayeredCircuit(("AND",), (((0, 1),),), (Lit(1, 0), Lit(2, 1)))
    assert isinstance(ef_of_circuit(C2), ForallNext)


def test_circuit_validation():
    with pytest.raises(StructuralError):
        LayeredCircuit(("OR",), (((0, 5),),), (Lit(1, 0),))
    with pytest.raises(StructuralError):
        LayeredCircuit(("XOR",), (((0,),),), (Lit(1, 0),))


def test_circuit_gadget_matches_evaluation():
    primes = [2, 3]
    C = LayeredCircuit(("AND", "OR"), (((0, 1),), ((0, 1), (2,))), (Lit(1, 0), Lit(2, 2), Lit(2, 1)))
    gad = ocn_of_circuit(C, primes)
    T = evaluate_capped(gad.ocp, ef_of_circuit(C), 12)
    for M in range(6):
        assert T.value(gad.in_loc, M) is C.evaluate(crr(primes, M))


# Wagner


@pytest.mark.parametrize("psi,m,expected", [
    (BOr(x1, x2), 2, False),
    (BAnd(x1, BNot(x2)), 2, False),
    (BAnd(BNot(x1), x2), 2, True),
    (BConst(False), 2, False),
    (x1, 1, False),
    (BNot(x1), 1, True),
])
def test_wagner_examples(psi, m, expected):
    assert lexmax_even_oracle(psi, m) is expected
    O, q0, goal = wagner_reduce(psi, m)
    assert is_ef(goal)
    B = 2 * (math.prod(primes_first(max(m, 2))) + 2)
    assert evaluate_capped(O, goal, B).value(q0, 0) is expected


def test_wagner_rejects_stray_variables():
    with pytest.raises(StructuralError):
        wagner_reduce(BVar("x3"), 2)


def test_formula_sizes_frozen():
    # phi_1 by hand on the desugared tree: (t|tb) is 6, EX(f & EF(...)) is 10, plus the conjunction
    assert [size(phi_div(i)) for i in (1, 2, 3)] == [17, 49, 81]
    # a -> X desugars to ~(a & ~X) and X = EX(beta & E[true U (beta & ~EX gamma)]) has size 10
    assert size(fixed_ef_formula()) == 14
