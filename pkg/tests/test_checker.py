import pytest
from hypothesis import given, settings, strategies as st

from onecounter import checker
from onecounter.checker import (BoundedOracle, InfeasibleError, evaluate_capped, evaluate_periodic,
                                evaluate_three_valued, oracle_check, period_params, representative)
from onecounter.ctl import (FALSE, TRUE, And, Atom, ExistsFinally, ExistsGlobally, ExistsNext,
                            ExistsUntil, Not, desugar, parse)
from onecounter.gadgets import phi_div, psi_bit
from onecounter.ocp import Ocp, StructuralError, successors
from strategies import core_formulas, ocps

SPEC_O = Ocp.build(["a", "b"], {"p_b": ["b"]}, zero=[("a", 0, "b")],
                   pos=[("a", -1, "a"), ("a", 0, "b")])


def naive_capped(O, f, B):
    """Set-of-configurations CTL over Q x [0, B], moves above B dropped."""
    states = [(q, n) for n in range(B + 1) for q in O.locations]
    succ = {s: [c for c in successors(O, s) if c[1] <= B] for s in states}
    f = desugar(f)

    def ev(g):
        if g == TRUE:
            return set(states)
        if g == FALSE:
            return set()
        if isinstance(g, Atom):
            return {s for s in states if s[0] in g_labels(g.name)}
        if isinstance(g, Not):
            return set(states) - ev(g.arg)
        if isinstance(g, And):
            return ev(g.left) & ev(g.right)
        if isinstance(g, ExistsNext):
            S = ev(g.arg)
            return {s for s in states if any(c in S for c in succ[s])}
        L, R = ev(g.left), ev(g.right)
        if isinstance(g, ExistsUntil):
            Z = set(R)
            while True:
                nxt = Z | {s for s in L if any(c in Z for c in succ[s])}
                if nxt == Z:
                    return Z
                Z = nxt
        Z = set(states)
        while True:
            nxt = R | {s for s in L if any(c in Z for c in succ[s])}
            if nxt == Z:
                return Z
            Z = nxt

    def g_labels(p):
        return O.labeling.get(p, frozenset())

    return ev(f)


def test_spec_example_ef():
    S = evaluate_periodic(SPEC_O, ExistsFinally(Atom("p_b")))
    assert all(S.contains("a", n) for n in range(S.top + 1))
    assert all(S.contains("b", n) for n in range(S.top + 1))
    assert S.holds("a", 10**12)


def test_false_is_empty():
    assert not evaluate_periodic(SPEC_O, FALSE).states


def test_ex_true_at_deadlock():
    S = evaluate_periodic(SPEC_O, ExistsNext(TRUE))
    assert not S.holds("b", 0) and not S.holds("b", 3)
    assert S.holds("a", 0) and S.holds("a", 3)


@pytest.mark.parametrize("n,t,K,expected", [(10**9, 16, 2, 18), (7, 16, 2, 7), (18, 16, 2, 18),
                                            (17, 16, 2, 17), (19, 16, 2, 17), (0, 0, 1, 0)])
def test_representative(n, t, K, expected):
    assert representative(n, t, K) == expected


@given(st.integers(0, 50), st.integers(1, 12), st.integers(0, 10**6))
def test_representative_congruent(t, K, n):
    m = representative(n, t, K)
    assert m <= t + K
    assert m == n if n <= t else (m - n) % K == 0 and m > t


def test_period_params_small():
    p = period_params(SPEC_O, ExistsFinally(Atom("p_b")))
    # k = 2, K = 2, lud = 1: t = 0 + 2 * 4 * 2
    assert (p.k, p.K, p.threshold, p.period) == (2, 2, 16, 2)
    p = period_params(SPEC_O, ExistsNext(ExistsNext(Atom("p_b"))))
    assert (p.threshold, p.period) == (2, 1)


def test_capped_true_everywhere(fig7):
    T = evaluate_capped(fig7, TRUE, 5)
    assert all(T.value(q, n) is True for q in fig7.locations for n in range(6))


def test_kleene_conjunction():
    O = Ocp.build(["a"], {"p": []}, pos=[("a", 1, "a")], zero=[("a", 1, "a")])
    f = And(Atom("p"), ExistsGlobally(TRUE))
    T = evaluate_three_valued(O, f, 4)
    assert T.value("a", 4) is False
    assert evaluate_three_valued(O, ExistsGlobally(TRUE), 4).value("a", 4) is None


def test_definite_when_no_frontier():
    O = Ocp.build(["a", "b"], {"p": ["b"]}, zero=[("a", 0, "b")], pos=[("a", -1, "a")])
    T = evaluate_three_valued(O, ExistsFinally(Atom("p")), 6)
    assert T.definite_fraction() == 1.0


def test_fig7_psi2(fig7):
    T = evaluate_three_valued(fig7, psi_bit(2), 32)
    assert T.value("tb", 2) is True
    assert T.value("tb", 4) is False


def test_oracle_fig7(fig7):
    assert oracle_check(fig7, phi_div(3), "t", 8, 64) is True
    assert oracle_check(fig7, phi_div(3), "t", 12, 64) is False
    assert oracle_check(fig7, phi_div(2), "tb", 5, 64) is True


def test_oracle_no_escalation_when_definite(fig7):
    v, info = BoundedOracle(fig7).check_verbose(phi_div(1), "t", 4, 16)
    assert v is True and info["engine"] == "tv" and info["bound"] == 16


def test_oracle_indeterminate_on_disagreement():
    # a and b alternate upward; the capped deadlock sits in a only for even bounds
    O = Ocp.build(["a", "b"], {"A": ["a"]}, zero=[("a", 1, "b")],
                  pos=[("a", 1, "b"), ("b", 1, "a")])
    f = ExistsFinally(And(Atom("A"), Not(ExistsNext(TRUE))))
    v, info = BoundedOracle(O).check_verbose(f, "a", 0, 3, rounds=2)
    assert v is None and info["bounds"] == [3, 6]


def test_periodic_needs_unit_steps():
    O = Ocp.build(["a"], pos=[("a", -2, "a")])
    with pytest.raises(StructuralError):
        evaluate_periodic(O, TRUE)


def test_periodic_budget(fig7):
    with pytest.raises(InfeasibleError) as exc:
        evaluate_periodic(fig7, phi_div(2), budget=1000)
    assert exc.value.domain_size == checker.wrapped_domain_size(fig7, phi_div(2))
    assert "infeasible" in str(exc.value)


def test_check_large_counter():
    f = parse("EF (p_b & ~EX true)")
    assert checker.check(SPEC_O, f, "a", 10**18)
    assert not checker.check(SPEC_O, ExistsNext(Atom("p_b")), "b", 10**18)


@settings(max_examples=150, deadline=None)
@given(ocps(), core_formulas(), st.integers(0, 6))
def test_capped_matches_naive(O, f, B):
    T = evaluate_capped(O, f, B)
    naive = naive_capped(O, f, B)
    for q in O.locations:
        for n in range(B + 1):
            assert T.value(q, n) is ((q, n) in naive)


@settings(max_examples=150, deadline=None)
@given(ocps(), core_formulas(), st.integers(0, 6))
def test_capped_between_three_valued_bounds(O, f, B):
    tv = evaluate_three_valued(O, f, B)
    cap = evaluate_capped(O, f, B)
    assert tv.lower <= cap.lower <= tv.upper


@settings(max_examples=100, deadline=None)
@given(ocps(kmax=3), core_formulas(max_leaves=4), st.integers(0, 5))
def test_raising_bound_keeps_definite_values(O, f, B):
    small = evaluate_three_valued(O, f, B)
    big = evaluate_three_valued(O, f, 2 * B + 3)
    for q in O.locations:
        for n in range(B + 1):
            v = small.value(q, n)
            if v is not None:
                assert big.value(q, n) is v


@settings(max_examples=60, deadline=None)
@given(ocps(kmax=3), core_formulas(max_leaves=4))
def test_periodic_agrees_with_definite_oracle(O, f):
    try:
        S = evaluate_periodic(O, f, budget=200_000)
    except InfeasibleError:
        return
    t, K = S.params.threshold, S.params.period
    tv = evaluate_three_valued(O, f, t + 3 * K)
    for q in O.locations:
        for n in range(t + 3 * K + 1):
            v = tv.value(q, n)
            if v is not None:
                assert S.holds(q, n) is v
