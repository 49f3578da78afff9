import pytest
from hypothesis import given, strategies as st

from onecounter.ctl import (FALSE, TRUE, And, Atom, CtlSyntaxError, ExistsFinally, ExistsGlobally,
                            ExistsNext, ExistsUntil, ExistsWeakUntil, ForallNext, Implies, Not, Or,
                            atoms, desugar, is_ef, lud, parse, render, size)
from onecounter.gadgets import fixed_ef_formula, phi_div, psi_bit

p, q, r = Atom("p"), Atom("q"), Atom("r")


@pytest.mark.parametrize("text,expected", [
    ("E[ p U q ]", ExistsUntil(p, q)),
    ("EF p", ExistsFinally(p)),
    ("~EX g", Not(ExistsNext(Atom("g")))),
    ("p -> q -> r", Implies(p, Implies(q, r))),
    ("p | q & r", Or(p, And(q, r))),
    ("AX (p | q)", ForallNext(Or(p, q))),
    ("E[ p W false ]", ExistsWeakUntil(p, FALSE)),
    ("EG true", ExistsGlobally(TRUE)),
])
def test_parse(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize("text", ["E[ p U", "p &", "(p", "p q", "E[ p X q ]", "", "p )"])
def test_parse_errors(text):
    with pytest.raises(CtlSyntaxError):
        parse(text)


def test_error_position():
    with pytest.raises(CtlSyntaxError) as exc:
        parse("p & & q")
    assert exc.value.position == 4


@pytest.mark.parametrize("f,expected", [(p, 1), (Not(p), 2), (ExistsUntil(p, q), 3)])
def test_size(f, expected):
    assert size(f) == expected


def test_lud():
    assert lud(ExistsUntil(ExistsUntil(p, q), r)) == 2
    assert lud(ExistsUntil(p, ExistsUntil(q, r))) == 1
    assert lud(ExistsFinally(And(p, Not(ExistsNext(q))))) == 1
    assert lud(ExistsNext(p)) == 0


def test_is_ef():
    assert is_ef(ExistsFinally(And(p, Not(ExistsNext(q)))))
    assert not is_ef(ExistsUntil(p, q))
    assert is_ef(fixed_ef_formula())


def test_fig7_formula_shapes():
    # frozen values, cross-checked against the recursion by hand
    assert [lud(phi_div(i)) for i in range(1, 5)] == [1, 2, 3, 4]
    assert [lud(psi_bit(i)) for i in range(1, 5)] == [1, 2, 3, 4]
    assert atoms(phi_div(1)) == {"t", "tb", "f", "g"}
    assert atoms(phi_div(2)) == {"t", "tb", "q0", "q1", "q2", "q3", "f", "g"}


def test_desugar_core_only():
    f = desugar(parse("AX p -> EG (q | r)"))
    core = (Atom, Not, And, ExistsNext, ExistsUntil, ExistsWeakUntil, type(TRUE), type(FALSE))

    def walk(g):
        assert isinstance(g, core)
        for c in g.children():
            walk(c)

    walk(f)


names = st.sampled_from(["p", "q", "a_1", "x'"]).map(Atom)
formulas = st.recursive(
    st.one_of(names, st.just(TRUE), st.just(FALSE)),
    lambda sub: st.one_of(
        sub.map(Not), sub.map(ExistsNext), sub.map(ForallNext), sub.map(ExistsFinally),
        sub.map(ExistsGlobally),
        st.tuples(sub, sub).map(lambda t: And(*t)),
        st.tuples(sub, sub).map(lambda t: Or(*t)),
        st.tuples(sub, sub).map(lambda t: Implies(*t)),
        st.tuples(sub, sub).map(lambda t: ExistsUntil(*t)),
        st.tuples(sub, sub).map(lambda t: ExistsWeakUntil(*t)),
    ),
    max_leaves=12,
)


@given(formulas)
def test_render_parse_round_trip(f):
    assert parse(render(f)) == f


@given(formulas)
def test_lud_bounded_by_size(f):
    assert 0 <= lud(f) <= size(f)
