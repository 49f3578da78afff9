import pytest
from hypothesis import given, strategies as st

from onecounter.ocp import (Configuration, Nfa, Ocp, StructuralError, is_net, nfa_accepts,
                            normalize_weighted, parse_nfa, parse_ocp, render_nfa, render_ocp,
                            successors)

ENDS_IN_ONE = Nfa.build(["a", "b"], [("a", 0, "a"), ("a", 1, "a"), ("a", 1, "b")], "a", ["b"])


def test_fig7_successors(fig7):
    assert successors(fig7, Configuration("q0", 0)) == []
    assert ("f", 0) in successors(fig7, Configuration("tb", 1))


def test_deadlock():
    O = Ocp.build(["q"])
    assert successors(O, ("q", 0)) == [] and successors(O, ("q", 7)) == []


def test_unknown_location():
    O = Ocp.build(["q"])
    with pytest.raises(StructuralError):
        successors(O, ("nope", 0))


def test_zero_vs_positive():
    O = Ocp.build(["a", "b"], zero=[("a", 1, "b")], pos=[("a", -1, "a")])
    assert successors(O, ("a", 0)) == [("b", 1)]
    assert successors(O, ("a", 3)) == [("a", 2)]


def test_is_net(fig7):
    assert is_net(fig7)
    assert not is_net(Ocp.build(["q"], zero=[("q", 0, "q")]))
    assert is_net(Ocp.build(["q"], pos=[("q", -1, "q")]))


def test_bad_zero_decrement():
    with pytest.raises(StructuralError):
        Ocp.build(["q"], zero=[("q", -1, "q")])


def test_normalize_chain():
    O = Ocp.build(["q", "r"], pos=[("q", -3, "r"), ("q", 0, "r")])
    U, origin = normalize_weighted(O)
    assert U.is_unit
    assert ("q", 0, "r") in U.pos_transitions
    chain = [q for q in U.locations if q not in ("q", "r")]
    assert len(chain) == 2 and all(origin[c] == "q" for c in chain)
    assert len(U.pos_transitions) == 4
    # (q, 5) reaches (r, 2) in three steps and nothing in between carries a label
    frontier = {("q", 5)}
    for _ in range(3):
        frontier = {c for x in frontier for c in successors(U, x)}
    assert ("r", 2) in frontier


def test_normalize_identity():
    O = Ocp.build(["q", "r"], pos=[("q", 0, "r")])
    U, origin = normalize_weighted(O)
    assert U.pos_transitions == O.pos_transitions and origin == {"q": "q", "r": "r"}


@pytest.mark.parametrize("w,expected", [("01", True), ("", False), ("10", False), ("111", True)])
def test_nfa_accepts(w, expected):
    assert nfa_accepts(ENDS_IN_ONE, w) is expected


def test_nfa_round_trip():
    assert parse_nfa(render_nfa(ENDS_IN_ONE)) == ENDS_IN_ONE


def test_ocp_text_round_trip(fig7):
    text = render_ocp(fig7)
    again = parse_ocp(text)
    assert render_ocp(again) == text
    assert again.locations == fig7.locations
    assert again.zero_transitions == fig7.zero_transitions


def test_parse_weighted_kept_unless_expanded():
    text = "ocp\nloc a b\nwpos a -2 b\n"
    assert not parse_ocp(text).is_unit
    assert parse_ocp(text, expand=True).is_unit


@pytest.mark.parametrize("text", ["loc a\n", "ocp\nloc a\nzero a -1 a\n", "ocp\nloc a\npos a 0 z\n",
                                  "ocp\nloc a\nfrobnicate\n", "ocp\nloc a\npos a x a\n"])
def test_parse_errors(text):
    with pytest.raises(StructuralError):
        parse_ocp(text)


@st.composite
def ocps(draw):
    k = draw(st.integers(1, 4))
    locs = [f"l{j}" for j in range(k)]
    loc = st.sampled_from(locs)
    zero = draw(st.sets(st.tuples(loc, st.sampled_from([0, 1]), loc), max_size=6))
    pos = draw(st.sets(st.tuples(loc, st.sampled_from([-1, 0, 1]), loc), max_size=8))
    lab = draw(st.dictionaries(st.sampled_from(["p", "q"]), st.sets(loc, min_size=1), max_size=2))
    return Ocp.build(locs, lab, zero, pos)


@given(ocps(), st.integers(0, 20))
def test_successors_respect_guards(O, n):
    for q in O.locations:
        trans = O.zero_transitions if n == 0 else O.pos_transitions
        want = sorted((t, n + d) for s, d, t in trans if s == q and n + d >= 0)
        assert sorted(successors(O, (q, n))) == want


@given(ocps())
def test_render_parse_round_trip(O):
    again = parse_ocp(render_ocp(O))
    assert (again.locations, dict(again.labeling), again.zero_transitions, again.pos_transitions) == \
        (O.locations, dict(O.labeling), O.zero_transitions, O.pos_transitions)
