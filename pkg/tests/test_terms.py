import pytest
from hypothesis import given
from hypothesis import strategies as st

from sharedplans.mental import InIS, MentalStore
from sharedplans.sexpr import ParseError, read
from sharedplans.terms import (
    ActionDescr,
    AgentSet,
    ArityMismatch,
    P,
    ParamDescr,
    Signature,
    action_from_sexpr,
    descr_equal,
    mk_action,
    param_from_sexpr,
    parse_action,
    parse_param,
    render,
)

symbols = st.sampled_from(["pump", "ac1", "flywheel", "555-1234", "phone-number", "speech-lab", "x"])
params = st.recursive(symbols.map(ParamDescr),
                      lambda kids: st.builds(lambda r, a: ParamDescr(r, tuple(a)), symbols,
                                             st.lists(kids, max_size=3)),
                      max_leaves=8)
agent_sets = st.frozensets(st.sampled_from("aeg"), min_size=1).map(AgentSet)
actions = st.builds(ActionDescr, st.sampled_from(["remove", "loosen", "lift"]),
                    st.lists(params, max_size=3).map(tuple), agent_sets, st.integers(0, 3))

A = AgentSet.of("a")


def test_mk_action_renders_in_paper_notation():
    sig = Signature()
    assert str(mk_action("remove", [P("pump", "ac1")], A, 0, sig)) == "remove(pump(ac1),{a})"
    assert str(mk_action("remove", [P("flywheel", "ac1")], A, 1, sig)) == "remove(flywheel(ac1),{a})"


def test_mk_action_arity_fixed_by_first_use():
    sig = Signature()
    mk_action("remove", [P("pump", "ac1")], A, 0, sig)
    with pytest.raises(ArityMismatch):
        mk_action("remove", [P("pump", "ac1"), P("extra")], A, 0, sig)


def test_unsigned_mk_action_accepts_any_arity():
    assert len(mk_action("remove", [P("x"), P("y")], A).params) == 2


@pytest.mark.parametrize("d1, d2, expected", [
    (P("555-1234"), P("555-1234"), True),
    (P("555-1234"), P("phone-number", "speech-lab"), False),
    (ActionDescr("remove", (P("pump", "ac1"),), A), ActionDescr("remove", (P("pump", "ac1"),), AgentSet.of("a", "e")),
     False),
    (ActionDescr("remove", (), A, 0), ActionDescr("remove", (), A, 1), False),
])
def test_descr_equal_examples(d1, d2, expected):
    assert descr_equal(d1, d2) is expected


def test_descr_equal_rejects_mixed_kinds():
    with pytest.raises(TypeError):
        descr_equal(P("pump"), ActionDescr("pump", (), A))


@given(params, params, params)
def test_descr_equal_is_an_equivalence(x, y, z):
    assert descr_equal(x, x)
    assert descr_equal(x, y) == descr_equal(y, x)
    if descr_equal(x, y) and descr_equal(y, z):
        assert descr_equal(x, z)


@given(params, params)
def test_codesignation_never_changes_descr_equal(x, y):
    before = descr_equal(x, y)
    ms = MentalStore()
    ms.add_codesignation("a", x, y, 0)
    assert descr_equal(x, y) == before
    if x != y:
        assert ms.holds_bel("a", InIS("a", x, y), 0)


@given(actions, actions)
def test_mk_action_injective(a1, a2):
    built1 = mk_action(a1.act_type, a1.params, a1.agents, a1.time)
    built2 = mk_action(a2.act_type, a2.params, a2.agents, a2.time)
    same_args = (a1.act_type, a1.params, a1.agents, a1.time) == (a2.act_type, a2.params, a2.agents, a2.time)
    assert descr_equal(built1, built2) == same_args


@given(actions)
def test_action_sexpr_round_trip(act):
    text = render(act)
    assert parse_action(text) == act
    assert render(parse_action(text)) == text


@given(params)
def test_param_sexpr_round_trip(p):
    assert parse_param(render(p)) == p


def test_action_surface_syntax():
    act = parse_action("(remove (pump ac1) :agents (a) :t 0)")
    assert act == ActionDescr("remove", (P("pump", "ac1"),), A, 0)
    assert render(act) == "(remove (pump ac1) :agents (a) :t 0)"
    assert parse_action("(lift (box) :agents (e a))").agents == AgentSet.of("a", "e")


@pytest.mark.parametrize("text", [
    "(remove (pump ac1))",
    "(remove :agents (a) (pump ac1))",
    "(remove (pump ac1) :agents ())",
    "(remove :agents (a) :t x)",
    "(remove :agents (a) :when 3)",
])
def test_malformed_actions(text):
    with pytest.raises(ParseError):
        action_from_sexpr(read(text))


def test_parse_arity_error_has_position():
    sig = Signature()
    parse_action("(remove (pump ac1) :agents (a))", sig)
    with pytest.raises(ArityMismatch, match="^1:1"):
        parse_action("(remove :agents (a))", sig)


def test_agent_sets():
    g = AgentSet.of("e", "a")
    assert str(g) == "{a,e}" and len(g) == 2 and not g.single
    assert list(g) == ["a", "e"]
    assert AgentSet.of("a") <= g and AgentSet.of("a") < g
    assert AgentSet.of("a").agent == "a"
    with pytest.raises(ValueError):
        AgentSet(frozenset())
    with pytest.raises(ValueError):
        g.agent


def test_param_from_sexpr_rejects_keywords():
    with pytest.raises(ParseError):
        param_from_sexpr(read(":agents"))
