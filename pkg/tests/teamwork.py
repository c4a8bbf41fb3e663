"""A two-agent plan that reaches a full SharedPlan.

Moving a compressor needs one single-agent act (a unplugs it) and one
multi-agent act (a and e lift it), and lifting in turn needs each of them to
grab a handle. Every requirement can be derived from FACTS.
"""

from sharedplans.knowledge import load_oracle
from sharedplans.mental import MentalStore, fact_from_sexpr
from sharedplans.plans import KB, new_plan, refresh
from sharedplans.recipes import load_recipes
from sharedplans.sexpr import read_all
from sharedplans.terms import AgentSet, parse_action, parse_param

RECIPES = """
(basic-level unplug grab)
(recipe (move ac1) r-move
  (acts (unplug ac1 :agents (a)) (lift ac1 :agents (a e)))
  (constraints (clear floor)))
(recipe (lift ac1) r-lift
  (acts (grab (left-handle ac1) :agents (a)) (grab (right-handle ac1) :agents (e))))
"""

ORACLE = """
(id-constraint unplug 1 machine (sorts ac1))
(id-constraint lift 1 machine (sorts ac1))
(id-constraint grab 1 handle (sorts left-handle right-handle))
"""

UNPLUG = "(unplug ac1 :agents (a) :t 0)"
LIFT = "(lift ac1 :agents (a e) :t 0)"
GRAB_L = "(grab (left-handle ac1) :agents (a) :t 0)"
GRAB_R = "(grab (right-handle ac1) :agents (e) :t 0)"
MOVE = "(move ac1 :agents (a e) :t 0)"

FACTS = f"""
(mb (a e) (in-recipes r-move (move ac1)))
(mb (a e) (in-recipes r-lift (lift ac1)))
(bel a (basic-level {UNPLUG}))
(bel a (basic-level {GRAB_L}))
(bel e (basic-level {GRAB_R}))
(intto a {UNPLUG})
(intto a {GRAB_L})
(intto e {GRAB_R})
(mb (a e) (intends (a) {UNPLUG}))
(mb (a e) (intends (a) {GRAB_L}))
(mb (a e) (intends (e) {GRAB_R}))
(mb (a e) (intends (a e) {LIFT}))
(intth a (succeeds (a) {UNPLUG}))
(intth e (succeeds (a) {UNPLUG}))
(intth a (succeeds (a e) {LIFT}))
(intth e (succeeds (a e) {LIFT}))
(intth a (succeeds (a) {GRAB_L}))
(intth e (succeeds (a) {GRAB_L}))
(intth a (succeeds (e) {GRAB_R}))
(intth e (succeeds (e) {GRAB_R}))
"""

WORLD = "(clear floor)"


def kb(facts: str = FACTS) -> KB:
    reg = load_recipes(RECIPES)
    oracle = load_oracle(ORACLE)
    oracle.check_total(reg)
    ms = MentalStore()
    for node in read_all(facts):
        ms.assert_fact(fact_from_sexpr(node, 0, reg.signature))
    ms.world.add(parse_param(WORLD), 0)
    return KB(ms, reg, oracle)


def build(facts: str = FACTS):
    """Plan book and KB after deriving everything derivable at turn 0."""
    base = kb(facts)
    book = {"P": new_plan("P", AgentSet.of("a", "e"), parse_action(MOVE))}
    refresh(book, "P", base, 0)
    return book, base
