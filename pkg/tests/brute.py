"""Brute-force evaluator for the knowledge-precondition predicates.

Works on raw tuples, never on package objects, and decides each predicate by
expanding its quantifiers over a finite universe:

* a model is a set of facts ``("bel", agent, prop)`` / ``("mb", group, prop)``
  / ``("world", atom)``, where ``group`` is a frozenset of agent names;
* props are ``("recipe", rid, act_term)``, ``("basic", action)``,
  ``("is", agent, d1, d2)`` and ``("shared", d1, d2)``;
* descriptions are plain strings and a description's sort is the string itself;
* an action is ``(act_type, params, agents)`` and its act term is
  ``(act_type, params)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations


@dataclass
class Library:
    recipes: dict = field(default_factory=dict)      # act_term -> {rid: constraints frozenset}
    basic: set = field(default_factory=set)          # act types
    oracle: dict = field(default_factory=dict)       # (act_type, pos) -> (name, sorts)


def believes(model, agent, prop) -> bool:
    for fact in model:
        if fact[0] == "bel" and fact[1] == agent and fact[2] == prop:
            return True
        if fact[0] == "mb" and agent in fact[1] and fact[2] == prop:
            return True
    return False


def mutually_believe(model, group, prop) -> bool:
    if len(group) == 1:
        (only,) = group
        return believes(model, only, prop)
    return any(f[0] == "mb" and group <= f[1] and f[2] == prop for f in model)


def recipes_held(model, lib: Library, group, action) -> set:
    """All R with has.recipe(G, action, R): clause 1 or clause 2a1/2a2."""
    act_type, params, _ = action
    found = set()
    candidates = {"R_Empty"} | set(lib.recipes.get((act_type, params), {}))
    for rid in candidates:
        if act_type in lib.basic:
            if rid == "R_Empty" and len(group) == 1 and believes(model, next(iter(group)), ("basic", action)):
                found.add(rid)
            continue
        if rid == "R_Empty":
            continue
        prop = ("recipe", rid, (act_type, params))
        if len(group) == 1 and believes(model, next(iter(group)), prop):
            found.add(rid)
        if len(group) > 1 and mutually_believe(model, group, prop):
            found.add(rid)
    return found


def in_individuating_set(model, agent, anchor, other) -> bool:
    if other == anchor:
        return True
    return (believes(model, agent, ("is", agent, anchor, other))
            or believes(model, agent, ("is", agent, other, anchor)))


def has_sat_descr(model, universe, group, param, sorts) -> bool:
    for other in universe:
        if other not in sorts:
            continue
        if len(group) == 1:
            if in_individuating_set(model, next(iter(group)), param, other):
                return True
            continue
        if not all(in_individuating_set(model, g, param, other) for g in group):
            continue
        if other == param:
            return True
        if (mutually_believe(model, group, ("shared", param, other))
                or mutually_believe(model, group, ("shared", other, param))):
            return True
    return False


def id_params(model, universe, lib: Library, group, action) -> bool:
    act_type, params, _ = action
    return all(has_sat_descr(model, universe, group, p, lib.oracle[(act_type, i)][1])
               for i, p in enumerate(params, start=1))


def capable(model, universe, lib: Library, group, action) -> bool:
    """BCBA for one agent, MBCBAG for a group: some held R, params, R's constraints."""
    if not id_params(model, universe, lib, group, action):
        return False
    act_type, params, _ = action
    constraints = lib.recipes.get((act_type, params), {})
    for rid in recipes_held(model, lib, group, action):
        needed = constraints.get(rid, frozenset())
        if all(("world", atom) in model for atom in needed):
            return True
    return False


def models(universe_facts, max_facts: int):
    """Every subset of ``universe_facts`` with at most ``max_facts`` members."""
    facts = list(universe_facts)
    for k in range(max_facts + 1):
        for combo in combinations(facts, k):
            yield frozenset(combo)


def groups(agents):
    agents = sorted(agents)
    for k in range(1, len(agents) + 1):
        for combo in combinations(agents, k):
            yield frozenset(combo)
