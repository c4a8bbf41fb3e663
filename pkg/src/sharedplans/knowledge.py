"""Knowledge preconditions: has.recipe, id.params, has.sat.descr, suff.for.id.

Every predicate is evaluated against a mental-state snapshot at a turn, so
all of them hold of action *descriptions*: a belief keyed on one description
says nothing about a structurally different one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .mental import BasicLevel, InRecipes, MentalStore, SharedIS
from .recipes import R_EMPTY, Recipe, RecipeRegistry
from .sexpr import SharedPlanError, expect_atom, expect_list, fail, read_all
from .terms import ActionDescr, AgentSet, ParamDescr, Symbol, TimePoint


class OracleGap(SharedPlanError):
    pass


@dataclass(frozen=True)
class IdConstraint:
    """An identification constraint, satisfied by descriptions of certain sorts.

    A description's sort is its root symbol.
    """

    name: Symbol
    sorts: frozenset[Symbol] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "sorts", frozenset(self.sorts))


@dataclass
class OracleTable:
    """Which identification constraint an act-type imposes on each parameter position."""

    entries: dict[tuple[Symbol, int], IdConstraint] = field(default_factory=dict)

    def set(self, act_type: Symbol, position: int, constraint: IdConstraint) -> "OracleTable":
        if position < 1:
            raise ValueError("parameter positions start at 1")
        known = self.constraint_named(constraint.name)
        if known is not None and known != constraint:
            raise OracleGap(f"constraint {constraint.name} declared with differing sorts")
        self.entries[(act_type, position)] = constraint
        return self

    def __call__(self, act_type: Symbol, position: int) -> IdConstraint:
        try:
            return self.entries[(act_type, position)]
        except KeyError:
            raise OracleGap(f"no identification constraint for ({act_type}, {position})") from None

    def constraint_named(self, name: Symbol) -> IdConstraint | None:
        for c in self.entries.values():
            if c.name == name:
                return c
        return None

    def check_total(self, reg: RecipeRegistry) -> None:
        """Raise OracleGap unless every parameter of every recipe act is covered."""
        for act in reg.all_acts():
            for i in range(1, len(act.params) + 1):
                self(act.act_type, i)


def load_oracle(text: str, table: OracleTable | None = None) -> OracleTable:
    """Read ``(id-constraint ACT-TYPE POSITION NAME (sorts S ...))`` forms."""
    table = table if table is not None else OracleTable()
    for form in read_all(text):
        expect_list(form, "id-constraint", min_len=5)
        act_type = str(expect_atom(form[1], "act-type"))
        pos = expect_atom(form[2], "parameter position")
        if not pos.isdigit() or int(pos) < 1:
            raise fail(pos, "parameter position must be a positive integer")
        name = str(expect_atom(form[3], "constraint name"))
        sorts = expect_list(form[4], "sorts")
        table.set(act_type, int(pos), IdConstraint(name, frozenset(str(expect_atom(s)) for s in sorts[1:])))
    return table


def held_recipes(ms: MentalStore, reg: RecipeRegistry, agents: AgentSet, action: ActionDescr,
                 t: TimePoint) -> list[Recipe]:
    """Every recipe ``agents`` have for ``action`` at ``t``, by recipe id.

    Basic-level acts need only the (single) agent's belief that the act is
    basic-level and yield R_Empty. Otherwise a registered recipe counts when
    the agent believes in it (or the group mutually believes in it).
    """
    if reg.is_basic_level(action):
        if agents.single and ms.holds_bel(agents.agent, BasicLevel(action), t):
            return [R_EMPTY]
        return []
    out = []
    for recipe in reg.recipes_for(action.term):
        prop = InRecipes(recipe.id, action.term)
        if agents.single:
            if ms.holds_bel(agents.agent, prop, t):
                out.append(recipe)
        elif ms.holds_mb(agents, prop, t):
            out.append(recipe)
    return out


def has_recipe(ms: MentalStore, reg: RecipeRegistry, agents: AgentSet, action: ActionDescr,
               t: TimePoint) -> Optional[Recipe]:
    """The lowest-id recipe ``agents`` have for ``action`` at ``t``, or None."""
    held = held_recipes(ms, reg, agents, action, t)
    return held[0] if held else None


def suff_for_id(constraint: IdConstraint, descr: ParamDescr) -> bool:
    return descr.root in constraint.sorts


def has_sat_descr(ms: MentalStore, agents: AgentSet, param: ParamDescr, constraint: IdConstraint,
                  t: TimePoint) -> bool:
    return satisfying_descr(ms, agents, param, constraint, t) is not None


def satisfying_descr(ms: MentalStore, agents: AgentSet, param: ParamDescr, constraint: IdConstraint,
                     t: TimePoint) -> Optional[ParamDescr]:
    """A witness description for has.sat.descr, smallest first; None if there is none.

    A group needs one shared witness: it must sit in every member's
    individuating set and the group must mutually believe it does. The
    parameter's own description needs no such belief, since every
    individuating set contains its anchor.
    """
    if agents.single:
        candidates = ms.individuating_set(agents.agent, param, t)
    else:
        sets = [ms.individuating_set(g, param, t) for g in agents]
        candidates = frozenset.intersection(*sets)
    for descr in sorted(candidates):
        if not suff_for_id(constraint, descr):
            continue
        if agents.single or descr == param:
            return descr
        if ms.holds_mb(agents, SharedIS(param, descr), t) or ms.holds_mb(agents, SharedIS(descr, param), t):
            return descr
    return None


def unidentified_params(ms: MentalStore, oracle: OracleTable, agents: AgentSet, action: ActionDescr,
                        t: TimePoint) -> frozenset[int]:
    """1-based positions of ``action``'s parameters that ``agents`` cannot identify."""
    constraints = [oracle(action.act_type, i) for i in range(1, len(action.params) + 1)]
    return frozenset(i for i, (p, c) in enumerate(zip(action.params, constraints), start=1)
                     if not has_sat_descr(ms, agents, p, c, t))


def id_params(ms: MentalStore, oracle: OracleTable, agents: AgentSet, action: ActionDescr,
              t: TimePoint) -> bool:
    return not unidentified_params(ms, oracle, agents, action, t)
