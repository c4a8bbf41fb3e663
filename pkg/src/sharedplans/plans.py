"""SharedPlan requirement ledgers, capability checks and subsidiary-plan inference.

A plan is a ledger of the beliefs and intentions a full plan needs, each
marked with the turn it was established or left missing. Ledger keys follow
the FSP checklist: ``1`` (recipe), then per single-agent constituent act
``2a``-``2e`` and per multi-agent act ``3a``-``3d``. Individual plans keep
only ``1``, ``2a``, ``2b`` and ``2c``. Plans whose objective is to achieve a
knowledge precondition carry ``1`` (both parties have adopted the exchange),
``2a`` (the beneficiary intends the act that needs the knowledge) and ``2b``
(the precondition now holds).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

from .knowledge import OracleTable, has_recipe, has_sat_descr, held_recipes, unidentified_params
from .mental import (
    AchieveGoal,
    FSPGoal,
    HasRecipeProp,
    HasSatDescrProp,
    Intends,
    MentalStore,
    Objective,
    Succeeds,
    WorldState,
)
from .recipes import Recipe, RecipeRegistry, constraints_satisfied
from .sexpr import SharedPlanError
from .terms import ActionDescr, AgentSet, ParamDescr, TimePoint

SHARED, INDIVIDUAL = "shared", "individual"
SINGLE_ITEMS = ("2a", "2b", "2c", "2d", "2e")
MULTI_ITEMS = ("3a", "3b", "3c", "3d")
INDIVIDUAL_ITEMS = ("2a", "2b", "2c")


class UnknownKey(SharedPlanError):
    pass


class CapabilityNotDerivable(SharedPlanError):
    pass


class PlanError(SharedPlanError):
    pass


@dataclass(frozen=True)
class RequirementKey:
    item: str
    act: Optional[ActionDescr] = None

    def __str__(self) -> str:
        return f"[{self.item}]" + (f" {self.act}" if self.act is not None else "")


R1 = RequirementKey("1")


@dataclass(frozen=True)
class Plan:
    id: str
    kind: str
    agents: AgentSet
    objective: Objective
    ledger: dict = field(default_factory=dict)
    recipe: Optional[Recipe] = None
    subplans: dict = field(default_factory=dict)
    purpose_act: Optional[ActionDescr] = None

    @property
    def is_achieve(self) -> bool:
        return isinstance(self.objective, AchieveGoal)

    def status(self, key: RequirementKey) -> Optional[TimePoint]:
        return self.ledger[key]


@dataclass
class KB:
    """What plan derivation consults: the store plus the static libraries."""

    store: MentalStore
    registry: RecipeRegistry
    oracle: OracleTable


def new_plan(plan_id: str, agents: AgentSet, objective: Objective,
             purpose_act: ActionDescr | None = None) -> Plan:
    kind = INDIVIDUAL if agents.single else SHARED
    keys = [R1]
    if isinstance(objective, AchieveGoal):
        if purpose_act is None and isinstance(objective.target, HasRecipeProp):
            purpose_act = objective.target.action
        if purpose_act is not None:
            keys.append(RequirementKey("2a", purpose_act))
        keys.append(RequirementKey("2b", purpose_act))
    return Plan(plan_id, kind, agents, objective, {k: None for k in keys}, purpose_act=purpose_act)


def subact_keys(plan: Plan, act: ActionDescr) -> list[RequirementKey]:
    if plan.kind == INDIVIDUAL:
        if not act.agents.single:
            raise PlanError(f"individual plan {plan.id} cannot contain multi-agent act {act}")
        items = INDIVIDUAL_ITEMS
    else:
        items = SINGLE_ITEMS if act.agents.single else MULTI_ITEMS
    return [RequirementKey(i, act) for i in items]


def capability_key(plan: Plan, act: ActionDescr) -> RequirementKey:
    return RequirementKey("2b" if act.agents.single else "3a", act)


def subplan_key(plan: Plan, act: ActionDescr) -> RequirementKey:
    return RequirementKey("2c" if act.agents.single else "3b", act)


def check_fsp(plan: Plan, t: TimePoint | None = None) -> bool:
    return not missing_requirements(plan, t)


def missing_requirements(plan: Plan, t: TimePoint | None = None) -> list[RequirementKey]:
    return [k for k, v in plan.ledger.items() if v is None or (t is not None and v > t)]


# capability

class Shortfall(str, Enum):
    RECIPE = "know-recipe"
    PARAMS = "identify-param"
    CONSTRAINTS = "constraints"


def capability_shortfall(ms: MentalStore, reg: RecipeRegistry, oracle: OracleTable, agents: AgentSet,
                         action: ActionDescr, t: TimePoint,
                         world: WorldState | None = None) -> Optional[Shortfall]:
    """First failing conjunct of the augmented capability check, or None."""
    recipes = held_recipes(ms, reg, agents, action, t)
    if not recipes:
        return Shortfall.RECIPE
    if unidentified_params(ms, oracle, agents, action, t):
        return Shortfall.PARAMS
    world = world if world is not None else ms.world
    if not any(constraints_satisfied(reg, world, r, t) for r in recipes):
        return Shortfall.CONSTRAINTS
    return None


def bcba_failure(ms, reg, oracle, agents: AgentSet, action: ActionDescr, t: TimePoint,
                 world: WorldState | None = None) -> Optional[Shortfall]:
    if not agents.single:
        raise ValueError(f"BCBA is for a single agent, got {agents}")
    return capability_shortfall(ms, reg, oracle, agents, action, t, world)


def mbcbag_failure(ms, reg, oracle, agents: AgentSet, action: ActionDescr, t: TimePoint,
                   world: WorldState | None = None) -> Optional[Shortfall]:
    if agents.single:
        raise ValueError(f"MBCBAG is for a group, got {agents}")
    return capability_shortfall(ms, reg, oracle, agents, action, t, world)


def bcba(ms, reg, oracle, agents: AgentSet, action: ActionDescr, t: TimePoint,
         world: WorldState | None = None) -> bool:
    return bcba_failure(ms, reg, oracle, agents, action, t, world) is None


def mbcbag(ms, reg, oracle, agents: AgentSet, action: ActionDescr, t: TimePoint,
           world: WorldState | None = None) -> bool:
    return mbcbag_failure(ms, reg, oracle, agents, action, t, world) is None


def capable(kb: KB, action: ActionDescr, t: TimePoint) -> bool:
    return capability_shortfall(kb.store, kb.registry, kb.oracle, action.agents, action, t) is None


def target_holds(kb: KB, target, t: TimePoint) -> bool:
    if isinstance(target, HasRecipeProp):
        recipe = has_recipe(kb.store, kb.registry, target.agents, target.action, t)
        return recipe is not None and (target.recipe is None or recipe.id == target.recipe)
    constraint = kb.oracle.constraint_named(target.constraint)
    if constraint is None:
        raise PlanError(f"unknown identification constraint {target.constraint}")
    return has_sat_descr(kb.store, target.agents, target.param, constraint, t)


# ledger mechanics

def apply_establishment(plan: Plan, key: RequirementKey, t: TimePoint, kb: KB | None = None,
                        recipe: Recipe | None = None) -> Plan:
    """Mark ``key`` established at ``t``.

    Establishing ``1`` on an action plan fixes its recipe and adds the
    per-act requirement groups. Capability keys (``2b``/``3a``, and the
    completion key of an achieve plan) are accepted only if the capability
    can actually be derived from ``kb`` at ``t``.
    """
    if key not in plan.ledger:
        raise UnknownKey(f"{key} is not a requirement of {plan.id}")
    if plan.ledger[key] is not None:
        return plan
    ledger = dict(plan.ledger)
    if key == R1 and not plan.is_achieve:
        if recipe is None and kb is not None:
            recipe = derive_recipe(plan, kb, t)
        if recipe is None:
            raise CapabilityNotDerivable(f"no recipe to establish [1] of {plan.id}")
        ledger[key] = t
        subplans = {}
        for i, act in enumerate(recipe.acts, start=1):
            for k in subact_keys(plan, act):
                ledger.setdefault(k, None)
            subplans[act] = f"{plan.id}.{i}"
        return replace(plan, ledger=ledger, recipe=recipe, subplans=subplans)
    if key.item in ("2b", "3a"):
        if plan.is_achieve:
            ok = kb is not None and target_holds(kb, plan.objective.target, t)
        else:
            ok = kb is not None and capable(kb, key.act, t)
        if not ok:
            raise CapabilityNotDerivable(f"{key} of {plan.id} does not hold at {t}")
    ledger[key] = t
    return replace(plan, ledger=ledger)


def derive_recipe(plan: Plan, kb: KB, t: TimePoint) -> Optional[Recipe]:
    return has_recipe(kb.store, kb.registry, plan.agents, plan.objective, t)


def all_intend_success(kb: KB, group: AgentSet, act: ActionDescr, t: TimePoint) -> bool:
    goal = Succeeds(act.agents, act)
    return all(kb.store.holds_intention_that(m, goal, t) for m in group)


def intends(kb: KB, agents: AgentSet, act: ActionDescr, t: TimePoint) -> bool:
    if agents.single:
        return kb.store.holds_intention_to(agents.agent, act, t)
    return kb.store.holds_mb(agents, Intends(agents, act), t)


def requirement_holds(plan: Plan, key: RequirementKey, kb: KB, book: dict, t: TimePoint) -> bool:
    """Whether ``key`` can be established from the store at ``t``."""
    ms = kb.store
    if plan.is_achieve:
        if key.item == "1":
            goal = FSPGoal(plan.agents, plan.objective)
            return all(ms.holds_intention_that(m, goal, t) for m in plan.agents)
        if key.item == "2a":
            return intends(kb, key.act.agents, key.act, t)
        return target_holds(kb, plan.objective.target, t)
    if key.item == "1":
        return derive_recipe(plan, kb, t) is not None
    act = key.act
    item = key.item
    if item == "2a":
        return ms.holds_intention_to(act.agents.agent, act, t)
    if item in ("2b", "3a"):
        return capable(kb, act, t)
    if item in ("2c", "3b"):
        sub = book.get(plan.subplans.get(act))
        return sub is not None and check_fsp(sub)
    if item in ("2d", "3c"):
        parts = ("2a", "2b", "2c") if item == "2d" else ("3a", "3b")
        if any(plan.ledger.get(RequirementKey(p, act)) is None for p in parts):
            return False
        return plan.agents.single or ms.holds_mb(plan.agents, Intends(act.agents, act), t)
    if item in ("2e", "3d"):
        return all_intend_success(kb, plan.agents, act, t)
    raise UnknownKey(str(key))


def _ancestors(book: dict, plan_id: str) -> Iterable[Plan]:
    parts = plan_id.split(".")
    for n in range(1, len(parts)):
        pid = ".".join(parts[:n])
        if pid in book:
            yield book[pid]


def _spawn_subplans(book: dict, plan: Plan) -> None:
    seen = {plan.objective} | {p.objective for p in _ancestors(book, plan.id)}
    for act, sub_id in plan.subplans.items():
        if act in seen:
            raise PlanError(f"recipe {plan.recipe.id} for {plan.objective} is cyclic through {act}")
        if sub_id not in book:
            book[sub_id] = new_plan(sub_id, act.agents, act)


def refresh(book: dict, plan_id: str, kb: KB, t: TimePoint) -> list[tuple[str, RequirementKey]]:
    """Establish every derivable missing requirement of a plan and its subplans.

    ``book`` maps plan ids to plans and is updated in place. Returns the
    newly established ``(plan id, key)`` pairs, subplans first.
    """
    gained: list[tuple[str, RequirementKey]] = []
    while True:
        before = len(gained)
        for sub_id in list(book[plan_id].subplans.values()):
            gained.extend(refresh(book, sub_id, kb, t))
        plan = book[plan_id]
        for key in missing_requirements(plan):
            if not requirement_holds(plan, key, kb, book, t):
                continue
            plan = apply_establishment(plan, key, t, kb)
            book[plan_id] = plan
            gained.append((plan_id, key))
            if key == R1 and plan.subplans:
                _spawn_subplans(book, plan)
                break
        if len(gained) == before:
            return gained


def descendants(book: dict, plan: Plan) -> list[Plan]:
    out = []
    for sub_id in plan.subplans.values():
        sub = book.get(sub_id)
        if sub is not None:
            out.append(sub)
            out.extend(descendants(book, sub))
    return out


# subsidiary relationships

SUBACT, KNOW_RECIPE, IDENTIFY_PARAM = "subact", "know-recipe", "identify-param"
_LABEL = {SUBACT: "subact", KNOW_RECIPE: "has.recipe", IDENTIFY_PARAM: "has.sat.descr"}


@dataclass(frozen=True)
class SubsidiaryJustification:
    kind: str
    parent_plan: str
    anchor: Union[ActionDescr, ParamDescr]
    requirement: RequirementKey
    via_plan: str
    act: ActionDescr

    def label(self) -> str:
        via = f" via {self.via_plan}" if self.via_plan != self.parent_plan else ""
        return f"[{self.requirement.item}: {_LABEL[self.kind]}{via}]"

    def __str__(self) -> str:
        return f"{self.parent_plan} {self.label()} {self.anchor}"


def _missing(plan: Plan, key: RequirementKey) -> bool:
    return key in plan.ledger and plan.ledger[key] is None


def _subact_rule(goal, root: Plan, cand: Plan, kb: KB):
    if not isinstance(goal, ActionDescr) or cand.recipe is None or goal not in cand.recipe.acts:
        return None
    key = subplan_key(cand, goal)
    if _missing(cand, key):
        return SubsidiaryJustification(SUBACT, root.id, goal, key, cand.id, goal)
    return None


def _know_recipe_rule(goal, root: Plan, cand: Plan, kb: KB):
    if not isinstance(goal, AchieveGoal) or not isinstance(goal.target, HasRecipeProp):
        return None
    target = goal.target
    if cand.recipe is None or target.action not in cand.recipe.acts:
        return None
    if target.action.agents != target.agents:
        return None
    key = capability_key(cand, target.action)
    if _missing(cand, key):
        return SubsidiaryJustification(KNOW_RECIPE, root.id, target.action, key, cand.id, target.action)
    return None


def _identify_param_rule(goal, root: Plan, cand: Plan, kb: KB):
    if not isinstance(goal, AchieveGoal) or not isinstance(goal.target, HasSatDescrProp):
        return None
    target = goal.target
    if cand.recipe is None:
        return None
    for act in cand.recipe.acts:
        if act.agents != target.agents:
            continue
        for i, p in enumerate(act.params, start=1):
            if p != target.param or kb.oracle(act.act_type, i).name != target.constraint:
                continue
            key = capability_key(cand, act)
            if _missing(cand, key):
                return SubsidiaryJustification(IDENTIFY_PARAM, root.id, p, key, cand.id, act)
    return None


RULES = (_subact_rule, _know_recipe_rule, _identify_param_rule)


def infer_subsidiary(goal: Objective, active_plans: Sequence[Plan], kb: KB, t: TimePoint,
                     book: dict | None = None) -> Optional[SubsidiaryJustification]:
    """Explain a new plan objective as subsidiary to one of the active plans.

    ``active_plans`` is innermost first. For each plan, the rules are tried in
    order (constituent act, missing recipe knowledge, unidentifiable
    parameter), each against the plan itself and then its subplans.
    """
    book = book if book is not None else {}
    for plan in active_plans:
        candidates = [plan] + descendants(book, plan)
        for rule in RULES:
            for cand in candidates:
                found = rule(goal, plan, cand, kb)
                if found is not None:
                    return found
    return None


# rendering

def key_text(plan: Plan, key: RequirementKey) -> str:
    if key == R1:
        if plan.is_achieve:
            return "[1] exchange adopted"
        return f"[1] recipe {plan.recipe.id}" if plan.recipe is not None else "[1] recipe"
    if plan.is_achieve and key.item == "2b":
        return f"[2b] {plan.objective.target}"
    return str(key)


def render_plan(plan: Plan, book: dict | None = None, indent: str = "") -> list[str]:
    """Ledger rendering: established items, a dotted rule, then missing items."""
    head = f"{indent}{plan.id} {plan.kind} {plan.agents} {plan.objective}"
    lines = [head]
    done = [(k, v) for k, v in plan.ledger.items() if v is not None]
    todo = [k for k, v in plan.ledger.items() if v is None]
    lines += [f"{indent}  + {key_text(plan, k)} @{v}" for k, v in done]
    lines.append(f"{indent}  ......")
    lines += [f"{indent}  - {key_text(plan, k)}" for k in todo]
    if book is not None:
        for sub_id in plan.subplans.values():
            if sub_id in book:
                lines += render_plan(book[sub_id], book, indent + "    ")
    return lines
