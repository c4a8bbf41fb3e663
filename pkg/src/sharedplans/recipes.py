"""Recipe library: constituent acts and constraints per act, plus basic-level types."""

from __future__ import annotations

from dataclasses import dataclass, field

from .mental import WorldState
from .sexpr import SharedPlanError, dumps, expect_atom, expect_list, fail, read_all
from .terms import ActionDescr, ParamDescr, Signature, Symbol, TimePoint, action_from_sexpr, param_from_sexpr

R_EMPTY_ID = "R_Empty"


class BasicLevelConflict(SharedPlanError):
    pass


class RecipeError(SharedPlanError):
    pass


@dataclass(frozen=True)
class Constraint:
    name: Symbol
    args: tuple[ParamDescr, ...] = ()

    @property
    def atom(self) -> ParamDescr:
        return ParamDescr(self.name, self.args)

    def to_sexpr(self):
        return self.atom.to_sexpr()

    def __str__(self):
        return str(self.atom)


@dataclass(frozen=True)
class Recipe:
    id: Symbol
    acts: tuple[ActionDescr, ...] = ()
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "acts", tuple(self.acts))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if self.id == R_EMPTY_ID:
            if self.acts or self.constraints:
                raise RecipeError("R_Empty has no acts and no constraints")
        elif not self.acts:
            raise RecipeError(f"recipe {self.id} has no constituent acts")
        if len(set(self.acts)) != len(self.acts):
            raise RecipeError(f"recipe {self.id} lists an act twice")

    def same_content(self, other: "Recipe") -> bool:
        return (set(self.acts), set(self.constraints)) == (set(other.acts), set(other.constraints))


R_EMPTY = Recipe(R_EMPTY_ID)


@dataclass
class RecipeRegistry:
    by_act: dict[ParamDescr, list[Recipe]] = field(default_factory=dict)
    basic_level: set[Symbol] = field(default_factory=set)
    signature: Signature = field(default_factory=Signature)

    def declare_basic(self, act_type: Symbol) -> "RecipeRegistry":
        if any(key.root == act_type for key in self.by_act):
            raise BasicLevelConflict(f"{act_type} already has registered recipes")
        for recipes in self.by_act.values():
            for r in recipes:
                self._check_basic_acts(r, extra={act_type})
        self.basic_level.add(act_type)
        return self

    def _check_basic_acts(self, recipe: Recipe, extra=frozenset()) -> None:
        for act in recipe.acts:
            if act.act_type in self.basic_level | set(extra) and not act.agents.single:
                raise BasicLevelConflict(
                    f"basic-level act {act} in recipe {recipe.id} has more than one agent")

    def register_recipe(self, act: ParamDescr, recipe: Recipe) -> "RecipeRegistry":
        """Register ``recipe`` for the act term ``act`` (act-type applied to parameters)."""
        if act.root in self.basic_level:
            raise BasicLevelConflict(f"{act.root} is basic-level and takes no recipe")
        if recipe.id == R_EMPTY_ID:
            raise RecipeError("R_Empty cannot be registered")
        self._check_basic_acts(recipe)
        self.signature.check(act.root, len(act.args))
        for a in recipe.acts:
            self.signature.check(a.act_type, len(a.params))
        for key, recipes in self.by_act.items():
            for r in recipes:
                if r.id != recipe.id:
                    continue
                if key == act and r.same_content(recipe):
                    return self
                raise RecipeError(f"recipe id {recipe.id} is already used")
        self.by_act.setdefault(act, []).append(recipe)
        return self

    def recipes_for(self, act: ParamDescr) -> list[Recipe]:
        """Registered recipes for ``act``, ordered by recipe id."""
        return sorted(self.by_act.get(act, ()), key=lambda r: r.id)

    def is_basic_level(self, action: ActionDescr) -> bool:
        return action.act_type in self.basic_level

    def recipe_by_id(self, recipe_id: Symbol) -> Recipe | None:
        if recipe_id == R_EMPTY_ID:
            return R_EMPTY
        for recipes in self.by_act.values():
            for r in recipes:
                if r.id == recipe_id:
                    return r
        return None

    def all_acts(self):
        for recipes in self.by_act.values():
            for r in recipes:
                yield from r.acts


def register_recipe(reg: RecipeRegistry, act: ParamDescr, recipe: Recipe) -> RecipeRegistry:
    return reg.register_recipe(act, recipe)


def is_basic_level(reg: RecipeRegistry, action: ActionDescr) -> bool:
    return reg.is_basic_level(action)


def constraints_satisfied(reg: RecipeRegistry, world: WorldState, recipe: Recipe, t: TimePoint) -> bool:
    return all(world.holds(c.atom, t) for c in recipe.constraints)


def load_recipes(text: str, reg: RecipeRegistry | None = None) -> RecipeRegistry:
    """Read a recipe library.

    Forms::

        (basic-level loosen pull-off)
        (recipe (remove (pump ac1)) r-pump
          (acts (remove (flywheel ac1) :agents (a)) ...)
          (constraints (power-off ac1) ...))
    """
    reg = reg if reg is not None else RecipeRegistry()
    for form in read_all(text):
        expect_list(form)
        head = form[0]
        if head == "basic-level":
            for name in form[1:]:
                reg.declare_basic(str(expect_atom(name, "act-type")))
        elif head == "recipe":
            if len(form) < 4:
                raise fail(form, "(recipe ACT ID (acts ...) [(constraints ...)])")
            act = param_from_sexpr(form[1])
            rid = str(expect_atom(form[2], "recipe id"))
            acts, constraints = [], []
            for part in form[3:]:
                expect_list(part)
                if part[0] == "acts":
                    acts.extend(action_from_sexpr(a, reg.signature) for a in part[1:])
                elif part[0] == "constraints":
                    constraints.extend(Constraint(p.root, p.args) for p in map(param_from_sexpr, part[1:]))
                else:
                    raise fail(part, f"unexpected ({dumps(part[0])} ...) in recipe {rid}")
            reg.register_recipe(act, Recipe(rid, tuple(acts), tuple(constraints)))
        else:
            raise fail(form, f"unknown recipe-library form ({dumps(head)} ...)")
    return reg


def render_recipes(reg: RecipeRegistry) -> str:
    lines = []
    if reg.basic_level:
        lines.append(dumps(["basic-level", *sorted(reg.basic_level)]))
    for act in sorted(reg.by_act):
        for r in reg.by_act[act]:
            form = ["recipe", act.to_sexpr(), r.id, ["acts", *(a.to_sexpr() for a in r.acts)]]
            if r.constraints:
                form.append(["constraints", *(c.to_sexpr() for c in r.constraints)])
            lines.append(dumps(form))
    return "\n".join(lines) + "\n"
