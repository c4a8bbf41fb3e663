"""Time-indexed store of beliefs, mutual beliefs, intentions and world facts.

Mutual belief is primitive: an MB fact is stored as such, and every member of
its group is taken to hold the belief. Facts persist from the turn they are
asserted until an explicit retraction.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .sexpr import SharedPlanError, dumps, expect_atom, expect_list, fail
from .terms import (
    ActionDescr,
    AgentSet,
    ParamDescr,
    Signature,
    Symbol,
    TimePoint,
    action_from_sexpr,
    agents_from_sexpr,
    param_from_sexpr,
)


class MalformedFact(SharedPlanError):
    pass


# Propositions. Each renders to an s-expression headed by its surface name.

@dataclass(frozen=True)
class HasRecipeProp:
    agents: AgentSet
    action: ActionDescr
    recipe: Optional[Symbol] = None

    def to_sexpr(self):
        out = ["has.recipe", self.agents.to_sexpr(), self.action.to_sexpr()]
        return out + [self.recipe] if self.recipe else out

    def __str__(self):
        return f"has.recipe({self.agents},{self.action},{self.recipe or 'R'})"


@dataclass(frozen=True)
class HasSatDescrProp:
    agents: AgentSet
    param: ParamDescr
    constraint: Symbol

    def to_sexpr(self):
        return ["has.sat.descr", self.agents.to_sexpr(), self.param.to_sexpr(), self.constraint]

    def __str__(self):
        return f"has.sat.descr({self.agents},{self.param},{self.constraint})"


@dataclass(frozen=True)
class InRecipes:
    """R is a recipe for the act term (act-type applied to its parameters)."""

    recipe: Symbol
    act: ParamDescr

    def to_sexpr(self):
        return ["in-recipes", self.recipe, self.act.to_sexpr()]


@dataclass(frozen=True)
class SuffForId:
    constraint: Symbol
    param: ParamDescr

    def to_sexpr(self):
        return ["suff-for-id", self.constraint, self.param.to_sexpr()]


@dataclass(frozen=True)
class InIS:
    """``other`` belongs to ``agent``'s individuating set for ``anchor``."""

    agent: Symbol
    anchor: ParamDescr
    other: ParamDescr

    def to_sexpr(self):
        return ["in-is", self.agent, self.anchor.to_sexpr(), self.other.to_sexpr()]


@dataclass(frozen=True)
class SharedIS:
    """``other`` is in every group member's individuating set for ``anchor``."""

    anchor: ParamDescr
    other: ParamDescr

    def to_sexpr(self):
        return ["shared-is", self.anchor.to_sexpr(), self.other.to_sexpr()]


@dataclass(frozen=True)
class ConstraintHolds:
    name: Symbol
    args: tuple[ParamDescr, ...] = ()

    def to_sexpr(self):
        return ["holds", self.name, *(a.to_sexpr() for a in self.args)]


@dataclass(frozen=True)
class BasicLevel:
    action: ActionDescr

    def to_sexpr(self):
        return ["basic-level", self.action.to_sexpr()]


@dataclass(frozen=True)
class Intends:
    """Public record that ``agents`` are committed to performing ``action``."""

    agents: AgentSet
    action: ActionDescr

    def to_sexpr(self):
        return ["intends", self.agents.to_sexpr(), self.action.to_sexpr()]


@dataclass(frozen=True)
class Ground:
    atom: ParamDescr

    def to_sexpr(self):
        return ["ground", self.atom.to_sexpr()]


Proposition = Union[HasRecipeProp, HasSatDescrProp, InRecipes, SuffForId, InIS, SharedIS,
                    ConstraintHolds, BasicLevel, Intends, Ground]


# Contents of Int.Th facts.

@dataclass(frozen=True)
class AchieveGoal:
    target: Union[HasRecipeProp, HasSatDescrProp]

    def __post_init__(self):
        if not isinstance(self.target, (HasRecipeProp, HasSatDescrProp)):
            raise MalformedFact("Achieve targets a has.recipe or has.sat.descr proposition")

    def to_sexpr(self):
        return ["achieve", self.target.to_sexpr()]

    def __str__(self):
        return f"Achieve({self.target})"


Objective = Union[ActionDescr, AchieveGoal]


@dataclass(frozen=True)
class FSPGoal:
    """That ``group`` form a full SharedPlan for ``objective``."""

    group: AgentSet
    objective: Objective

    def to_sexpr(self):
        return ["fsp", self.group.to_sexpr(), self.objective.to_sexpr()]

    def __str__(self):
        return f"FSP({self.group},{self.objective})"


@dataclass(frozen=True)
class Succeeds:
    agents: AgentSet
    action: ActionDescr

    def to_sexpr(self):
        return ["succeeds", self.agents.to_sexpr(), self.action.to_sexpr()]


PlanGoal = Union[FSPGoal, Succeeds]

BEL, MB, INT_TO, INT_TH = "BEL", "MB", "IntTo", "IntTh"
KINDS = (BEL, MB, INT_TO, INT_TH)
_SURFACE = {BEL: "bel", MB: "mb", INT_TO: "intto", INT_TH: "intth"}


@dataclass(frozen=True)
class MentalFact:
    kind: str
    holder: AgentSet
    content: Union[Proposition, ActionDescr, PlanGoal]
    from_time: TimePoint = 0

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise MalformedFact(f"unknown fact kind {self.kind!r}")
        if self.kind == MB:
            if len(self.holder) < 2:
                raise MalformedFact(f"MB needs a group of two or more, got {self.holder}")
        elif not self.holder.single:
            raise MalformedFact(f"{self.kind} is held by a single agent, got {self.holder}")
        if self.kind == INT_TO:
            if not isinstance(self.content, ActionDescr):
                raise MalformedFact("Int.To content must be an action description")
            if self.content.agents != self.holder:
                raise MalformedFact(f"Int.To by {self.holder} of an act for {self.content.agents}")
        elif self.kind == INT_TH:
            if not isinstance(self.content, (FSPGoal, Succeeds)):
                raise MalformedFact("Int.Th content must be an fsp or succeeds goal")
        elif isinstance(self.content, (ActionDescr, FSPGoal, Succeeds, AchieveGoal)):
            raise MalformedFact(f"{self.kind} content must be a proposition")
        if not isinstance(self.from_time, int) or self.from_time < 0:
            raise MalformedFact(f"bad time {self.from_time!r}")

    def holder_sexpr(self):
        return self.holder.to_sexpr() if self.kind == MB else self.holder.agent

    def to_sexpr(self):
        return [_SURFACE[self.kind], self.holder_sexpr(), self.content.to_sexpr()]


@dataclass
class _Span:
    start: TimePoint
    end: Optional[TimePoint] = None

    def covers(self, t: TimePoint) -> bool:
        return self.start <= t and (self.end is None or t < self.end)


class WorldState:
    """Ground facts about the physical situation, each with a validity span."""

    def __init__(self):
        self._facts: dict[ParamDescr, list[_Span]] = {}

    def add(self, atom: ParamDescr, t: TimePoint = 0) -> None:
        spans = self._facts.setdefault(atom, [])
        if not any(s.covers(t) for s in spans):
            spans.append(_Span(t))

    def retract(self, atom: ParamDescr, t: TimePoint) -> None:
        for s in self._facts.get(atom, []):
            if s.covers(t):
                s.end = t

    def holds(self, atom: ParamDescr, t: TimePoint) -> bool:
        return any(s.covers(t) for s in self._facts.get(atom, ()))

    def dump_lines(self) -> list[str]:
        return sorted(_dump_line(["world", dumps(a.to_sexpr())], s)
                      for a, spans in self._facts.items() for s in spans)


def _dump_line(parts, span: _Span) -> str:
    text = dumps(parts) if isinstance(parts, list) else parts
    suffix = f" :from {span.start}" + (f" :until {span.end}" if span.end is not None else "")
    return text + suffix


class MentalStore:
    """Single-writer store of mental facts plus the world state."""

    def __init__(self):
        self._facts: dict[tuple, list[_Span]] = {}
        self._by_content: dict[object, set[tuple]] = {}
        self.world = WorldState()

    def copy(self) -> "MentalStore":
        return copy.deepcopy(self)

    # writing

    def assert_fact(self, fact: MentalFact) -> "MentalStore":
        fact.validate()
        key = (fact.kind, fact.holder, fact.content)
        spans = self._facts.setdefault(key, [])
        if not any(s.covers(fact.from_time) for s in spans):
            spans.append(_Span(fact.from_time))
        self._by_content.setdefault(fact.content, set()).add(key)
        return self

    def retract_fact(self, kind: str, holder: AgentSet, content, t: TimePoint) -> "MentalStore":
        for s in self._facts.get((kind, holder, content), []):
            if s.covers(t):
                s.end = t
        return self

    def believe(self, agent: Symbol, p: Proposition, t: TimePoint = 0) -> "MentalStore":
        return self.assert_fact(MentalFact(BEL, AgentSet.of(agent), p, t))

    def mutually_believe(self, group: AgentSet, p: Proposition, t: TimePoint = 0) -> "MentalStore":
        return self.assert_fact(MentalFact(MB, group, p, t))

    def add_codesignation(self, agent: Symbol, anchor: ParamDescr, other: ParamDescr,
                          t: TimePoint = 0) -> "MentalStore":
        if anchor == other:
            return self
        return self.believe(agent, InIS(agent, anchor, other), t)

    # reading

    def _active(self, key: tuple, t: TimePoint) -> bool:
        return any(s.covers(t) for s in self._facts.get(key, ()))

    def holds_bel(self, agent: Symbol, p, t: TimePoint) -> bool:
        for kind, holder, _ in self._by_content.get(p, ()):
            if kind in (BEL, MB) and agent in holder and self._active((kind, holder, p), t):
                return True
        return False

    def holds_mb(self, group: AgentSet, p, t: TimePoint) -> bool:
        """Mutual belief among ``group``: some MB fact whose group covers it.

        A singleton group reduces to that agent's belief.
        """
        if group.single:
            return self.holds_bel(group.agent, p, t)
        for kind, holder, _ in self._by_content.get(p, ()):
            if kind == MB and group <= holder and self._active((kind, holder, p), t):
                return True
        return False

    def holds_intention_to(self, agent: Symbol, action: ActionDescr, t: TimePoint) -> bool:
        return self._active((INT_TO, AgentSet.of(agent), action), t)

    def holds_intention_that(self, agent: Symbol, goal: PlanGoal, t: TimePoint) -> bool:
        return self._active((INT_TH, AgentSet.of(agent), goal), t)

    def individuating_set(self, agent: Symbol, anchor: ParamDescr, t: TimePoint) -> frozenset[ParamDescr]:
        """``anchor`` plus every description the agent believes codesignates with it."""
        members = {anchor}
        for content in self._by_content:
            if isinstance(content, InIS) and content.agent == agent:
                if content.anchor == anchor:
                    other = content.other
                elif content.other == anchor:
                    other = content.anchor
                else:
                    continue
                if other not in members and self.holds_bel(agent, content, t):
                    members.add(other)
        return frozenset(members)

    def facts(self, t: TimePoint | None = None) -> list[MentalFact]:
        out = []
        for (kind, holder, content), spans in self._facts.items():
            for s in spans:
                if t is None or s.covers(t):
                    out.append(MentalFact(kind, holder, content, s.start))
        return out

    def dump_lines(self) -> list[str]:
        lines = [_dump_line(MentalFact(kind, holder, content).to_sexpr(), s)
                 for (kind, holder, content), spans in self._facts.items() for s in spans]
        return sorted(lines) + self.world.dump_lines()

    def dump(self) -> str:
        return "\n".join(self.dump_lines()) + "\n"


def assert_fact(store: MentalStore, fact: MentalFact) -> MentalStore:
    return store.assert_fact(fact)


def holds_bel(store: MentalStore, agent: Symbol, p, t: TimePoint) -> bool:
    return store.holds_bel(agent, p, t)


def holds_mb(store: MentalStore, group: AgentSet, p, t: TimePoint) -> bool:
    return store.holds_mb(group, p, t)


def individuating_set(store: MentalStore, agent: Symbol, anchor: ParamDescr, t: TimePoint):
    return store.individuating_set(agent, anchor, t)


def add_codesignation(store: MentalStore, agent: Symbol, anchor: ParamDescr, other: ParamDescr,
                      t: TimePoint) -> MentalStore:
    return store.add_codesignation(agent, anchor, other, t)


# s-expression surface for propositions, goals and facts

def proposition_from_sexpr(node, signature: Signature | None = None) -> Proposition:
    node = expect_list(node, min_len=2)
    head = expect_atom(node[0], "proposition head")
    args = node[1:]

    def arity(n):
        if len(args) not in (n if isinstance(n, tuple) else (n,)):
            raise fail(node, f"({head} ...) takes {n} argument(s), got {len(args)}")

    if head == "has.recipe":
        arity((2, 3))
        recipe = str(expect_atom(args[2], "recipe id")) if len(args) == 3 else None
        return HasRecipeProp(agents_from_sexpr(args[0]), action_from_sexpr(args[1], signature), recipe)
    if head == "has.sat.descr":
        arity(3)
        return HasSatDescrProp(agents_from_sexpr(args[0]), param_from_sexpr(args[1]),
                               str(expect_atom(args[2], "constraint name")))
    if head == "in-recipes":
        arity(2)
        return InRecipes(str(expect_atom(args[0], "recipe id")), param_from_sexpr(args[1]))
    if head == "suff-for-id":
        arity(2)
        return SuffForId(str(expect_atom(args[0], "constraint name")), param_from_sexpr(args[1]))
    if head == "in-is":
        arity(3)
        return InIS(str(expect_atom(args[0], "agent")), param_from_sexpr(args[1]), param_from_sexpr(args[2]))
    if head == "shared-is":
        arity(2)
        return SharedIS(param_from_sexpr(args[0]), param_from_sexpr(args[1]))
    if head == "holds":
        return ConstraintHolds(str(expect_atom(args[0], "constraint name")),
                               tuple(param_from_sexpr(a) for a in args[1:]))
    if head == "basic-level":
        arity(1)
        return BasicLevel(action_from_sexpr(args[0], signature))
    if head == "intends":
        arity(2)
        return Intends(agents_from_sexpr(args[0]), action_from_sexpr(args[1], signature))
    if head == "ground":
        arity(1)
        return Ground(param_from_sexpr(args[0]))
    raise fail(node, f"unknown proposition ({head} ...)")


def objective_from_sexpr(node, signature: Signature | None = None) -> Objective:
    node = expect_list(node)
    if node[0] == "achieve":
        expect_list(node, "achieve", min_len=2)
        target = proposition_from_sexpr(node[1], signature)
        if not isinstance(target, (HasRecipeProp, HasSatDescrProp)):
            raise fail(node, "achieve targets has.recipe or has.sat.descr")
        return AchieveGoal(target)
    return action_from_sexpr(node, signature)


def goal_from_sexpr(node, signature: Signature | None = None) -> PlanGoal:
    node = expect_list(node, min_len=3)
    if node[0] == "fsp":
        return FSPGoal(agents_from_sexpr(node[1]), objective_from_sexpr(node[2], signature))
    if node[0] == "succeeds":
        return Succeeds(agents_from_sexpr(node[1]), action_from_sexpr(node[2], signature))
    raise fail(node, f"unknown goal ({node[0]} ...)")


def fact_from_sexpr(node, t: TimePoint = 0, signature: Signature | None = None) -> MentalFact:
    """Parse ``(bel a P)``, ``(mb (a e) P)``, ``(intto a ACT)``, ``(intth a GOAL)``
    or ``(codesignate a P P')``."""
    node = expect_list(node, min_len=3)
    head = node[0]
    if head == "codesignate":
        if len(node) != 4:
            raise fail(node, "(codesignate AGENT DESCR DESCR)")
        agent = str(expect_atom(node[1], "agent"))
        anchor, other = param_from_sexpr(node[2]), param_from_sexpr(node[3])
        if anchor == other:
            raise fail(node, "codesignating a description with itself")
        return MentalFact(BEL, AgentSet.of(agent), InIS(agent, anchor, other), t)
    if len(node) != 3:
        raise fail(node, f"({head} HOLDER CONTENT)")
    if head == "bel":
        fact = MentalFact(BEL, agents_from_sexpr(node[1]), proposition_from_sexpr(node[2], signature), t)
    elif head == "mb":
        fact = MentalFact(MB, agents_from_sexpr(node[1]), proposition_from_sexpr(node[2], signature), t)
    elif head == "intto":
        fact = MentalFact(INT_TO, agents_from_sexpr(node[1]), action_from_sexpr(node[2], signature), t)
    elif head == "intth":
        fact = MentalFact(INT_TH, agents_from_sexpr(node[1]), goal_from_sexpr(node[2], signature), t)
    else:
        raise fail(node, f"unknown fact ({head} ...)")
    try:
        fact.validate()
    except MalformedFact as exc:
        raise MalformedFact(f"{node.line}:{node.col}: {exc}") from None
    return fact


def facts_to_store(facts: Iterable[MentalFact], store: MentalStore | None = None) -> MentalStore:
    store = store if store is not None else MentalStore()
    for f in facts:
        store.assert_fact(f)
    return store
