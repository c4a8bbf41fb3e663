"""Incremental recognition of intentional structure over an utterance stream.

Each segment's purpose is an Int.Th that the participants form a SharedPlan.
Every utterance either opens a segment whose plan is subsidiary to an open
one, advances the innermost open plan, or (by advancing it to a full plan)
completes its segment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .knowledge import OracleTable
from .mental import (
    INT_TH,
    INT_TO,
    MB,
    AchieveGoal,
    FSPGoal,
    Intends,
    MentalFact,
    MentalStore,
    Objective,
)
from .plans import (
    KB,
    Plan,
    RequirementKey,
    SubsidiaryJustification,
    check_fsp,
    infer_subsidiary,
    new_plan,
    refresh,
    render_plan,
)
from .recipes import RecipeRegistry
from .sexpr import SharedPlanError
from .terms import AgentSet, ParamDescr, Symbol, TimePoint


class OutOfOrderTurn(SharedPlanError):
    pass


class UnknownSpeaker(SharedPlanError):
    pass


# moves

@dataclass(frozen=True)
class WorldFact:
    atom: ParamDescr

    def to_sexpr(self):
        return ["world", self.atom.to_sexpr()]


@dataclass(frozen=True)
class Retract:
    item: Union[MentalFact, WorldFact]

    def to_sexpr(self):
        return ["retract", self.item.to_sexpr()]


@dataclass(frozen=True)
class OpenDSP:
    holder: Symbol
    objective: Objective
    group: Optional[AgentSet] = None


@dataclass(frozen=True)
class Convey:
    items: tuple = ()


@dataclass(frozen=True)
class Commit:
    facts: tuple[MentalFact, ...] = ()


@dataclass(frozen=True)
class CloseSignal:
    pass


Move = Union[OpenDSP, Convey, Commit, CloseSignal]


@dataclass(frozen=True)
class UtteranceEvent:
    turn: TimePoint
    speaker: Symbol
    move: Move


# classifications

Established = tuple[tuple[str, RequirementKey], ...]


@dataclass(frozen=True)
class NewSegment:
    segment: str
    justification: Optional[SubsidiaryJustification]
    established: Established = ()


@dataclass(frozen=True)
class Contributes:
    established: Established


@dataclass(frozen=True)
class Completes:
    segments: tuple[str, ...]
    established: Established = ()
    forced: bool = False


@dataclass(frozen=True)
class Unexplained:
    reason: str


Classification = Union[NewSegment, Contributes, Completes, Unexplained]


@dataclass
class Segment:
    id: str
    dsp: MentalFact
    plan: str
    parent: Optional[str]
    justification: Optional[SubsidiaryJustification]
    opened: TimePoint
    closed: Optional[TimePoint] = None
    forced: bool = False

    @property
    def is_open(self) -> bool:
        return self.closed is None


@dataclass
class Discourse:
    """Processor state: store, plans, segments and the open-segment stack."""

    participants: AgentSet
    registry: RecipeRegistry
    oracle: OracleTable
    store: MentalStore = field(default_factory=MentalStore)
    plans: dict[str, Plan] = field(default_factory=dict)
    segments: dict[str, Segment] = field(default_factory=dict)
    stack: list[str] = field(default_factory=list)
    last_turn: TimePoint = -1
    log: list[tuple[UtteranceEvent, Classification]] = field(default_factory=list)

    @property
    def kb(self) -> KB:
        return KB(self.store, self.registry, self.oracle)

    def open_plans(self) -> list[Plan]:
        """Plans of the open segments, innermost first."""
        return [self.plans[self.segments[s].plan] for s in reversed(self.stack)]

    def process(self, ev: UtteranceEvent) -> Classification:
        if ev.turn <= self.last_turn:
            raise OutOfOrderTurn(f"turn {ev.turn} does not follow turn {self.last_turn}")
        if ev.speaker not in self.participants:
            raise UnknownSpeaker(f"{ev.speaker} is not a participant")
        self.last_turn = ev.turn
        move = ev.move
        if isinstance(move, OpenDSP):
            result = self._open(move, ev.turn)
        elif isinstance(move, CloseSignal):
            result = self._close_signal(ev.turn)
        else:
            result = self._content(move, ev.turn)
        self.log.append((ev, result))
        return result

    def _open(self, move: OpenDSP, t: TimePoint) -> Classification:
        if move.holder not in self.participants:
            raise UnknownSpeaker(f"{move.holder} is not a participant")
        justification = None
        if self.stack:
            justification = infer_subsidiary(move.objective, self.open_plans(), self.kb, t, self.plans)
            if justification is None:
                return Unexplained(f"no open plan explains {move.objective}")
        group = move.group or self.participants
        dsp = MentalFact(INT_TH, AgentSet.of(move.holder), FSPGoal(group, move.objective), t)
        self.store.assert_fact(dsp)
        n = len(self.segments) + 1
        sid, pid = f"S{n}", f"P{n}"
        purpose = justification.act if justification and isinstance(move.objective, AchieveGoal) else None
        self.plans[pid] = new_plan(pid, group, move.objective, purpose)
        parent = None
        if justification is not None:
            parent = next(s.id for s in self.segments.values() if s.plan == justification.parent_plan)
        self.segments[sid] = Segment(sid, dsp, pid, parent, justification, t)
        self.stack.append(sid)
        gained = refresh(self.plans, pid, self.kb, t)
        return NewSegment(sid, justification, tuple(gained))

    def _content(self, move, t: TimePoint) -> Classification:
        if not self.stack:
            return Unexplained("no open segment to contribute to")
        saved_store, saved_plans = self.store.copy(), dict(self.plans)
        if isinstance(move, Commit):
            for fact in move.facts:
                self._assert(fact, t)
                if fact.kind == INT_TO and len(self.participants) > 1:
                    # a commitment voiced in the dialogue becomes mutually believed
                    self.store.assert_fact(MentalFact(MB, self.participants,
                                                      Intends(fact.holder, fact.content), t))
        else:
            for item in move.items:
                self._assert(item, t)
        top = self.segments[self.stack[-1]].plan
        gained = refresh(self.plans, top, self.kb, t)
        if not gained:
            self.store, self.plans = saved_store, saved_plans
            return Unexplained(f"establishes no missing requirement of {top}")
        closed, more = self._close_completed(t)
        gained.extend(more)
        if closed:
            return Completes(tuple(closed), tuple(gained))
        return Contributes(tuple(gained))

    def _assert(self, item, t: TimePoint) -> None:
        if isinstance(item, WorldFact):
            self.store.world.add(item.atom, t)
        elif isinstance(item, Retract):
            target = item.item
            if isinstance(target, WorldFact):
                self.store.world.retract(target.atom, t)
            else:
                self.store.retract_fact(target.kind, target.holder, target.content, t)
        else:
            self.store.assert_fact(MentalFact(item.kind, item.holder, item.content, t))

    def _pop(self, t: TimePoint, forced: bool = False) -> list[tuple[str, RequirementKey]]:
        seg = self.segments[self.stack.pop()]
        seg.closed, seg.forced = t, forced
        gained = []
        to_refresh = []
        if seg.justification is not None:
            to_refresh.append(seg.justification.parent_plan)
        if self.stack:
            to_refresh.append(self.segments[self.stack[-1]].plan)
        for pid in dict.fromkeys(to_refresh):
            gained.extend(refresh(self.plans, pid, self.kb, t))
        return gained

    def _close_completed(self, t: TimePoint):
        closed, gained = [], []
        while self.stack and check_fsp(self.plans[self.segments[self.stack[-1]].plan]):
            closed.append(self.stack[-1])
            gained.extend(self._pop(t))
        return closed, gained

    def _close_signal(self, t: TimePoint) -> Classification:
        if not self.stack:
            return Unexplained("close signal with no open segment")
        closed = [self.stack[-1]]
        gained = self._pop(t, forced=True)
        more_closed, more = self._close_completed(t)
        return Completes(tuple(closed + more_closed), tuple(gained + more), forced=True)

    @property
    def all_closed(self) -> bool:
        return not self.stack

    def unexplained(self) -> list[tuple[UtteranceEvent, Classification]]:
        return [(ev, c) for ev, c in self.log if isinstance(c, Unexplained)]

    def dominance_edges(self) -> list[tuple[str, str]]:
        return [(self.segments[s.parent].plan, s.plan) for s in self.segments.values() if s.parent]


def process_event(state: Discourse, ev: UtteranceEvent) -> tuple[Discourse, Classification]:
    return state, state.process(ev)


# rendering

def _established_text(established: Established) -> str:
    return "; ".join(f"{pid}{key}" for pid, key in established)


def render_classification(c: Classification) -> str:
    if isinstance(c, NewSegment):
        why = str(c.justification) if c.justification else "root"
        text = f"new-segment {c.segment} <- {why}"
    elif isinstance(c, Contributes):
        text = "contributes"
    elif isinstance(c, Completes):
        text = "completes " + " ".join(c.segments) + (" (forced)" if c.forced else "")
    else:
        return f"unexplained: {c.reason}"
    if c.established:
        text += " | established " + _established_text(c.established)
    return text


def render_event_line(ev: UtteranceEvent, c: Classification) -> str:
    return f"t{ev.turn} {ev.speaker} {render_classification(c)}"


def dsp_text(seg: Segment) -> str:
    n = seg.id[1:]
    return f"DSP{n}=Int.Th({seg.dsp.holder.agent},{seg.dsp.content})"


def current_structure(d: Discourse, ledgers: bool = True) -> str:
    """Segment tree in opening order, with DSPs, justifications and ledgers."""
    children: dict[Optional[str], list[Segment]] = {}
    for seg in d.segments.values():
        children.setdefault(seg.parent, []).append(seg)
    lines: list[str] = []

    def walk(seg: Segment, indent: str):
        if seg.is_open:
            status = "open"
        else:
            status = f"closed@{seg.closed}" + (" forced" if seg.forced else "")
        lines.append(f"{indent}{seg.id} [{status}] {dsp_text(seg)}")
        if seg.justification is not None:
            lines.append(f"{indent}  subsidiary to {seg.justification}")
        if ledgers:
            lines.extend(render_plan(d.plans[seg.plan], d.plans, indent + "  "))
        for child in children.get(seg.id, []):
            walk(child, indent + "  ")

    for root in children.get(None, []):
        walk(root, "")
    for parent, child in d.dominance_edges():
        lines.append(f"dominance {parent} -> {child}")
    return "\n".join(lines) + ("\n" if lines else "")
