"""Dialogue script files.

A script is a header followed by events, each a top-level form::

    (participants a e)
    (initial (mb (a e) (in-recipes r1 (remove (pump ac1)))) (world (have a wrench)))
    (root e (remove (pump ac1) :agents (a) :t 0))
    (event 1 a (commit (intto a (remove (flywheel ac1) :agents (a) :t 0))))
    (event 2 a (open a (achieve (has.recipe (a) (remove (flywheel ac1) :agents (a) :t 0)))))
    (event 3 e (convey (codesignate a (flywheel ac1) (big-wheel ac1))))
    (event 4 e (close))

``initial`` and ``root`` are optional; ``root`` opens the first segment at
turn 0. Event turns start at 1 and strictly increase.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

from .discourse import (
    CloseSignal,
    Commit,
    Convey,
    OpenDSP,
    Retract,
    UtteranceEvent,
    WorldFact,
)
from .mental import BEL, INT_TH, INT_TO, InIS, MentalFact, fact_from_sexpr, objective_from_sexpr
from .sexpr import ParseError, SharedPlanError, dumps, expect_atom, expect_list, fail, read_all
from .terms import AgentSet, Signature, agents_from_sexpr, param_from_sexpr


class DuplicateTurn(ParseError):
    pass


class UndeclaredSymbol(SharedPlanError):
    pass


@dataclass(frozen=True)
class ScriptFile:
    participants: AgentSet
    initial: tuple = ()
    root: Optional[OpenDSP] = None
    events: tuple[UtteranceEvent, ...] = ()


def _item_from_sexpr(node, t: int, signature):
    node = expect_list(node, min_len=2)
    if node[0] == "world":
        if len(node) != 2:
            raise fail(node, "(world ATOM)")
        return WorldFact(param_from_sexpr(node[1]))
    if node[0] == "retract":
        if len(node) != 2:
            raise fail(node, "(retract FACT)")
        return Retract(_item_from_sexpr(node[1], t, signature))
    return fact_from_sexpr(node, t, signature)


def _open_from_sexpr(node, signature) -> OpenDSP:
    # (open HOLDER OBJECTIVE [:group (a e)])  or  (root HOLDER OBJECTIVE [:group ...])
    if len(node) not in (3, 5):
        raise fail(node, f"({node[0]} HOLDER OBJECTIVE [:group (AGENTS)])")
    group = None
    if len(node) == 5:
        if node[3] != ":group":
            raise fail(node[3], "expected :group")
        group = agents_from_sexpr(node[4])
    holder = str(expect_atom(node[1], "holder"))
    return OpenDSP(holder, objective_from_sexpr(node[2], signature), group)


def _move_from_sexpr(node, t: int, signature):
    node = expect_list(node)
    head = node[0]
    if head == "open":
        return _open_from_sexpr(node, signature)
    if head == "convey":
        return Convey(tuple(_item_from_sexpr(x, t, signature) for x in node[1:]))
    if head == "commit":
        facts = []
        for x in node[1:]:
            fact = fact_from_sexpr(x, t, signature)
            if fact.kind not in (INT_TO, INT_TH):
                raise fail(x, "commit carries only intto/intth facts")
            facts.append(fact)
        return Commit(tuple(facts))
    if head == "close":
        if len(node) != 1:
            raise fail(node, "(close) takes no arguments")
        return CloseSignal()
    raise fail(node, f"unknown move ({dumps(head)} ...)")


def _agents_in(obj, out: set) -> set:
    if isinstance(obj, AgentSet):
        out.update(obj.members)
    elif isinstance(obj, OpenDSP):
        out.add(obj.holder)
        _agents_in(obj.group, out)
        _agents_in(obj.objective, out)
    elif isinstance(obj, InIS):
        out.add(obj.agent)
        _agents_in(obj.anchor, out)
        _agents_in(obj.other, out)
    elif dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        for f in dataclasses.fields(obj):
            _agents_in(getattr(obj, f.name), out)
    elif isinstance(obj, (tuple, list)):
        for x in obj:
            _agents_in(x, out)
    return out


def _check_declared(node, obj, participants: AgentSet) -> None:
    stray = _agents_in(obj, set()) - participants.members
    if stray:
        raise UndeclaredSymbol(f"{node.line}:{node.col}: undeclared agent(s) {', '.join(sorted(stray))}")


def parse_script(text: str, signature: Signature | None = None) -> ScriptFile:
    forms = read_all(text)
    if not forms:
        raise ParseError("missing header: expected (participants ...)")
    head = expect_list(forms[0])
    if head[0] != "participants":
        raise fail(head, "missing header: script must start with (participants ...)")
    if len(head) < 2:
        raise fail(head, "(participants AGENT ...) needs at least one agent")
    participants = AgentSet(frozenset(str(expect_atom(a, "agent")) for a in head[1:]))
    initial, root, events = [], None, []
    last_turn = 0
    for form in forms[1:]:
        expect_list(form)
        kind = form[0]
        if kind in ("initial", "root") and events:
            raise fail(form, f"({kind} ...) must precede the events")
        if kind == "initial":
            for x in form[1:]:
                item = _item_from_sexpr(x, 0, signature)
                if isinstance(item, Retract):
                    raise fail(x, "nothing to retract in the initial facts")
                _check_declared(x, item, participants)
                initial.append(item)
        elif kind == "root":
            if root is not None:
                raise fail(form, "duplicate (root ...)")
            root = _open_from_sexpr(form, signature)
            _check_declared(form, root, participants)
        elif kind == "event":
            if len(form) != 4:
                raise fail(form, "(event TURN SPEAKER MOVE)")
            turn_atom = expect_atom(form[1], "turn")
            if not turn_atom.isdigit():
                raise fail(turn_atom, "turn must be a non-negative integer")
            turn = int(turn_atom)
            if turn <= last_turn:
                raise DuplicateTurn(f"turn {turn} does not follow turn {last_turn}", turn_atom.line, turn_atom.col)
            last_turn = turn
            speaker = str(expect_atom(form[2], "speaker"))
            move = _move_from_sexpr(form[3], turn, signature)
            ev = UtteranceEvent(turn, speaker, move)
            if speaker not in participants:
                raise UndeclaredSymbol(f"{form.line}:{form.col}: undeclared speaker {speaker}")
            _check_declared(form, move, participants)
            events.append(ev)
        else:
            raise fail(form, f"unknown script form ({dumps(kind)} ...)")
    return ScriptFile(participants, tuple(initial), root, tuple(events))


def _open_sexpr(head: str, move: OpenDSP):
    form = [head, move.holder, move.objective.to_sexpr()]
    if move.group is not None:
        form += [":group", move.group.to_sexpr()]
    return form


def _move_sexpr(move):
    if isinstance(move, OpenDSP):
        return _open_sexpr("open", move)
    if isinstance(move, Convey):
        return ["convey", *(_item_sexpr(x) for x in move.items)]
    if isinstance(move, Commit):
        return ["commit", *(_item_sexpr(x) for x in move.facts)]
    return ["close"]


def _item_sexpr(item):
    if (isinstance(item, MentalFact) and item.kind == BEL and isinstance(item.content, InIS)
            and item.holder.agent == item.content.agent):
        c = item.content
        return ["codesignate", c.agent, c.anchor.to_sexpr(), c.other.to_sexpr()]
    return item.to_sexpr()


def render_script(script: ScriptFile) -> str:
    lines = [dumps(["participants", *script.participants.sorted()])]
    if script.initial:
        lines.append("(initial")
        lines += ["  " + dumps(_item_sexpr(x)) for x in script.initial]
        lines[-1] += ")"
    if script.root is not None:
        lines.append(dumps(_open_sexpr("root", script.root)))
    for ev in script.events:
        lines.append(dumps(["event", str(ev.turn), ev.speaker, _move_sexpr(ev.move)]))
    return "\n".join(lines) + "\n"
