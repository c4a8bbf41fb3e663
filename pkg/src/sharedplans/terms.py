"""Intensional parameter and action descriptions.

Descriptions are uninterpreted symbol trees. Two descriptions are the same
only when they are structurally identical; whether they happen to denote the
same object is a matter for an agent's individuating sets (see ``mental``),
never for equality here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from .sexpr import SharedPlanError, dumps, expect_atom, expect_list, fail, read

Symbol = str
TimePoint = int


class ArityMismatch(SharedPlanError):
    pass


def _check_symbol(name) -> str:
    if not isinstance(name, str) or not name:
        raise ValueError(f"symbols must be non-empty strings, got {name!r}")
    return str(name)


@dataclass(frozen=True, order=True)
class ParamDescr:
    root: Symbol
    args: tuple["ParamDescr", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "root", _check_symbol(self.root))
        object.__setattr__(self, "args", tuple(self.args))

    def to_sexpr(self):
        if not self.args:
            return self.root
        return [self.root, *(a.to_sexpr() for a in self.args)]

    def __str__(self) -> str:
        if not self.args:
            return self.root
        return f"{self.root}({','.join(str(a) for a in self.args)})"


def P(root: str, *args: Union[ParamDescr, str]) -> ParamDescr:
    """Shorthand constructor: ``P("pump", "ac1")`` is ``pump(ac1)``."""
    return ParamDescr(root, tuple(a if isinstance(a, ParamDescr) else ParamDescr(a) for a in args))


@dataclass(frozen=True)
class AgentSet:
    members: frozenset[Symbol]

    def __post_init__(self):
        members = frozenset(_check_symbol(m) for m in self.members)
        if not members:
            raise ValueError("an agent set needs at least one member")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, *names: Symbol) -> "AgentSet":
        return cls(frozenset(names))

    @property
    def single(self) -> bool:
        return len(self.members) == 1

    @property
    def agent(self) -> Symbol:
        """The sole member of a singleton set."""
        if not self.single:
            raise ValueError(f"{self} is not a single agent")
        return next(iter(self.members))

    def sorted(self) -> list[Symbol]:
        return sorted(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.sorted())

    def __contains__(self, name) -> bool:
        return name in self.members

    def __le__(self, other: "AgentSet") -> bool:
        return self.members <= other.members

    def __lt__(self, other: "AgentSet") -> bool:
        return self.sorted() < other.sorted()

    def to_sexpr(self):
        return self.sorted()

    def __str__(self) -> str:
        return "{" + ",".join(self.sorted()) + "}"


@dataclass(frozen=True)
class ActionDescr:
    act_type: Symbol
    params: tuple[ParamDescr, ...]
    agents: AgentSet
    time: TimePoint = 0

    def __post_init__(self):
        object.__setattr__(self, "act_type", _check_symbol(self.act_type))
        object.__setattr__(self, "params", tuple(self.params))
        if not isinstance(self.time, int) or self.time < 0:
            raise ValueError(f"time must be a non-negative turn index, got {self.time!r}")

    @property
    def term(self) -> ParamDescr:
        """The act-type applied to its parameters, without agents or time."""
        return ParamDescr(self.act_type, self.params)

    def sort_key(self):
        return (self.act_type, self.params, self.agents.sorted(), self.time)

    def to_sexpr(self):
        return [self.act_type, *(p.to_sexpr() for p in self.params),
                ":agents", self.agents.to_sexpr(), ":t", str(self.time)]

    def __str__(self) -> str:
        inner = [str(p) for p in self.params] + [str(self.agents)]
        return f"{self.act_type}({','.join(inner)})"


Description = Union[ParamDescr, ActionDescr]


@dataclass
class Signature:
    """Arity table for act-types; an unseen type's arity is fixed on first use."""

    arities: dict[Symbol, int] = field(default_factory=dict)

    def check(self, act_type: Symbol, n: int) -> None:
        known = self.arities.setdefault(act_type, n)
        if known != n:
            raise ArityMismatch(f"{act_type} takes {known} parameter(s), given {n}")


def mk_action(act_type: Symbol, params: Iterable[ParamDescr], agents: AgentSet,
              time: TimePoint = 0, signature: Signature | None = None) -> ActionDescr:
    params = tuple(params)
    if signature is not None:
        signature.check(act_type, len(params))
    return ActionDescr(act_type, params, agents, time)


def descr_equal(d1: Description, d2: Description) -> bool:
    """Intensional identity: structural equality of the descriptions only."""
    if type(d1) is not type(d2):
        raise TypeError(f"cannot compare {type(d1).__name__} with {type(d2).__name__}")
    return d1 == d2


# s-expression surface

def param_from_sexpr(node) -> ParamDescr:
    if isinstance(node, str):
        if node.startswith(":"):
            raise fail(node, f"unexpected keyword {node}")
        return ParamDescr(str(node))
    expect_list(node)
    root = expect_atom(node[0], "description head")
    return ParamDescr(str(root), tuple(param_from_sexpr(a) for a in node[1:]))


def agents_from_sexpr(node) -> AgentSet:
    if isinstance(node, str):
        return AgentSet.of(str(node))
    if not node:
        raise fail(node, "empty agent set")
    return AgentSet(frozenset(str(expect_atom(a, "agent")) for a in node))


def action_from_sexpr(node, signature: Signature | None = None) -> ActionDescr:
    """Parse ``(act p1 .. pn :agents (a ..) [:t n])``."""
    expect_list(node)
    head = expect_atom(node[0], "act-type")
    params, agents, time = [], None, 0
    items = list(node[1:])
    i = 0
    while i < len(items):
        item = items[i]
        if isinstance(item, str) and item.startswith(":"):
            if i + 1 >= len(items):
                raise fail(item, f"missing value after {item}")
            value = items[i + 1]
            if item == ":agents":
                agents = agents_from_sexpr(value)
            elif item == ":t":
                if not isinstance(value, str) or not value.isdigit():
                    raise fail(value, "time must be a non-negative integer")
                time = int(value)
            else:
                raise fail(item, f"unknown action keyword {item}")
            i += 2
        else:
            if agents is not None:
                raise fail(item, "parameters must precede :agents")
            params.append(param_from_sexpr(item))
            i += 1
    if agents is None:
        raise fail(node, f"action ({head} ...) is missing :agents")
    try:
        return mk_action(str(head), params, agents, time, signature)
    except ArityMismatch as exc:
        raise ArityMismatch(f"{node.line}:{node.col}: {exc}") from None


def parse_action(text: str, signature: Signature | None = None) -> ActionDescr:
    return action_from_sexpr(read(text), signature)


def parse_param(text: str) -> ParamDescr:
    return param_from_sexpr(read(text))


def render(d) -> str:
    """Canonical s-expression text of any description or proposition."""
    return dumps(d.to_sexpr())
