"""Minimal s-expression reader and printer.

Atoms are any run of characters other than whitespace, parentheses and
``;`` (which starts a comment running to end of line). Parsed nodes remember
where they started so that later validation can point at the offending form.
"""

from __future__ import annotations

from typing import Iterator, Union


class SharedPlanError(Exception):
    """Base class for every error raised by this package."""


class ParseError(SharedPlanError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line else ""
        super().__init__(f"{where}{message}")


class Atom(str):
    line = 0
    col = 0

    def __new__(cls, value: str, line: int = 0, col: int = 0):
        obj = super().__new__(cls, value)
        obj.line = line
        obj.col = col
        return obj


class SList(list):
    line = 0
    col = 0

    def __init__(self, items=(), line: int = 0, col: int = 0):
        super().__init__(items)
        self.line = line
        self.col = col


SExpr = Union[Atom, SList]


def _tokens(text: str) -> Iterator[tuple[str, int, int]]:
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
        elif ch.isspace():
            i += 1
            col += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield ch, line, col
            i += 1
            col += 1
        else:
            start = i
            while i < n and not text[i].isspace() and text[i] not in "();":
                i += 1
            yield text[start:i], line, col
            col += i - start


def read_all(text: str) -> list[SExpr]:
    """Parse every top-level form in ``text``."""
    forms: list[SExpr] = []
    stack: list[SList] = []
    for tok, line, col in _tokens(text):
        if tok == "(":
            stack.append(SList(line=line, col=col))
        elif tok == ")":
            if not stack:
                raise ParseError("unbalanced ')'", line, col)
            done = stack.pop()
            (stack[-1] if stack else forms).append(done)
        else:
            atom = Atom(tok, line, col)
            (stack[-1] if stack else forms).append(atom)
    if stack:
        open_ = stack[-1]
        raise ParseError("unclosed '('", open_.line, open_.col)
    return forms


def read(text: str) -> SExpr:
    """Parse exactly one form."""
    forms = read_all(text)
    if len(forms) != 1:
        raise ParseError(f"expected one form, found {len(forms)}")
    return forms[0]


def dumps(expr) -> str:
    """Render nested lists/strings on a single line."""
    if isinstance(expr, str):
        return expr
    return "(" + " ".join(dumps(x) for x in expr) + ")"


def where(node) -> tuple[int, int]:
    return getattr(node, "line", 0), getattr(node, "col", 0)


def fail(node, message: str) -> ParseError:
    return ParseError(message, *where(node))


def expect_list(node, head: str | None = None, min_len: int = 1) -> SList:
    if not isinstance(node, list) or len(node) < min_len:
        raise fail(node, f"expected a list form{f' ({head} ...)' if head else ''}")
    if head is not None and node[0] != head:
        raise fail(node, f"expected ({head} ...), got ({dumps(node[0])} ...)")
    return node


def expect_atom(node, what: str = "symbol") -> Atom:
    if not isinstance(node, str):
        raise fail(node, f"expected {what}, got a list")
    return node
