"""Abstract syntax of the core object-oriented calculus.

A program is a list of class declarations followed by an entry block::

    class A { A f; m(A p) { A t; t = this.f; return t; } }
    main { A x; x = new A(); }

Every statement is one of seven flat forms; nested expressions do not exist.
Source positions are carried for diagnostics but never take part in equality,
so a parsed program compares equal to its pretty-printed re-parse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

ENTRY_CLASS = "main"
ENTRY_METHOD = "main"
ENTRY_SCOPE = (ENTRY_CLASS, ENTRY_METHOD)

Scope = tuple  # (class-name, method-name); ENTRY_SCOPE for the entry block


@dataclass(frozen=True)
class Pos:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


@dataclass(frozen=True)
class New:
    target: str
    cls: str
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Copy:
    target: str
    source: str
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Load:
    target: str
    base: str
    field: str
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Store:
    base: str
    field: str
    source: str
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    """``target = receiver.method(arg)``; ``target`` is None when the result is discarded."""

    target: Optional[str]
    receiver: str
    method: str
    arg: str
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class NullAssign:
    target: str
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


Stmt = Union[New, Copy, Load, Store, Call, NullAssign]


@dataclass(frozen=True)
class MethodDef:
    name: str
    param_type: str
    param: str
    locals: tuple  # of (class-name, var-name)
    body: tuple  # of Stmt
    return_var: str
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class ClassDef:
    name: str
    parent: Optional[str]
    fields: tuple  # of (field-name, declared-class)
    methods: tuple  # of MethodDef
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)

    def method(self, name: str) -> Optional[MethodDef]:
        for m in self.methods:
            if m.name == name:
                return m
        return None


@dataclass(frozen=True)
class Program:
    classes: tuple = ()  # of ClassDef
    entry_locals: tuple = ()  # of (class-name, var-name)
    entry_body: tuple = ()  # of Stmt

    def class_def(self, name: str) -> Optional[ClassDef]:
        for c in self.classes:
            if c.name == name:
                return c
        return None

    def bodies(self) -> Iterator[tuple]:
        """Yield ``(scope, declarations, body)`` for every method and the entry block.

        ``declarations`` maps each in-scope variable name to its declared class,
        including ``this`` and the parameter for methods.
        """
        for c in self.classes:
            for m in c.methods:
                decls = {"this": c.name, m.param: m.param_type}
                decls.update((v, t) for t, v in m.locals)
                yield (c.name, m.name), decls, m.body
        yield ENTRY_SCOPE, {v: t for t, v in self.entry_locals}, self.entry_body

    def statements(self) -> Iterator[tuple]:
        """Yield ``(scope, index, stmt)`` with 1-based statement indices."""
        for scope, _, body in self.bodies():
            for i, s in enumerate(body, 1):
                yield scope, i, s

    def statement_count(self) -> int:
        return sum(len(body) for _, _, body in self.bodies())


def render_scope(scope: Scope) -> str:
    return f"{scope[0]}.{scope[1]}"
