"""Context-insensitive variable identities (``Class.method.name``)."""

from __future__ import annotations

from dataclasses import dataclass, field

from .ast import ENTRY_SCOPE, Call, New, Program

RETURN_SLOT = "return"

# kinds
LOCAL = "local"
PARAM = "param"
THIS = "this"
RETURN = "return-slot"
TEMP = "temp"  # receives the result of a call whose value is discarded
ALLOC = "alloc"  # single-assignment carrier of one allocation site


@dataclass(frozen=True, order=True)
class VarId:
    cls: str
    method: str
    name: str
    kind: str = field(default=LOCAL, compare=False)

    @property
    def scope(self) -> tuple:
        return (self.cls, self.method)

    def __str__(self) -> str:
        return f"{self.cls}.{self.method}.{self.name}"


def alloc_carrier(scope: tuple, index: int) -> VarId:
    """Carrier variable standing for the object created at ``scope#index``."""
    return VarId(scope[0], scope[1], f"$new{index}", ALLOC)


def discard_temp(scope: tuple, index: int) -> VarId:
    return VarId(scope[0], scope[1], f"$tmp{index}", TEMP)


@dataclass(frozen=True)
class VarTable:
    """Every program variable, keyed by ``(scope, name)``.

    Allocation carriers are analysis-internal and deliberately absent.
    """

    by_name: dict

    def __getitem__(self, key: tuple) -> VarId:
        return self.by_name[key]

    def lookup(self, scope: tuple, name: str) -> VarId:
        return self.by_name[(scope, name)]

    def this(self, target: tuple) -> VarId:
        return self.by_name[(target, "this")]

    def param(self, target: tuple, program_param: str) -> VarId:
        return self.by_name[(target, program_param)]

    def return_slot(self, target: tuple) -> VarId:
        return self.by_name[(target, RETURN_SLOT)]

    def all(self) -> tuple:
        return tuple(sorted(self.by_name.values()))

    def __len__(self) -> int:
        return len(self.by_name)

    def __contains__(self, v) -> bool:
        return isinstance(v, VarId) and self.by_name.get((v.scope, v.name)) == v


def canonical_vars(p: Program) -> VarTable:
    table = {}

    def add(scope, name, kind):
        table[(scope, name)] = VarId(scope[0], scope[1], name, kind)

    for c in p.classes:
        for m in c.methods:
            scope = (c.name, m.name)
            add(scope, "this", THIS)
            add(scope, m.param, PARAM)
            add(scope, RETURN_SLOT, RETURN)
            for _, v in m.locals:
                add(scope, v, LOCAL)
    for _, v in p.entry_locals:
        add(ENTRY_SCOPE, v, LOCAL)
    for scope, i, s in p.statements():
        if isinstance(s, Call) and s.target is None:
            t = discard_temp(scope, i)
            table[(scope, t.name)] = t
    return VarTable(table)


def alloc_sites(p: Program) -> list:
    """``(scope, index, class)`` for every ``new`` statement, in program order."""
    return [(scope, i, s.cls) for scope, i, s in p.statements() if isinstance(s, New)]
