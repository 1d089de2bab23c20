"""Resolved class hierarchy: subclassing, inherited fields and method dispatch."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .ast import ClassDef, MethodDef, Program
from .parser import ValidationError


class HierarchyError(ValidationError):
    pass


@dataclass(frozen=True)
class ClassTable:
    """Lookup tables derived from a program's class declarations.

    ``methods[c]`` maps every method name visible in ``c`` to the nearest
    ancestor (``c`` included) that declares it; ``fields[c]`` maps every field
    visible in ``c`` to ``(declaring-class, declared-type)``.
    """

    classes: tuple  # class names in declaration order
    parent: dict
    ancestors: dict  # c -> tuple (c, parent(c), ...), nearest first
    fields: dict
    methods: dict
    defs: dict  # (class, method) -> MethodDef, declared methods only

    def is_subclass(self, sub: str, sup: str) -> bool:
        return sup in self.ancestors[sub]

    def subclasses(self, c: str) -> tuple:
        """All classes ``d`` with ``d <= c``, in declaration order."""
        return tuple(d for d in self.classes if c in self.ancestors[d])

    def ftype(self, c: str, f: str) -> str:
        return self.fields[c][f][1]

    def field_owner(self, c: str, f: str) -> str:
        return self.fields[c][f][0]

    def dispatch(self, c: str, m: str) -> Optional[tuple]:
        """``(defining-class, m)`` for a call of ``m`` on an object of class ``c``."""
        owner = self.methods.get(c, {}).get(m)
        return None if owner is None else (owner, m)

    def method_def(self, target: tuple) -> MethodDef:
        return self.defs[target]

    def subclass_pairs(self) -> frozenset:
        return frozenset((d, a) for d in self.classes for a in self.ancestors[d])


def build_class_table(p: Program) -> ClassTable:
    by_name: dict = {}
    for c in p.classes:
        if c.name in by_name:
            raise ValidationError(f"duplicate class {c.name!r}", c.pos)
        by_name[c.name] = c
    for c in p.classes:
        if c.parent is not None and c.parent not in by_name:
            raise HierarchyError(f"class {c.name!r} extends unknown class {c.parent!r}", c.pos)

    ancestors: dict = {}
    for c in p.classes:
        chain, seen = [], set()
        cur: Optional[ClassDef] = c
        while cur is not None:
            if cur.name in seen:
                raise HierarchyError(f"inheritance cycle through {c.name!r}", c.pos)
            seen.add(cur.name)
            chain.append(cur.name)
            cur = by_name[cur.parent] if cur.parent is not None else None
        ancestors[c.name] = tuple(chain)

    fields: dict = {}
    methods: dict = {}
    defs: dict = {}
    for c in p.classes:
        for m in c.methods:
            defs[(c.name, m.name)] = m
    for c in p.classes:
        fmap: dict = {}
        mmap: dict = {}
        # farthest ancestor first so nearer declarations override
        for a in reversed(ancestors[c.name]):
            cd = by_name[a]
            for fname, ftype in cd.fields:
                fmap[fname] = (a, ftype)
            for m in cd.methods:
                mmap[m.name] = a
        fields[c.name] = fmap
        methods[c.name] = mmap

    return ClassTable(
        classes=tuple(c.name for c in p.classes),
        parent={c.name: c.parent for c in p.classes},
        ancestors=ancestors,
        fields=fields,
        methods=methods,
        defs=defs,
    )
