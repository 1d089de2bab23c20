"""Flattening of a program into the variable-level facts every analysis reads."""

from __future__ import annotations

from dataclasses import dataclass

from .callgraph import Site
from .frontend import (
    Call,
    ClassTable,
    Copy,
    Load,
    New,
    Program,
    Store,
    VarTable,
    alloc_carrier,
    build_class_table,
    canonical_vars,
    discard_temp,
)


@dataclass(frozen=True)
class AllocFact:
    site: Site
    target: object  # VarId
    cls: str


@dataclass(frozen=True)
class CallFact:
    site: Site
    target: object  # VarId; a discard temp for ``y.m(z);``
    receiver: object
    method: str
    arg: object


@dataclass(frozen=True)
class MethodVars:
    this: object
    param: object
    return_slot: object
    return_var: object


@dataclass(frozen=True)
class ProgramFacts:
    program: Program
    ct: ClassTable
    vars: VarTable
    allocs: tuple
    copies: tuple  # (source, target)
    loads: tuple  # (target, base, field)
    stores: tuple  # (base, field, source)
    calls: tuple
    method_vars: dict  # (class, method) -> MethodVars

    def carrier(self, alloc: AllocFact):
        return alloc_carrier(alloc.site.scope, alloc.site.index)


def extract_facts(p: Program, ct: ClassTable = None) -> ProgramFacts:
    ct = ct if ct is not None else build_class_table(p)
    vt = canonical_vars(p)
    allocs, copies, loads, stores, calls = [], [], [], [], []
    for scope, i, s in p.statements():
        v = lambda name: vt.lookup(scope, name)  # noqa: E731
        site = Site(scope[0], scope[1], i)
        if isinstance(s, New):
            allocs.append(AllocFact(site, v(s.target), s.cls))
        elif isinstance(s, Copy):
            copies.append((v(s.source), v(s.target)))
        elif isinstance(s, Load):
            loads.append((v(s.target), v(s.base), s.field))
        elif isinstance(s, Store):
            stores.append((v(s.base), s.field, v(s.source)))
        elif isinstance(s, Call):
            target = discard_temp(scope, i) if s.target is None else v(s.target)
            calls.append(CallFact(site, target, v(s.receiver), s.method, v(s.arg)))
        # NullAssign contributes nothing
    method_vars = {}
    for c in p.classes:
        for m in c.methods:
            key = (c.name, m.name)
            method_vars[key] = MethodVars(
                this=vt.lookup(key, "this"),
                param=vt.lookup(key, m.param),
                return_slot=vt.return_slot(key),
                return_var=vt.lookup(key, m.return_var),
            )
    return ProgramFacts(
        p, ct, vt, tuple(allocs), tuple(copies), tuple(loads), tuple(stores), tuple(calls), method_vars
    )
