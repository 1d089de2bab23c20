"""Differential checks between analyses, plus per-program statistics."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field, fields, replace
from typing import Callable, Optional

from .callgraph import CallGraph
from .classic import VtaGraph, cha_callgraph, rta_callgraph, vta_propagate
from .facts import ProgramFacts, extract_facts
from .frontend import Call, Program, build_class_table
from .minimize import Partition, bisim_minimize
from .pta import PtaResult, class_projection, pta_fixpoint
from .tfa import TfaResult, reaching_types, tfa_fixpoint


@dataclass(frozen=True)
class EquivalenceReport:
    ok: bool
    mismatches: tuple = ()  # (VarId, tfa-only classes, pta-only classes)
    stats: dict = field(default_factory=dict)
    witness: Optional[Program] = None

    def render(self) -> list:
        if self.ok:
            return ["OK"]
        lines = [
            f"MISMATCH\t{v}\ttfa-only={','.join(sorted(a)) or '-'}\tpta-only={','.join(sorted(b)) or '-'}"
            for v, a, b in self.mismatches
        ]
        return lines


def check_theorem1(tfa: TfaResult, pta: PtaResult) -> EquivalenceReport:
    """Compare TFA reaching types with the class projection of points-to sets."""
    if set(tfa.variables) != set(pta.variables):
        raise ValueError("results come from different programs")
    mismatches = []
    for v in tfa.variables:
        a = reaching_types(tfa, v)
        b = class_projection(pta, v)
        if a != b:
            mismatches.append((v, a - b, b - a))
    stats = {
        "variables": len(tfa.variables),
        "tfa_edges": len(tfa.callgraph),
        "pta_edges": len(pta.callgraph),
        "tfa_relations": tfa.store.sizes(),
    }
    return EquivalenceReport(not mismatches, tuple(mismatches), stats)


@dataclass(frozen=True)
class CallGraphDiff:
    only_a: frozenset
    only_b: frozenset
    shared: frozenset

    @property
    def symmetric(self) -> bool:
        return not self.only_a and not self.only_b


def compare_callgraphs(a: CallGraph, b: CallGraph, program: Program = None) -> CallGraphDiff:
    if program is not None:
        known = {(scope[0], scope[1], i) for scope, i, s in program.statements() if isinstance(s, Call)}
        stray = [s for s, _ in a.edges | b.edges if (s.cls, s.method, s.index) not in known]
        if stray:
            raise ValueError(f"call site {min(stray)} is not a call in this program")
    return CallGraphDiff(a.edges - b.edges, b.edges - a.edges, a.edges & b.edges)


def without_statement(p: Program, scope: tuple, index: int) -> Program:
    """Copy of ``p`` with statement ``scope#index`` (1-based) removed."""
    if scope == ("main", "main"):
        body = p.entry_body
        return replace(p, entry_body=body[: index - 1] + body[index:])
    classes = []
    for c in p.classes:
        if c.name == scope[0]:
            methods = []
            for m in c.methods:
                if m.name == scope[1]:
                    m = replace(m, body=m.body[: index - 1] + m.body[index:])
                methods.append(m)
            c = replace(c, methods=tuple(methods))
        classes.append(c)
    return replace(p, classes=tuple(classes))


def shrink(p: Program, failing: Callable[[Program], bool]) -> Program:
    """Greedy statement removal while ``failing`` still holds."""
    progress = True
    while progress:
        progress = False
        for scope, i, _ in reversed(list(p.statements())):
            candidate = without_statement(p, scope, i)
            if failing(candidate):
                p = candidate
                progress = True
    return p


def check_program(
    p: Program,
    tfa_fn: Callable = tfa_fixpoint,
    pta_fn: Callable = pta_fixpoint,
    minimize_witness: bool = True,
) -> EquivalenceReport:
    """Run both engines on ``p``; on mismatch attach a shrunken witness program."""

    def report(q: Program) -> EquivalenceReport:
        ct = build_class_table(q)
        facts = extract_facts(q, ct)
        return check_theorem1(tfa_fn(q, ct, facts), pta_fn(q, ct, facts))

    rep = report(p)
    if rep.ok or not minimize_witness:
        return rep
    witness = shrink(p, lambda q: not report(q).ok)
    return replace(rep, witness=witness)


@dataclass(frozen=True)
class Suite:
    """All five analyses over one program."""

    program: Program
    facts: ProgramFacts
    cha: CallGraph
    rta: CallGraph
    vta: VtaGraph
    tfa: TfaResult
    pta: PtaResult
    times_ms: dict


def run_all(p: Program) -> Suite:
    ct = build_class_table(p)
    facts = extract_facts(p, ct)
    times = {}
    t = time.perf_counter()
    cha = cha_callgraph(p, ct)
    times["cha"] = (time.perf_counter() - t) * 1e3
    rta = rta_callgraph(p, ct, cha)
    vta = vta_propagate(p, ct, cha, facts)
    t = time.perf_counter()
    tfa = tfa_fixpoint(p, ct, facts)
    times["tfa"] = (time.perf_counter() - t) * 1e3
    t = time.perf_counter()
    pta = pta_fixpoint(p, ct, facts)
    times["pta"] = (time.perf_counter() - t) * 1e3
    return Suite(p, facts, cha, rta, vta, tfa, pta, times)


def ladder_violations(s: Suite) -> list:
    """Breaches of PTA = TFA <= VTA <= RTA <= CHA (edges) and TFA <= VTA (per variable)."""
    out = []
    chain = [("pta", s.pta.callgraph), ("tfa", s.tfa.callgraph), ("vta", s.vta.callgraph), ("rta", s.rta), ("cha", s.cha)]
    if s.pta.callgraph.edges != s.tfa.callgraph.edges:
        out.append("pta and tfa call graphs differ")
    for (na, a), (nb, b) in zip(chain, chain[1:]):
        extra = a.edges - b.edges
        if extra:
            site, target = min(extra)
            out.append(f"{na} edge {site} -> {target[0]}.{target[1]} missing from {nb}")
    for v in s.tfa.variables:
        extra = reaching_types(s.tfa, v) - s.vta.reach_of(v)
        if extra:
            out.append(f"{v}: tfa types {sorted(extra)} not reached in vta")
    return out


@dataclass(frozen=True)
class StatsRow:
    name: str
    r_tf: int
    r_ord: int
    r_fld: int
    cs_cha: int
    cs_rta: int
    cs_vta: int
    cs_tfa: int
    cs_pta: int
    t_cha_ms: Optional[float]
    t_tfa_ms: Optional[float]
    t_pta_ms: Optional[float]
    r_tf_star: int
    r_ord_star: int
    r_fld_star: int
    cs_base: int
    nodes_origin: int
    nodes_opt: int
    reduce: float

    @classmethod
    def header(cls) -> list:
        return [f.name for f in fields(cls)]

    def values(self) -> list:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                out.append("")
            elif isinstance(v, float):
                out.append(f"{v:.4f}")
            else:
                out.append(v)
        return out


def collect_stats(name: str, s: Suite, timings: bool = False, partition: Partition = None) -> StatsRow:
    """Relation sizes, call edges per analysis and bisimulation reduction for one program.

    Runtimes are only filled in when ``timings`` is set, so that default
    output is reproducible byte for byte.
    """
    partition = partition if partition is not None else bisim_minimize(s.tfa)
    base = s.tfa.base.sizes()
    star = s.tfa.store.sizes()
    t = s.times_ms if timings else {}
    return StatsRow(
        name=name,
        r_tf=base[0],
        r_ord=base[1],
        r_fld=base[2],
        cs_cha=len(s.cha),
        cs_rta=len(s.rta),
        cs_vta=len(s.vta.callgraph),
        cs_tfa=len(s.tfa.callgraph),
        cs_pta=len(s.pta.callgraph),
        t_cha_ms=t.get("cha"),
        t_tfa_ms=t.get("tfa"),
        t_pta_ms=t.get("pta"),
        r_tf_star=star[0],
        r_ord_star=star[1],
        r_fld_star=star[2],
        cs_base=len(s.facts.calls),
        nodes_origin=len(partition.variables),
        nodes_opt=len(partition),
        reduce=partition.reduction(),
    )


def stats_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(StatsRow.header())
    for row in rows:
        w.writerow(row.values())
    return buf.getvalue()
