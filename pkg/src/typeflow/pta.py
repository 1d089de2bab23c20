"""Subset-based, context-insensitive points-to analysis with an on-the-fly call graph.

Objects are abstracted by allocation site. ``env`` maps each variable to the
sites it may point to and ``heap`` maps ``(site, field)`` to sites. Contributions
of several receivers to one ``this`` accumulate (``o in env[this]``) since a
context-insensitive least model cannot keep one singleton per receiver.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property

from .callgraph import CallGraph, Site
from .facts import ProgramFacts, extract_facts
from .frontend import ClassTable, Program, VarId
from .tfa import Diagnostic, UnknownVariable, iter_bits


@dataclass(frozen=True, order=True)
class AllocSite:
    site: Site
    cls: str

    def __str__(self) -> str:
        return f"{self.site}:{self.cls}"


@dataclass(frozen=True)
class PtaResult:
    env: dict  # VarId -> frozenset[AllocSite]
    heap: dict  # (AllocSite, field) -> frozenset[AllocSite]
    callgraph: CallGraph
    variables: tuple
    sites: tuple = ()
    iterations: int = 0
    diagnostics: tuple = ()

    @cached_property
    def classes(self) -> dict:
        return {v: frozenset(o.cls for o in objs) for v, objs in self.env.items()}

    def points_to(self, v: VarId) -> frozenset:
        try:
            return self.env[v]
        except KeyError:
            raise UnknownVariable(str(v)) from None

    def dump(self) -> list:
        lines = [f"PTS\t{v}\t{o}" for v in sorted(self.env) for o in sorted(self.env[v])]
        lines += [
            f"HEAP\t{o.site}.{f}\t{t.site}"
            for (o, f) in sorted(self.heap, key=lambda k: (k[0], k[1]))
            for t in sorted(self.heap[(o, f)])
        ]
        return lines


def class_projection(r: PtaResult, v: VarId) -> frozenset:
    try:
        return r.classes[v]
    except KeyError:
        raise UnknownVariable(str(v)) from None


def pta_callgraph(r: PtaResult) -> CallGraph:
    return r.callgraph


class _Solver:
    """Difference propagation over variable and heap-cell nodes."""

    def __init__(self, facts: ProgramFacts):
        self.facts = facts
        self.ct = facts.ct
        self.sites = [AllocSite(a.site, a.cls) for a in facts.allocs]
        self.nodes = list(facts.vars.all())
        self.index = {v: i for i, v in enumerate(self.nodes)}
        self.pts = [0] * len(self.nodes)
        self.succ = defaultdict(set)
        self.cells = {}  # (site index, field) -> node index
        ix = self.index
        self.loads_by_base = defaultdict(list)
        for x, y, f in facts.loads:
            self.loads_by_base[ix[y]].append((f, ix[x]))
        self.stores_by_base = defaultdict(list)
        for x, f, z in facts.stores:
            self.stores_by_base[ix[x]].append((f, ix[z]))
        self.calls_by_recv = defaultdict(list)
        for call in facts.calls:
            self.calls_by_recv[ix[call.receiver]].append(call)
        self.pending = deque()
        self.delta = defaultdict(int)
        self.callgraph = set()
        self.diagnostics = set()
        self.iterations = 0

    def cell(self, o: int, f: str) -> int:
        key = (o, f)
        if key not in self.cells:
            self.cells[key] = len(self.pts)
            self.pts.append(0)
        return self.cells[key]

    def add_pts(self, v: int, mask: int):
        new = mask & ~self.pts[v]
        if new:
            self.pts[v] |= new
            if not self.delta[v]:
                self.pending.append(v)
            self.delta[v] |= new

    def add_subset(self, src: int, dst: int):
        if dst not in self.succ[src]:
            self.succ[src].add(dst)
            self.add_pts(dst, self.pts[src])

    def run(self):
        ix = self.index
        f = self.facts
        for i, a in enumerate(f.allocs):
            self.add_pts(ix[a.target], 1 << i)
        for y, x in f.copies:
            self.add_subset(ix[y], ix[x])
        while self.pending:
            v = self.pending.popleft()
            d = self.delta.pop(v, 0)
            if not d:
                continue
            self.iterations += 1
            for w in list(self.succ.get(v, ())):
                self.add_pts(w, d)
            if v >= len(self.nodes):
                continue
            for o in iter_bits(d):
                for fname, x in self.loads_by_base.get(v, ()):
                    self.add_subset(self.cell(o, fname), x)
                for fname, z in self.stores_by_base.get(v, ()):
                    self.add_subset(z, self.cell(o, fname))
                for call in self.calls_by_recv.get(v, ()):
                    self.resolve(call, o)

    def resolve(self, call, o: int):
        cls = self.sites[o].cls
        target = self.ct.dispatch(cls, call.method)
        if target is None:
            self.diagnostics.add((call.site, cls, call.method))
            return
        mv = self.facts.method_vars[target]
        ix = self.index
        self.callgraph.add((call.site, target))
        self.add_subset(ix[call.arg], ix[mv.param])
        self.add_pts(ix[mv.this], 1 << o)
        self.add_subset(ix[mv.return_slot], ix[call.target])

    def result(self) -> PtaResult:
        sites = self.sites
        env = {v: frozenset(sites[o] for o in iter_bits(self.pts[i])) for i, v in enumerate(self.nodes)}
        heap = {}
        for (o, fname), node in self.cells.items():
            if self.pts[node]:
                heap[(sites[o], fname)] = frozenset(sites[t] for t in iter_bits(self.pts[node]))
        return PtaResult(
            env=env,
            heap=heap,
            callgraph=CallGraph(frozenset(self.callgraph)),
            variables=tuple(self.nodes),
            sites=tuple(sites),
            iterations=self.iterations,
            diagnostics=tuple(Diagnostic(*d) for d in sorted(self.diagnostics)),
        )


def pta_fixpoint(p: Program, ct: ClassTable = None, facts: ProgramFacts = None) -> PtaResult:
    facts = facts if facts is not None else extract_facts(p, ct)
    solver = _Solver(facts)
    # every method's return variable flows into its return slot
    for mv in facts.method_vars.values():
        solver.add_subset(solver.index[mv.return_var], solver.index[mv.return_slot])
    solver.run()
    return solver.result()
