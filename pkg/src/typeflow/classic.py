"""Reference call-graph analyses: CHA, RTA and VTA."""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass

from .callgraph import CallGraph, Site
from .facts import ProgramFacts, extract_facts
from .frontend import Call, ClassTable, New, Program

log = logging.getLogger(__name__)


def cha_resolve(ct: ClassTable, receiver_declared: str, m: str) -> frozenset:
    """Definitions of ``m`` reachable from any subclass of the declared receiver class."""
    targets = frozenset(
        t for c in ct.subclasses(receiver_declared) if (t := ct.dispatch(c, m)) is not None
    )
    if not targets:
        log.warning("no method %s in the hierarchy of %s", m, receiver_declared)
    return targets


def _call_sites(p: Program):
    for scope, decls, body in p.bodies():
        for i, s in enumerate(body, 1):
            if isinstance(s, Call):
                yield Site(scope[0], scope[1], i), decls[s.receiver], s


def cha_callgraph(p: Program, ct: ClassTable) -> CallGraph:
    return CallGraph(
        frozenset(
            (site, t) for site, declared, s in _call_sites(p) for t in cha_resolve(ct, declared, s.method)
        )
    )


def instantiated_classes(p: Program) -> frozenset:
    return frozenset(s.cls for _, _, s in p.statements() if isinstance(s, New))


def rta_callgraph(p: Program, ct: ClassTable, cha: CallGraph = None) -> CallGraph:
    """CHA edges whose target is a method of some instantiated class."""
    cha = cha if cha is not None else cha_callgraph(p, ct)
    live = {t for c in instantiated_classes(p) for m in ct.methods[c] if (t := ct.dispatch(c, m))}
    return CallGraph(frozenset(e for e in cha.edges if e[1] in live))


@dataclass(frozen=True, order=True)
class FieldNode:
    """One node per class-field pair, keyed by the class declaring the field."""

    cls: str
    field: str

    def __str__(self) -> str:
        return f"{self.cls}.{self.field}"


@dataclass(frozen=True)
class VtaGraph:
    nodes: frozenset
    edges: frozenset  # (source node, target node)
    reach: dict  # node -> frozenset of class names
    callgraph: CallGraph

    def reach_of(self, node) -> frozenset:
        return self.reach.get(node, frozenset())


def vta_propagate(p: Program, ct: ClassTable, cg: CallGraph = None, facts: ProgramFacts = None) -> VtaGraph:
    """Propagate class names over a value-flow graph built on a fixed call graph.

    Store and load edges depend on which classes reach the base variable, so
    they are generated as reach sets grow. Receiver classes seed ``this`` of
    the method they dispatch to, when that method is a target in ``cg``.
    """
    facts = facts if facts is not None else extract_facts(p, ct)
    cg = cg if cg is not None else cha_callgraph(p, ct)
    succ = defaultdict(set)
    reach = defaultdict(set)
    pending = deque()
    queued = set()
    nodes = set(facts.vars.all())

    def seed(node, classes):
        new = set(classes) - reach[node]
        if new:
            reach[node] |= new
            if node not in queued:
                queued.add(node)
                pending.append(node)

    def edge(a, b):
        nodes.update((a, b))
        if b not in succ[a]:
            succ[a].add(b)
            seed(b, reach[a])

    for a in facts.allocs:
        seed(a.target, {a.cls})
    for y, x in facts.copies:
        edge(y, x)
    for mv in facts.method_vars.values():
        edge(mv.return_var, mv.return_slot)
    targets = defaultdict(set)
    for site, t in cg.edges:
        targets[site].add(t)
    for call in facts.calls:
        for t in targets[call.site]:
            mv = facts.method_vars[t]
            edge(call.arg, mv.param)
            edge(mv.return_slot, call.target)

    loads_by_base = defaultdict(list)
    for x, y, f in facts.loads:
        loads_by_base[y].append((f, x))
    stores_by_base = defaultdict(list)
    for x, f, z in facts.stores:
        stores_by_base[x].append((f, z))
    calls_by_recv = defaultdict(list)
    for call in facts.calls:
        calls_by_recv[call.receiver].append(call)

    done = defaultdict(set)  # node -> classes already expanded into dynamic edges
    while pending:
        node = pending.popleft()
        queued.discard(node)
        for b in list(succ[node]):
            seed(b, reach[node])
        fresh = reach[node] - done[node]
        done[node] |= fresh
        for c in sorted(fresh):
            fields = ct.fields.get(c, {})
            for f, x in loads_by_base.get(node, ()):
                if f in fields:
                    edge(FieldNode(fields[f][0], f), x)
            for f, z in stores_by_base.get(node, ()):
                if f in fields:
                    edge(z, FieldNode(fields[f][0], f))
            for call in calls_by_recv.get(node, ()):
                t = ct.dispatch(c, call.method)
                if t is not None and t in targets[call.site]:
                    seed(facts.method_vars[t].this, {c})

    resolved = frozenset(
        (call.site, t)
        for call in facts.calls
        for c in reach[call.receiver]
        if (t := ct.dispatch(c, call.method)) is not None and t in targets[call.site]
    )
    return VtaGraph(
        nodes=frozenset(nodes),
        edges=frozenset((a, b) for a, bs in succ.items() for b in bs),
        reach={n: frozenset(cs) for n, cs in reach.items() if cs},
        callgraph=CallGraph(resolved),
    )


def vta_callgraph(g: VtaGraph) -> CallGraph:
    return g.callgraph
