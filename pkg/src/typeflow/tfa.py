"""Type flow analysis.

Three mutually recursive relations over program variables are closed to
their least fixpoint:

* ``typeflow``    -- ``(c, x)``: class ``c`` may flow to variable ``x``
* ``order``       -- ``(y, x)``: every class flowing to ``y`` flows to ``x``
  (reflexive, transitive)
* ``fieldaccess`` -- ``(y, f, z)``: reading ``f`` from ``y`` may yield what was
  stored from ``z``

Base facts come straight from statements: ``x = new c`` gives ``c -> x``,
``x = y`` gives ``y <= x``, ``x.f = y`` gives the store ``x -f-> y``. The
closure rules are

1. load ``x = y.f`` and ``y -f->* z``  =>  ``z <=* x``
2. ``c ->* x`` and ``x <=* y``        =>  ``c ->* y``
3. ``<=*`` is the reflexive-transitive closure
4. store ``x -f-> z``, ``w <=* y``, ``w <=* x`` for a witness ``w`` holding an
   object  =>  ``y -f->* z``
5. call ``x = y.m(z)``, ``c ->* y``, ``m`` dispatched on ``c`` to ``d.m``
   =>  ``z <=* d.m.param``, ``c ->* d.m.this``, ``d.m.return <=* x``

Each ``new`` statement is given a single-assignment carrier variable (as an
SSA-style IR would) that holds exactly one abstract object. Carriers are the
witnesses of rule 4, and in rule 5 the carriers of the receiver whose class
dispatches to ``d.m`` are ordered below ``d.m.this``. A witness that can be
null would let two unrelated variables share field contents, and ordering the
whole receiver below ``this`` would leak classes that dispatch elsewhere.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property

from .callgraph import CallGraph
from .facts import ProgramFacts, extract_facts
from .frontend import ClassTable, Program, VarId, VarTable


class UnknownVariable(KeyError):
    pass


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class RelationStore:
    typeflow: frozenset = frozenset()  # (class, VarId)
    order: frozenset = frozenset()  # (lower VarId, upper VarId)
    fieldaccess: frozenset = frozenset()  # (VarId, field, VarId)

    def sizes(self) -> tuple:
        return len(self.typeflow), len(self.order), len(self.fieldaccess)

    def dump(self) -> list:
        lines = [f"TF\t{c}\t{v}" for c, v in sorted(self.typeflow, key=lambda t: (t[0], t[1]))]
        lines += [f"ORD\t{a}\t{b}" for a, b in sorted(self.order)]
        lines += [f"FLD\t{y}\t{f}\t{z}" for y, f, z in sorted(self.fieldaccess, key=lambda t: (t[0], t[1], t[2]))]
        return lines


@dataclass(frozen=True)
class Diagnostic:
    site: object
    cls: str
    method: str

    def __str__(self) -> str:
        return f"{self.site}: class {self.cls} has no method {self.method}"


@dataclass(frozen=True)
class TfaResult:
    """Fixpoint of the three relations plus the call graph resolved on the fly.

    ``variables`` lists the program variables the result answers for;
    ``aliases`` redirects variables merged away by a quotient to their
    block representative.
    """

    store: RelationStore
    base: RelationStore
    callgraph: CallGraph
    iterations: int
    variables: tuple
    order_edges: frozenset = frozenset()  # immediate <= edges, base and derived
    stores: tuple = ()  # base store facts (x, f, z)
    diagnostics: tuple = ()
    aliases: dict = field(default_factory=dict)

    @cached_property
    def reach(self) -> dict:
        out = {v: set() for v in self.variables}
        for c, v in self.store.typeflow:
            out.setdefault(v, set()).add(c)
        return {v: frozenset(cs) for v, cs in out.items()}

    @cached_property
    def fields_from(self) -> dict:
        out = defaultdict(set)
        for y, f, z in self.store.fieldaccess:
            out[y].add((f, z))
        return out

    def resolve(self, v: VarId) -> VarId:
        return self.aliases.get(v, v)


def reaching_types(r: TfaResult, v: VarId) -> frozenset:
    try:
        return r.reach[r.resolve(v)]
    except KeyError:
        raise UnknownVariable(str(v)) from None


def tfa_callgraph(r: TfaResult) -> CallGraph:
    return r.callgraph


def seed_base_relations(p: Program, ct: ClassTable = None, facts: ProgramFacts = None) -> RelationStore:
    """Statement-level base facts only: ``new``, copy and store statements."""
    facts = facts if facts is not None else extract_facts(p, ct)
    return RelationStore(
        typeflow=frozenset((a.cls, a.target) for a in facts.allocs),
        order=frozenset(facts.copies),
        fieldaccess=frozenset(facts.stores),
    )


class _Solver:
    def __init__(self, facts: ProgramFacts):
        self.facts = facts
        self.ct = facts.ct
        program_vars = facts.vars.all()
        carriers = [facts.carrier(a) for a in facts.allocs]
        self.nodes = list(program_vars) + carriers
        self.index = {v: i for i, v in enumerate(self.nodes)}
        n = len(self.nodes)
        self.up = [1 << i for i in range(n)]
        self.down = [1 << i for i in range(n)]
        ix = self.index

        self.carrier_class = {ix[facts.carrier(a)]: a.cls for a in facts.allocs}
        self.stores_by_base = defaultdict(list)
        for x, f, z in facts.stores:
            self.stores_by_base[ix[x]].append((f, ix[z]))
        self.loads_by = defaultdict(list)  # (base, field) -> targets
        for x, y, f in facts.loads:
            self.loads_by[(ix[y], f)].append(ix[x])
        self.calls_by_recv = defaultdict(list)
        for call in facts.calls:
            self.calls_by_recv[ix[call.receiver]].append(call)
        self.fld = defaultdict(int)  # (y, field) -> mask of z
        self.alias_stores = defaultdict(lambda: defaultdict(int))  # carrier -> field -> mask
        self.edges = set()
        self.callgraph = set()
        self.diagnostics = set()
        self.pending = deque()
        self.iterations = 0

    def add_edge(self, a: int, b: int):
        if (a, b) not in self.edges:
            self.edges.add((a, b))
            self.pending.append((a, b))

    def seed(self):
        ix = self.index
        f = self.facts
        for a in f.allocs:
            self.add_edge(ix[f.carrier(a)], ix[a.target])
        for y, x in f.copies:
            self.add_edge(ix[y], ix[x])
        for mv in f.method_vars.values():
            self.add_edge(ix[mv.return_var], ix[mv.return_slot])

    def run(self):
        self.seed()
        up, down = self.up, self.down
        while self.pending:
            a, b = self.pending.popleft()
            if (up[a] >> b) & 1:
                continue
            self.iterations += 1
            for p in iter_bits(down[a]):
                old = up[p]
                delta = up[b] & ~old
                if not delta:
                    continue
                up[p] = old | delta
                bit = 1 << p
                for q in iter_bits(delta):
                    down[q] |= bit
                if p in self.carrier_class:
                    self.carrier_reaches(p, old, delta)

    def carrier_reaches(self, w: int, old: int, delta: int):
        cls = self.carrier_class[w]
        facts = self.facts
        ix = self.index
        for q in iter_bits(delta):
            for call in self.calls_by_recv.get(q, ()):
                target = self.ct.dispatch(cls, call.method)
                if target is None:
                    self.diagnostics.add((call.site, cls, call.method))
                    continue
                mv = facts.method_vars[target]
                self.callgraph.add((call.site, target))
                self.add_edge(ix[call.arg], ix[mv.param])
                self.add_edge(ix[mv.return_slot], ix[call.target])
                self.add_edge(w, ix[mv.this])

        fresh = defaultdict(int)
        for q in iter_bits(delta):
            for f, z in self.stores_by_base.get(q, ()):
                fresh[f] |= 1 << z
        known = self.alias_stores[w]
        for f, m in fresh.items():
            known[f] |= m
            for y in iter_bits(old):
                self.add_fld(y, f, m)
        for f, m in known.items():
            for y in iter_bits(delta):
                self.add_fld(y, f, m)

    def add_fld(self, y: int, f: str, mask: int):
        key = (y, f)
        new = mask & ~self.fld[key]
        if not new:
            return
        self.fld[key] |= new
        for x in self.loads_by.get(key, ()):
            for z in iter_bits(new):
                self.add_edge(z, x)

    def result(self, base: RelationStore, vt: VarTable) -> TfaResult:
        nodes = self.nodes
        typeflow = set()
        for w, cls in self.carrier_class.items():
            for v in iter_bits(self.up[w]):
                typeflow.add((cls, nodes[v]))
        order = frozenset((nodes[a], nodes[b]) for a in range(len(nodes)) for b in iter_bits(self.up[a]))
        fieldaccess = frozenset(
            (nodes[y], f, nodes[z]) for (y, f), m in self.fld.items() for z in iter_bits(m)
        )
        return TfaResult(
            store=RelationStore(frozenset(typeflow), order, fieldaccess),
            base=base,
            callgraph=CallGraph(frozenset(self.callgraph)),
            iterations=self.iterations,
            variables=vt.all(),
            order_edges=frozenset((nodes[a], nodes[b]) for a, b in self.edges),
            stores=self.facts.stores,
            diagnostics=tuple(Diagnostic(*d) for d in sorted(self.diagnostics)),
        )


def tfa_fixpoint(p: Program, ct: ClassTable = None, facts: ProgramFacts = None) -> TfaResult:
    facts = facts if facts is not None else extract_facts(p, ct)
    solver = _Solver(facts)
    solver.run()
    return solver.result(seed_base_relations(p, facts=facts), facts.vars)
