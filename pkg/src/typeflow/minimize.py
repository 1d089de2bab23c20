"""Storage reduction for type flow results.

Two variable equivalences shrink a result before it is stored:

* alias pairs: ``x <=* y`` and ``y <=* x``, i.e. strongly connected
  components of the order graph (Tarjan);
* bisimilarity: equal reaching-type sets and matching field transitions into
  equivalent variables, computed by Kanellakis-Smolka partition refinement
  with variables as states and field access as the labelled transitions.

Alias pairs are always bisimilar, so the second partition is coarser.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, replace
from functools import cached_property

from .callgraph import CallGraph
from .tfa import RelationStore, TfaResult


class NotHomogeneous(ValueError):
    def __init__(self, x, y):
        self.pair = (x, y)
        super().__init__(f"{x} and {y} share a block but are not bisimilar")


@dataclass(frozen=True)
class Partition:
    blocks: tuple  # sorted tuples of VarId, ordered by representative

    @classmethod
    def from_groups(cls, groups) -> "Partition":
        return cls(tuple(sorted(tuple(sorted(g)) for g in groups if g)))

    @classmethod
    def singletons(cls, variables) -> "Partition":
        return cls.from_groups([v] for v in variables)

    @cached_property
    def rep(self) -> dict:
        return {v: b[0] for b in self.blocks for v in b}

    def representative(self, v):
        return self.rep[v]

    @property
    def variables(self) -> frozenset:
        return frozenset(self.rep)

    def __len__(self) -> int:
        return len(self.blocks)

    def reduction(self) -> float:
        """Node-reduction ratio ``1 - blocks / variables``."""
        n = len(self.rep)
        return 0.0 if n == 0 else 1.0 - len(self.blocks) / n

    def dump(self) -> list:
        return ["BLOCK\t" + "\t".join(str(v) for v in b) for b in self.blocks]


def tarjan_scc(nodes, succ) -> list:
    """Strongly connected components, iteratively (no recursion limit)."""
    index, low = {}, {}
    on_stack = set()
    stack, out = [], []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def alias_scc(r: TfaResult) -> Partition:
    states = set(r.variables)
    succ = defaultdict(list)
    for a, b in sorted(r.order_edges):
        if a in states and b in states:
            succ[a].append(b)
    return Partition.from_groups(tarjan_scc(sorted(states), succ))


def _transitions(r: TfaResult) -> dict:
    states = set(r.variables)
    trans = defaultdict(lambda: defaultdict(set))  # state -> field -> successors
    for y, f, z in r.store.fieldaccess:
        if y in states and z in states:
            trans[y][f].add(z)
    return trans


def bisim_minimize(r: TfaResult) -> Partition:
    """Coarsest partition that respects reaching types and field transitions."""
    reach = {v: r.reach.get(v, frozenset()) for v in r.variables}
    trans = _transitions(r)
    labels = sorted({f for t in trans.values() for f in t})

    groups = defaultdict(list)
    for v in sorted(r.variables):
        groups[tuple(sorted(reach[v]))].append(v)
    blocks = sorted(groups.values())
    block_of = {v: i for i, b in enumerate(blocks) for v in b}

    changed = True
    while changed:
        changed = False
        for label in labels:
            for i, block in enumerate(blocks):
                if len(block) < 2:
                    continue
                sig = lambda s: frozenset(block_of[t] for t in trans[s][label])  # noqa: E731
                first = sig(block[0])
                keep = [s for s in block if sig(s) == first]
                if len(keep) == len(block):
                    continue
                rest = [s for s in block if sig(s) != first]
                blocks[i] = keep
                blocks.append(rest)
                for s in rest:
                    block_of[s] = len(blocks) - 1
                changed = True
    return Partition.from_groups(blocks)


def check_refinement(p_scc: Partition, p_bisim: Partition) -> bool:
    """True iff every block of ``p_scc`` lies inside one block of ``p_bisim``."""
    if p_scc.variables != p_bisim.variables:
        raise ValueError("partitions cover different variable sets")
    return all(len({p_bisim.rep[v] for v in b}) == 1 for b in p_scc.blocks)


def quotient(r: TfaResult, p: Partition) -> TfaResult:
    """Re-key every relation on block representatives."""
    if p.variables != frozenset(r.variables):
        raise ValueError("partition does not cover the result's variables")
    coarsest = bisim_minimize(r)
    for b in p.blocks:
        for v in b[1:]:
            if coarsest.rep[v] != coarsest.rep[b[0]]:
                raise NotHomogeneous(b[0], v)

    m = lambda v: p.rep.get(v, v)  # noqa: E731  carriers map to themselves

    def rekey(s: RelationStore) -> RelationStore:
        return RelationStore(
            typeflow=frozenset((c, m(v)) for c, v in s.typeflow),
            order=frozenset((m(a), m(b)) for a, b in s.order),
            fieldaccess=frozenset((m(y), f, m(z)) for y, f, z in s.fieldaccess),
        )

    aliases = {v: m(rep) for v, rep in r.aliases.items()}
    aliases.update((v, m(v)) for v in r.variables if m(v) != v)
    return replace(
        r,
        store=rekey(r.store),
        base=rekey(r.base),
        callgraph=CallGraph(r.callgraph.edges),
        variables=tuple(b[0] for b in p.blocks),
        order_edges=frozenset((m(a), m(b)) for a, b in r.order_edges),
        stores=tuple((m(x), f, m(z)) for x, f, z in r.stores),
        aliases=aliases,
    )
