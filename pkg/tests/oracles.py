"""Naive reference engines: every rule re-applied to every tuple until nothing changes.

These read the AST directly and share nothing with the worklist solvers
except the frontend, so agreement between the two is meaningful.
"""

from __future__ import annotations

from typeflow.frontend import (
    ENTRY_SCOPE,
    Call,
    Copy,
    Load,
    New,
    Store,
    VarId,
    alloc_carrier,
    build_class_table,
    canonical_vars,
    discard_temp,
)


def _flatten(p):
    vt = canonical_vars(p)
    allocs, copies, loads, stores, calls = [], [], [], [], []
    for scope, i, s in p.statements():
        v = lambda n: vt.lookup(scope, n)  # noqa: E731
        if isinstance(s, New):
            allocs.append(((scope, i), v(s.target), s.cls))
        elif isinstance(s, Copy):
            copies.append((v(s.source), v(s.target)))
        elif isinstance(s, Load):
            loads.append((v(s.target), v(s.base), s.field))
        elif isinstance(s, Store):
            stores.append((v(s.base), s.field, v(s.source)))
        elif isinstance(s, Call):
            tgt = discard_temp(scope, i) if s.target is None else v(s.target)
            calls.append(((scope, i), tgt, v(s.receiver), s.method, v(s.arg)))
    methods = {}
    for c in p.classes:
        for m in c.methods:
            key = (c.name, m.name)
            methods[key] = {
                "this": vt.lookup(key, "this"),
                "param": vt.lookup(key, m.param),
                "slot": vt.lookup(key, "return"),
                "ret": vt.lookup(key, m.return_var),
            }
    return vt, allocs, copies, loads, stores, calls, methods


def _site(key):
    from typeflow.callgraph import Site

    (scope, i) = key
    return Site(scope[0], scope[1], i)


def naive_tfa(p, witness: str = "typed", this_link: str = "carrier"):
    """Least model of the type flow rules by brute-force re-evaluation.

    ``witness="any"`` lets any variable (even one no class reaches) witness
    a shared field store; ``this_link="receiver"`` orders the whole receiver
    below ``this``. Both alternatives exist only to show what goes wrong.
    Returns ``(typeflow, order, fieldaccess, callgraph_edges)``.
    """
    ct = build_class_table(p)
    vt, allocs, copies, loads, stores, calls, methods = _flatten(p)
    carriers = {alloc_carrier(scope, i): cls for (scope, i), _, cls in allocs}
    nodes = set(vt.all()) | set(carriers)

    order = {(v, v) for v in nodes}
    order |= set(copies)
    order |= {(alloc_carrier(scope, i), x) for (scope, i), x, _ in allocs}
    order |= {(m["ret"], m["slot"]) for m in methods.values()}
    typeflow = {(cls, w) for w, cls in carriers.items()}
    typeflow |= {(cls, x) for _, x, cls in allocs}
    fieldaccess = set()
    edges = set()

    while True:
        before = (len(order), len(typeflow), len(fieldaccess), len(edges))
        succ = {}
        for a, b in order:
            succ.setdefault(a, set()).add(b)
        order |= {(a, d) for a, b in order for d in succ[b]}
        typeflow |= {(c, y) for c, x in typeflow for y in succ.get(x, ())}
        typed = {v for _, v in typeflow}
        for x, f, z in stores:
            for w, y in order:
                if (w, x) in order and (witness == "any" or w in typed):
                    fieldaccess.add((y, f, z))
        for x, y, f in loads:
            order |= {(z, x) for yy, ff, z in fieldaccess if yy == y and ff == f}
        for key, x, y, m, a in calls:
            for c, yy in list(typeflow):
                if yy != y:
                    continue
                target = ct.dispatch(c, m)
                if target is None:
                    continue
                mv = methods[target]
                edges.add((_site(key), target))
                order.add((a, mv["param"]))
                order.add((mv["slot"], x))
                typeflow.add((c, mv["this"]))
                if this_link == "receiver":
                    order.add((y, mv["this"]))
                else:
                    for w, cls in carriers.items():
                        if cls == c and (w, y) in order:
                            order.add((w, mv["this"]))
        if (len(order), len(typeflow), len(fieldaccess), len(edges)) == before:
            return frozenset(typeflow), frozenset(order), frozenset(fieldaccess), frozenset(edges)


def naive_pta(p):
    """Least (env, heap) satisfying the subset constraints, by re-evaluation.

    Returns ``(env, heap, callgraph_edges)`` with sites as ``(Site, class)``.
    """
    ct = build_class_table(p)
    vt, allocs, copies, loads, stores, calls, methods = _flatten(p)
    objs = [(_site(key), cls) for key, _, cls in allocs]
    env = {v: set() for v in vt.all()}
    heap = {}
    edges = set()

    def cell(o, f):
        return heap.setdefault((o, f), set())

    changed = True
    while changed:
        snapshot = (
            sum(len(s) for s in env.values()),
            sum(len(s) for s in heap.values()),
            len(edges),
        )
        for o, (_, x, _) in zip(objs, allocs):
            env[x].add(o)
        for y, x in copies:
            env[x] |= env[y]
        for m in methods.values():
            env[m["slot"]] |= env[m["ret"]]
        for x, y, f in loads:
            for o in list(env[y]):
                env[x] |= cell(o, f)
        for x, f, z in stores:
            for o in list(env[x]):
                cell(o, f).update(env[z])
        for key, x, y, m, a in calls:
            for o in list(env[y]):
                target = ct.dispatch(o[1], m)
                if target is None:
                    continue
                mv = methods[target]
                edges.add((_site(key), target))
                env[mv["param"]] |= env[a]
                env[mv["this"]].add(o)
                env[x] |= env[mv["slot"]]
        changed = snapshot != (
            sum(len(s) for s in env.values()),
            sum(len(s) for s in heap.values()),
            len(edges),
        )
    heap = {k: frozenset(v) for k, v in heap.items() if v}
    return {v: frozenset(s) for v, s in env.items()}, heap, frozenset(edges)


def entry_var(name: str) -> VarId:
    return VarId(ENTRY_SCOPE[0], ENTRY_SCOPE[1], name)
