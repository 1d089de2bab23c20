"""Seeded generation of random well-formed, well-typed programs.

Declarations come first (hierarchy, fields, method signatures, locals), then
bodies that only reference names already declared, so no generated program
needs to be rejected. Every method name has one signature shared by all its
overrides, which keeps calls type-correct under any dispatch.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, fields, replace

from .frontend import (
    Call,
    ClassDef,
    Copy,
    Load,
    MethodDef,
    New,
    NullAssign,
    Program,
    Store,
)

STMT_KINDS = ("new", "copy", "load", "store", "call", "null")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    classes: tuple = (1, 10)
    max_depth: int = 4
    fields_per_class: tuple = (0, 2)
    methods_per_class: tuple = (0, 2)
    method_names: int = 4
    locals_per_method: tuple = (0, 3)
    entry_locals: tuple = (1, 8)
    stmts_per_method: tuple = (0, 8)
    stmts_entry: tuple = (1, 40)
    max_statements: int = 200
    weights: tuple = (("new", 3), ("copy", 3), ("load", 2), ("store", 2), ("call", 3), ("null", 1))
    override_prob: float = 0.6

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.type == "tuple" and f.name != "weights":
                if len(v) != 2 or not 0 <= v[0] <= v[1]:
                    raise ConfigError(f"{f.name}: empty or negative range {v!r}")
        if self.max_depth < 1 or self.method_names < 1 or self.max_statements < 0:
            raise ConfigError("max_depth and method_names must be >= 1, max_statements >= 0")
        if not 0.0 <= self.override_prob <= 1.0:
            raise ConfigError("override_prob must lie in [0, 1]")
        w = dict(self.weights)
        unknown = set(w) - set(STMT_KINDS)
        if unknown:
            raise ConfigError(f"unknown statement kinds {sorted(unknown)}")
        if any(x < 0 for x in w.values()) or not any(x > 0 for x in w.values()):
            raise ConfigError("statement weights must be nonnegative and not all zero")

    @classmethod
    def from_text(cls, text: str, **overrides) -> "GenConfig":
        """Read ``key=value`` lines; ranges as ``lo..hi``, weights as ``weight.<kind>=n``."""
        kw = {}
        weights = dict(cls.weights)
        names = {f.name: f for f in fields(cls)}
        for n, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {n}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            try:
                if key.startswith("weight."):
                    weights[key[len("weight."):]] = float(value)
                elif key not in names or key == "weights":
                    raise ConfigError(f"line {n}: unknown key {key!r}")
                elif names[key].type == "tuple":
                    lo, _, hi = value.partition("..")
                    kw[key] = (int(lo), int(hi or lo))
                elif names[key].type == "float":
                    kw[key] = float(value)
                else:
                    kw[key] = int(value, 0)
            except ValueError as e:
                if isinstance(e, ConfigError):
                    raise
                raise ConfigError(f"line {n}: bad value for {key!r}: {value!r}") from None
        kw["weights"] = tuple(sorted(weights.items()))
        kw.update(overrides)
        return cls(**kw)

    def with_seed(self, seed: int) -> "GenConfig":
        return replace(self, seed=seed)


@dataclass
class _Scope:
    decls: dict  # var -> class
    writable: list  # assignable variables
    body: list = field(default_factory=list)


class _Gen:
    def __init__(self, cfg: GenConfig):
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)
        w = dict(cfg.weights)
        self.kinds = [k for k in STMT_KINDS if w.get(k, 0) > 0]
        self.kind_weights = [w[k] for k in self.kinds]

    def between(self, r: tuple) -> int:
        return self.rng.randint(r[0], r[1])

    def hierarchy(self):
        rng = self.rng
        n = self.between(self.cfg.classes)
        self.names = [f"C{i}" for i in range(n)]
        self.parent = {}
        self.depth = {}
        for name in self.names:
            eligible = [c for c in self.parent if self.depth[c] < self.cfg.max_depth]
            if eligible and rng.random() < 0.75:
                p = rng.choice(eligible)
                self.parent[name] = p
                self.depth[name] = self.depth[p] + 1
            else:
                self.parent[name] = None
                self.depth[name] = 1
        self.ancestors = {}
        for name in self.names:
            chain, cur = [], name
            while cur is not None:
                chain.append(cur)
                cur = self.parent[cur]
            self.ancestors[name] = chain
        self.subs = {c: [d for d in self.names if c in self.ancestors[d]] for c in self.names}

    def members(self):
        rng = self.rng
        self.own_fields = {}
        self.fieldtype = {}
        counter = 0
        for c in self.names:
            fs = []
            for _ in range(self.between(self.cfg.fields_per_class)):
                fname = f"f{counter}"
                counter += 1
                self.fieldtype[fname] = rng.choice(self.names)
                fs.append(fname)
            self.own_fields[c] = fs
        self.sig = {
            f"m{i}": (rng.choice(self.names), rng.choice(self.names)) for i in range(self.cfg.method_names)
        }
        pool = sorted(self.sig)
        self.own_methods = {}
        for c in self.names:
            inherited = set()
            for a in self.ancestors[c][1:]:
                inherited.update(self.own_methods[a])
            mine = [m for m in sorted(inherited) if rng.random() < self.cfg.override_prob]
            fresh = [m for m in pool if m not in inherited]
            rng.shuffle(fresh)
            mine += fresh[: self.between(self.cfg.methods_per_class)]
            self.own_methods[c] = sorted(set(mine))

    def visible_fields(self, c):
        return [f for a in self.ancestors[c] for f in self.own_fields[a]]

    def visible_methods(self, c):
        return sorted({m for a in self.ancestors[c] for m in self.own_methods[a]})

    def is_sub(self, a, b):
        return b in self.ancestors[a]

    def declare(self, count, taken):
        out = []
        for i in range(count):
            name = f"v{i}"
            while name in taken:
                name += "_"
            taken.add(name)
            out.append((self.rng.choice(self.names), name))
        return out

    def body(self, scope: _Scope, n: int):
        rng = self.rng
        if not scope.writable:
            return
        for _ in range(n):
            kind = rng.choices(self.kinds, self.kind_weights)[0]
            stmt = getattr(self, f"gen_{kind}")(scope)
            if stmt is None:
                stmt = self.gen_new(scope)
            scope.body.append(stmt)

    def pick(self, options):
        return self.rng.choice(options) if options else None

    def gen_new(self, s: _Scope):
        x = self.rng.choice(s.writable)
        return New(x, self.rng.choice(self.subs[s.decls[x]]))

    def gen_null(self, s: _Scope):
        return NullAssign(self.rng.choice(s.writable))

    def gen_copy(self, s: _Scope):
        x = self.rng.choice(s.writable)
        y = self.pick([v for v in sorted(s.decls) if v != x and self.is_sub(s.decls[v], s.decls[x])])
        return None if y is None else Copy(x, y)

    def gen_load(self, s: _Scope):
        y = self.pick([v for v in sorted(s.decls) if self.visible_fields(s.decls[v])])
        if y is None:
            return None
        f = self.rng.choice(self.visible_fields(s.decls[y]))
        x = self.pick([v for v in s.writable if self.is_sub(self.fieldtype[f], s.decls[v])])
        return None if x is None else Load(x, y, f)

    def gen_store(self, s: _Scope):
        x = self.pick([v for v in sorted(s.decls) if self.visible_fields(s.decls[v])])
        if x is None:
            return None
        f = self.rng.choice(self.visible_fields(s.decls[x]))
        z = self.pick([v for v in sorted(s.decls) if self.is_sub(s.decls[v], self.fieldtype[f])])
        return None if z is None else Store(x, f, z)

    def gen_call(self, s: _Scope):
        y = self.pick([v for v in sorted(s.decls) if self.visible_methods(s.decls[v])])
        if y is None:
            return None
        m = self.rng.choice(self.visible_methods(s.decls[y]))
        ptype, rtype = self.sig[m]
        z = self.pick([v for v in sorted(s.decls) if self.is_sub(s.decls[v], ptype)])
        if z is None:
            return None
        x = self.pick([v for v in s.writable if self.is_sub(rtype, s.decls[v])])
        if x is None or self.rng.random() < 0.15:
            return Call(None, y, m, z)
        return Call(x, y, m, z)

    def program(self) -> Program:
        cfg, rng = self.cfg, self.rng
        self.hierarchy()
        self.members()
        budget = cfg.max_statements
        classes = []
        for c in self.names:
            methods = []
            for m in self.own_methods[c]:
                ptype, rtype = self.sig[m]
                taken = {"p"}
                locs = self.declare(self.between(cfg.locals_per_method), taken)
                ret = "r"
                while ret in taken:
                    ret += "_"
                locs.append((rtype, ret))
                decls = {"this": c, "p": ptype, **{v: t for t, v in locs}}
                scope = _Scope(decls, ["p"] + [v for _, v in locs])
                n = min(self.between(cfg.stmts_per_method), budget)
                self.body(scope, n)
                budget -= len(scope.body)
                candidates = [ret]
                # static return type must match the signature exactly
                if c == rtype:
                    candidates.append("this")
                if ptype == rtype:
                    candidates.append("p")
                methods.append(
                    MethodDef(m, ptype, "p", tuple(locs), tuple(scope.body), rng.choice(candidates))
                )
            fdecls = tuple((f, self.fieldtype[f]) for f in self.own_fields[c])
            classes.append(ClassDef(c, self.parent[c], fdecls, tuple(methods)))
        entry = []
        if self.names:
            entry = self.declare(self.between(cfg.entry_locals), set())
        scope = _Scope({v: t for t, v in entry}, [v for _, v in entry])
        self.body(scope, min(self.between(cfg.stmts_entry), budget))
        return Program(tuple(classes), tuple(entry), tuple(scope.body))


def gen_program(cfg: GenConfig) -> Program:
    return _Gen(cfg).program()


def gen_corpus(cfg: GenConfig, count: int):
    """Programs for seeds ``cfg.seed .. cfg.seed + count - 1``."""
    for i in range(count):
        yield cfg.seed + i, gen_program(cfg.with_seed(cfg.seed + i))
