"""Name resolution checks and the optional static type check."""

from __future__ import annotations

from .ast import Call, Copy, Load, New, NullAssign, Program, Store
from .classtable import ClassTable, build_class_table
from .parser import RESERVED_VARS, ValidationError


def _stmt_vars(s) -> tuple:
    if isinstance(s, New):
        return (s.target,)
    if isinstance(s, Copy):
        return (s.target, s.source)
    if isinstance(s, Load):
        return (s.target, s.base)
    if isinstance(s, Store):
        return (s.base, s.source)
    if isinstance(s, Call):
        return tuple(v for v in (s.target, s.receiver, s.arg) if v is not None)
    if isinstance(s, NullAssign):
        return (s.target,)
    raise TypeError(f"not a statement: {s!r}")


def validate(p: Program) -> ClassTable:
    """Raise ValidationError on the first ill-formed declaration or reference."""
    ct = build_class_table(p)
    known = set(ct.classes)
    all_fields = set()
    all_methods = set()

    def need_class(name, pos):
        if name not in known:
            raise ValidationError(f"unknown class {name!r}", pos)

    for c in p.classes:
        seen = set()
        for fname, ftype in c.fields:
            if fname in seen:
                raise ValidationError(f"duplicate field {c.name}.{fname}", c.pos)
            seen.add(fname)
            need_class(ftype, c.pos)
            if c.parent is not None and fname in ct.fields[c.parent]:
                raise ValidationError(f"field {c.name}.{fname} redeclares an inherited field", c.pos)
            all_fields.add(fname)
        seen = set()
        for m in c.methods:
            if m.name in seen:
                raise ValidationError(f"duplicate method {c.name}.{m.name}", m.pos)
            seen.add(m.name)
            all_methods.add(m.name)

    def check_decls(decls, pos, taken):
        for t, v in decls:
            need_class(t, pos)
            if v in RESERVED_VARS:
                raise ValidationError(f"{v!r} cannot be declared", pos)
            if v in taken:
                raise ValidationError(f"duplicate variable {v!r}", pos)
            taken.add(v)

    for c in p.classes:
        for m in c.methods:
            need_class(m.param_type, m.pos)
            check_decls([(m.param_type, m.param)], m.pos, set())
            check_decls(m.locals, m.pos, {m.param})
            scope_vars = {"this", m.param} | {v for _, v in m.locals}
            if m.return_var not in scope_vars:
                raise ValidationError(
                    f"unknown return variable {m.return_var!r} in {c.name}.{m.name}", m.pos
                )
    check_decls(p.entry_locals, None, set())

    for scope, decls, body in p.bodies():
        for s in body:
            for v in _stmt_vars(s):
                if v not in decls:
                    raise ValidationError(f"unknown variable {v!r}", s.pos)
            if isinstance(s, New):
                need_class(s.cls, s.pos)
            elif isinstance(s, (Load, Store)) and s.field not in all_fields:
                raise ValidationError(f"unknown field {s.field!r}", s.pos)
            elif isinstance(s, Call) and s.method not in all_methods:
                raise ValidationError(f"unknown method {s.method!r}", s.pos)
    return ct


def type_errors(p: Program, ct: ClassTable) -> list:
    """Java-style static type errors; empty for well-typed programs.

    The analyses never consult declared types, so this check is optional. It
    exists because the call-graph precision ladder (every analysis resolving
    within CHA) presumes declared types are respected.
    """
    errors = []
    sub = ct.is_subclass

    for c in p.classes:
        for m in c.methods:
            if c.parent is None or m.name not in ct.methods[c.parent]:
                continue
            over = ct.method_def(ct.dispatch(c.parent, m.name))
            if not sub(over.param_type, m.param_type):
                errors.append(f"{c.name}.{m.name}: parameter type narrows {over.param_type}")
            if not sub(_ret_type(ct, c.name, m), _ret_type(ct, ct.dispatch(c.parent, m.name)[0], over)):
                errors.append(f"{c.name}.{m.name}: return type widens")

    for scope, decls, body in p.bodies():
        where = f"{scope[0]}.{scope[1]}"
        for i, s in enumerate(body, 1):
            at = f"{where}#{i}"
            if isinstance(s, New):
                if not sub(s.cls, decls[s.target]):
                    errors.append(f"{at}: new {s.cls} not assignable to {decls[s.target]}")
            elif isinstance(s, Copy):
                if not sub(decls[s.source], decls[s.target]):
                    errors.append(f"{at}: {decls[s.source]} not assignable to {decls[s.target]}")
            elif isinstance(s, Load):
                fmap = ct.fields[decls[s.base]]
                if s.field not in fmap:
                    errors.append(f"{at}: {decls[s.base]} has no field {s.field}")
                elif not sub(fmap[s.field][1], decls[s.target]):
                    errors.append(f"{at}: field {s.field} not assignable to {decls[s.target]}")
            elif isinstance(s, Store):
                fmap = ct.fields[decls[s.base]]
                if s.field not in fmap:
                    errors.append(f"{at}: {decls[s.base]} has no field {s.field}")
                elif not sub(decls[s.source], fmap[s.field][1]):
                    errors.append(f"{at}: {decls[s.source]} not assignable to field {s.field}")
            elif isinstance(s, Call):
                target = ct.dispatch(decls[s.receiver], s.method)
                if target is None:
                    errors.append(f"{at}: {decls[s.receiver]} has no method {s.method}")
                    continue
                m = ct.method_def(target)
                if not sub(decls[s.arg], m.param_type):
                    errors.append(f"{at}: argument not assignable to {m.param_type}")
                if s.target is not None and not sub(_ret_type(ct, target[0], m), decls[s.target]):
                    errors.append(f"{at}: result not assignable to {decls[s.target]}")
    return errors


def _ret_type(ct: ClassTable, owner: str, m) -> str:
    if m.return_var == "this":
        return owner
    if m.return_var == m.param:
        return m.param_type
    return dict((v, t) for t, v in m.locals)[m.return_var]
