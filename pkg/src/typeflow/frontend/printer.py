from __future__ import annotations

from .ast import Call, Copy, Load, New, NullAssign, Program, Store


def format_stmt(s) -> str:
    if isinstance(s, New):
        return f"{s.target} = new {s.cls}();"
    if isinstance(s, Copy):
        return f"{s.target} = {s.source};"
    if isinstance(s, Load):
        return f"{s.target} = {s.base}.{s.field};"
    if isinstance(s, Store):
        return f"{s.base}.{s.field} = {s.source};"
    if isinstance(s, Call):
        call = f"{s.receiver}.{s.method}({s.arg});"
        return call if s.target is None else f"{s.target} = {call}"
    if isinstance(s, NullAssign):
        return f"{s.target} = null;"
    raise TypeError(f"not a statement: {s!r}")


def format_program(p: Program) -> str:
    """Canonical ``.tfl`` text; parsing it back yields an equal Program."""
    out = []
    for c in p.classes:
        head = f"class {c.name}" + (f" extends {c.parent}" if c.parent else "")
        if not c.fields and not c.methods:
            out.append(head + " {}")
            continue
        out.append(head + " {")
        for fname, ftype in c.fields:
            out.append(f"  {ftype} {fname};")
        for m in c.methods:
            out.append(f"  {m.name}({m.param_type} {m.param}) {{")
            for t, v in m.locals:
                out.append(f"    {t} {v};")
            for s in m.body:
                out.append(f"    {format_stmt(s)}")
            out.append(f"    return {m.return_var};")
            out.append("  }")
        out.append("}")
    out.append("main {")
    for t, v in p.entry_locals:
        out.append(f"  {t} {v};")
    for s in p.entry_body:
        out.append(f"  {format_stmt(s)}")
    out.append("}")
    return "\n".join(out) + "\n"
