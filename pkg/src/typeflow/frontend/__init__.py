from .ast import (
    ENTRY_SCOPE,
    Call,
    ClassDef,
    Copy,
    Load,
    MethodDef,
    New,
    NullAssign,
    Pos,
    Program,
    Store,
)
from .classtable import ClassTable, HierarchyError, build_class_table
from .parser import FrontendError, ParseError, ValidationError, parse_program, parse_syntax
from .printer import format_program, format_stmt
from .validate import type_errors, validate
from .variables import VarId, VarTable, alloc_carrier, alloc_sites, canonical_vars, discard_temp

__all__ = [
    "ENTRY_SCOPE",
    "Call",
    "ClassDef",
    "ClassTable",
    "Copy",
    "FrontendError",
    "HierarchyError",
    "Load",
    "MethodDef",
    "New",
    "NullAssign",
    "ParseError",
    "Pos",
    "Program",
    "Store",
    "ValidationError",
    "VarId",
    "VarTable",
    "alloc_carrier",
    "alloc_sites",
    "build_class_table",
    "canonical_vars",
    "discard_temp",
    "format_program",
    "format_stmt",
    "parse_program",
    "parse_syntax",
    "type_errors",
    "validate",
]
