"""Recursive-descent parser for ``.tfl`` source text."""

from __future__ import annotations

import re
from typing import NamedTuple, Optional

from .ast import (
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

KEYWORDS = frozenset({"class", "extends", "main", "new", "null", "return"})
RESERVED_VARS = frozenset({"this"})


class FrontendError(Exception):
    """Base class for every error raised while reading a program."""

    def __init__(self, message: str, pos: Optional[Pos] = None):
        self.message = message
        self.pos = pos
        super().__init__(f"{pos}: {message}" if pos else message)


class ParseError(FrontendError):
    pass


class ValidationError(FrontendError):
    pass


class Token(NamedTuple):
    kind: str  # "ident", "kw", "punct", "eof"
    text: str
    pos: Pos


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>//[^\n]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[{}();=.])"
)


def tokenize(text: str) -> list:
    tokens = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", Pos(line, i - line_start + 1))
        kind = m.lastgroup
        pos = Pos(line, i - line_start + 1)
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident":
            word = m.group()
            tokens.append(Token("kw" if word in KEYWORDS else "ident", word, pos))
        elif kind == "punct":
            tokens.append(Token("punct", m.group(), pos))
        i = m.end()
    tokens.append(Token("eof", "", Pos(line, i - line_start + 1)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        self.i += 1
        return tok

    def error(self, expected: str) -> ParseError:
        tok = self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"expected {expected}, found {found}", tok.pos)

    def expect(self, text: str) -> Token:
        if self.peek().text != text or self.peek().kind == "ident":
            raise self.error(repr(text))
        return self.next()

    def ident(self, what: str = "identifier") -> Token:
        if self.peek().kind != "ident":
            raise self.error(what)
        return self.next()

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.text == text and tok.kind in ("kw", "punct")

    # program := classdecl* "main" "{" localdecl* stmt* "}"
    def program(self) -> Program:
        classes = []
        while self.at("class"):
            classes.append(self.classdecl())
        self.expect("main")
        self.expect("{")
        decls = self.localdecls()
        body = self.stmts()
        self.expect("}")
        if self.peek().kind != "eof":
            raise self.error("end of input")
        return Program(tuple(classes), tuple(decls), tuple(body))

    def classdecl(self) -> ClassDef:
        pos = self.expect("class").pos
        name = self.ident("class name").text
        parent = None
        if self.at("extends"):
            self.next()
            parent = self.ident("class name").text
        self.expect("{")
        fields, methods = [], []
        while not self.at("}"):
            if self.peek().kind == "ident" and self.peek(1).text == "(":
                methods.append(self.methdecl())
            elif methods:
                raise self.error("method declaration (fields must precede methods)")
            else:
                ftype = self.ident("field type").text
                fname = self.ident("field name").text
                self.expect(";")
                fields.append((fname, ftype))
        self.expect("}")
        return ClassDef(name, parent, tuple(fields), tuple(methods), pos)

    def methdecl(self) -> MethodDef:
        tok = self.ident("method name")
        self.expect("(")
        ptype = self.ident("parameter type").text
        pname = self.ident("parameter name").text
        self.expect(")")
        self.expect("{")
        decls = self.localdecls()
        body = self.stmts()
        self.expect("return")
        ret = self.ident("return variable").text
        self.expect(";")
        self.expect("}")
        return MethodDef(tok.text, ptype, pname, tuple(decls), tuple(body), ret, tok.pos)

    def localdecls(self) -> list:
        decls = []
        while self.peek().kind == "ident" and self.peek(1).kind == "ident":
            t = self.next().text
            v = self.next().text
            self.expect(";")
            decls.append((t, v))
        return decls

    def stmts(self) -> list:
        out = []
        while self.peek().kind == "ident":
            out.append(self.stmt())
        return out

    def stmt(self):
        first = self.ident()
        pos = first.pos
        if self.at("."):
            # x.f = y;  |  x.m(y);
            self.next()
            name = self.ident("field or method name").text
            if self.at("("):
                self.next()
                arg = self.ident("argument").text
                self.expect(")")
                self.expect(";")
                return Call(None, first.text, name, arg, pos)
            self.expect("=")
            src = self.ident("variable").text
            self.expect(";")
            return Store(first.text, name, src, pos)
        self.expect("=")
        if self.at("new"):
            self.next()
            cls = self.ident("class name").text
            self.expect("(")
            self.expect(")")
            self.expect(";")
            return New(first.text, cls, pos)
        if self.at("null"):
            self.next()
            self.expect(";")
            return NullAssign(first.text, pos)
        src = self.ident("variable, 'new' or 'null'").text
        if self.at(";"):
            self.next()
            return Copy(first.text, src, pos)
        self.expect(".")
        name = self.ident("field or method name").text
        if self.at("("):
            self.next()
            arg = self.ident("argument").text
            self.expect(")")
            self.expect(";")
            return Call(first.text, src, name, arg, pos)
        self.expect(";")
        return Load(first.text, src, name, pos)


def parse_syntax(text: str) -> Program:
    """Parse without semantic validation."""
    return _Parser(text).program()


def parse_program(text: str) -> Program:
    """Parse ``.tfl`` text and validate names, declarations and the hierarchy."""
    from .validate import validate

    program = parse_syntax(text)
    validate(program)
    return program
