"""Surface syntax: tokenizer, recursive-descent parser and printer.

Grammar::

    kind  ::= katom ('=>' kind)?            katom ::= '*' | '(' kind ')'
    type  ::= 'All' ID ('<=' type)? ':' kind '.' type
            | 'Lam' ID ':' kind '.' type
            | app ('->' type)?
    app   ::= atom atom*
    atom  ::= 'Top' | ID '{' type '}' | ID | '(' type ')'

Church mode requires the braces on variables, Curry mode forbids them.
Contexts are comma separated (inline) or one entry per line (files), each
entry ``X <= TYPE : KIND`` or ``X : KIND``.  Judgements are
``CTX |- TYPE : KIND`` and ``CTX |- TYPE <= TYPE : KIND``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    STAR,
    Abs,
    App,
    Arrow,
    BareVar,
    Context,
    Forall,
    Kind,
    KindArrow,
    Kinding,
    Star,
    Subtyping,
    Top,
    Type,
    Var,
    alpha_eq,
    top_kind,
)

CHURCH = "church"
CURRY = "curry"


class SurfaceSyntaxError(SyntaxError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.msg = msg
        self.line = line
        self.col = col


class ModeViolation(SurfaceSyntaxError):
    pass


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>#[^\n]*)"
    r"|(?P<sym>=>|->|<=|\|-|[*:.(){},])"
    r"|(?P<id>[A-Za-z_][A-Za-z0-9_']*)"
)
KEYWORDS = {"All", "Lam", "Top"}


@dataclass
class Token:
    kind: str  # "sym", "id", "kw", "eof"
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise SurfaceSyntaxError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1)
        text = m.group()
        group = m.lastgroup
        if group == "id":
            tokens.append(Token("kw" if text in KEYWORDS else "id", text, line, pos - line_start + 1))
        elif group == "sym":
            tokens.append(Token("sym", text, line, pos - line_start + 1))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class Parser:
    def __init__(self, src: str, mode: str = CHURCH):
        if mode not in (CHURCH, CURRY):
            raise ValueError(f"unknown mode {mode!r}")
        self.tokens = tokenize(src)
        self.pos = 0
        self.mode = mode

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, msg: str, tok: Token = None) -> SurfaceSyntaxError:
        tok = tok or self.tok
        return SurfaceSyntaxError(msg, tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("sym", "kw") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        tok = self.tok
        self.pos += 1
        return tok

    def ident(self) -> str:
        if self.tok.kind != "id":
            raise self.error(f"expected identifier, found {self.tok.text or 'end of input'!r}")
        name = self.tok.text
        self.pos += 1
        return name

    def end(self) -> None:
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")

    # kinds

    def kind(self) -> Kind:
        left = self.kind_atom()
        if self.at("=>"):
            self.pos += 1
            return KindArrow(left, self.kind())
        return left

    def kind_atom(self) -> Kind:
        if self.at("*"):
            self.pos += 1
            return STAR
        if self.at("("):
            self.pos += 1
            k = self.kind()
            self.expect(")")
            return k
        raise self.error(f"expected a kind, found {self.tok.text or 'end of input'!r}")

    # types

    def type(self) -> Type:
        if self.at("All"):
            self.pos += 1
            x = self.ident()
            bound = None
            if self.at("<="):
                self.pos += 1
                bound = self.type()
            self.expect(":")
            k = self.kind()
            self.expect(".")
            body = self.type()
            return Forall(x, bound if bound is not None else top_kind(k), k, body)
        if self.at("Lam"):
            self.pos += 1
            x = self.ident()
            self.expect(":")
            k = self.kind()
            self.expect(".")
            return Abs(x, k, self.type())
        left = self.app()
        if self.at("->"):
            self.pos += 1
            return Arrow(left, self.type())
        return left

    def _starts_atom(self) -> bool:
        return self.tok.kind == "id" or self.at("Top") or self.at("(")

    def app(self) -> Type:
        if not self._starts_atom():
            raise self.error(f"expected a type, found {self.tok.text or 'end of input'!r}")
        t = self.atom()
        while self._starts_atom():
            t = App(t, self.atom())
        return t

    def atom(self) -> Type:
        if self.at("Top"):
            self.pos += 1
            return Top()
        if self.at("("):
            self.pos += 1
            t = self.type()
            self.expect(")")
            return t
        tok = self.tok
        name = self.ident()
        if self.at("{"):
            if self.mode == CURRY:
                raise ModeViolation(f"bound annotation on {name!r} in curry mode", self.tok.line, self.tok.col)
            self.pos += 1
            bound = self.type()
            self.expect("}")
            return Var(name, bound)
        if self.mode == CHURCH:
            raise ModeViolation(f"variable {name!r} needs a bound annotation in church mode", tok.line, tok.col)
        return BareVar(name)

    # contexts and judgements

    def entry(self):
        x = self.ident()
        if self.at("<="):
            self.pos += 1
            bound = self.type()
            self.expect(":")
            k = self.kind()
            return x, bound, k
        self.expect(":")
        k = self.kind()
        return x, top_kind(k), k

    def inline_context(self) -> Context:
        ctx = Context()
        if self.at("|-"):
            return ctx
        while True:
            ctx = ctx.extend(*self.entry())
            if not self.at(","):
                return ctx
            self.pos += 1

    def judgement(self):
        ctx = self.inline_context()
        self.expect("|-")
        left = self.type()
        if self.at("<="):
            self.pos += 1
            right = self.type()
            self.expect(":")
            return Subtyping(ctx, left, right, self.kind())
        self.expect(":")
        return Kinding(ctx, left, self.kind())


def parse_type(src: str, mode: str = CHURCH) -> Type:
    p = Parser(src, mode)
    t = p.type()
    p.end()
    return t


def parse_kind(src: str) -> Kind:
    p = Parser(src)
    k = p.kind()
    p.end()
    return k


def parse_context(src: str, mode: str = CHURCH) -> Context:
    """Context file: one entry per line, ``#`` comments, order significant."""
    ctx = Context()
    for lineno, line in enumerate(src.splitlines(), start=1):
        p = Parser(line, mode)
        if p.tok.kind == "eof":
            continue
        for tok in p.tokens:
            tok.line = lineno
        ctx = ctx.extend(*p.entry())
        p.end()
    return ctx


def parse_judgement(src: str, mode: str = CHURCH):
    p = Parser(src, mode)
    j = p.judgement()
    p.end()
    return j


# -- printing ---------------------------------------------------------------

_BINDER, _ARROW_LEFT, _ARG = 0, 1, 2


def print_kind(k: Kind) -> str:
    return str(k)


def print_type(a: Type) -> str:
    return _show(a, _BINDER)


def _show(a: Type, prec: int) -> str:
    match a:
        case Top():
            return "Top"
        case Var(name, bound):
            return f"{name}{{{_show(bound, _BINDER)}}}"
        case BareVar(name):
            return name
        case Arrow(l, r):
            s = f"{_show(l, _ARROW_LEFT)} -> {_show(r, _BINDER)}"
            return s if prec == _BINDER else f"({s})"
        case App(f, x):
            s = f"{_show(f, _ARROW_LEFT)} {_show(x, _ARG)}"
            return s if prec <= _ARROW_LEFT else f"({s})"
        case Abs(x, k, body):
            s = f"Lam {x}:{k}. {_show(body, _BINDER)}"
            return s if prec == _BINDER else f"({s})"
        case Forall(x, bound, k, body):
            if alpha_eq(bound, top_kind(k)):
                s = f"All {x}:{k}. {_show(body, _BINDER)}"
            else:
                s = f"All {x} <= {_show(bound, _BINDER)} : {k}. {_show(body, _BINDER)}"
            return s if prec == _BINDER else f"({s})"
    raise TypeError(f"not a type: {a!r}")


def print_entry(e) -> str:
    if alpha_eq(e.bound, top_kind(e.kind)):
        return f"{e.name} : {e.kind}"
    return f"{e.name} <= {print_type(e.bound)} : {e.kind}"


def print_context(ctx: Context) -> str:
    return ", ".join(print_entry(e) for e in ctx)


def print_context_file(ctx: Context) -> str:
    return "".join(print_entry(e) + "\n" for e in ctx)


def print_judgement(j) -> str:
    ctx = print_context(j.ctx)
    lead = f"{ctx} |- " if ctx else "|- "
    if isinstance(j, Kinding):
        return f"{lead}{print_type(j.subject)} : {j.kind}"
    return f"{lead}{print_type(j.left)} <= {print_type(j.right)} : {j.kind}"
