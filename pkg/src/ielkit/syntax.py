"""Concrete syntax for formulas and proof terms.

Formulas, loosest to tightest: ``A -> B`` (right associative), ``A \\/ B``,
``A /\\ B`` (both left associative), ``[] A``; atoms are lower-case
identifiers, plus ``bot`` and ``top``.

Terms::

    x   \\x:A. t   t s   <t, s>   p1 t   p2 t   i1[A] t   i2[A] t
    case t of {x => t1 | y => t2}   efq[A] t   unit t
    bel x1=t1, ..., xn=tn in s      bel x1:A1 = t1, ... in s

Application is left associative; ``p1``, ``p2``, ``i1``, ``i2``, ``efq`` and
``unit`` take a single argument and bind tighter than application. A ``bel``
binder may carry the formula it stands for; when it does not, the parser
recovers it from the type of the bound argument.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Optional

from .formula import BOT, TOP, Atom, Bot, Box, Conj, Disj, Formula, Impl, Top
from .term import (
    KEYWORDS,
    App,
    BoxIntro,
    Case,
    Efq,
    Inj,
    Lam,
    Pair,
    Proj,
    Term,
    Unit,
    Var,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # "id", "kw", "sym" or "eof"
    text: str
    line: int
    col: int


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<box>\[\s*\])
  | (?P<id>[a-z][a-zA-Z0-9_]*)
  | (?P<sym>->|=>|/\\|\\/|[\\:.()<>,\[\]{}|=])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "box":
            tokens.append(Token("sym", "[]", line, col))
        elif kind == "id":
            tokens.append(Token("kw" if chunk in KEYWORDS else "id", chunk, line, col))
        elif kind == "sym":
            tokens.append(Token("sym", chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + chunk.rindex("\n") + 1
        pos = m.end()
    col = pos - line_start + 1
    tokens.append(Token("eof", "", line, col))
    return tokens


_PREFIX_KW = {"p1", "p2", "i1", "i2", "efq", "unit"}


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("sym", "kw") and self.tok.text == text

    def advance(self) -> Token:
        tok = self.tok
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def ident(self) -> str:
        if self.tok.kind != "id":
            found = self.tok.text or "end of input"
            raise self.error(f"expected identifier, found {found!r}")
        return self.advance().text

    def finish(self) -> None:
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")

    # formulas

    def formula(self) -> Formula:
        lhs = self.disj()
        if self.at("->"):
            self.advance()
            return Impl(lhs, self.formula())
        return lhs

    def disj(self) -> Formula:
        f = self.conj()
        while self.at("\\/"):
            self.advance()
            f = Disj(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.at("/\\"):
            self.advance()
            f = Conj(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.tok
        if self.at("[]"):
            self.advance()
            return Box(self.unary())
        if self.at("("):
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        if self.at("bot"):
            self.advance()
            return BOT
        if self.at("top"):
            self.advance()
            return TOP
        if tok.kind == "id":
            self.advance()
            return Atom(tok.text)
        found = tok.text or "end of input"
        raise self.error(f"expected a formula, found {found!r}")

    # terms

    def term(self) -> Term:
        if self.at("\\"):
            return self.lam()
        if self.at("bel"):
            return self.bel()
        return self.app()

    def lam(self) -> Term:
        self.expect("\\")
        x = self.ident()
        self.expect(":")
        ann = self.formula()
        self.expect(".")
        return Lam(x, ann, self.term())

    def bel(self) -> Term:
        start = self.expect("bel")
        binders, args = [], []
        if not self.at("in"):
            while True:
                name = self.ident()
                ann = None
                if self.at(":"):
                    self.advance()
                    ann = self.formula()
                self.expect("=")
                binders.append((name, ann))
                args.append(self.term())
                if not self.at(","):
                    break
                self.advance()
        self.expect("in")
        body = self.term()
        try:
            return BoxIntro(tuple(binders), tuple(args), body)
        except ValueError as exc:
            raise self.error(str(exc), start) from None

    def starts_prefix(self) -> bool:
        tok = self.tok
        if tok.kind == "id":
            return True
        if tok.kind == "kw":
            return tok.text in _PREFIX_KW or tok.text == "case"
        return tok.kind == "sym" and tok.text in ("(", "<")

    def app(self) -> Term:
        if not self.starts_prefix():
            found = self.tok.text or "end of input"
            raise self.error(f"expected a term, found {found!r}")
        t = self.prefix()
        while True:
            if self.starts_prefix():
                t = App(t, self.prefix())
            elif self.at("\\") or self.at("bel"):
                return App(t, self.term())
            else:
                return t

    def prefix(self) -> Term:
        tok = self.tok
        if tok.kind == "kw" and tok.text in _PREFIX_KW:
            self.advance()
            if tok.text in ("p1", "p2"):
                return Proj(int(tok.text[1]), self.prefix())
            if tok.text == "unit":
                return Unit(self.prefix())
            self.expect("[")
            ann = self.formula()
            self.expect("]")
            if tok.text == "efq":
                return Efq(ann, self.prefix())
            return Inj(int(tok.text[1]), ann, self.prefix())
        return self.atom()

    def atom(self) -> Term:
        tok = self.tok
        if tok.kind == "id":
            self.advance()
            return Var(tok.text)
        if self.at("("):
            self.advance()
            t = self.term()
            self.expect(")")
            return t
        if self.at("<"):
            self.advance()
            a = self.term()
            self.expect(",")
            b = self.term()
            self.expect(">")
            return Pair(a, b)
        if self.at("case"):
            self.advance()
            scrut = self.term()
            self.expect("of")
            self.expect("{")
            x = self.ident()
            self.expect("=>")
            left = self.term()
            self.expect("|")
            y = self.ident()
            self.expect("=>")
            right = self.term()
            self.expect("}")
            return Case(scrut, x, left, y, right)
        found = tok.text or "end of input"
        raise self.error(f"expected a term, found {found!r}")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    p.finish()
    return f


def parse_term(text: str, ctx: Optional[Mapping[str, Formula]] = None) -> Term:
    """Parse a term; unannotated ``bel`` binders are resolved against ``ctx``."""
    p = _Parser(text)
    t = p.term()
    p.finish()
    from .typecheck import UnresolvedAnnotation, resolve_annotations

    try:
        return resolve_annotations(t, ctx or {})
    except UnresolvedAnnotation as exc:
        raise ParseError(str(exc), 1, 1) from None


# ---------------------------------------------------------------- printing

_F_IMPL, _F_DISJ, _F_CONJ, _F_BOX = 1, 2, 3, 4


def print_formula(f: Formula, level: int = 0) -> str:
    match f:
        case Atom(name=n):
            return n
        case Bot():
            return "bot"
        case Top():
            return "top"
        case Box(body=b):
            return "[] " + print_formula(b, _F_BOX)
        case Impl(lhs=a, rhs=b):
            s, mine = f"{print_formula(a, _F_DISJ)} -> {print_formula(b, _F_IMPL)}", _F_IMPL
        case Disj(lhs=a, rhs=b):
            s, mine = f"{print_formula(a, _F_DISJ)} \\/ {print_formula(b, _F_CONJ)}", _F_DISJ
        case Conj(lhs=a, rhs=b):
            s, mine = f"{print_formula(a, _F_CONJ)} /\\ {print_formula(b, _F_BOX)}", _F_CONJ
        case _:
            raise TypeError(f"not a formula: {f!r}")
    return f"({s})" if level > mine else s


_T_TOP, _T_APP, _T_PREFIX, _T_ATOM = 0, 1, 2, 3


def print_term(t: Term, level: int = 0) -> str:
    match t:
        case Var(name=n):
            return n
        case Pair(fst=a, snd=b):
            return f"<{print_term(a)}, {print_term(b)}>"
        case Case(scrut=s, x=x, left=l, y=y, right=r):
            return f"case {print_term(s)} of {{{x} => {print_term(l)} | {y} => {print_term(r)}}}"
        case Lam(var=x, ann=a, body=b):
            s, mine = f"\\{x}:{print_formula(a)}. {print_term(b)}", _T_TOP
        case BoxIntro(binders=bs, args=args, body=b):
            if bs:
                parts = ", ".join(
                    f"{n}:{print_formula(a)} = {print_term(arg)}" if a is not None
                    else f"{n} = {print_term(arg)}"
                    for (n, a), arg in zip(bs, args)
                )
                s = f"bel {parts} in {print_term(b)}"
            else:
                s = f"bel in {print_term(b)}"
            mine = _T_TOP
        case App(fun=f, arg=a):
            s, mine = f"{print_term(f, _T_APP)} {print_term(a, _T_ATOM)}", _T_APP
        case Proj(index=i, arg=a):
            s, mine = f"p{i} {print_term(a, _T_PREFIX)}", _T_PREFIX
        case Inj(index=i, ann=ann, arg=a):
            s, mine = f"i{i}[{print_formula(ann)}] {print_term(a, _T_PREFIX)}", _T_PREFIX
        case Efq(ann=ann, arg=a):
            s, mine = f"efq[{print_formula(ann)}] {print_term(a, _T_PREFIX)}", _T_PREFIX
        case Unit(arg=a):
            s, mine = f"unit {print_term(a, _T_PREFIX)}", _T_PREFIX
        case _:
            raise TypeError(f"not a term: {t!r}")
    return f"({s})" if level > mine else s
