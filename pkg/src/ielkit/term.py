"""Proof terms, binding, capture-avoiding substitution and alpha-equivalence.

Terms use named variables. Alpha-equivalence is decided on a nameless
(de Bruijn) key, so two terms are alpha-equal exactly when their keys are
equal. Every node caches its free variables and its node count.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .formula import Formula

KEYWORDS = frozenset(
    {"bot", "top", "bel", "in", "case", "of", "p1", "p2", "i1", "i2", "efq", "unit"}
)


class Term:
    __slots__ = ()

    fv: frozenset[str]
    size: int

    def children(self) -> tuple[Term, ...]:
        return ()

    def with_children(self, kids: tuple[Term, ...]) -> Term:
        return self

    def __str__(self) -> str:
        from .syntax import print_term

        return print_term(self)


def _cache(obj, fv, size) -> None:
    object.__setattr__(obj, "fv", fv)
    object.__setattr__(obj, "size", size)


_NOCMP = dict(init=False, repr=False, compare=False, hash=False)


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str
    fv: frozenset = field(**_NOCMP)
    size: int = field(**_NOCMP)

    def __post_init__(self):
        _cache(self, frozenset((self.name,)), 1)


@dataclass(frozen=True, slots=True)
class Lam(Term):
    var: str
    ann: Formula
    body: Term
    fv: frozenset = field(**_NOCMP)
    size: int = field(**_NOCMP)

    def __post_init__(self):
        _cache(self, self.body.fv - {self.var}, 1 + self.body.size)

    def children(self):
        return (self.body,)

    def with_children(self, kids):
        return Lam(self.var, self.ann, kids[0])


@dataclass(frozen=True, slots=True)
class App(Term):
    fun: Term
    arg: Term
    fv: frozenset = field(**_NOCMP)
    size: int = field(**_NOCMP)

    def __post_init__(self):
        _cache(self, self.fun.fv | self.arg.fv, 1 + self.fun.size + self.arg.size)

    def children(self):
        return (self.fun, self.arg)

    def with_children(self, kids):
        return App(kids[0], kids[1])


@dataclass(frozen=True, slots=True)
class Pair(Term):
    fst: Term
    snd: Term
    fv: frozenset = field(**_NOCMP)
    size: int = field(**_NOCMP)

    def __post_init__(self):
        _cache(self, self.fst.fv | self.snd.fv, 1 + self.fst.size + self.snd.size)

    def children(self):
        return (self.fst, self.snd)

    def with_children(self, kids):
        return Pair(kids[0], kids[1])


@dataclass(frozen=True, slots=True)
class Proj(Term):
    index: int
    arg: Term
    fv: frozenset = field(**_NOCMP)
    size: int = field(**_NOCMP)

    def __post_init__(self):
        if self.index not in (1, 2):
            raise ValueError(f"projection index must be 1 or 2, got {self.index}")
        _cache(self, self.arg.fv, 1 + self.arg.size)

    def children(self):
        return (self.arg,)

    def with_children(self, kids):
        return Proj(self.index, kids[0])


@dataclass(frozen=True, slots=True)
class Inj(Term):
    """Injection; ``ann`` is the whole disjunction."""

    index: int
    ann: Formula
    arg: Term
    fv: frozenset = field(**_NOCMP)
    size: int = field(**_NOCMP)

    def __post_init__(self):
        if self.index not in (1, 2):
            raise ValueError(f"injection index must be 1 or 2, got {self.index}")
        _cache(self, self.arg.fv, 1 + self.arg.size)

    def children(self):
        return (self.arg,)

    def with_children(self, kids):
        return Inj(self.index, self.ann, kids[0])


@dataclass(frozen=True, slots=True)
class Case(Term):
    scrut: Term
    x: str
    left: Term
    y: str
    right: Term
    fv: frozenset = field(**_NOCMP)
    size: int = field(**_NOCMP)

    def __post_init__(self):
        _cache(
            self,
            self.scrut.fv | (self.left.fv - {self.x}) | (self.right.fv - {self.y}),
            1 + self.scrut.size + self.left.size + self.right.size,
        )

    def children(self):
        return (self.scrut, self.left, self.right)

    def with_children(self, kids):
        return Case(kids[0], self.x, kids[1], self.y, kids[2])


@dataclass(frozen=True, slots=True)
class Efq(Term):
    ann: Formula
    arg: Term
    fv: frozenset = field(**_NOCMP)
    size: int = field(**_NOCMP)

    def __post_init__(self):
        _cache(self, self.arg.fv, 1 + self.arg.size)

    def children(self):
        return (self.arg,)

    def with_children(self, kids):
        return Efq(self.ann, kids[0])


@dataclass(frozen=True, slots=True)
class Unit(Term):
    arg: Term
    fv: frozenset = field(**_NOCMP)
    size: int = field(**_NOCMP)

    def __post_init__(self):
        _cache(self, self.arg.fv, 1 + self.arg.size)

    def children(self):
        return (self.arg,)

    def with_children(self, kids):
        return Unit(kids[0])


@dataclass(frozen=True, slots=True)
class BoxIntro(Term):
    """``bel x1=t1, ..., xn=tn in body``.

    ``binders`` pairs each bound name with the formula it stands for (the
    argument's type without the box); an annotation may be ``None`` only
    transiently, while the parser resolves it.
    """

    binders: tuple[tuple[str, Optional[Formula]], ...]
    args: tuple[Term, ...]
    body: Term
    fv: frozenset = field(**_NOCMP)
    size: int = field(**_NOCMP)

    def __post_init__(self):
        object.__setattr__(self, "binders", tuple((n, a) for n, a in self.binders))
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.binders) != len(self.args):
            raise ValueError("bel: binder and argument counts differ")
        names = [n for n, _ in self.binders]
        if len(set(names)) != len(names):
            raise ValueError(f"bel: duplicate binder names {names}")
        fv = self.body.fv.difference(names)
        size = 1 + self.body.size
        for a in self.args:
            fv = fv | a.fv
            size += a.size
        _cache(self, fv, size)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.binders)

    def children(self):
        return self.args + (self.body,)

    def with_children(self, kids):
        return BoxIntro(self.binders, tuple(kids[:-1]), kids[-1])


def free_vars(t: Term) -> frozenset[str]:
    return t.fv


# ---------------------------------------------------------------- names

_STEM = re.compile(r"^(.*?)(\d*)$")


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    """A name derived from ``base`` that is not in ``avoid`` and not a keyword."""
    avoid = set(avoid)
    if base not in avoid and base not in KEYWORDS:
        return base
    stem = _STEM.match(base).group(1) or "v"
    for i in itertools.count(1):
        cand = f"{stem}{i}"
        if cand not in avoid and cand not in KEYWORDS:
            return cand
    raise AssertionError("unreachable")


def rename(t: Term, old: str, new: str) -> Term:
    return subst(t, old, Var(new))


# ---------------------------------------------------------------- substitution


def subst(t: Term, x: str, s: Term) -> Term:
    """Capture-avoiding substitution ``t[x := s]``."""
    if x not in t.fv:
        return t
    match t:
        case Var():
            return s
        case Lam(var=y, ann=ann, body=body):
            y, body = _freshen(y, body, x, s)
            return Lam(y, ann, subst(body, x, s))
        case Case(scrut=sc, x=u, left=left, y=v, right=right):
            sc = subst(sc, x, s)
            if u != x:
                u, left = _freshen(u, left, x, s)
                left = subst(left, x, s)
            if v != x:
                v, right = _freshen(v, right, x, s)
                right = subst(right, x, s)
            return Case(sc, u, left, v, right)
        case BoxIntro(binders=binders, args=args, body=body):
            args = tuple(subst(a, x, s) for a in args)
            names = [n for n, _ in binders]
            if x in names or x not in body.fv:
                return BoxIntro(binders, args, body)
            new_binders = []
            taken = set(names) | s.fv | body.fv | {x}
            for n, ann in binders:
                if n in s.fv:
                    m = fresh_name(n, taken)
                    taken.add(m)
                    body = rename(body, n, m)
                    n = m
                new_binders.append((n, ann))
            return BoxIntro(tuple(new_binders), args, subst(body, x, s))
        case _:
            return t.with_children(tuple(subst(c, x, s) for c in t.children()))


def _freshen(y: str, body: Term, x: str, s: Term) -> tuple[str, Term]:
    """Rename binder ``y`` of ``body`` if substituting ``s`` for ``x`` would capture it."""
    if y in s.fv and x in body.fv:
        z = fresh_name(y, s.fv | body.fv | {x})
        return z, rename(body, y, z)
    return y, body


# ---------------------------------------------------------------- alpha equivalence


def alpha_key(t: Term):
    """Nameless representation: bound variables become binder positions."""
    return _key(t, ())


def _lookup(env: tuple, name: str):
    for depth, n in enumerate(reversed(env)):
        if n == name:
            return ("#", depth)
    return name


def _key(t: Term, env: tuple):
    match t:
        case Var(name=n):
            return _lookup(env, n)
        case Lam(var=y, ann=a, body=b):
            return ("lam", a, _key(b, env + (y,)))
        case App(fun=f, arg=a):
            return ("app", _key(f, env), _key(a, env))
        case Pair(fst=a, snd=b):
            return ("pair", _key(a, env), _key(b, env))
        case Proj(index=i, arg=a):
            return ("proj", i, _key(a, env))
        case Inj(index=i, ann=ann, arg=a):
            return ("inj", i, ann, _key(a, env))
        case Case(scrut=sc, x=u, left=l, y=v, right=r):
            return ("case", _key(sc, env), _key(l, env + (u,)), _key(r, env + (v,)))
        case Efq(ann=ann, arg=a):
            return ("efq", ann, _key(a, env))
        case Unit(arg=a):
            return ("unit", _key(a, env))
        case BoxIntro(binders=bs, args=args, body=body):
            inner = env + tuple(n for n, _ in bs)
            return (
                "bel",
                tuple(a for _, a in bs),
                tuple(_key(a, env) for a in args),
                _key(body, inner),
            )
    raise TypeError(f"not a term: {t!r}")


def alpha_eq(t: Term, s: Term) -> bool:
    return t is s or alpha_key(t) == alpha_key(s)


# ---------------------------------------------------------------- traversal


def subterm(t: Term, path: Iterable[int]) -> Term:
    for i in path:
        kids = t.children()
        if not 0 <= i < len(kids):
            raise IndexError(f"invalid path component {i} at {type(t).__name__}")
        t = kids[i]
    return t


def replace_at(t: Term, path: list[int] | tuple[int, ...], new: Term) -> Term:
    if not path:
        return new
    kids = list(t.children())
    i = path[0]
    if not 0 <= i < len(kids):
        raise IndexError(f"invalid path component {i} at {type(t).__name__}")
    kids[i] = replace_at(kids[i], path[1:], new)
    return t.with_children(tuple(kids))


def walk(t: Term, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], Term]]:
    """Pre-order traversal yielding ``(path, subterm)``."""
    yield path, t
    for i, c in enumerate(t.children()):
        yield from walk(c, path + (i,))


def bound_names(t: Term) -> set[str]:
    out: set[str] = set()
    for _, s in walk(t):
        match s:
            case Lam(var=y):
                out.add(y)
            case Case(x=u, y=v):
                out.update((u, v))
            case BoxIntro():
                out.update(s.names)
    return out
