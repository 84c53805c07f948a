"""Syntax-directed type checking of proof terms.

Contexts are sets of hypotheses: the premises of a ``bel`` may share
hypotheses with its body, and the body sees the whole ambient context next
to the bound names.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .formula import BOT, TOP, Box, Conj, Disj, Formula, Impl
from .syntax import print_formula
from .term import (
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


class Context(Mapping[str, Formula]):
    """An immutable finite map from variable names to formulas."""

    __slots__ = ("_map",)

    def __init__(self, bindings: Union[Mapping[str, Formula], Iterable[tuple[str, Formula]], None] = None):
        self._map: dict[str, Formula] = dict(bindings or {})

    def __getitem__(self, name: str) -> Formula:
        return self._map[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __repr__(self) -> str:
        inner = ", ".join(f"{n}: {print_formula(f)}" for n, f in self._map.items())
        return f"Context({{{inner}}})"

    def extend(self, name: str, formula: Formula) -> Context:
        new = dict(self._map)
        new[name] = formula
        return Context(new)

    def union(self, other: Mapping[str, Formula]) -> Context:
        new = dict(self._map)
        for name, f in other.items():
            if name in new and new[name] != f:
                raise ValueError(f"conflicting hypotheses for {name}")
            new[name] = f
        return Context(new)

    def formulas(self) -> frozenset[Formula]:
        return frozenset(self._map.values())


class TypeCheckError(Exception):
    """A typing failure located at ``path`` (child indices from the root)."""

    def __init__(self, path: Sequence[int], message: str,
                 expected: Union[Formula, str, None] = None,
                 found: Union[Formula, str, None] = None):
        self.path = list(path)
        self.message = message
        self.expected = expected
        self.found = found
        super().__init__(self.render())

    @staticmethod
    def _show(x: Union[Formula, str, None]) -> Optional[str]:
        if x is None or isinstance(x, str):
            return x
        return print_formula(x)

    def render(self) -> str:
        where = "/".join(map(str, self.path)) or "<root>"
        if self.expected is not None or self.found is not None:
            return (f"{where}: expected {self._show(self.expected) or '?'}, "
                    f"found {self._show(self.found) or '?'}")
        return f"{where}: {self.message}"

    def to_json(self) -> dict:
        return {
            "path": self.path,
            "expected": self._show(self.expected),
            "found": self._show(self.found),
            "message": self.message,
        }


def infer(ctx: Mapping[str, Formula], t: Term) -> Formula:
    """The unique formula ``A`` with ``ctx |- t : A``; raises :class:`TypeCheckError`."""
    return _infer(dict(ctx), t, [])


def check(ctx: Mapping[str, Formula], t: Term, f: Formula) -> bool:
    try:
        return infer(ctx, t) == f
    except TypeCheckError:
        return False


def _infer(ctx: dict, t: Term, path: list[int]) -> Formula:
    match t:
        case Var(name=n):
            try:
                return ctx[n]
            except KeyError:
                raise TypeCheckError(path, f"unbound variable {n}") from None
        case Lam(var=x, ann=a, body=b):
            return Impl(a, _infer({**ctx, x: a}, b, path + [0]))
        case App(fun=f, arg=a):
            ft = _infer(ctx, f, path + [0])
            if not isinstance(ft, Impl):
                raise TypeCheckError(path + [0], "applying a non-function",
                                     "an implication", ft)
            at = _infer(ctx, a, path + [1])
            if at != ft.lhs:
                raise TypeCheckError(path + [1], "argument mismatch", ft.lhs, at)
            return ft.rhs
        case Pair(fst=a, snd=b):
            return Conj(_infer(ctx, a, path + [0]), _infer(ctx, b, path + [1]))
        case Proj(index=i, arg=a):
            at = _infer(ctx, a, path + [0])
            if not isinstance(at, Conj):
                raise TypeCheckError(path + [0], "projection from a non-conjunction",
                                     "a conjunction", at)
            return at.lhs if i == 1 else at.rhs
        case Inj(index=i, ann=ann, arg=a):
            if not isinstance(ann, Disj):
                raise TypeCheckError(path, "injection annotation is not a disjunction",
                                     "a disjunction", ann)
            want = ann.lhs if i == 1 else ann.rhs
            at = _infer(ctx, a, path + [0])
            if at != want:
                raise TypeCheckError(path + [0], "injected term mismatch", want, at)
            return ann
        case Case(scrut=s, x=x, left=l, y=y, right=r):
            st = _infer(ctx, s, path + [0])
            if not isinstance(st, Disj):
                raise TypeCheckError(path + [0], "case on a non-disjunction",
                                     "a disjunction", st)
            lt = _infer({**ctx, x: st.lhs}, l, path + [1])
            rt = _infer({**ctx, y: st.rhs}, r, path + [2])
            if lt != rt:
                raise TypeCheckError(path + [2], "case branches disagree", lt, rt)
            return lt
        case Efq(ann=ann, arg=a):
            at = _infer(ctx, a, path + [0])
            if at != BOT:
                raise TypeCheckError(path + [0], "efq of a non-absurdity", BOT, at)
            return ann
        case Unit(arg=a):
            _infer(ctx, a, path + [0])
            return TOP
        case BoxIntro(binders=bs, args=args, body=body):
            inner = dict(ctx)
            for i, ((name, ann), arg) in enumerate(zip(bs, args)):
                if ann is None:
                    raise TypeCheckError(path, f"bel binder {name} has no annotation")
                at = _infer(ctx, arg, path + [i])
                if at != Box(ann):
                    raise TypeCheckError(path + [i], f"bel argument for {name}",
                                         Box(ann), at)
                inner[name] = ann
            return Box(_infer(inner, body, path + [len(args)]))
    raise TypeCheckError(path, f"not a term: {t!r}")


def typed_subterms(ctx: Mapping[str, Formula], t: Term):
    """Yield ``(path, local_context, subterm, formula)`` for every node of ``t``.

    Assumes ``t`` is well typed in ``ctx``.
    """
    stack = [((), dict(ctx), t)]
    while stack:
        path, env, s = stack.pop()
        yield path, env, s, _infer(env, s, list(path))
        match s:
            case Lam(var=x, ann=a, body=b):
                stack.append((path + (0,), {**env, x: a}, b))
            case Case(scrut=sc, x=x, left=l, y=y, right=r):
                st = _infer(env, sc, list(path))
                stack.append((path + (2,), {**env, y: st.rhs}, r))
                stack.append((path + (1,), {**env, x: st.lhs}, l))
                stack.append((path + (0,), env, sc))
            case BoxIntro(binders=bs, args=args, body=body):
                stack.append((path + (len(args),), {**env, **dict(bs)}, body))
                for i in reversed(range(len(args))):
                    stack.append((path + (i,), env, args[i]))
            case _:
                for i in reversed(range(len(s.children()))):
                    stack.append((path + (i,), env, s.children()[i]))


def context_at(ctx: Mapping[str, Formula], t: Term, path: Sequence[int]) -> dict:
    """The typing context in force at ``path`` inside ``t``."""
    env = dict(ctx)
    for i in path:
        match t:
            case Lam(var=x, ann=a):
                env = {**env, x: a}
            case Case(scrut=sc, x=x, y=y) if i > 0:
                st = _infer(env, sc, [])
                if not isinstance(st, Disj):
                    raise TypeCheckError([], "case on a non-disjunction", "a disjunction", st)
                env = {**env, x: st.lhs} if i == 1 else {**env, y: st.rhs}
            case BoxIntro(binders=bs) if i == len(bs):
                env = {**env, **dict(bs)}
        t = t.children()[i]
    return env


# ---------------------------------------------------------------- annotation resolution


class UnresolvedAnnotation(Exception):
    pass


def resolve_annotations(t: Term, ctx: Mapping[str, Formula]) -> Term:
    """Fill in missing ``bel`` binder formulas from the types of their arguments."""
    if not _has_unresolved(t):
        return t
    return _resolve(t, dict(ctx))


def _has_unresolved(t: Term) -> bool:
    if isinstance(t, BoxIntro) and any(a is None for _, a in t.binders):
        return True
    return any(_has_unresolved(c) for c in t.children())


def _resolve(t: Term, env: dict) -> Term:
    match t:
        case Lam(var=x, ann=a, body=b):
            return Lam(x, a, _resolve(b, {**env, x: a}))
        case Case(scrut=sc, x=x, left=l, y=y, right=r):
            sc = _resolve(sc, env)
            try:
                st = infer(env, sc)
            except TypeCheckError:
                st = None
            lenv, renv = dict(env), dict(env)
            lenv.pop(x, None)
            renv.pop(y, None)
            if isinstance(st, Disj):
                lenv[x], renv[y] = st.lhs, st.rhs
            return Case(sc, x, _resolve(l, lenv), y, _resolve(r, renv))
        case BoxIntro(binders=bs, args=args, body=body):
            args = tuple(_resolve(a, env) for a in args)
            binders = []
            for (name, ann), arg in zip(bs, args):
                if ann is None:
                    try:
                        at = infer(env, arg)
                    except TypeCheckError as exc:
                        raise UnresolvedAnnotation(
                            f"cannot resolve the formula of bel binder {name!r} "
                            f"({exc.render()}); write `bel {name}:A = ...`") from None
                    if not isinstance(at, Box):
                        raise UnresolvedAnnotation(
                            f"bel binder {name!r} is bound to a term of type "
                            f"{print_formula(at)}, which is not boxed")
                    ann = at.body
                binders.append((name, ann))
            inner = {**env, **dict(binders)}
            return BoxIntro(tuple(binders), args, _resolve(body, inner))
        case _:
            kids = t.children()
            if not kids:
                return t
            return t.with_children(tuple(_resolve(c, env) for c in kids))


# ---------------------------------------------------------------- axiom catalogue

def _lam(x: str, a: Formula, body: Term) -> Lam:
    return Lam(x, a, body)


def _then1(a, b):
    return _lam("a", a, _lam("b", b, Var("a")))


def _then2(a, b, c):
    return _lam("f", Impl(a, Impl(b, c)), _lam("g", Impl(a, b), _lam(
        "x", a, App(App(Var("f"), Var("x")), App(Var("g"), Var("x"))))))


def _and_intro(a, b):
    return _lam("a", a, _lam("b", b, Pair(Var("a"), Var("b"))))


def _and_elim1(a, b):
    return _lam("c", Conj(a, b), Proj(1, Var("c")))


def _and_elim2(a, b):
    return _lam("c", Conj(a, b), Proj(2, Var("c")))


def _or_intro1(a, b):
    return _lam("a", a, Inj(1, Disj(a, b), Var("a")))


def _or_intro2(a, b):
    return _lam("b", b, Inj(2, Disj(a, b), Var("b")))


def _or_elim(a, b, c):
    return _lam("f", Impl(a, c), _lam("g", Impl(b, c), _lam("d", Disj(a, b), Case(
        Var("d"), "x", App(Var("f"), Var("x")), "y", App(Var("g"), Var("y"))))))


def _efq(a):
    return _lam("z", BOT, Efq(a, Var("z")))


def _k_box(a, b):
    return _lam("f", Box(Impl(a, b)), _lam("a", Box(a), BoxIntro(
        (("g", Impl(a, b)), ("u", a)), (Var("f"), Var("a")), App(Var("g"), Var("u")))))


def _coreflection(a):
    return _lam("x", a, BoxIntro((), (), Var("x")))


AXIOM_SCHEMES = {
    "then-1": (2, _then1, lambda a, b: Impl(a, Impl(b, a))),
    "then-2": (3, _then2, lambda a, b, c: Impl(Impl(a, Impl(b, c)),
                                               Impl(Impl(a, b), Impl(a, c)))),
    "and-intro": (2, _and_intro, lambda a, b: Impl(a, Impl(b, Conj(a, b)))),
    "and-elim-1": (2, _and_elim1, lambda a, b: Impl(Conj(a, b), a)),
    "and-elim-2": (2, _and_elim2, lambda a, b: Impl(Conj(a, b), b)),
    "or-intro-1": (2, _or_intro1, lambda a, b: Impl(a, Disj(a, b))),
    "or-intro-2": (2, _or_intro2, lambda a, b: Impl(b, Disj(a, b))),
    "or-elim": (3, _or_elim, lambda a, b, c: Impl(Impl(a, c), Impl(Impl(b, c),
                                                                   Impl(Disj(a, b), c)))),
    "efq": (1, _efq, lambda a: Impl(BOT, a)),
    "K-box": (2, _k_box, lambda a, b: Impl(Box(Impl(a, b)), Impl(Box(a), Box(b)))),
    "coreflection": (1, _coreflection, lambda a: Impl(a, Box(a))),
}


class UnknownScheme(ValueError):
    pass


def _lookup_scheme(scheme: str, parts: Sequence[Formula]):
    try:
        arity, build, instance = AXIOM_SCHEMES[scheme]
    except KeyError:
        raise UnknownScheme(f"unknown axiom scheme {scheme!r}") from None
    if len(parts) != arity:
        raise ValueError(f"scheme {scheme} takes {arity} formulas, got {len(parts)}")
    return build, instance


def axiom_instance(scheme: str, parts: Sequence[Formula]) -> Formula:
    _, instance = _lookup_scheme(scheme, parts)
    return instance(*parts)


def ipc_axiom_term(scheme: str, parts: Sequence[Formula]) -> Term:
    """A closed proof term of the axiom instance ``scheme(parts)``."""
    build, _ = _lookup_scheme(scheme, parts)
    return build(*parts)
