"""Continuation-passing translations into implicational simple type theory.

The target has arrow types over the source atoms plus a reserved answer
atom ``q``; ``~X`` abbreviates ``X -> q``. A source formula ``A`` is sent to
``~~A°`` (:func:`neg_type`), with

    p°        = p
    (A->B)°   = neg_type(A) -> neg_type(B)
    (A/\\B)°   = ~(neg_type(A) -> ~neg_type(B))
    (A\\/B)°   = ~neg_type(A) -> ~~neg_type(B)
    ([]A)°    = ~~A°   (= neg_type(A))

Two term translations are provided: :func:`cps` (every clause introduces a
continuation) and :func:`cps_mod`, built on the infix :func:`colon` operator,
which contracts the administrative redexes of :func:`cps` at translation time.
Both are type directed, so every target binder is annotated. Fresh target
variables start with an underscore and cannot clash with source names.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .formula import Atom, Box, Conj, Disj, Formula, Impl
from .term import App, BoxIntro, Case, Inj, Lam, Pair, Proj, Term, Var, bound_names, rename
from .typecheck import infer


class CpsError(ValueError):
    pass


# ---------------------------------------------------------------- target syntax


class SimpleType:
    __slots__ = ()

    def __str__(self) -> str:
        return print_stype(self)


@dataclass(frozen=True, slots=True)
class SAtom(SimpleType):
    name: str
    text: str = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "text", self.name)


@dataclass(frozen=True, slots=True)
class Arrow(SimpleType):
    lhs: SimpleType
    rhs: SimpleType
    text: str = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "text", f"({self.lhs.text}>{self.rhs.text})")


ANSWER = SAtom("q")


def neg(t: SimpleType) -> SimpleType:
    return Arrow(t, ANSWER)


class SttTerm:
    __slots__ = ()

    fv: frozenset[str]
    size: int

    def __str__(self) -> str:
        return print_stt(self)


_NOCMP = dict(init=False, repr=False, compare=False, hash=False)


@dataclass(frozen=True, slots=True)
class SVar(SttTerm):
    name: str
    fv: frozenset = field(**_NOCMP)
    size: int = field(**_NOCMP)

    def __post_init__(self):
        object.__setattr__(self, "fv", frozenset((self.name,)))
        object.__setattr__(self, "size", 1)


@dataclass(frozen=True, slots=True)
class SLam(SttTerm):
    var: str
    ann: SimpleType
    body: SttTerm
    fv: frozenset = field(**_NOCMP)
    size: int = field(**_NOCMP)

    def __post_init__(self):
        object.__setattr__(self, "fv", self.body.fv - {self.var})
        object.__setattr__(self, "size", 1 + self.body.size)


@dataclass(frozen=True, slots=True)
class SApp(SttTerm):
    fun: SttTerm
    arg: SttTerm
    fv: frozenset = field(**_NOCMP)
    size: int = field(**_NOCMP)

    def __post_init__(self):
        object.__setattr__(self, "fv", self.fun.fv | self.arg.fv)
        object.__setattr__(self, "size", 1 + self.fun.size + self.arg.size)


def sapp(f: SttTerm, *args: SttTerm) -> SttTerm:
    for a in args:
        f = SApp(f, a)
    return f


def print_stype(t: SimpleType, left: bool = False) -> str:
    if isinstance(t, SAtom):
        return t.name
    s = f"{print_stype(t.lhs, True)} -> {print_stype(t.rhs)}"
    return f"({s})" if left else s


def print_stt(m: SttTerm, level: int = 0) -> str:
    match m:
        case SVar(name=n):
            return n
        case SLam(var=x, ann=a, body=b):
            s = f"\\{x}:{print_stype(a)}. {print_stt(b)}"
            return f"({s})" if level > 0 else s
        case SApp(fun=f, arg=a):
            s = f"{print_stt(f, 1)} {print_stt(a, 2)}"
            return f"({s})" if level > 1 else s
    raise TypeError(f"not a target term: {m!r}")


# ---------------------------------------------------------------- types


def pos_type(f: Formula) -> SimpleType:
    """``A°``."""
    match f:
        case Atom(name=n):
            if n == ANSWER.name:
                raise CpsError(f"atom {n!r} is reserved for the answer type")
            return SAtom(n)
        case Impl(lhs=a, rhs=b):
            return Arrow(neg_type(a), neg_type(b))
        case Conj(lhs=a, rhs=b):
            return neg(Arrow(neg_type(a), neg(neg_type(b))))
        case Disj(lhs=a, rhs=b):
            return Arrow(neg(neg_type(a)), neg(neg(neg_type(b))))
        case Box(body=a):
            return neg_type(a)
    raise CpsError(f"no translation for {f}: bot and top are outside the CPS layer")


def neg_type(f: Formula) -> SimpleType:
    """``~~A°``."""
    return neg(neg(pos_type(f)))


def translate_context(ctx: Mapping[str, Formula]) -> dict[str, SimpleType]:
    return {x: neg_type(a) for x, a in ctx.items()}


# ---------------------------------------------------------------- translations


class _Translator:
    def __init__(self, ctx: Mapping[str, Formula], source: Optional[Term] = None):
        self.ctx = dict(ctx)
        self.counter = itertools.count(1)
        self.avoid = set(ctx)
        if source is not None:
            self.avoid |= source.fv | bound_names(source)

    def fresh(self, stem: str) -> str:
        while True:
            name = f"_{stem}{next(self.counter)}"
            if name not in self.avoid:
                return name

    def type_of(self, t: Term, env: dict) -> Formula:
        return infer(env, t)

    def fresh_binder(self, x: str, body: Term) -> tuple[str, Term]:
        z = self.fresh(x.lstrip("_").rstrip("0123456789") or "x")
        return z, rename(body, x, z)

    # overline translation

    def bar(self, t: Term, env: dict) -> tuple[SttTerm, Formula]:
        match t:
            case Var(name=x):
                a = env[x]
                k = self.fresh("k")
                return SLam(k, neg(pos_type(a)), SApp(SVar(x), SVar(k))), a
            case Lam(var=x, ann=a, body=b):
                bb, bt = self.bar(b, {**env, x: a})
                f = Impl(a, bt)
                k = self.fresh("k")
                return SLam(k, neg(pos_type(f)), SApp(SVar(k), SLam(x, neg_type(a), bb))), f
            case App(fun=fn, arg=a):
                fb, ft = self.bar(fn, env)
                ab, _ = self.bar(a, env)
                k, m = self.fresh("k"), self.fresh("m")
                return SLam(k, neg(pos_type(ft.rhs)), SApp(fb, SLam(
                    m, pos_type(ft), sapp(SVar(m), ab, SVar(k))))), ft.rhs
            case Pair(fst=a, snd=b):
                ab, at = self.bar(a, env)
                bb, bt = self.bar(b, env)
                f = Conj(at, bt)
                k, u = self.fresh("k"), self.fresh("u")
                return SLam(k, neg(pos_type(f)), SApp(SVar(k), SLam(
                    u, Arrow(neg_type(at), neg(neg_type(bt))), sapp(SVar(u), ab, bb)))), f
            case Proj(index=idx, arg=a):
                ab, at = self.bar(a, env)
                res = at.lhs if idx == 1 else at.rhs
                k, u, i, j = (self.fresh(s) for s in "kuij")
                pick = i if idx == 1 else j
                return SLam(k, neg(pos_type(res)), SApp(ab, SLam(u, pos_type(at), SApp(
                    SVar(u), SLam(i, neg_type(at.lhs), SLam(j, neg_type(at.rhs), SApp(
                        SVar(pick), SVar(k)))))))), res
            case Inj(index=idx, ann=d, arg=a):
                ab, _ = self.bar(a, env)
                k, i, j = (self.fresh(s) for s in "kij")
                pick = i if idx == 1 else j
                return SLam(k, neg(pos_type(d)), SApp(SVar(k), SLam(
                    i, neg(neg_type(d.lhs)), SLam(j, neg(neg_type(d.rhs)),
                                                  SApp(SVar(pick), ab))))), d
            case Case(scrut=s, x=x, left=l, y=y, right=r):
                sb, st = self.bar(s, env)
                lb, ct = self.bar(l, {**env, x: st.lhs})
                rb, _ = self.bar(r, {**env, y: st.rhs})
                k, m = self.fresh("k"), self.fresh("m")
                return SLam(k, neg(pos_type(ct)), SApp(sb, SLam(m, pos_type(st), sapp(
                    SVar(m),
                    SLam(x, neg_type(st.lhs), SApp(lb, SVar(k))),
                    SLam(y, neg_type(st.rhs), SApp(rb, SVar(k))))))), ct
            case BoxIntro():
                t = self._separate_binders(t, frozenset())
                inner = {**env, **dict(t.binders)}
                sb, bt = self.bar(t.body, inner)
                k = self.fresh("k")
                cont: SttTerm = SApp(SVar(k), sb)
                for (x, a), arg in reversed(list(zip(t.binders, t.args))):
                    argb, _ = self.bar(arg, env)
                    cont = SApp(argb, SLam(x, neg_type(a), cont))
                return SLam(k, neg(pos_type(Box(bt))), cont), Box(bt)
        raise CpsError(f"no CPS translation for {type(t).__name__}")

    def _separate_binders(self, t: BoxIntro, avoid: frozenset[str]) -> BoxIntro:
        """Rename bel binders that would capture names free in later arguments
        (the translation nests later arguments under earlier binders) or in
        ``avoid``."""
        body = t.body
        binders = []
        for i, (x, a) in enumerate(t.binders):
            later = set(avoid)
            for arg in t.args[i + 1:]:
                later |= arg.fv
            if x in later:
                x2, body = self.fresh_binder(x, body)
                x = x2
            binders.append((x, a))
        return BoxIntro(tuple(binders), t.args, body)

    # colon operator

    def mod(self, t: Term, env: dict) -> SttTerm:
        a = self.type_of(t, env)
        k = self.fresh("k")
        return SLam(k, neg(pos_type(a)), self.colon(t, SVar(k), env))

    def colon(self, t: Term, r: SttTerm, env: dict) -> SttTerm:
        match t:
            case Var(name=x):
                return SApp(SVar(x), r)
            case Lam(var=x, ann=a, body=b):
                return SApp(r, SLam(x, neg_type(a), self.mod(b, {**env, x: a})))
            case App(fun=fn, arg=a):
                ft = self.type_of(fn, env)
                m = self.fresh("m")
                return self.colon(fn, SLam(m, pos_type(ft), sapp(SVar(m), self.mod(a, env), r)), env)
            case Pair(fst=a, snd=b):
                at, bt = self.type_of(a, env), self.type_of(b, env)
                u = self.fresh("u")
                return SApp(r, SLam(u, Arrow(neg_type(at), neg(neg_type(bt))),
                                    sapp(SVar(u), self.mod(a, env), self.mod(b, env))))
            case Proj(index=idx, arg=a):
                at = self.type_of(a, env)
                u, i, j = (self.fresh(s) for s in "uij")
                pick = i if idx == 1 else j
                return self.colon(a, SLam(u, pos_type(at), SApp(SVar(u), SLam(
                    i, neg_type(at.lhs), SLam(j, neg_type(at.rhs), SApp(SVar(pick), r))))), env)
            case Inj(index=idx, ann=d, arg=a):
                i, j = self.fresh("i"), self.fresh("j")
                pick = i if idx == 1 else j
                return SApp(r, SLam(i, neg(neg_type(d.lhs)), SLam(
                    j, neg(neg_type(d.rhs)), SApp(SVar(pick), self.mod(a, env)))))
            case Case(scrut=s, x=x, left=l, y=y, right=rr):
                st = self.type_of(s, env)
                if x in r.fv:
                    x, l = self.fresh_binder(x, l)
                if y in r.fv:
                    y, rr = self.fresh_binder(y, rr)
                m = self.fresh("m")
                return self.colon(s, SLam(m, pos_type(st), sapp(
                    SVar(m),
                    SLam(x, neg_type(st.lhs), self.colon(l, r, {**env, x: st.lhs})),
                    SLam(y, neg_type(st.rhs), self.colon(rr, r, {**env, y: st.rhs})))), env)
            case BoxIntro():
                t = self._separate_binders(t, r.fv)
                inner = {**env, **dict(t.binders)}
                cont: SttTerm = SApp(r, self.mod(t.body, inner))
                for (x, a), arg in reversed(list(zip(t.binders, t.args))):
                    cont = self.colon(arg, SLam(x, neg_type(a), cont), env)
                return cont
        raise CpsError(f"no CPS translation for {type(t).__name__}")


def cps(t: Term, ctx: Optional[Mapping[str, Formula]] = None) -> SttTerm:
    """The plain CPS image of ``t`` (free variables typed by ``ctx``)."""
    tr = _Translator(ctx or {}, t)
    return tr.bar(t, dict(tr.ctx))[0]


def cps_mod(t: Term, ctx: Optional[Mapping[str, Formula]] = None) -> SttTerm:
    """The modified CPS image ``\\k. (t : k)``."""
    tr = _Translator(ctx or {}, t)
    return tr.mod(t, dict(tr.ctx))


def colon(t: Term, r: SttTerm, ctx: Optional[Mapping[str, Formula]] = None) -> SttTerm:
    """``t : r``. Binders of ``t`` that occur free in ``r`` are renamed first."""
    tr = _Translator(ctx or {}, t)
    tr.avoid |= r.fv
    return tr.colon(t, r, dict(tr.ctx))


# ---------------------------------------------------------------- target typing


class SttTypeError(TypeError):
    pass


def stt_infer(ctx: Mapping[str, SimpleType], m: SttTerm) -> SimpleType:
    match m:
        case SVar(name=x):
            if x not in ctx:
                raise SttTypeError(f"unbound variable {x}")
            return ctx[x]
        case SLam(var=x, ann=a, body=b):
            return Arrow(a, stt_infer({**ctx, x: a}, b))
        case SApp(fun=f, arg=a):
            ft = stt_infer(ctx, f)
            if not isinstance(ft, Arrow):
                raise SttTypeError(f"applying {print_stt(f)} of type {print_stype(ft)}")
            at = stt_infer(ctx, a)
            if at != ft.lhs:
                raise SttTypeError(
                    f"argument {print_stt(a)} has type {print_stype(at)}, "
                    f"expected {print_stype(ft.lhs)}")
            return ft.rhs
    raise SttTypeError(f"not a target term: {m!r}")


# ---------------------------------------------------------------- binding


def stt_key(m: SttTerm) -> str:
    """A nameless rendering; two terms are alpha-equal iff their keys are equal."""
    out: list[str] = []
    _key(m, {}, 0, out)
    return "".join(out)


def _key(m: SttTerm, env: dict, depth: int, out: list) -> None:
    match m:
        case SVar(name=x):
            out.append(f"#{depth - env[x]} " if x in env else f"{x} ")
        case SLam(var=x, ann=a, body=b):
            saved = env.get(x)
            env[x] = depth
            out.append("\\" + a.text + ".")
            _key(b, env, depth + 1, out)
            if saved is None:
                del env[x]
            else:
                env[x] = saved
        case SApp(fun=f, arg=a):
            out.append("(")
            _key(f, env, depth, out)
            _key(a, env, depth, out)
            out.append(")")
        case _:
            raise TypeError(f"not a target term: {m!r}")


def stt_alpha_eq(m: SttTerm, n: SttTerm) -> bool:
    return m is n or stt_key(m) == stt_key(n)


def _fresh(base: str, avoid) -> str:
    stem = base.rstrip("0123456789") or "v"
    for i in itertools.count(1):
        cand = f"{stem}{i}"
        if cand not in avoid:
            return cand
    raise AssertionError


def stt_subst(m: SttTerm, x: str, s: SttTerm) -> SttTerm:
    if x not in m.fv:
        return m
    match m:
        case SVar():
            return s
        case SApp(fun=f, arg=a):
            return SApp(stt_subst(f, x, s), stt_subst(a, x, s))
        case SLam(var=y, ann=a, body=b):
            if y in s.fv:
                z = _fresh(y, s.fv | b.fv | {x})
                b = stt_subst(b, y, SVar(z))
                y = z
            return SLam(y, a, stt_subst(b, x, s))
    raise TypeError(f"not a target term: {m!r}")


# ---------------------------------------------------------------- beta-eta


def root_reducts(m: SttTerm) -> list[SttTerm]:
    out = []
    if isinstance(m, SApp) and isinstance(m.fun, SLam):
        out.append(stt_subst(m.fun.body, m.fun.var, m.arg))
    if (isinstance(m, SLam) and isinstance(m.body, SApp) and isinstance(m.body.arg, SVar)
            and m.body.arg.name == m.var and m.var not in m.body.fun.fv):
        out.append(m.body.fun)
    return out


def one_step(m: SttTerm) -> list[SttTerm]:
    """All one-step beta-eta reducts, leftmost-outermost first."""
    out = root_reducts(m)
    match m:
        case SLam(var=x, ann=a, body=b):
            out += [SLam(x, a, b2) for b2 in one_step(b)]
        case SApp(fun=f, arg=a):
            out += [SApp(f2, a) for f2 in one_step(f)]
            out += [SApp(f, a2) for a2 in one_step(a)]
    return out


class SttFuelExhausted(RuntimeError):
    pass


def _first_step(m: SttTerm) -> Optional[SttTerm]:
    root = root_reducts(m)
    if root:
        return root[0]
    match m:
        case SLam(var=x, ann=a, body=b):
            b2 = _first_step(b)
            return None if b2 is None else SLam(x, a, b2)
        case SApp(fun=f, arg=a):
            f2 = _first_step(f)
            if f2 is not None:
                return SApp(f2, a)
            a2 = _first_step(a)
            return None if a2 is None else SApp(f, a2)
    return None


def _spine(m: SttTerm) -> tuple[SttTerm, list[SttTerm]]:
    args = []
    while isinstance(m, SApp):
        args.append(m.arg)
        m = m.fun
    args.reverse()
    return m, args


def stt_normalize_beta_eta(m: SttTerm, fuel: int = 100_000) -> SttTerm:
    """The beta-eta normal form, reducing head redexes first.

    ``fuel`` bounds the number of contractions.
    """
    budget = [fuel]

    def spend() -> None:
        budget[0] -= 1
        if budget[0] < 0:
            raise SttFuelExhausted(f"no beta-eta normal form within {fuel} steps")

    def go(m: SttTerm) -> SttTerm:
        if isinstance(m, SLam):
            b = go(m.body)
            if (isinstance(b, SApp) and isinstance(b.arg, SVar) and b.arg.name == m.var
                    and m.var not in b.fun.fv):
                spend()
                return b.fun
            return m if b is m.body else SLam(m.var, m.ann, b)
        head, args = _spine(m)
        while isinstance(head, SLam) and args:
            spend()
            head, rest = _spine(stt_subst(head.body, head.var, args[0]))
            args = rest + args[1:]
        if isinstance(head, SLam):
            return go(head)
        return sapp(head, *(go(a) for a in args))

    return go(m)


def is_beta_eta_normal(m: SttTerm) -> bool:
    return _first_step(m) is None


# ---------------------------------------------------------------- reachability


class SearchLimit(RuntimeError):
    pass


class _Standard:
    """Search for a standard beta reduction followed by eta steps.

    By standardisation and eta postponement, ``m`` reduces to ``n`` iff some
    path contracts head redexes first and then reduces the components of the
    head normal form independently. That leaves two choices per node: keep a
    head redex or contract it. An eta step at a binder is found by comparing
    the body with ``n x``. Pairs whose normal forms differ are rejected at
    once. The length returned is that of the path found.
    """

    def __init__(self, limit: int):
        self.limit = limit
        self.calls = 0
        self.memo: dict = {}
        self.nf: dict = {}

    def normal(self, m: SttTerm, key: str) -> str:
        if key not in self.nf:
            self.nf[key] = stt_key(stt_normalize_beta_eta(m))
        return self.nf[key]

    def dist(self, m: SttTerm, n: SttTerm) -> Optional[int]:
        km, kn = stt_key(m), stt_key(n)
        if km == kn:
            return 0
        pair = (km, kn)
        if pair in self.memo:
            return self.memo[pair]
        self.calls += 1
        if self.calls > self.limit:
            raise SearchLimit(f"reachability search exceeded {self.limit} nodes")
        result = None
        if self.normal(m, km) == self.normal(n, kn):
            result = self._search(m, n)
        self.memo[pair] = result
        return result

    def _search(self, m: SttTerm, n: SttTerm) -> Optional[int]:
        if isinstance(m, SLam):
            avoid = m.fv | n.fv | {m.var}
            z = _fresh("_z", avoid | m.body.fv)
            body = stt_subst(m.body, m.var, SVar(z))
            if isinstance(n, SLam) and n.ann == m.ann:
                d = self.dist(body, stt_subst(n.body, n.var, SVar(z)))
                if d is not None:
                    return d
            d = self.dist(body, SApp(n, SVar(z)))
            return None if d is None else d + 1
        head, args = _spine(m)
        nhead, nargs = _spine(n)
        if len(args) == len(nargs) and (isinstance(head, SLam) or head == nhead):
            total = self.dist(head, nhead) if isinstance(head, SLam) else 0
            for a, b in zip(args, nargs):
                if total is None:
                    break
                d = self.dist(a, b)
                total = None if d is None else total + d
            if total is not None:
                return total
        if isinstance(head, SLam) and args:
            m2 = sapp(stt_subst(head.body, head.var, args[0]), *args[1:])
            d = self.dist(m2, n)
            return None if d is None else d + 1
        return None


def stt_reduction_length(m: SttTerm, n: SttTerm, limit: int = 200_000) -> Optional[int]:
    """Length of a beta-eta reduction path from ``m`` to ``n`` (up to alpha), or None."""
    return _Standard(limit).dist(m, n)


def stt_reduces_to(m: SttTerm, n: SttTerm, bound: int, limit: int = 200_000) -> bool:
    """True iff a path of at most ``bound`` beta-eta steps leads from ``m`` to ``n``."""
    try:
        d = stt_reduction_length(m, n, limit)
    except SearchLimit:
        return False
    return d is not None and d <= bound


def stt_reduces_to_plus(m: SttTerm, n: SttTerm, bound: int, limit: int = 200_000) -> bool:
    """Like :func:`stt_reduces_to` but requires at least one step."""
    return not stt_alpha_eq(m, n) and stt_reduces_to(m, n, bound, limit)


def stt_reachable_bfs(m: SttTerm, n: SttTerm, bound: int, limit: int = 50_000) -> bool:
    """Plain breadth-first reachability over the one-step relation."""
    target = stt_key(n)
    seen = {stt_key(m)}
    if target in seen:
        return True
    frontier = [m]
    for _ in range(bound):
        nxt = []
        for u in frontier:
            for v in one_step(u):
                k = stt_key(v)
                if k == target:
                    return True
                if k not in seen:
                    seen.add(k)
                    nxt.append(v)
        if len(seen) > limit:
            raise SearchLimit(f"breadth-first search exceeded {limit} terms")
        frontier = nxt
        if not frontier:
            return False
    return False
