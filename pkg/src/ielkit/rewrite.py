"""Detour, permutation and absurdity conversions; normalization with traces.

A redex is addressed by the path (child indices) of its root. Rules that
act on one argument of a ``bel`` (D4, P4, B5) also carry that argument's
index, so a ``bel`` with several eligible arguments has one redex per
argument.

Child indices: ``Lam`` body 0; ``App`` function 0, argument 1; ``Pair`` 0, 1;
``Proj``/``Inj``/``Efq``/``Unit`` 0; ``Case`` scrutinee 0, branches 1 and 2;
``bel`` arguments 0..n-1 and body n.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Mapping, NamedTuple, Optional, Sequence

from .formula import Box, Conj, Disj, Formula, Impl, Top, subformulas
from .syntax import print_term
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
    alpha_key,
    fresh_name,
    rename,
    replace_at,
    subst,
    subterm,
)
from .typecheck import TypeCheckError, check, context_at, infer, typed_subterms


class RuleKind(enum.Enum):
    D1 = "D1"  # (\x.t) s
    D2 = "D2"  # pi_i <t1, t2>
    D3 = "D3"  # case (in_i t) ...
    D4 = "D4"  # bel argument is a bel
    D5 = "D5"  # bel x = t in x
    P1 = "P1"  # (case ...) s
    P2 = "P2"  # pi_i (case ...)
    P3 = "P3"  # case (case ...) ...
    P4 = "P4"  # bel argument is a case
    PBot = "PBot"  # efq (case ...)
    B1 = "B1"  # (efq t) s
    B2 = "B2"  # pi_i (efq t)
    B3 = "B3"  # case (efq t) ...
    B4 = "B4"  # efq (efq t)
    B5 = "B5"  # bel argument is an efq

    @property
    def family(self) -> str:
        if self.name.startswith("D"):
            return "D"
        if self.name.startswith("P"):
            return "P"
        return "Bot"

    @property
    def indexed(self) -> bool:
        return self in (RuleKind.D4, RuleKind.P4, RuleKind.B5)


FAMILIES = ("D", "P", "Bot", "All")


class Redex(NamedTuple):
    path: tuple[int, ...]
    kind: RuleKind
    index: Optional[int] = None


@dataclass(frozen=True)
class ReductionStep:
    kind: RuleKind
    path: tuple[int, ...]
    before: Term
    after: Term
    index: Optional[int] = None

    def to_json(self) -> dict:
        out = {"rule": self.kind.value, "path": list(self.path), "term": print_term(self.after)}
        if self.index is not None:
            out["index"] = self.index
        return out


@dataclass(frozen=True)
class Trace:
    start: Term
    steps: tuple[ReductionStep, ...]
    result: Term

    def to_json(self) -> dict:
        return {
            "start": print_term(self.start),
            "steps": [s.to_json() for s in self.steps],
            "result": print_term(self.result),
        }

    def __len__(self) -> int:
        return len(self.steps)


class RewriteError(ValueError):
    pass


class FuelExhausted(RuntimeError):
    def __init__(self, trace: Trace):
        super().__init__(f"fuel exhausted after {len(trace.steps)} steps")
        self.trace = trace


# ---------------------------------------------------------------- redex detection

_B, _P, _D = RuleKind.B5, RuleKind.P4, RuleKind.D4


def local_redexes(t: Term) -> list[tuple[RuleKind, Optional[int]]]:
    """Rules whose left-hand side matches at the root of ``t``, absurdity
    conversions first, then permutations, then detours."""
    match t:
        case App(fun=f):
            if isinstance(f, Efq):
                return [(RuleKind.B1, None)]
            if isinstance(f, Case):
                return [(RuleKind.P1, None)]
            if isinstance(f, Lam):
                return [(RuleKind.D1, None)]
        case Proj(arg=a):
            if isinstance(a, Efq):
                return [(RuleKind.B2, None)]
            if isinstance(a, Case):
                return [(RuleKind.P2, None)]
            if isinstance(a, Pair):
                return [(RuleKind.D2, None)]
        case Case(scrut=s):
            if isinstance(s, Efq):
                return [(RuleKind.B3, None)]
            if isinstance(s, Case):
                return [(RuleKind.P3, None)]
            if isinstance(s, Inj):
                return [(RuleKind.D3, None)]
        case Efq(arg=a):
            if isinstance(a, Efq):
                return [(RuleKind.B4, None)]
            if isinstance(a, Case):
                return [(RuleKind.PBot, None)]
        case BoxIntro(binders=bs, args=args, body=body):
            out = [(RuleKind.B5, i) for i, a in enumerate(args) if isinstance(a, Efq)]
            out += [(RuleKind.P4, i) for i, a in enumerate(args) if isinstance(a, Case)]
            out += [(RuleKind.D4, i) for i, a in enumerate(args) if isinstance(a, BoxIntro)]
            if len(bs) == 1 and isinstance(body, Var) and body.name == bs[0][0]:
                out.append((RuleKind.D5, None))
            return out
    return []


def _in_family(kind: RuleKind, family: str) -> bool:
    return family == "All" or kind.family == family


def iter_redexes(t: Term, family: str = "All", strategy: str = "leftmost-outermost",
                 path: tuple[int, ...] = ()) -> Iterator[Redex]:
    here = [Redex(path, k, i) for k, i in local_redexes(t) if _in_family(k, family)]
    if strategy == "leftmost-outermost":
        yield from here
    for i, c in enumerate(t.children()):
        yield from iter_redexes(c, family, strategy, path + (i,))
    if strategy == "leftmost-innermost":
        yield from here
    elif strategy != "leftmost-outermost":
        raise ValueError(f"unknown strategy {strategy!r}")


def redexes(t: Term, family: str = "All") -> list[Redex]:
    """All redexes of ``t`` in leftmost-outermost order."""
    return list(iter_redexes(t, family))


def is_normal(t: Term, family: str = "All") -> bool:
    return next(iter_redexes(t, family), None) is None


# ---------------------------------------------------------------- contraction


def _avoid_capture(x: str, branch: Term, avoid: frozenset[str] | set[str]) -> tuple[str, Term]:
    """Rename binder ``x`` of ``branch`` away from the names in ``avoid``."""
    if x in avoid and x in branch.fv:
        z = fresh_name(x, set(avoid) | branch.fv)
        return z, rename(branch, x, z)
    if x in avoid:
        z = fresh_name(x, set(avoid) | branch.fv)
        return z, branch
    return x, branch


def _node_type(ctx: Optional[Mapping[str, Formula]], root: Term, path: Sequence[int], node: Term) -> Formula:
    try:
        env = context_at(ctx or {}, root, path)
        return infer(env, node)
    except TypeCheckError as exc:
        raise RewriteError(f"cannot retype the efq annotation: {exc.render()}") from None


def contract(t: Term, kind: RuleKind, index: Optional[int] = None,
             node_type: Optional[Formula] = None) -> Term:
    """Contract the redex of ``kind`` at the root of ``t``.

    ``node_type`` (the type of ``t``) is needed by B3 and B5, whose contracta
    are annotated with it.
    """
    if (kind, index) not in local_redexes(t):
        raise RewriteError(f"{kind.value} does not match at this position")
    match kind:
        case RuleKind.D1:
            lam: Lam = t.fun
            return subst(lam.body, lam.var, t.arg)
        case RuleKind.D2:
            pair: Pair = t.arg
            return pair.fst if t.index == 1 else pair.snd
        case RuleKind.D3:
            inj: Inj = t.scrut
            if inj.index == 1:
                return subst(t.left, t.x, inj.arg)
            return subst(t.right, t.y, inj.arg)
        case RuleKind.D4:
            return _merge_boxes(t, index)
        case RuleKind.D5:
            return t.args[0]
        case RuleKind.P1:
            c: Case = t.fun
            s = t.arg
            x, left = _avoid_capture(c.x, c.left, s.fv)
            y, right = _avoid_capture(c.y, c.right, s.fv)
            return Case(c.scrut, x, App(left, s), y, App(right, s))
        case RuleKind.P2:
            c = t.arg
            return Case(c.scrut, c.x, Proj(t.index, c.left), c.y, Proj(t.index, c.right))
        case RuleKind.P3:
            c = t.scrut
            outer_fv = (t.left.fv - {t.x}) | (t.right.fv - {t.y})
            x, left = _avoid_capture(c.x, c.left, outer_fv)
            y, right = _avoid_capture(c.y, c.right, outer_fv)
            return Case(c.scrut, x, Case(left, t.x, t.left, t.y, t.right),
                        y, Case(right, t.x, t.left, t.y, t.right))
        case RuleKind.P4:
            c = t.args[index]
            rest = t.body.fv.difference(t.names)
            for j, a in enumerate(t.args):
                if j != index:
                    rest = rest | a.fv
            x, left = _avoid_capture(c.x, c.left, rest)
            y, right = _avoid_capture(c.y, c.right, rest)

            def with_arg(a: Term) -> BoxIntro:
                args = list(t.args)
                args[index] = a
                return BoxIntro(t.binders, tuple(args), t.body)

            return Case(c.scrut, x, with_arg(left), y, with_arg(right))
        case RuleKind.PBot:
            c = t.arg
            return Case(c.scrut, c.x, Efq(t.ann, c.left), c.y, Efq(t.ann, c.right))
        case RuleKind.B1:
            e: Efq = t.fun
            if not isinstance(e.ann, Impl):
                raise RewriteError("B1: efq annotation is not an implication")
            return Efq(e.ann.rhs, e.arg)
        case RuleKind.B2:
            e = t.arg
            if not isinstance(e.ann, Conj):
                raise RewriteError("B2: efq annotation is not a conjunction")
            return Efq(e.ann.lhs if t.index == 1 else e.ann.rhs, e.arg)
        case RuleKind.B3:
            if node_type is None:
                raise RewriteError("B3 needs the type of the case")
            return Efq(node_type, t.scrut.arg)
        case RuleKind.B4:
            return Efq(t.ann, t.arg.arg)
        case RuleKind.B5:
            if node_type is None:
                raise RewriteError("B5 needs the type of the bel")
            return Efq(node_type, t.args[index].arg)
    raise RewriteError(f"unknown rule {kind}")


def _merge_boxes(t: BoxIntro, i: int) -> Term:
    inner: BoxIntro = t.args[i]
    xi = t.binders[i][0]
    body = t.body
    ti = inner.body
    # Outer binders other than x_i must not capture free names of the inner body.
    others = []
    taken = set(t.names) | ti.fv | body.fv | set(inner.names)
    for j, (n, ann) in enumerate(t.binders):
        if j == i:
            continue
        if n in ti.fv.difference(inner.names):
            m = fresh_name(n, taken)
            taken.add(m)
            body = rename(body, n, m)
            n = m
        others.append((j, n, ann))
    other_names = {n for _, n, _ in others}
    # Inner binders must stay distinct from the outer ones and must not capture
    # names that are free in the outer body.
    body_free = body.fv - {xi}
    new_inner = []
    for n, ann in inner.binders:
        if n in other_names or n in body_free:
            m = fresh_name(n, taken | other_names | body_free)
            taken.add(m)
            ti = rename(ti, n, m)
            n = m
        new_inner.append((n, ann))
    binders, args = [], []
    for j in range(len(t.binders)):
        if j == i:
            binders.extend(new_inner)
            args.extend(inner.args)
        else:
            _, n, ann = next(o for o in others if o[0] == j)
            binders.append((n, ann))
            args.append(t.args[j])
    return BoxIntro(tuple(binders), tuple(args), subst(body, xi, ti))


def step(t: Term, path: Sequence[int], kind: RuleKind, index: Optional[int] = None,
         ctx: Optional[Mapping[str, Formula]] = None) -> Term:
    """Contract the redex ``(path, kind, index)`` of ``t``.

    ``ctx`` types the free variables; it is only consulted by B3 and B5.
    """
    path = tuple(path)
    try:
        node = subterm(t, path)
    except IndexError as exc:
        raise RewriteError(f"invalid path {list(path)}: {exc}") from None
    node_type = None
    if kind in (RuleKind.B3, RuleKind.B5) and (kind, index) in local_redexes(node):
        node_type = _node_type(ctx, t, path, node)
    return replace_at(t, path, contract(node, kind, index, node_type))


def step_relation(t: Term, family: str = "All",
                  ctx: Optional[Mapping[str, Formula]] = None) -> list[Term]:
    """One-step successors of ``t`` in ``family``, one per alpha-class."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    out, seen = [], set()
    for r in iter_redexes(t, family):
        s = step(t, r.path, r.kind, r.index, ctx)
        key = alpha_key(s)
        if key not in seen:
            seen.add(key)
            out.append(s)
    return out


def successors(t: Term, family: str = "All", ctx=None) -> Iterator[tuple[Redex, Term]]:
    for r in iter_redexes(t, family):
        yield r, step(t, r.path, r.kind, r.index, ctx)


# ---------------------------------------------------------------- normalization

STRATEGIES = ("leftmost-outermost", "leftmost-innermost")


def normalize(t: Term, strategy: str = "leftmost-outermost", fuel: int = 10_000,
              ctx: Optional[Mapping[str, Formula]] = None, family: str = "All") -> Trace:
    """Reduce ``t`` to normal form, recording every step.

    Raises :class:`FuelExhausted` (carrying the partial trace) after ``fuel``
    steps.
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    start, steps = t, []
    while True:
        r = next(iter_redexes(t, family, strategy), None)
        if r is None:
            return Trace(start, tuple(steps), t)
        if len(steps) >= fuel:
            raise FuelExhausted(Trace(start, tuple(steps), t))
        s = step(t, r.path, r.kind, r.index, ctx)
        steps.append(ReductionStep(r.kind, r.path, t, s, r.index))
        t = s


def normal_form(t: Term, ctx=None, fuel: int = 10_000) -> Term:
    return normalize(t, fuel=fuel, ctx=ctx).result


# ---------------------------------------------------------------- normal-form structure


class Rule(enum.Enum):
    HYP = "hyp"
    IMP_INTRO = "→-intro"
    IMP_ELIM = "→-elim"
    AND_INTRO = "∧-intro"
    AND_ELIM = "∧-elim"
    OR_INTRO = "∨-intro"
    OR_ELIM = "∨-elim"
    BOT_ELIM = "⊥-elim"
    TOP_INTRO = "⊤-intro"
    BOX_INTRO = "□-intro"

    @property
    def is_intro(self) -> bool:
        return self.name.endswith("INTRO")


_LAST_RULE = {
    Var: Rule.HYP, Lam: Rule.IMP_INTRO, App: Rule.IMP_ELIM, Pair: Rule.AND_INTRO,
    Proj: Rule.AND_ELIM, Inj: Rule.OR_INTRO, Case: Rule.OR_ELIM, Efq: Rule.BOT_ELIM,
    Unit: Rule.TOP_INTRO, BoxIntro: Rule.BOX_INTRO,
}


def last_rule(t: Term) -> Rule:
    return _LAST_RULE[type(t)]


def introduction_for(f: Formula) -> Optional[Rule]:
    """The introduction rule of the main connective of ``f`` (None for atoms and bot)."""
    return {Impl: Rule.IMP_INTRO, Conj: Rule.AND_INTRO, Disj: Rule.OR_INTRO,
            Box: Rule.BOX_INTRO, Top: Rule.TOP_INTRO}.get(type(f))


def is_neutral(t: Term) -> bool:
    """An assumption, or a term whose last rule is an elimination."""
    return isinstance(t, (Var, App, Proj, Case, Efq))


class PreconditionError(ValueError):
    pass


def derivation_formulas(ctx: Mapping[str, Formula], t: Term) -> set[Formula]:
    """Every formula labelling the typing derivation of ``t``, including the
    formulas of the hypotheses its binders discharge."""
    out: set[Formula] = set()
    for _, env, s, f in typed_subterms(ctx, t):
        out.add(f)
        match s:
            case Lam(ann=a):
                out.add(a)
            case BoxIntro(binders=bs):
                out.update(a for _, a in bs)
            case Case(scrut=sc):
                st = infer(env, sc)
                out.update((st.lhs, st.rhs))
    return out


def check_subformula_property(ctx: Mapping[str, Formula], t: Term, goal: Formula) -> bool:
    if not is_normal(t):
        raise PreconditionError("term is not normal")
    if not check(ctx, t, goal):
        raise PreconditionError("term does not have the stated type")
    allowed = set(subformulas(goal))
    for g in ctx.values():
        allowed |= subformulas(g)
    return derivation_formulas(ctx, t) <= allowed


# ---------------------------------------------------------------- postponement


def _reachable(t: Term, family: str, ctx, max_steps: int, limit: int = 20_000) -> dict:
    """Alpha-keys of terms reachable from ``t`` in at most ``max_steps`` steps,
    mapped to the number of steps."""
    seen = {alpha_key(t): 0}
    frontier = [t]
    for depth in range(1, max_steps + 1):
        nxt = []
        for u in frontier:
            for s in step_relation(u, family, ctx):
                k = alpha_key(s)
                if k not in seen:
                    seen[k] = depth
                    nxt.append(s)
                    if len(seen) > limit:
                        return seen
        frontier = nxt
        if not frontier:
            break
    return seen


def postponement_witness(r: Term, t: Term, family: str, ctx=None,
                         max_steps: int = 6, limit: int = 5_000) -> Optional[Term]:
    """A term ``k`` with ``r`` reaching ``k`` in one or more ``family`` steps and
    ``k`` reaching ``t`` by absurdity conversions, if one exists within the bounds."""
    target = alpha_key(t)
    frontier = [r]
    seen = {alpha_key(r)}
    for _ in range(max_steps):
        nxt = []
        for u in frontier:
            for k in step_relation(u, family, ctx):
                key = alpha_key(k)
                if key in seen:
                    continue
                seen.add(key)
                nxt.append(k)
                if target in _reachable(k, "Bot", ctx, max_steps=k.size):
                    return k
                if len(seen) > limit:
                    return None
        frontier = nxt
        if not frontier:
            break
    return None
