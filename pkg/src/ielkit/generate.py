"""Seeded random generators for formulas and proof terms.

Typed terms are built top-down against a goal formula. A leaf whose type is
not available in scope becomes a fresh free variable, so every generated term
comes with the context that types it. Generation is biased toward
introduction-elimination pairs and case/efq nests, so the corpora are rich in
redexes of every family. Bound names come from a small pool and are reused
freely, which exercises capture avoidance downstream.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .formula import BOT, Atom, Box, Conj, Disj, Formula, Impl
from .term import App, BoxIntro, Case, Efq, Inj, Lam, Pair, Proj, Term, Var

BOUND_POOL = ("x", "y", "z", "u", "w")
FREE_POOL = ("a", "b", "c", "d", "e", "f", "g", "h")


def random_formula(rng: random.Random, size: int, atoms: Sequence[str] = ("p", "r"),
                   bot: bool = False) -> Formula:
    """A random formula with exactly ``size`` connectives."""
    if size <= 0:
        if bot and rng.random() < 0.15:
            return BOT
        return Atom(rng.choice(atoms))
    kind = rng.randrange(4)
    if kind == 3:
        return Box(random_formula(rng, size - 1, atoms, bot))
    left = rng.randint(0, size - 1)
    a = random_formula(rng, left, atoms, bot)
    b = random_formula(rng, size - 1 - left, atoms, bot)
    return (Impl, Conj, Disj)[kind](a, b)


@dataclass(frozen=True)
class Sample:
    term: Term
    ctx: dict
    formula: Formula


class TermGenerator:
    """Type-directed generator for well-typed terms.

    ``budget`` bounds the number of constructors tried along each branch.
    ``efq`` permits ``efq`` nodes, which need a proof of ``bot`` and so add
    a free ``bot`` hypothesis.
    """

    def __init__(self, rng: random.Random, atoms: Sequence[str] = ("p", "r"),
                 efq: bool = True, max_formula: int = 2):
        self.rng = rng
        self.atoms = tuple(atoms)
        self.efq = efq
        self.max_formula = max_formula
        self.free: dict[str, Formula] = {}

    def formula(self, size: Optional[int] = None) -> Formula:
        if size is None:
            size = self.rng.randint(0, self.max_formula)
        return random_formula(self.rng, size, self.atoms)

    def sample(self, goal: Optional[Formula] = None, budget: int = 8) -> Sample:
        self.free = {}
        if goal is None:
            goal = self.formula(self.rng.randint(1, 3))
        t = self.gen(goal, {}, budget)
        return Sample(t, dict(self.free), goal)

    def leaf(self, goal: Formula, env: dict) -> Term:
        options = [x for x, a in env.items() if a == goal]
        options += [x for x, a in self.free.items() if a == goal and x not in env]
        if options and self.rng.random() < 0.8:
            return Var(self.rng.choice(sorted(options)))
        for name in FREE_POOL + tuple(f"{n}{i}" for i in range(1, 100) for n in FREE_POOL):
            if name not in self.free and name not in env:
                self.free[name] = goal
                return Var(name)
        raise RuntimeError("free-variable pool exhausted")

    def binder(self) -> str:
        return self.rng.choice(BOUND_POOL)

    def gen(self, goal: Formula, env: dict, budget: int) -> Term:
        rng = self.rng
        if budget <= 0 or (budget <= 2 and rng.random() < 0.5):
            return self.leaf(goal, env)
        roll = rng.random()
        if roll < 0.45:
            return self.intro(goal, env, budget - 1)
        if roll < 0.7:
            return self.detour(goal, env, budget - 1)
        return self.elim(goal, env, budget - 1)

    def intro(self, goal: Formula, env: dict, budget: int) -> Term:
        rng = self.rng
        match goal:
            case Impl(lhs=a, rhs=b):
                x = self.binder()
                return Lam(x, a, self.gen(b, {**env, x: a}, budget))
            case Conj(lhs=a, rhs=b):
                return Pair(self.gen(a, env, budget // 2 + 1), self.gen(b, env, budget // 2 + 1))
            case Disj(lhs=a, rhs=b):
                i = rng.choice((1, 2))
                return Inj(i, goal, self.gen(a if i == 1 else b, env, budget))
            case Box(body=b):
                n = rng.choice((0, 1, 1, 2))
                names = rng.sample(BOUND_POOL, n)
                anns = [self.formula(rng.randint(0, 1)) for _ in names]
                args = tuple(self.gen(Box(a), env, budget // (n + 1)) for a in anns)
                inner = {**env, **dict(zip(names, anns))}
                body = self.gen(b, inner, budget // (n + 1) + 1)
                return BoxIntro(tuple(zip(names, anns)), args, body)
        return self.elim(goal, env, budget)

    def detour(self, goal: Formula, env: dict, budget: int) -> Term:
        """An elimination whose major premise is an introduction (or a case)."""
        rng = self.rng
        kind = rng.randrange(6)
        a = self.formula(rng.randint(0, 1))
        half = budget // 2 + 1
        if kind == 0:
            x = self.binder()
            return App(Lam(x, a, self.gen(goal, {**env, x: a}, half)), self.gen(a, env, half))
        if kind == 1:
            i = rng.choice((1, 2))
            pair = Pair(self.gen(goal, env, half), self.gen(a, env, half)) if i == 1 \
                else Pair(self.gen(a, env, half), self.gen(goal, env, half))
            return Proj(i, pair)
        if kind == 2:
            b = self.formula(rng.randint(0, 1))
            d = Disj(a, b)
            i = rng.choice((1, 2))
            x, y = self.binder(), self.binder()
            return Case(Inj(i, d, self.gen(a if i == 1 else b, env, half)),
                        x, self.gen(goal, {**env, x: a}, half),
                        y, self.gen(goal, {**env, y: b}, half))
        if kind == 3 and isinstance(goal, Box):
            x = self.binder()
            inner = BoxIntro(((x, a),), (self.gen(Box(a), env, half),), self.gen(goal.body, {**env, x: a}, half))
            u = self.binder()
            return BoxIntro(((u, goal.body),), (inner,), Var(u)) if rng.random() < 0.3 else \
                self._box_with_arg(goal, env, inner, half)
        if kind == 4:
            return self.case_nest(goal, env, budget)
        if self.efq and rng.random() < 0.6:
            return Efq(goal, self.gen(BOT, env, half))
        return self.elim(goal, env, budget)

    def _box_with_arg(self, goal: Box, env: dict, arg: Term, budget: int) -> Term:
        # ``arg`` proves goal itself, so its binder has type goal.body
        x = self.binder()
        body = self.gen(goal.body, {**env, x: goal.body}, budget)
        return BoxIntro(((x, goal.body),), (arg,), body)

    def case_nest(self, goal: Formula, env: dict, budget: int) -> Term:
        """A case (optionally under an elimination) to seed permutations."""
        rng = self.rng
        a, b = self.formula(rng.randint(0, 1)), self.formula(rng.randint(0, 1))
        x, y = self.binder(), self.binder()
        third = budget // 3 + 1
        scrut = self.gen(Disj(a, b), env, third) if rng.random() < 0.5 else self.leaf(Disj(a, b), env)

        def branches(g: Formula) -> Term:
            return Case(scrut, x, self.gen(g, {**env, x: a}, third), y, self.gen(g, {**env, y: b}, third))

        shape = rng.randrange(4)
        if shape == 0:
            c = self.formula(0)
            return App(branches(Impl(c, goal)), self.gen(c, env, third))
        if shape == 1:
            c = self.formula(0)
            return Proj(1, branches(Conj(goal, c)))
        if shape == 2 and isinstance(goal, Box):
            z = self.binder()
            c = self.formula(0)
            return BoxIntro(((z, c),), (branches(Box(c)),), self.gen(goal.body, {**env, z: c}, third))
        if shape == 3 and self.efq:
            return Efq(goal, branches(BOT))
        return branches(goal)

    def elim(self, goal: Formula, env: dict, budget: int) -> Term:
        rng = self.rng
        kind = rng.randrange(4)
        a = self.formula(rng.randint(0, 1))
        half = budget // 2 + 1
        if kind == 0:
            return App(self.gen(Impl(a, goal), env, half), self.gen(a, env, half))
        if kind == 1:
            i = rng.choice((1, 2))
            return Proj(i, self.gen(Conj(goal, a) if i == 1 else Conj(a, goal), env, budget))
        if kind == 2:
            b = self.formula(rng.randint(0, 1))
            x, y = self.binder(), self.binder()
            third = budget // 3 + 1
            return Case(self.gen(Disj(a, b), env, third), x, self.gen(goal, {**env, x: a}, third),
                        y, self.gen(goal, {**env, y: b}, third))
        if self.efq and goal != BOT:
            return Efq(goal, self.gen(BOT, env, half))
        return self.leaf(goal, env)


def close(sample: Sample) -> Sample:
    """Abstract over the free variables, giving a closed term."""
    t, f = sample.term, sample.formula
    for x in sorted(sample.ctx, reverse=True):
        a = sample.ctx[x]
        t, f = Lam(x, a, t), Impl(a, f)
    return Sample(t, {}, f)


def typed_corpus(n: int, seed: int = 0, efq: bool = True, max_size: Optional[int] = None,
                 budget: int = 8, atoms: Sequence[str] = ("p", "r")) -> list[Sample]:
    """``n`` well-typed samples, deterministic in ``seed``."""
    rng = random.Random(seed)
    gen = TermGenerator(rng, atoms=atoms, efq=efq)
    out = []
    while len(out) < n:
        s = gen.sample(budget=rng.randint(2, budget))
        if max_size is None or s.term.size <= max_size:
            out.append(s)
    return out


def untyped_term(rng: random.Random, size: int, atoms: Sequence[str] = ("p", "r")) -> Term:
    """A random efq/unit-free term with about ``size`` nodes, typed or not.

    Cases are favoured in the positions where permutations apply.
    """
    def ann() -> Formula:
        return random_formula(rng, rng.randint(0, 2), atoms)

    def go(n: int) -> Term:
        if n <= 1:
            return Var(rng.choice(BOUND_POOL + FREE_POOL[:3]))
        kind = rng.randrange(10)
        if kind == 0:
            return Lam(rng.choice(BOUND_POOL), ann(), go(n - 1))
        if kind == 1:
            k = rng.randint(1, n - 2) if n > 2 else 1
            return App(go(k), go(max(1, n - 1 - k)))
        if kind == 2:
            k = rng.randint(1, n - 2) if n > 2 else 1
            return Pair(go(k), go(max(1, n - 1 - k)))
        if kind == 3:
            return Proj(rng.choice((1, 2)), go(n - 1))
        if kind == 4:
            return Inj(rng.choice((1, 2)), Disj(ann(), ann()), go(n - 1))
        if kind in (5, 6):
            m = max(1, (n - 1) // 3)
            c = Case(go(m), rng.choice(BOUND_POOL), go(m), rng.choice(BOUND_POOL), go(m))
            wrap = rng.randrange(4)
            if wrap == 0:
                return App(c, go(1))
            if wrap == 1:
                return Proj(rng.choice((1, 2)), c)
            if wrap == 2:
                return Case(c, rng.choice(BOUND_POOL), go(1), rng.choice(BOUND_POOL), go(1))
            return BoxIntro(((rng.choice(BOUND_POOL), ann()),), (c,), go(1))
        k = rng.randint(0, 2)
        names = rng.sample(BOUND_POOL, k)
        m = max(1, (n - 1) // (k + 1))
        return BoxIntro(tuple((x, ann()) for x in names), tuple(go(m) for _ in names), go(m))

    return go(size)


def untyped_corpus(n: int, seed: int = 0, max_size: int = 25) -> list[Term]:
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        t = untyped_term(rng, rng.randint(3, max_size))
        if t.size <= max_size:
            out.append(t)
    return out
