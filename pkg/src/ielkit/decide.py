"""Derivability in IEL⁻ by saturation over the subformula universe.

Normal deductions mention only subformulas of the goal and hypotheses, so
derivability can be computed as a least fixpoint over that finite universe.
An independent oracle searches normal proof terms by size; the two are
cross-checked on enumerated formula spaces. The structural corollaries, such
as the disjunction property, are searched for counterexamples the same way.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from . import _kernel_py, kernel
from .formula import BOT, TOP, Atom, Bot, Box, Conj, Disj, Formula, Impl, Top, subformulas
from .term import App, BoxIntro, Case, Efq, Inj, Lam, Pair, Proj, Term, Unit, Var

_CODES = {Atom: 0, Bot: 1, Top: 2, Impl: 3, Conj: 4, Disj: 5, Box: 6}


def universe(goal: Formula, hyps: Iterable[Formula] = ()) -> frozenset[Formula]:
    out = set(subformulas(goal))
    for h in hyps:
        out |= subformulas(h)
    return frozenset(out)


@dataclass(frozen=True)
class Indexed:
    """A universe laid out for the kernels, subformulas before formulas."""

    formulas: tuple[Formula, ...]
    kinds: tuple[int, ...]
    lhs: tuple[int, ...]
    rhs: tuple[int, ...]
    index: dict = field(compare=False, repr=False)

    @classmethod
    def build(cls, goal: Formula, hyps: Iterable[Formula] = ()) -> Indexed:
        index: dict[Formula, int] = {}
        formulas, kinds, lhs, rhs = [], [], [], []

        def visit(f: Formula) -> int:
            i = index.get(f)
            if i is not None:
                return i
            kids = [visit(c) for c in f.children()]
            i = index[f] = len(formulas)
            formulas.append(f)
            kinds.append(_CODES[type(f)])
            lhs.append(kids[0] if kids else -1)
            rhs.append(kids[1] if len(kids) > 1 else -1)
            return i

        for h in hyps:
            visit(h)
        visit(goal)
        return cls(tuple(formulas), tuple(kinds), tuple(lhs), tuple(rhs), index)

    def mask(self, fs: Iterable[Formula]) -> int:
        m = 0
        for f in fs:
            m |= 1 << self.index[f]
        return m


@dataclass(frozen=True)
class Verdict:
    provable: bool
    universe_size: int
    hypothesis_sets: int
    sequents: int

    def __bool__(self) -> bool:
        return self.provable


def decide_verbose(hyps: Iterable[Formula], goal: Formula) -> Verdict:
    hyps = list(hyps)
    u = Indexed.build(goal, hyps)
    ok, sets, seqs = kernel.decide(u.kinds, u.lhs, u.rhs, u.mask(hyps), u.index[goal])
    return Verdict(bool(ok), len(u.formulas), sets, seqs)


def decide(hyps: Iterable[Formula], goal: Formula) -> bool:
    """True iff ``hyps`` derive ``goal``."""
    return decide_verbose(hyps, goal).provable


def derivable_set(hyps: Iterable[Formula], goal: Formula) -> frozenset[Formula]:
    """All universe formulas derivable from ``hyps``."""
    hyps = list(hyps)
    u = Indexed.build(goal, hyps)
    m = kernel.derivable(u.kinds, u.lhs, u.rhs, u.mask(hyps))
    return frozenset(f for i, f in enumerate(u.formulas) if m >> i & 1)


# ---------------------------------------------------------------- oracle


def oracle_size(hyps: Iterable[Formula], goal: Formula, bound: int) -> Optional[int]:
    """Size of a smallest normal proof term of size at most ``bound``."""
    hyps = list(hyps)
    u = Indexed.build(goal, hyps)
    n = kernel.oracle_min_size(u.kinds, u.lhs, u.rhs, u.mask(hyps), u.index[goal], bound)
    return None if n < 0 else n


def oracle_provable(hyps: Iterable[Formula], goal: Formula, bound: int) -> bool:
    return oracle_size(hyps, goal, bound) is not None


def hyp_name(i: int) -> str:
    return f"h{i}"


def oracle_witness(hyps: Iterable[Formula], goal: Formula,
                   bound: int) -> Optional[tuple[Term, dict[str, Formula]]]:
    """A smallest normal proof term and the context typing it, or None.

    Hypothesis ``A`` is the variable ``h<i>`` where ``i`` indexes ``A`` in the
    universe, so contexts stay sets.
    """
    hyps = list(hyps)
    u = Indexed.build(goal, hyps)
    found = _kernel_py.oracle_witness(u.kinds, u.lhs, u.rhs, u.mask(hyps), u.index[goal], bound)
    if found is None:
        return None
    ctx = {hyp_name(u.index[h]): h for h in hyps}
    return _build(found[1], u.formulas), ctx


def _build(w, fs: Sequence[Formula]) -> Term:
    tag = w[0]
    if tag == "unit":
        x = hyp_name(w[1])
        return Unit(Lam(x, TOP, Var(x)))
    if tag == "unit-hyp":
        return Unit(Var(hyp_name(w[1])))
    if tag == "lam":
        return Lam(hyp_name(w[1]), fs[w[1]], _build(w[2], fs))
    if tag == "pair":
        return Pair(_build(w[1], fs), _build(w[2], fs))
    if tag == "inj":
        return Inj(w[1], fs[w[2]], _build(w[3], fs))
    if tag == "box":
        binders = tuple((hyp_name(c), fs[c]) for c, _ in w[1])
        return BoxIntro(binders, tuple(_build(a, fs) for _, a in w[1]), _build(w[2], fs))
    if tag == "spine":
        t: Term = Var(hyp_name(w[1]))
        for e in w[2]:
            if e[0] == "app":
                t = App(t, _build(e[1], fs))
            elif e[0] == "proj":
                t = Proj(e[1], t)
            elif e[0] == "case":
                t = Case(t, hyp_name(e[1]), _build(e[2], fs), hyp_name(e[3]), _build(e[4], fs))
            else:
                t = Efq(fs[e[1]], t)
        return t
    raise ValueError(f"bad witness {w!r}")


# ---------------------------------------------------------------- enumeration


def formulas_of_size(atoms: Sequence[str], size: int, _cache: Optional[dict] = None) -> list[Formula]:
    """All formulas with exactly ``size`` connectives, in enumeration order."""
    cache = {} if _cache is None else _cache
    if size in cache:
        return cache[size]
    if size == 0:
        out: list[Formula] = [Atom(a) for a in atoms] + [BOT, TOP]
    else:
        out = [Box(f) for f in formulas_of_size(atoms, size - 1, cache)]
        for ctor in (Impl, Conj, Disj):
            for left in range(size):
                ls = formulas_of_size(atoms, left, cache)
                rs = formulas_of_size(atoms, size - 1 - left, cache)
                out.extend(ctor(a, b) for a in ls for b in rs)
    cache[size] = out
    return out


def enumerate_formulas(atoms: Sequence[str], max_size: int) -> Iterator[Formula]:
    """Every formula over ``atoms``, bot and top with at most ``max_size``
    connectives, smallest first and without repetition."""
    cache: dict = {}
    for n in range(max_size + 1):
        yield from formulas_of_size(atoms, n, cache)


# ---------------------------------------------------------------- metatheory

PROPERTIES = ("disjunction", "weak-disjunction", "box-primality", "reflection", "consistency")


@dataclass(frozen=True)
class MetaReport:
    property: str
    universe: str
    counterexamples: tuple
    checked: int

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        return {
            "property": self.property,
            "universe": self.universe,
            "checked": self.checked,
            "counterexamples": [[str(f) for f in c] for c in self.counterexamples],
        }


class _Theorems:
    def __init__(self):
        self.memo: dict[Formula, bool] = {}

    def __call__(self, f: Formula) -> bool:
        got = self.memo.get(f)
        if got is None:
            got = self.memo[f] = decide((), f)
        return got


def _pairs(atoms: Sequence[str], max_size: int) -> Iterator[tuple[Formula, Formula]]:
    cache: dict = {}
    for total in range(max_size + 1):
        for left in range(total + 1):
            for a in formulas_of_size(atoms, left, cache):
                for b in formulas_of_size(atoms, total - left, cache):
                    yield a, b


def check_metatheory(prop: str, atoms: Sequence[str] = ("p", "r"), max_size: int = 3) -> MetaReport:
    """Search the enumerated space for counterexamples to a corollary.

    Reflection ranges over single formulas with at most ``max_size``
    connectives; the binary properties over pairs A, B whose connective
    counts sum to at most ``max_size``. A pair is only decided in full when
    the conclusion fails, since otherwise it cannot be a counterexample.
    """
    atoms = tuple(atoms)
    thm = _Theorems()
    bad: list[tuple] = []
    checked = 0
    space = f"atoms {','.join(atoms)}; "
    if prop == "consistency":
        if decide((), BOT):
            bad.append((BOT,))
        return MetaReport(prop, "the empty context", tuple(bad), 1)
    if prop == "reflection":
        for a in enumerate_formulas(atoms, max_size):
            checked += 1
            if not thm(a) and thm(Box(a)):
                bad.append((a,))
        return MetaReport(prop, space + f"|A| <= {max_size}", tuple(bad), checked)
    if prop not in PROPERTIES:
        raise ValueError(f"unknown property {prop!r}; expected one of {', '.join(PROPERTIES)}")
    for a, b in _pairs(atoms, max_size):
        checked += 1
        if prop == "disjunction":
            if not thm(a) and not thm(b) and decide((), Disj(a, b)):
                bad.append((a, b))
        elif prop == "box-primality":
            if not thm(a) and not thm(b) and decide((), Disj(Box(a), Box(b))):
                bad.append((a, b))
        else:
            if not thm(Box(a)) and not thm(Box(b)) and decide((), Box(Disj(a, b))):
                bad.append((a, b))
    return MetaReport(prop, space + f"|A| + |B| <= {max_size}", tuple(bad), checked)


def agreement(atoms: Sequence[str] = ("p", "r"), max_size: int = 4, bound: int = 12,
              limit: Optional[int] = None) -> tuple[int, list[tuple[Formula, bool, Optional[int]]]]:
    """Compare decide with the oracle on closed goals; returns (count, disagreements)."""
    bad = []
    n = 0
    for f in itertools.islice(enumerate_formulas(atoms, max_size), limit):
        n += 1
        u = Indexed.build(f)
        g = u.index[f]
        ok = kernel.decide(u.kinds, u.lhs, u.rhs, 0, g)[0]
        size = kernel.oracle_min_size(u.kinds, u.lhs, u.rhs, 0, g, bound)
        if bool(ok) != (size >= 0):
            bad.append((f, bool(ok), None if size < 0 else size))
    return n, bad
