import pytest
from hypothesis import given

from ielkit.formula import BOT, Atom, Box, Conj, Disj, Impl, subformulas
from ielkit.syntax import ParseError, parse_formula, parse_term, print_formula, print_term
from ielkit.term import (App, BoxIntro, Case, Inj, Lam, Pair, Proj, Var, alpha_eq, free_vars,
                         subst)

from conftest import formulas, typed_samples, untyped_terms

p, q1, r = Atom("p"), Atom("q1"), Atom("r")
x, y, z, u, w = (Var(n) for n in "xyzuw")


@pytest.mark.parametrize("text, expected", [
    ("p -> [] p", Impl(p, Box(p))),
    ("[] (p \\/ q1)", Box(Disj(p, q1))),
    ("p -> q1 -> p", Impl(p, Impl(q1, p))),
    ("[] p /\\ r", Conj(Box(p), r)),
    ("p \\/ r /\\ p", Disj(p, Conj(r, p))),
    ("bot -> top", Impl(BOT, parse_formula("top"))),
])
def test_parse_formula(text, expected):
    assert parse_formula(text) == expected


def test_parse_terms():
    assert parse_term("\\x:p. bel in x") == Lam("x", p, BoxIntro((), (), x))
    assert parse_term("bel u=t in u", {"t": Box(p)}) == BoxIntro((("u", p),), (Var("t"),), u)
    assert parse_term("case s of {x => i1[p \\/ r] x | y => i2[p \\/ r] y}") == Case(
        Var("s"), "x", Inj(1, Disj(p, r), x), "y", Inj(2, Disj(p, r), y))
    assert parse_term("f a b") == App(App(Var("f"), Var("a")), Var("b"))


def test_printing():
    assert print_formula(Impl(p, Box(p))) == "p -> [] p"
    assert print_term(BoxIntro((), (), x)) == "bel in x"
    assert print_term(Proj(1, Pair(x, y))) == "p1 <x, y>"


@pytest.mark.parametrize("text", ["p ->", "(p", "p q", "[]", "\\x. x", "case x of {x => y}"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_term(text) if "x" in text else parse_formula(text)


def test_alpha_eq():
    assert alpha_eq(Lam("x", p, x), Lam("y", p, y))
    assert not alpha_eq(Lam("x", p, x), Lam("x", p, z))
    t = Var("t")
    assert alpha_eq(BoxIntro((("u", p),), (t,), u), BoxIntro((("w", p),), (t,), w))


def test_subst():
    assert subst(x, "x", Pair(y, z)) == Pair(y, z)
    got = subst(Lam("y", p, App(x, y)), "x", y)
    assert isinstance(got, Lam) and got.var != "y"
    assert alpha_eq(got, Lam("y2", p, App(y, Var("y2"))))
    t = Var("t")
    assert subst(BoxIntro((("u", p),), (x,), u), "x", t) == BoxIntro((("u", p),), (t,), u)
    # a bound body occurrence is untouched
    assert subst(BoxIntro((("u", p),), (x,), u), "u", t) == BoxIntro((("u", p),), (x,), u)


def test_free_vars():
    assert free_vars(x) == {"x"}
    assert free_vars(Lam("x", p, x)) == frozenset()
    assert free_vars(BoxIntro((("u", p),), (z,), u)) == {"z"}
    assert free_vars(BoxIntro((("u", p),), (u,), u)) == {"u"}


def test_subformulas():
    assert subformulas(Box(p)) == {Box(p), p}
    f = Impl(p, Conj(q1, p))
    assert subformulas(f) == {f, p, Conj(q1, p), q1}
    assert subformulas(BOT) == {BOT}


def test_box_binders_distinct():
    with pytest.raises(ValueError):
        BoxIntro((("u", p), ("u", p)), (x, y), u)
    with pytest.raises(ValueError):
        BoxIntro((("u", p),), (), u)


@given(formulas)
def test_formula_round_trip(f):
    assert parse_formula(print_formula(f)) == f


@given(typed_samples)
def test_term_round_trip(s):
    assert alpha_eq(parse_term(print_term(s.term), s.ctx), s.term)


@given(untyped_terms)
def test_untyped_round_trip(t):
    assert alpha_eq(parse_term(print_term(t)), t)


@given(untyped_terms)
def test_subst_identity(t):
    for v in sorted(t.fv) or ["x"]:
        assert alpha_eq(subst(t, v, Var(v)), t)


@given(untyped_terms)
def test_subst_vacuous(t):
    assert alpha_eq(subst(t, "fresh", Pair(x, y)), t)


@given(formulas)
def test_subformulas_monotone(f):
    subs = subformulas(f)
    for g in subs:
        assert subformulas(g) <= subs
