import pytest
from hypothesis import given

from ielkit.formula import BOT, Atom, Box, Disj, Impl
from ielkit.generate import close
from ielkit.rewrite import (FuelExhausted, PreconditionError, Redex, Rule, RuleKind,
                            check_subformula_property, introduction_for, is_neutral, is_normal,
                            last_rule, normalize, postponement_witness, redexes, step,
                            step_relation, successors)
from ielkit.syntax import parse_formula, parse_term
from ielkit.term import App, BoxIntro, Case, Efq, Inj, Lam, Pair, Proj, Var, alpha_eq, walk
from ielkit.typecheck import infer

from conftest import typed_samples

p, r = Atom("p"), Atom("r")
x, y, a, b = Var("x"), Var("y"), Var("a"), Var("b")
T = parse_term


def test_redex_examples():
    assert redexes(App(Lam("x", p, x), y)) == [Redex((), RuleKind.D1)]
    assert [rd.kind for rd in redexes(BoxIntro((("u", p),), (Var("t"),), Var("u")))] == [RuleKind.D5]
    t = Proj(1, Case(Var("s"), "x", a, "y", b))
    assert Redex((), RuleKind.P2) in redexes(t)


def test_step_examples():
    assert step(App(Lam("x", p, x), y), (), RuleKind.D1) == y
    d = Disj(p, r)
    assert step(Case(Inj(1, d, a), "x", x, "y", y), (), RuleKind.D3) == a
    got = step(App(Efq(Impl(p, r), Var("t")), Var("s")), (), RuleKind.B1)
    assert got == Efq(r, Var("t"))


def test_step_relation_examples():
    assert not step_relation(x)
    src = BoxIntro((("z", p),), (Efq(Box(p), Case(Var("t1"), "x", Var("t2"), "y", Var("t3"))),),
                   Var("s1"))
    ctx = {"t1": Disj(p, r), "t2": BOT, "t3": BOT, "s1": r}
    kinds = sorted(rd.kind.name for rd, _ in successors(src, "All", ctx))
    assert kinds == ["B5", "PBot"]
    two = App(Lam("x", p, x), Proj(1, Pair(a, b)))
    assert len(list(successors(two, "D"))) == 2


def test_normalize_examples():
    co = T("\\x:p. bel in x")
    assert len(normalize(co)) == 0
    tr = normalize(T("(\\x:p. bel in x) y"))
    assert [s.kind for s in tr.steps] == [RuleKind.D1]
    assert tr.result == BoxIntro((), (), y)
    t = T("bel u:p = (bel w:r = t in s1) in s", {"t": Box(r), "s1": p, "s": r})
    tr = normalize(t, ctx={"t": Box(r), "s1": p, "s": r})
    assert tr.steps[0].kind == RuleKind.D4
    assert alpha_eq(tr.steps[0].after, T("bel w:r = t in s"))


def test_d4_substitutes_body():
    ctx = {"t": Box(r), "f": Impl(r, p)}
    t = T("bel u:p = (bel w:r = t in f w) in <u, u>", ctx)
    got = step(t, (), RuleKind.D4, 0, ctx)
    assert alpha_eq(got, T("bel w:r = t in <f w, f w>", ctx))
    assert infer(ctx, got) == infer(ctx, t)


def test_trace_json_schema():
    js = normalize(T("(\\x:p. bel in x) y")).to_json()
    assert js == {"start": "(\\x:p. bel in x) y",
                  "steps": [{"rule": "D1", "path": [], "term": "bel in y"}],
                  "result": "bel in y"}


def test_fuel_exhaustion():
    with pytest.raises(FuelExhausted) as e:
        normalize(T("(\\x:p. x) ((\\x:p. x) y)"), fuel=1)
    assert len(e.value.trace.steps) == 1


def test_priority_bot_over_p_over_d():
    ctx = {"e": BOT, "d": Disj(p, r), "m": Box(p), "c": Box(r), "k": p}
    merged = T("bel w:p = m in w", ctx)
    scrut = T("case d of {x => c | y => c}", ctx)
    t = BoxIntro((("u", p), ("v", r), ("z", r)), (merged, scrut, Efq(Box(r), Var("e"))), Var("k"))
    kinds = [(rd.kind, rd.index) for rd in redexes(t) if rd.path == ()]
    assert set(kinds) == {(RuleKind.D4, 0), (RuleKind.P4, 1), (RuleKind.B5, 2)}
    assert normalize(t, ctx=ctx).steps[0].kind == RuleKind.B5
    without_bot = BoxIntro((("u", p), ("v", r)), (merged, scrut), Var("k"))
    assert normalize(without_bot, ctx=ctx).steps[0].kind == RuleKind.P4


def test_subformula_examples():
    assert check_subformula_property({}, T("\\x:p. bel in x"), parse_formula("p -> [] p"))
    assert check_subformula_property({"x": parse_formula("p /\\ r")}, T("p1 x"), p)
    with pytest.raises(PreconditionError):
        check_subformula_property({}, T("(\\x:p. x)"), r)


def test_canonicity_helpers():
    assert last_rule(T("\\x:p. x")) == Rule.IMP_INTRO
    assert introduction_for(Box(p)) == Rule.BOX_INTRO
    assert introduction_for(p) is None
    assert is_neutral(T("x y")) and not is_neutral(T("<x, y>"))


def test_critical_pair_paths():
    from ielkit.lemmas import critical_pair
    assert critical_pair().ok


@given(typed_samples)
def test_subject_reduction(s):
    for _, t in successors(s.term, "All", s.ctx):
        assert infer(s.ctx, t) == s.formula


@given(typed_samples)
def test_strong_normalization_both_strategies(s):
    fuel = 10 * 4 ** s.term.size
    a = normalize(s.term, "leftmost-outermost", fuel, s.ctx).result
    b = normalize(s.term, "leftmost-innermost", fuel, s.ctx).result
    assert is_normal(a) and is_normal(b)
    assert infer(s.ctx, a) == infer(s.ctx, b) == s.formula


@given(typed_samples)
def test_trace_deterministic(s):
    assert normalize(s.term, ctx=s.ctx).to_json() == normalize(s.term, ctx=s.ctx).to_json()


@given(typed_samples)
def test_bot_steps_shrink(s):
    for _, t in successors(s.term, "Bot", s.ctx):
        assert t.size < s.term.size


@given(typed_samples)
def test_subformula_property(s):
    nf = normalize(s.term, ctx=s.ctx, fuel=10 * 4 ** s.term.size).result
    assert check_subformula_property(s.ctx, nf, s.formula)


@given(typed_samples)
def test_canonicity_and_neutrality(s):
    c = close(s)
    nf = normalize(c.term, fuel=10 * 4 ** c.term.size).result
    assert last_rule(nf) == introduction_for(c.formula)
    for _, sub in walk(normalize(s.term, ctx=s.ctx, fuel=10 * 4 ** s.term.size).result):
        if is_neutral(sub):
            assert sub.fv


@given(typed_samples)
def test_postponement(s):
    for _, mid in list(successors(s.term, "Bot", s.ctx))[:2]:
        for fam in ("D", "P"):
            for _, t in list(successors(mid, fam, s.ctx))[:2]:
                assert postponement_witness(s.term, t, fam, s.ctx) is not None
