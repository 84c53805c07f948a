import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ielkit import cps as C
from ielkit.cps import ANSWER, Arrow, SApp, SAtom, SLam, SVar, neg
from ielkit.formula import BOT, Atom, Box, Impl
from ielkit.lemmas import P_KINDS, cps_checks
from ielkit.rewrite import RuleKind, successors
from ielkit.syntax import parse_formula, parse_term
from ielkit.term import Var
from ielkit.typecheck import infer

from conftest import efq_free_samples

p = Atom("p")
sp = SAtom("p")
pbar = neg(neg(sp))
T = parse_term
F = parse_formula


def lam(x, ty, body):
    return SLam(x, ty, body)


def test_type_examples():
    assert C.neg_type(p) == neg(neg(sp))
    assert C.neg_type(Box(p)) == neg(neg(pbar))
    assert C.neg_type(Impl(p, p)) == neg(neg(Arrow(pbar, pbar)))


def test_reserved_and_excluded():
    with pytest.raises(C.CpsError):
        C.pos_type(Atom("q"))
    with pytest.raises(C.CpsError):
        C.neg_type(BOT)


def test_term_examples():
    ctx = {"x": p, "y": p, "t": Box(p), "s": p, "z": Box(p)}
    k = lambda ty: lam("k", ty, SApp(SVar("x"), SVar("k")))  # noqa: E731
    assert C.stt_alpha_eq(C.cps(T("x"), ctx), k(neg(sp)))
    assert C.stt_alpha_eq(C.cps_mod(T("x"), ctx), k(neg(sp)))

    xbar = lam("k", neg(sp), SApp(SVar("x"), SVar("k")))
    ybar = lam("k", neg(sp), SApp(SVar("y"), SVar("k")))
    pair_ty = Arrow(pbar, neg(pbar))
    want = lam("k", neg(neg(pair_ty)),
               SApp(SVar("k"), lam("u", pair_ty, SApp(SApp(SVar("u"), xbar), ybar))))
    assert C.stt_alpha_eq(C.cps(T("<x, y>"), ctx), want)

    sbar = lam("k", neg(sp), SApp(SVar("s"), SVar("k")))
    tbar = lam("k", neg(pbar), SApp(SVar("t"), SVar("k")))
    want = lam("k", neg(pbar), SApp(tbar, lam("x", pbar, SApp(SVar("k"), sbar))))
    assert C.stt_alpha_eq(C.cps(T("bel x:p = t in s"), ctx), want)

    r = SVar("r")
    assert C.colon(T("x"), r, ctx) == SApp(SVar("x"), r)
    want = SApp(SVar("z"), lam("x", pbar, SApp(r, sbar)))
    assert C.stt_alpha_eq(C.colon(T("bel x:p = z in s"), r, ctx), want)


def test_fresh_names_avoid_source_names():
    ctx = {"_k1": p}
    m = C.cps_mod(Var("_k1"), ctx)
    assert C.stt_infer(C.translate_context(ctx), m) == C.neg_type(p)
    assert m.fv == {"_k1"}


def test_colon_renames_capturing_binders():
    ctx = {"z": Box(p), "s": p}
    r = SVar("x")  # r mentions the name of the box binder
    m = C.colon(T("bel x:p = z in s"), r, ctx)
    assert "x" in m.fv


def test_normalizer_examples():
    idq = lam("y", ANSWER, SVar("y"))
    m = SApp(lam("x", ANSWER, SVar("x")), SVar("a"))
    assert C.stt_normalize_beta_eta(m) == SVar("a")
    eta = lam("x", ANSWER, SApp(SVar("f"), SVar("x")))
    assert C.stt_normalize_beta_eta(eta) == SVar("f")
    assert C.is_beta_eta_normal(idq)
    with pytest.raises(C.SttFuelExhausted):
        big = SApp(lam("x", ANSWER, SApp(SApp(SVar("g"), SVar("x")), SVar("x"))),
                   SApp(idq, SVar("a")))
        C.stt_normalize_beta_eta(big, fuel=1)


def test_reduces_to_examples():
    ctx = {"f": Impl(p, p), "x": p}
    t = T("(\\y:p. f y) x")
    plain, mod = C.cps(t, ctx), C.cps_mod(t, ctx)
    assert C.stt_reduces_to(plain, mod, 4 * plain.size)
    assert not C.stt_reduces_to(mod, plain, 100)
    r = SVar("r")
    assert C.stt_reduces_to(SApp(plain, r), C.colon(t, r, ctx), 200)
    nxt = next(s for rd, s in successors(t, "D", ctx))
    assert C.stt_reduces_to_plus(mod, C.cps_mod(nxt, ctx), 200)


def test_p4_at_first_argument_collapses():
    ctx = {"d": F("p \\/ p"), "a": Box(p), "b": Box(p), "c": p}
    t = T("bel u:p = case d of {x => a | y => b} in c", ctx)
    assert infer(ctx, t) == Box(p)
    (rd, s), = [(rd, s) for rd, s in successors(t, "P", ctx)]
    assert rd.kind == RuleKind.P4
    assert C.stt_alpha_eq(C.cps_mod(t, ctx), C.cps_mod(s, ctx))


def test_p4_at_later_argument_does_not_collapse():
    # the earlier argument is evaluated before the hoisted case scrutinee
    ctx = {"d": F("p \\/ p"), "a": Box(p), "b": Box(p), "m": Box(p), "c": p}
    t = T("bel v:p = m, u:p = case d of {x => a | y => b} in c", ctx)
    (rd, s), = [(rd, s) for rd, s in successors(t, "P", ctx)]
    assert (rd.kind, rd.index) == (RuleKind.P4, 1)
    assert not C.stt_alpha_eq(C.cps_mod(t, ctx), C.cps_mod(s, ctx))


@given(efq_free_samples)
def test_typing_preservation(s):
    sctx = C.translate_context(s.ctx)
    want = C.neg_type(s.formula)
    assert C.stt_infer(sctx, C.cps(s.term, s.ctx)) == want
    assert C.stt_infer(sctx, C.cps_mod(s.term, s.ctx)) == want


@given(efq_free_samples, st.integers(0, 1000))
def test_lemma_instances(s, seed):
    for c in cps_checks(s.term, s.ctx, random.Random(seed)):
        if c.lemma == "cps-p-collapse" and "P4[0]" not in c.detail and "P4" in c.detail:
            continue  # known gap for later box arguments, see the P4 tests above
        assert c.ok, (c.lemma, c.detail, str(s.term))


@given(efq_free_samples)
def test_p_collapse_except_later_box_arguments(s):
    mod = C.cps_mod(s.term, s.ctx)
    for rd, t in successors(s.term, "P", s.ctx):
        if rd.kind in P_KINDS and not (rd.kind == RuleKind.P4 and rd.index > 0):
            assert C.stt_alpha_eq(mod, C.cps_mod(t, s.ctx))


def _small_stt(seed):
    """A small closed typed target term built from a CPS image and a continuation."""
    from conftest import typed_sample
    s = typed_sample(seed, efq=False, budget=4)
    return s, C.cps(s.term, s.ctx)


@given(st.integers(0, 2**32))
def test_standard_search_matches_bfs(seed):
    s, plain = _small_stt(seed)
    if plain.size > 60:
        return
    mod = C.cps_mod(s.term, s.ctx)
    bound = 4 * plain.size
    assert C.stt_reduces_to(plain, mod, bound) == C.stt_reachable_bfs(plain, mod, bound)
    nf = C.stt_normalize_beta_eta(plain)
    assert C.stt_reduces_to(plain, nf, 10 * plain.size)
    assert C.stt_reachable_bfs(plain, nf, 10 * plain.size) or plain.size > 40


@given(efq_free_samples)
def test_normal_forms_agree(s):
    plain, mod = C.cps(s.term, s.ctx), C.cps_mod(s.term, s.ctx)
    assert C.stt_alpha_eq(C.stt_normalize_beta_eta(plain), C.stt_normalize_beta_eta(mod))
