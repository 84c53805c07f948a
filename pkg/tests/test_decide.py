import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ielkit import _kernel_py, kernel
from ielkit.decide import (Indexed, check_metatheory, decide, decide_verbose, derivable_set,
                           enumerate_formulas, formulas_of_size, oracle_provable, oracle_size,
                           oracle_witness, universe)
from ielkit.formula import BOT, TOP, Atom, Box, Disj
from ielkit.syntax import parse_formula
from ielkit.typecheck import AXIOM_SCHEMES, axiom_instance, infer

from conftest import formulas

F = parse_formula
p, r = Atom("p"), Atom("r")


@pytest.mark.parametrize("text, expected", [
    ("p -> [] p", True),
    ("[] (p -> r) -> [] p -> [] r", True),
    ("[] p -> p", False),
    ("bot", False),
    ("((p -> r) -> p) -> p", False),
    ("p \\/ (p -> bot)", False),
    ("top", True),
    ("[] top", True),
    ("[] [] p -> [] p", False),
    ("[] p -> [] [] p", True),
    ("([] p -> p) -> p", False),
    ("[] (p \\/ r) -> [] p \\/ [] r", False),
    ("[] p /\\ [] r -> [] (p /\\ r)", True),
    ("(p -> [] r) -> [] (p -> r)", False),
    ("[] bot -> bot", False),  # needs the stronger axiom []A -> ~~A
])
def test_decide_examples(text, expected):
    assert decide((), F(text)) is expected


def test_decide_with_hypotheses():
    assert decide([p, F("p -> r")], r)
    assert decide([BOT], F("[] p /\\ r"))
    assert not decide([F("[] p")], p)
    assert decide([F("[] p"), F("[] (p -> r)")], F("[] r"))


def test_verdict_stats():
    v = decide_verbose((), F("p -> [] p"))
    assert v.provable and v.universe_size == 3 and v.sequents >= 1


def test_universe():
    assert universe(F("p -> [] p")) == {F("p -> [] p"), F("[] p"), p}
    assert universe(p, [r]) == {p, r}


def test_derivable_set():
    assert F("[] p") in derivable_set([p], F("[] p"))


def test_oracle_examples():
    assert oracle_provable((), F("p -> p"), 3)
    assert oracle_size((), F("p -> p"), 10) == 2
    assert oracle_provable((), F("p -> [] p"), 5)
    for bound in (1, 5, 20):
        assert not oracle_provable((), p, bound)


@pytest.mark.parametrize("text", ["p -> [] p", "[] (p -> r) -> [] p -> [] r", "top", "p /\\ r -> r \\/ p",
                                  "(p \\/ r -> bot) -> p -> [] r", "[] top -> top"])
def test_oracle_witnesses_typecheck(text):
    f = F(text)
    term, ctx = oracle_witness((), f, 24)
    assert infer(ctx, term) == f
    assert term.size == oracle_size((), f, 24)


def test_enumeration_counts():
    # leaves: 2 atoms + bot + top
    assert len(formulas_of_size(("p", "r"), 0)) == 4
    assert len(formulas_of_size(("p", "r"), 1)) == 4 + 3 * 16
    fs = list(enumerate_formulas(("p", "r"), 2))
    assert len(fs) == len(set(fs))
    assert all(f.size <= 2 for f in fs)


def test_axiom_closure():
    for scheme, (arity, _, _) in AXIOM_SCHEMES.items():
        for parts in itertools.product([p, r, BOT, Box(p)], repeat=arity):
            assert decide((), axiom_instance(scheme, parts)), scheme


@pytest.mark.parametrize("prop", ["reflection", "disjunction", "weak-disjunction",
                                  "box-primality", "consistency"])
def test_metatheory_small(prop):
    rep = check_metatheory(prop, ("p",) if prop == "reflection" else ("p", "r"), 2)
    assert rep.ok and rep.checked > 0
    js = rep.to_json()
    assert js["counterexamples"] == [] and js["property"] == prop


def test_metatheory_unknown():
    with pytest.raises(ValueError):
        check_metatheory("nonsense")


@given(formulas, st.lists(formulas, max_size=2), formulas)
def test_weakening(goal, hyps, extra):
    if decide(hyps, goal):
        assert decide(hyps + [extra], goal)


@given(formulas)
def test_decide_matches_oracle(f):
    if f.size > 6:
        return
    assert decide((), f) == oracle_provable((), f, 24)


@given(formulas)
def test_box_rule_soundness(f):
    # co-reflection and K at the meta level
    if decide((), f):
        assert decide((), Box(f))
    assert decide([f], Box(f))


@given(formulas, formulas)
def test_disjunction_property(a, b):
    if decide((), Disj(a, b)):
        assert decide((), a) or decide((), b)


@given(formulas)
def test_kernels_agree(f):
    u = Indexed.build(f, [TOP])
    g = u.index[f]
    for h in (0, u.mask([TOP])):
        assert kernel.decide(u.kinds, u.lhs, u.rhs, h, g) == _kernel_py.decide(u.kinds, u.lhs, u.rhs, h, g)
        assert kernel.oracle_min_size(u.kinds, u.lhs, u.rhs, h, g, 16) == \
            _kernel_py.oracle_min_size(u.kinds, u.lhs, u.rhs, h, g, 16)


def test_kernel_backend_reported():
    assert kernel.BACKEND in ("compiled", "python")


def test_oracle_witness_with_hypotheses():
    hyps = [F("p \\/ r"), F("p -> bot")]
    term, ctx = oracle_witness(hyps, r, 24)
    assert infer(ctx, term) == r
