import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ielkit.formula import BOT, Atom, Box, Impl
from ielkit.hilbert import MP, Hyp, MalformedProof, axiom_line, hilbert_to_nd, proof
from ielkit.syntax import parse_formula, parse_term
from ielkit.term import alpha_eq
from ielkit.typecheck import (AXIOM_SCHEMES, TypeCheckError, axiom_instance, check, infer,
                              ipc_axiom_term)

from conftest import typed_samples

p, r = Atom("p"), Atom("r")
F = parse_formula
T = parse_term


def test_infer_examples():
    assert infer({"x": p}, T("x")) == p
    assert infer({}, T("\\x:p. bel in x")) == F("p -> [] p")
    k = T("\\f:[](p -> r). \\a:[]p. bel g:p -> r = f, u:p = a in g u")
    assert infer({}, k) == F("[](p -> r) -> []p -> []r")
    assert infer({}, T("\\x:[]p. x")) == F("[]p -> []p")
    assert not check({}, T("\\x:[]p. x"), F("[]p -> p"))


def test_type_error_path():
    with pytest.raises(TypeCheckError) as e:
        infer({"x": p, "y": r}, T("\\z:p. <z, x y>"))
    assert e.value.path == [0, 1, 0]
    assert e.value.to_json()["found"] == "p"
    assert e.value.render().startswith("0/1/0: expected")


def test_unbound_and_bad_box():
    with pytest.raises(TypeCheckError):
        infer({}, T("x"))
    with pytest.raises(TypeCheckError):
        infer({"a": p}, T("bel u:p = a in u"))


def test_box_body_sees_only_binders_and_context():
    # Delta-sharing: the body may use outer hypotheses as well as the binders
    assert infer({"a": Box(p), "b": r}, T("bel u:p = a in <u, b>")) == F("[](p /\\ r)")


def test_axiom_examples():
    then1 = ipc_axiom_term("then-1", [p, r])
    assert alpha_eq(then1, T("\\a:p. \\b:r. a"))
    assert infer({}, then1) == F("p -> r -> p")
    assert infer({}, ipc_axiom_term("K-box", [p, r])) == F("[](p -> r) -> []p -> []r")
    assert infer({}, ipc_axiom_term("coreflection", [p])) == F("p -> []p")


def test_catalogue_instances():
    for scheme, (arity, _, _) in AXIOM_SCHEMES.items():
        for parts in itertools.product([p, r], repeat=arity):
            assert infer({}, ipc_axiom_term(scheme, parts)) == axiom_instance(scheme, parts)


def test_hilbert_examples():
    single = proof(axiom_line("coreflection", [p]))
    assert infer({}, hilbert_to_nd(single)) == F("p -> []p")

    mp = proof(axiom_line("coreflection", [p]), (p, Hyp("x")), (Box(p), MP(0, 1)))
    assert infer(mp.hypotheses(), hilbert_to_nd(mp)) == Box(p)

    pr = Impl(p, r)
    kbox = F("[](p -> r) -> []p -> []r")
    # K at (p,r), coreflection at p->r, then chain them with S-style distribution
    lines = [
        axiom_line("K-box", [p, r]),                       # 0: [](p->r) -> []p -> []r
        axiom_line("coreflection", [pr]),                  # 1: (p->r) -> [](p->r)
        axiom_line("then-1", [kbox, pr]),                 # 2
        (Impl(pr, kbox), MP(2, 0)),                        # 3
        axiom_line("then-2", [pr, Box(pr), F("[]p -> []r")]),
        (Impl(Impl(pr, Box(pr)), F("(p -> r) -> []p -> []r")), MP(4, 3)),
        (F("(p -> r) -> []p -> []r"), MP(5, 1)),
    ]
    t = hilbert_to_nd(proof(*lines))
    assert infer({}, t) == F("(p -> r) -> []p -> []r")


def test_malformed_hilbert():
    with pytest.raises(MalformedProof):
        hilbert_to_nd(proof((p, MP(0, 0))))
    with pytest.raises(MalformedProof):
        hilbert_to_nd(proof((F("p -> p"), axiom_line("coreflection", [p])[1])))


@st.composite
def hilbert_proofs(draw):
    """Random valid proofs: axioms and hypotheses, closed under available MP steps."""
    rng = random.Random(draw(st.integers(0, 2**32)))
    atoms = [p, r, BOT]
    lines = []
    for i in range(rng.randint(1, 8)):
        mps = [(a, b) for a, (fa, _) in enumerate(lines) for b, (fb, _) in enumerate(lines)
               if isinstance(fa, Impl) and fa.lhs == fb]
        roll = rng.random()
        if mps and roll < 0.5:
            a, b = rng.choice(mps)
            lines.append((lines[a][0].rhs, MP(a, b)))
        elif roll < 0.7:
            lines.append((rng.choice(atoms), Hyp(f"h{i}")))
        else:
            scheme = rng.choice(sorted(AXIOM_SCHEMES))
            arity = AXIOM_SCHEMES[scheme][0]
            parts = [rng.choice(atoms + [Impl(p, r), Box(p)]) for _ in range(arity)]
            lines.append(axiom_line(scheme, parts))
    return proof(*lines)


@given(hilbert_proofs())
def test_hilbert_to_nd_typechecks(pf):
    assert infer(pf.hypotheses(), hilbert_to_nd(pf)) == pf.conclusion


@given(typed_samples)
def test_generated_terms_typecheck(s):
    assert infer(s.ctx, s.term) == s.formula


@given(typed_samples)
def test_weakening(s):
    extra = {"zz_extra": p, "zz_other": Box(r)}
    assert infer({**s.ctx, **extra}, s.term) == s.formula
