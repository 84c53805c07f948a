from hypothesis import given

from ielkit.generate import close, typed_corpus, untyped_corpus
from ielkit.rewrite import redexes
from ielkit.term import Efq, Unit, walk
from ielkit.typecheck import infer

from conftest import seeds, typed_sample


def test_corpora_are_deterministic():
    a = typed_corpus(50, seed=3)
    b = typed_corpus(50, seed=3)
    assert [str(s.term) for s in a] == [str(s.term) for s in b]
    assert [str(t) for t in untyped_corpus(50, seed=3)] == [str(t) for t in untyped_corpus(50, seed=3)]


def test_corpus_exercises_every_family():
    kinds = {rd.kind.family for s in typed_corpus(300, seed=1) for rd in redexes(s.term)}
    assert kinds == {"D", "P", "Bot"}


def test_untyped_corpus_bounds():
    ts = untyped_corpus(200, seed=2, max_size=25)
    assert all(t.size <= 25 for t in ts)
    assert not any(isinstance(s, (Efq, Unit)) for t in ts for _, s in walk(t))


@given(seeds)
def test_samples_are_well_typed(seed):
    s = typed_sample(seed)
    assert infer(s.ctx, s.term) == s.formula
    c = close(s)
    assert not c.term.fv and infer({}, c.term) == c.formula


@given(seeds)
def test_efq_free_option(seed):
    s = typed_sample(seed, efq=False)
    assert not any(isinstance(x, Efq) for _, x in walk(s.term))
