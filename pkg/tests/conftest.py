import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ielkit.formula import BOT, TOP, Atom, Box, Conj, Disj, Impl
from ielkit.generate import TermGenerator, untyped_term

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ATOMS = ("p", "r")

leaf_formulas = st.sampled_from([Atom("p"), Atom("r"), Atom("q1"), BOT, TOP])


def _grow(children):
    return st.one_of(
        children.map(Box),
        st.tuples(children, children).map(lambda ab: Impl(*ab)),
        st.tuples(children, children).map(lambda ab: Conj(*ab)),
        st.tuples(children, children).map(lambda ab: Disj(*ab)),
    )


formulas = st.recursive(leaf_formulas, _grow, max_leaves=8)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def typed_sample(seed: int, efq: bool = True, budget: int = 8):
    rng = random.Random(seed)
    return TermGenerator(rng, efq=efq).sample(budget=rng.randint(2, budget))


typed_samples = seeds.map(typed_sample)
efq_free_samples = seeds.map(lambda s: typed_sample(s, efq=False))
untyped_terms = seeds.map(lambda s: untyped_term(random.Random(s), random.Random(s).randint(3, 25)))


# One line per acceptance criterion, printed at the end of the session.
ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
