"""Acceptance criteria 1-9, each at its stated scale and tolerance.

Every test records a one-line verdict that is printed in the pytest summary
(and by ``python3 tests/test_acceptance.py``).
"""

import subprocess
import sys
import time

import pytest

from ielkit import lemmas
from ielkit.kernel import BACKEND

from conftest import ACCEPTANCE


def record(n: int, title: str, results, elapsed: float, limit: float | None = None) -> None:
    ok = all(r.ok for r in results)
    in_time = limit is None or elapsed < limit
    verdict = "PASS" if ok and in_time else "FAIL"
    checked = sum(r.checked for r in results)
    failed = [f"{r.name} {r.failed}/{r.checked}" for r in results if not r.ok]
    detail = f"{checked} checks, {elapsed:.1f}s"
    if limit is not None:
        detail += f" (limit {limit:.0f}s)"
    if failed:
        detail += "; failing: " + ", ".join(failed)
    ACCEPTANCE[n] = f"criterion {n} {verdict}: {title}; {detail}"
    for r in results:
        assert r.ok, r.line() + "".join(f"\n    {f}" for f in r.failures)
    assert in_time, f"took {elapsed:.1f}s, limit {limit}s"


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_criterion_1_degree_lemmas():
    results, dt = timed(lambda: lemmas.degree_lemmas(10_000, max_size=25))
    assert all(r.checked >= 10_000 for r in results)
    record(1, "hash invariance and bar decrease on 10000 untyped terms", results, dt, 60)


def test_criterion_2_subject_reduction():
    res, dt = timed(lambda: lemmas.subject_reduction(5_000))
    record(2, "subject reduction over 5000 typed terms", [res], dt)


def test_criterion_3_strong_normalization():
    results, dt = timed(lambda: lemmas.strong_normalization(5_000))
    # determinism across processes, not only within one
    code = ("from ielkit.lemmas import trace_digest; print(trace_digest(5000, 21))")
    other = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    across = lemmas.LemmaResult("cross-process-determinism", checked=1)
    if other.stdout.strip() != lemmas.trace_digest(5_000, 21):
        across.fail("trace digest differs in a fresh interpreter")
    record(3, "normalization under both strategies within 10*4^size fuel, deterministic traces",
           results + [across], dt)


def test_criterion_4_cps_lemmas():
    results, dt = timed(lambda: lemmas.cps_lemmas(2_000))
    typing = next(r for r in results if r.name == "cps-typing")
    assert typing.checked >= 2_000
    record(4, "CPS typing, redex deletion, D-simulation, P-collapse (and substitution) on 2000 terms",
           results, dt, 300)


def test_criterion_5_postponement():
    results, dt = timed(lambda: lemmas.postponement(1_000))
    assert results[0].checked >= 1_000
    record(5, "postponement on 1000 triples plus the boxed efq-of-case critical pair", results, dt)


def test_criterion_6_subformula():
    res, dt = timed(lambda: lemmas.subformula_property(5_000))
    record(6, "subformula property of normal forms", [res], dt)


def test_criterion_7_canonicity():
    results, dt = timed(lambda: lemmas.canonicity(5_000))
    record(7, "canonicity, neutrality and consistency", results, dt)


def test_criterion_8_decision_procedure():
    def run():
        return [lemmas.decide_spot_checks(), lemmas.oracle_agreement(("p", "r"), 4, bound=24)]
    results, dt = timed(run)
    assert results[1].checked > 1_000
    record(8, f"decide spot checks and oracle agreement, <= 4 connectives ({BACKEND} kernel)",
           results, dt, 600)


def test_criterion_9_metatheory():
    results, dt = timed(lambda: lemmas.metatheory(("p", "r"), 3))
    record(9, "disjunction, weak disjunction, box primality, reflection over <= 3 connectives",
           results, dt, 600)


if __name__ == "__main__":
    # conftest (and hypothesis) is already imported here, which pytest warns about
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider",
                          "-W", "ignore::pytest.PytestAssertRewriteWarning"]))
