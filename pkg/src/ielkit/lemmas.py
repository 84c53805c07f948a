"""Mechanical checks of the normalization lemmas over generated corpora.

Each suite returns :class:`LemmaResult` values: how many instances were
checked and a short description of each failure. Corpus sizes default to the
acceptance scale; pass smaller ``n`` for a quick run.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from . import cps as C
from .decide import agreement, check_metatheory, decide
from .degree import bar_norm, hash_norm
from .formula import BOT, Atom, Box, Disj
from .generate import TermGenerator, close, typed_corpus, untyped_corpus
from .rewrite import (RuleKind, check_subformula_property, introduction_for, is_neutral,
                      last_rule, normalize, postponement_witness, step, successors)
from .syntax import parse_formula
from .term import BoxIntro, Case, Efq, Term, Unit, Var, alpha_eq, subst, walk
from .typecheck import AXIOM_SCHEMES, axiom_instance, infer

MAX_FAILURES = 5


@dataclass
class LemmaResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    failed: int = 0
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def fail(self, message: str) -> None:
        self.failed += 1
        if len(self.failures) < MAX_FAILURES:
            self.failures.append(message)

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        extra = f"; {self.note}" if self.note else ""
        return f"{verdict} {self.name}: {self.checked} checked, {self.failed} failed{extra}"

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "checked": self.checked,
                "failed": self.failed, "failures": self.failures, "note": self.note}


P_KINDS = (RuleKind.P1, RuleKind.P2, RuleKind.P3, RuleKind.P4)


def _efq_free(t: Term) -> bool:
    return not any(isinstance(s, (Efq, Unit)) for _, s in walk(t))


# ---------------------------------------------------------------- degree


def degree_lemmas(n: int = 10_000, seed: int = 11, max_size: int = 25) -> list[LemmaResult]:
    inv = LemmaResult("hash-invariance")
    dec = LemmaResult("bar-decrease")
    for t in untyped_corpus(n, seed=seed, max_size=max_size):
        b0, h0 = bar_norm(t), hash_norm(t)
        for rdx, s in successors(t, "P"):
            if rdx.kind not in P_KINDS:
                continue
            b1, h1 = bar_norm(s), hash_norm(s)
            inv.checked += 1
            dec.checked += 1
            if h1 != h0:
                inv.fail(f"{rdx.kind.name} at {list(rdx.path)} in {t}: #{h0} -> #{h1}")
            if not b1 < b0:
                dec.fail(f"{rdx.kind.name} at {list(rdx.path)} in {t}: |{b0}| -> |{b1}|")
    inv.note = dec.note = f"{n} untyped terms of size <= {max_size}"
    return [inv, dec]


# ---------------------------------------------------------------- rewriting


def subject_reduction(n: int = 5_000, seed: int = 21) -> LemmaResult:
    res = LemmaResult("subject-reduction", note=f"{n} typed terms, all one-step successors")
    for s in typed_corpus(n, seed=seed):
        for rdx, nxt in successors(s.term, "All", s.ctx):
            res.checked += 1
            try:
                got = infer(s.ctx, nxt)
            except Exception as e:  # noqa: BLE001 - any failure is a counterexample
                res.fail(f"{rdx.kind.name} on {s.term}: {e}")
                continue
            if got != s.formula:
                res.fail(f"{rdx.kind.name} on {s.term}: {s.formula} became {got}")
    return res


def trace_digest(n: int = 5_000, seed: int = 21) -> str:
    """Hash of every default-strategy trace over the corpus."""
    h = hashlib.sha256()
    for s in typed_corpus(n, seed=seed):
        tr = normalize(s.term, fuel=10 * 4 ** s.term.size, ctx=s.ctx)
        h.update(json.dumps(tr.to_json(), sort_keys=True).encode())
    return h.hexdigest()


def strong_normalization(n: int = 5_000, seed: int = 21) -> list[LemmaResult]:
    sn = LemmaResult("strong-normalization", note=f"{n} typed terms, both strategies, fuel 10*4^size")
    det = LemmaResult("trace-determinism", note="default strategy traced twice")
    corpus = typed_corpus(n, seed=seed)
    for s in corpus:
        fuel = 10 * 4 ** s.term.size
        for strategy in ("leftmost-outermost", "leftmost-innermost"):
            sn.checked += 1
            try:
                normalize(s.term, strategy, fuel, s.ctx)
            except Exception as e:  # noqa: BLE001
                sn.fail(f"{strategy} on {s.term}: {e}")
    first = trace_digest(n, seed)
    det.checked = len(corpus)
    if trace_digest(n, seed) != first:
        det.fail("trace digests differ between runs")
    det.note += f"; digest {first[:16]}"
    return [sn, det]


def subformula_property(n: int = 5_000, seed: int = 21) -> LemmaResult:
    res = LemmaResult("subformula-property", note=f"normal forms of {n} typed terms")
    for s in typed_corpus(n, seed=seed):
        nf = normalize(s.term, fuel=10 * 4 ** s.term.size, ctx=s.ctx).result
        res.checked += 1
        if not check_subformula_property(s.ctx, nf, s.formula):
            res.fail(f"{nf} : {s.formula}")
    return res


def canonicity(n: int = 5_000, seed: int = 21) -> list[LemmaResult]:
    canon = LemmaResult("canonicity", note="closed normal terms end in the matching introduction")
    neutral = LemmaResult("neutrality", note="neutral subterms of normal terms have free variables")
    for s in typed_corpus(n, seed=seed):
        nf = normalize(s.term, fuel=10 * 4 ** s.term.size, ctx=s.ctx).result
        for _, sub in walk(nf):
            if is_neutral(sub):
                neutral.checked += 1
                if not sub.fv:
                    neutral.fail(f"closed neutral subterm {sub} of {nf}")
        c = close(s)
        cnf = normalize(c.term, fuel=10 * 4 ** c.term.size).result
        canon.checked += 1
        if last_rule(cnf) != introduction_for(c.formula):
            canon.fail(f"{cnf} : {c.formula} ends in {last_rule(cnf).value}")
    cons = LemmaResult("consistency", checked=1, note="decide(empty, bot)")
    if decide((), BOT):
        cons.fail("bot is derivable")
    return [canon, neutral, cons]


# ---------------------------------------------------------------- postponement


def critical_pair() -> LemmaResult:
    """Replay the boxed efq-of-case critical pair along both displayed paths."""
    res = LemmaResult("critical-pair", note="B_z(E(C(t1,t2,t3))) in s1")
    p, r = Atom("p"), Atom("r")
    ctx = {"t1": Disj(p, r), "t2": BOT, "t3": BOT, "s1": r}
    cz = p  # type of the binder z; the box argument has type []p
    arg = Efq(Box(cz), Case(Var("t1"), "x", Var("t2"), "y", Var("t3")))
    start = BoxIntro((("z", cz),), (arg,), Var("s1"))
    expect = Case(Var("t1"), "x", Efq(Box(r), Var("t2")), "y", Efq(Box(r), Var("t3")))

    def run(path: list[tuple[tuple[int, ...], RuleKind, Optional[int]]]) -> Term:
        t = start
        for where, kind, index in path:
            t = step(t, where, kind, index, ctx)
            if infer(ctx, t) != Box(r):
                raise AssertionError(f"{kind.name} changed the type")
        return t

    long_path = [((0,), RuleKind.PBot, None), ((), RuleKind.P4, 0),
                 ((1,), RuleKind.B5, 0), ((2,), RuleKind.B5, 0)]
    short_path = [((), RuleKind.B5, 0), ((), RuleKind.PBot, None)]
    for name, path in (("permutations first", long_path), ("absurdity first", short_path)):
        res.checked += 1
        try:
            got = run(path)
        except Exception as e:  # noqa: BLE001
            res.fail(f"{name}: {e}")
            continue
        if not alpha_eq(got, expect):
            res.fail(f"{name}: ended at {got}, expected {expect}")
    return res


def _triples(n: int, seed: int) -> Iterator[tuple[Term, dict, str, Term]]:
    """Triples r >bot s >R t from the typed corpus (R in D, P)."""
    produced = 0
    batch = 0
    while produced < n:
        for sample in typed_corpus(500, seed=seed + batch):
            r, ctx = sample.term, sample.ctx
            per_term = 0
            for _, s in successors(r, "Bot", ctx):
                for fam in ("D", "P"):
                    for _, t in successors(s, fam, ctx):
                        yield r, ctx, fam, t
                        produced += 1
                        per_term += 1
                        if per_term >= 4 or produced >= n:
                            break
                    if per_term >= 4 or produced >= n:
                        break
                if per_term >= 4 or produced >= n:
                    break
            if produced >= n:
                return
        batch += 1


def postponement(n: int = 1_000, seed: int = 31) -> list[LemmaResult]:
    res = LemmaResult("postponement", note="r >bot s >R t rejoined by r +>R k >>bot t")
    for r, ctx, fam, t in _triples(n, seed):
        res.checked += 1
        if postponement_witness(r, t, fam, ctx) is None:
            res.fail(f"{fam}: {r} ~> {t}")
    return [res, critical_pair()]


# ---------------------------------------------------------------- CPS


def _cps_corpus(n: int, seed: int):
    out = []
    for s in typed_corpus(4 * n, seed=seed, efq=False):
        if _efq_free(s.term):
            out.append(s)
            if len(out) == n:
                break
    return out


@dataclass(frozen=True)
class Check:
    """One CPS lemma instance: ``lemma`` is one of CPS_LEMMAS."""

    lemma: str
    ok: bool
    detail: str


CPS_LEMMAS = ("cps-typing", "cps-redex-deletion", "cps-d-simulation", "cps-p-collapse",
              "cps-substitution")


def cps_checks(t: Term, ctx: dict, rng: Optional[random.Random] = None) -> list[Check]:
    """Every CPS lemma instance arising from ``t`` (efq- and unit-free, typed by ``ctx``)."""
    rng = rng or random.Random(0)
    a = infer(ctx, t)
    sctx = C.translate_context(ctx)
    plain, mod = C.cps(t, ctx), C.cps_mod(t, ctx)
    want = C.neg_type(a)
    out = []
    try:
        ok = C.stt_infer(sctx, plain) == want and C.stt_infer(sctx, mod) == want
        out.append(Check("cps-typing", ok, f"expected {C.print_stype(want)}"))
    except C.SttTypeError as e:
        out.append(Check("cps-typing", False, str(e)))
    out.append(Check("cps-redex-deletion", C.stt_reduces_to(plain, mod, 4 * plain.size),
                     f"bound {4 * plain.size}"))
    for rdx, nxt in successors(t, "All", ctx):
        label = rdx.kind.name + (f"[{rdx.index}]" if rdx.index is not None else "")
        where = f"{label} at {list(rdx.path)}"
        image = C.cps_mod(nxt, ctx)
        if rdx.kind.family == "D":
            out.append(Check("cps-d-simulation", C.stt_reduces_to_plus(mod, image, 10 * mod.size), where))
        elif rdx.kind in P_KINDS:
            out.append(Check("cps-p-collapse", C.stt_alpha_eq(mod, image), where))
    if ctx:
        x = rng.choice(sorted(ctx))
        gen = TermGenerator(rng, efq=False)
        gen.free = dict(ctx)
        s = gen.gen(ctx[x], {}, 4)
        full = dict(gen.free)
        lhs = C.stt_subst(C.cps_mod(t, full), x, C.cps_mod(s, full))
        rhs = C.cps_mod(subst(t, x, s), full)
        out.append(Check("cps-substitution", C.stt_reduces_to(lhs, rhs, 10 * lhs.size),
                         f"{x} := {s}"))
    return out


_CPS_NOTES = {
    "cps-typing": "cps and cps_mod have type neg_type(A)",
    "cps-redex-deletion": "cps(t) >>be cps_mod(t) within 4*size(cps(t))",
    "cps-d-simulation": "t >D s gives cps_mod(t) +>be cps_mod(s)",
    "cps-p-collapse": "t >P s gives cps_mod(t) =alpha cps_mod(s)",
    "cps-substitution": "cps_mod(t)[x:=cps_mod(s)] >>be cps_mod(t[x:=s])",
}


def cps_lemmas(n: int = 2_000, seed: int = 41) -> list[LemmaResult]:
    results = {name: LemmaResult(name, note=_CPS_NOTES[name]) for name in CPS_LEMMAS}
    rng = random.Random(seed)
    broken: dict[str, int] = {}
    for sample in _cps_corpus(n, seed):
        for c in cps_checks(sample.term, sample.ctx, rng):
            res = results[c.lemma]
            res.checked += 1
            if not c.ok:
                res.fail(f"{c.detail} in {sample.term}")
                if c.lemma == "cps-p-collapse":
                    rule = c.detail.split()[0]
                    broken[rule] = broken.get(rule, 0) + 1
    if broken:
        results["cps-p-collapse"].note += "; failing rules " + ", ".join(
            f"{k}: {v}" for k, v in sorted(broken.items()))
    return list(results.values())


# ---------------------------------------------------------------- decision


SPOT_THEOREMS = ("p -> [] p", "[] (p -> r) -> [] p -> [] r")
SPOT_NON_THEOREMS = ("[] p -> p", "((p -> r) -> p) -> p", "p \\/ (p -> bot)", "bot")


def decide_spot_checks(atoms: tuple[str, ...] = ("p", "r")) -> LemmaResult:
    res = LemmaResult("decide-spot-checks")
    for text in SPOT_THEOREMS:
        res.checked += 1
        if not decide((), parse_formula(text)):
            res.fail(f"rejects {text}")
    for text in SPOT_NON_THEOREMS:
        res.checked += 1
        if decide((), parse_formula(text)):
            res.fail(f"accepts {text}")
    leaves = [Atom(a) for a in atoms]
    instances = 0
    for scheme, (arity, _, _) in sorted(AXIOM_SCHEMES.items()):
        for parts in _products(leaves, arity):
            instances += 1
            res.checked += 1
            f = axiom_instance(scheme, parts)
            if not decide((), f):
                res.fail(f"rejects {scheme} instance {f}")
    res.note = f"{len(SPOT_THEOREMS)} theorems, {len(SPOT_NON_THEOREMS)} non-theorems, {instances} axiom instances"
    return res


def _products(items: list, k: int) -> Iterator[tuple]:
    if k == 0:
        yield ()
        return
    for head in items:
        for rest in _products(items, k - 1):
            yield (head,) + rest


def oracle_agreement(atoms: tuple[str, ...] = ("p", "r"), max_size: int = 4, bound: int = 24,
                     limit: Optional[int] = None) -> LemmaResult:
    n, bad = agreement(atoms, max_size, bound, limit)
    res = LemmaResult("oracle-agreement", checked=n,
                      note=f"atoms {','.join(atoms)}, <= {max_size} connectives, size bound {bound}")
    for f, d, size in bad:
        res.fail(f"{f}: decide {d}, oracle {size}")
    return res


def metatheory(atoms: tuple[str, ...] = ("p", "r"), max_size: int = 3) -> list[LemmaResult]:
    out = []
    for prop in ("disjunction", "weak-disjunction", "box-primality", "reflection", "consistency"):
        rep = check_metatheory(prop, atoms, max_size)
        res = LemmaResult(prop, checked=rep.checked, note=rep.universe)
        for ce in rep.counterexamples:
            res.fail(" , ".join(str(f) for f in ce))
        out.append(res)
    return out


# ---------------------------------------------------------------- registry


def lemma_suites(scale: float = 1.0) -> list[tuple[str, Callable[[], list[LemmaResult]]]]:
    def k(n: int) -> int:
        return max(1, int(n * scale))

    return [
        ("degree", lambda: degree_lemmas(k(10_000))),
        ("subject-reduction", lambda: [subject_reduction(k(5_000))]),
        ("strong-normalization", lambda: strong_normalization(k(5_000))),
        ("cps", lambda: cps_lemmas(k(2_000))),
        ("postponement", lambda: postponement(k(1_000))),
        ("subformula", lambda: [subformula_property(k(5_000))]),
        ("canonicity", lambda: canonicity(k(5_000))),
    ]


def metatheory_suites(scale: float = 1.0) -> list[tuple[str, Callable[[], list[LemmaResult]]]]:
    full = scale >= 1.0
    return [
        ("decide", lambda: [decide_spot_checks(),
                            oracle_agreement(max_size=4 if full else 3)]),
        ("metatheory", lambda: metatheory(max_size=3 if full else 2)),
    ]
