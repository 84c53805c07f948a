"""Command-line front end: ``ielkit <command> ...``.

Exit codes: 0 success, 1 logical failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from . import cps as C
from . import lemmas
from .decide import PROPERTIES, check_metatheory, decide_verbose
from .degree import DegreeError, degree
from .formula import Formula
from .rewrite import STRATEGIES, FuelExhausted, RewriteError, normalize
from .syntax import ParseError, parse_formula, parse_term, print_formula, print_term
from .typecheck import TypeCheckError, infer

DEFAULT_FUEL = 10_000


class UsageError(Exception):
    pass


def _text(arg: str) -> str:
    return sys.stdin.read().strip() if arg == "-" else arg


def _formula(arg: str, flag: str) -> Formula:
    try:
        return parse_formula(_text(arg))
    except ParseError as e:
        raise UsageError(f"{flag}: {e}") from None


def _context(hyps: Sequence[str]) -> dict[str, Formula]:
    ctx: dict[str, Formula] = {}
    for h in hyps:
        name, sep, body = h.partition(":")
        if not sep or not name.strip():
            raise UsageError(f"--hyp: expected NAME:FORMULA, got {h!r}")
        ctx[name.strip()] = _formula(body, "--hyp")
    return ctx


def _term(arg: str, ctx: dict):
    try:
        return parse_term(_text(arg), ctx)
    except ParseError as e:
        raise UsageError(f"term: {e}") from None


def _fuel(value: Optional[int]) -> int:
    if value is not None:
        return value
    env = os.environ.get("KERNEL_FUEL")
    if env is None:
        return DEFAULT_FUEL
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"KERNEL_FUEL: not an integer: {env!r}") from None


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------- commands


def cmd_check(args) -> int:
    ctx = _context(args.hyp)
    t = _term(args.term, ctx)
    try:
        got = infer(ctx, t)
    except TypeCheckError as e:
        _emit(args, {"ok": False, "error": e.to_json()}, f"type error at {e.render()}")
        return 1
    ok = True
    if args.type is not None:
        ok = got == _formula(args.type, "--type")
    text = print_formula(got) if ok else f"mismatch: {print_formula(got)}"
    _emit(args, {"ok": ok, "formula": print_formula(got)}, text)
    return 0 if ok else 1


def cmd_normalize(args) -> int:
    ctx = _context(args.hyp)
    t = _term(args.term, ctx)
    fuel = _fuel(args.fuel)
    if fuel <= 0:
        raise UsageError("--fuel: must be positive")
    try:
        trace = normalize(t, args.strategy, fuel, ctx or None)
    except FuelExhausted as e:
        _emit(args, {"ok": False, "error": str(e), **e.trace.to_json()}, f"fuel exhausted: {e}")
        return 1
    except RewriteError as e:
        _emit(args, {"ok": False, "error": str(e)}, f"error: {e}")
        return 1
    lines = []
    if args.trace:
        for s in trace.steps:
            idx = f"[{s.index}]" if s.index is not None else ""
            lines.append(f"{s.kind.value}{idx} at {list(s.path)}: {print_term(s.after)}")
    lines.append(print_term(trace.result))
    payload = trace.to_json() if args.trace else {"result": print_term(trace.result)}
    payload["length"] = len(trace)
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_degree(args) -> int:
    t = _term(args.term, {})
    try:
        rep = degree(t)
    except DegreeError as e:
        _emit(args, {"ok": False, "error": str(e)}, f"error: {e}")
        return 1
    _emit(args, {"bar": rep.bar, "hash": rep.hash}, str(rep))
    return 0


def cmd_cps(args) -> int:
    ctx = _context(args.hyp)
    t = _term(args.term, ctx)
    try:
        infer(ctx, t)
        image = C.cps_mod(t, ctx) if args.modified else C.cps(t, ctx)
    except (TypeCheckError, C.CpsError) as e:
        _emit(args, {"ok": False, "error": str(e)}, f"error: {e}")
        return 1
    payload: dict = {"term": C.print_stt(image)}
    lines = [C.print_stt(image)]
    ok = True
    if args.check_lemmas:
        checks = lemmas.cps_checks(t, ctx)
        ok = all(c.ok for c in checks)
        payload["checks"] = [{"lemma": c.lemma, "ok": c.ok, "detail": c.detail} for c in checks]
        width = max(len(c.lemma) for c in checks)
        lines.append("")
        lines += [f"{c.lemma:<{width}}  {'pass' if c.ok else 'FAIL'}  {c.detail}" for c in checks]
    payload["ok"] = ok
    _emit(args, payload, "\n".join(lines))
    return 0 if ok else 1


def cmd_decide(args) -> int:
    goal = _formula(args.formula, "formula")
    hyps = [_formula(h, "--hyp") for h in args.hyp]
    v = decide_verbose(hyps, goal)
    verdict = "provable" if v.provable else "unprovable"
    payload = {"verdict": verdict, "universe": v.universe_size,
               "hypothesis_sets": v.hypothesis_sets, "sequents": v.sequents}
    text = f"{verdict}\nuniverse size: {v.universe_size}\nsequents derived: {v.sequents}"
    _emit(args, payload, text)
    if args.expect is not None and args.expect != verdict:
        return 1
    return 0


def cmd_meta(args) -> int:
    atoms = tuple(a.strip() for a in args.atoms.split(",") if a.strip())
    if not atoms:
        raise UsageError("--atoms: need at least one atom")
    if args.size < 0:
        raise UsageError("--size: must be non-negative")
    props = PROPERTIES if args.property == "all" else (args.property,)
    reports = [check_metatheory(p, atoms, args.size) for p in props]
    lines = [f"{'ok' if r.ok else 'FAIL'} {r.property}: {r.checked} checked over {r.universe}, "
             f"{len(r.counterexamples)} counterexamples" for r in reports]
    for r in reports:
        lines += ["  " + ", ".join(map(str, c)) for c in r.counterexamples[:5]]
    payload = {"reports": [r.to_json() for r in reports]} if len(reports) > 1 else reports[0].to_json()
    _emit(args, payload, "\n".join(lines))
    return 0 if all(r.ok for r in reports) else 1


def _run_suite(entry: tuple[str, str, float]) -> list[dict]:
    group, name, scale = entry
    suites = dict(lemmas.lemma_suites(scale) if group == "lemmas" else lemmas.metatheory_suites(scale))
    return [r.to_json() for r in suites[name]()]


def cmd_selftest(args) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs: must be positive")
    scale = 0.1 if args.quick else 1.0
    groups = ("lemmas", "metatheory") if args.suite == "all" else (args.suite,)
    entries = []
    for g in groups:
        suites = lemmas.lemma_suites(scale) if g == "lemmas" else lemmas.metatheory_suites(scale)
        entries += [(g, name, scale) for name, _ in suites]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            outcomes = list(pool.map(_run_suite, entries))
    else:
        outcomes = [_run_suite(e) for e in entries]
    lines, payload = [], []
    for (group, name, _), results in zip(entries, outcomes):
        payload.append({"group": group, "suite": name, "results": results})
        for r in results:
            verdict = "PASS" if r["ok"] else "FAIL"
            note = f"; {r['note']}" if r["note"] else ""
            lines.append(f"{verdict} {name}/{r['name']}: {r['checked']} checked, {r['failed']} failed{note}")
            lines += [f"    {f}" for f in r["failures"]]
    ok = all(r["ok"] for block in outcomes for r in block)
    lines.append("all passed" if ok else "some checks FAILED")
    _emit(args, {"ok": ok, "suites": payload}, "\n".join(lines))
    return 0 if ok else 1


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    # --format is accepted before or after the subcommand
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    p = argparse.ArgumentParser(prog="ielkit", description="Proof kernel for the belief calculus.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    def hyp(sp, help_text="hypothesis NAME:FORMULA (repeatable)"):
        sp.add_argument("--hyp", action="append", default=[], help=help_text)

    sp = sub.add_parser("check", parents=[fmt], help="type-check a term")
    sp.add_argument("term", help="term text, or - for stdin")
    sp.add_argument("--type", help="expected formula")
    hyp(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("normalize", parents=[fmt], help="reduce a term to normal form")
    sp.add_argument("term")
    sp.add_argument("--strategy", choices=STRATEGIES, default="leftmost-outermost")
    sp.add_argument("--fuel", type=int, help="step limit (default: KERNEL_FUEL or 10000)")
    sp.add_argument("--trace", action="store_true", help="print every step")
    hyp(sp)
    sp.set_defaults(func=cmd_normalize)

    sp = sub.add_parser("degree", parents=[fmt], help="permutation degree of a term")
    sp.add_argument("term")
    sp.set_defaults(func=cmd_degree)

    sp = sub.add_parser("cps", parents=[fmt], help="CPS translation into simple types")
    sp.add_argument("term")
    sp.add_argument("--modified", action="store_true", help="use the colon translation")
    sp.add_argument("--check-lemmas", action="store_true", help="check the CPS lemmas on this term")
    hyp(sp)
    sp.set_defaults(func=cmd_cps)

    sp = sub.add_parser("decide", parents=[fmt], help="decide derivability")
    sp.add_argument("formula")
    sp.add_argument("--hyp", action="append", default=[], help="hypothesis formula (repeatable)")
    sp.add_argument("--expect", choices=("provable", "unprovable"))
    sp.set_defaults(func=cmd_decide)

    sp = sub.add_parser("meta", parents=[fmt], help="search for metatheory counterexamples")
    sp.add_argument("--property", choices=PROPERTIES + ("all",), default="all")
    sp.add_argument("--atoms", default="p,r")
    sp.add_argument("--size", type=int, default=3)
    sp.set_defaults(func=cmd_meta)

    sp = sub.add_parser("selftest", parents=[fmt], help="run the invariant suites")
    sp.add_argument("suite", choices=("lemmas", "metatheory", "all"), nargs="?", default="all")
    sp.add_argument("--quick", action="store_true", help="one tenth of the corpus sizes")
    sp.add_argument("--jobs", type=int, default=1, help="run suites in parallel processes")
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        parser.error(str(e))  # exits with status 2
        return 2


if __name__ == "__main__":
    sys.exit(main())
