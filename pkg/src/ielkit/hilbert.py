"""Hilbert-style derivations and their translation into proof terms."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .formula import Formula, Impl
from .term import App, Term, Var
from .typecheck import Context, axiom_instance, ipc_axiom_term


@dataclass(frozen=True)
class Axiom:
    scheme: str
    parts: tuple[Formula, ...]


@dataclass(frozen=True)
class MP:
    """Modus ponens from line ``major`` (an implication) and line ``minor``."""

    major: int
    minor: int


@dataclass(frozen=True)
class Hyp:
    name: str


Justification = Union[Axiom, MP, Hyp]


@dataclass(frozen=True)
class HilbertProof:
    lines: tuple[tuple[Formula, Justification], ...]

    @property
    def conclusion(self) -> Formula:
        return self.lines[-1][0]

    def hypotheses(self) -> Context:
        return Context({j.name: f for f, j in self.lines if isinstance(j, Hyp)})


class MalformedProof(ValueError):
    pass


def validate(proof: HilbertProof) -> None:
    if not proof.lines:
        raise MalformedProof("empty proof")
    hyps: dict[str, Formula] = {}
    for n, (f, just) in enumerate(proof.lines):
        match just:
            case Axiom(scheme=s, parts=parts):
                inst = axiom_instance(s, parts)
                if inst != f:
                    raise MalformedProof(f"line {n}: {s} instance is {inst}, not {f}")
            case Hyp(name=name):
                if hyps.setdefault(name, f) != f:
                    raise MalformedProof(f"line {n}: hypothesis {name} reused at another formula")
            case MP(major=i, minor=j):
                if not (0 <= i < n and 0 <= j < n):
                    raise MalformedProof(f"line {n}: MP refers to lines {i}, {j}")
                major = proof.lines[i][0]
                if major != Impl(proof.lines[j][0], f):
                    raise MalformedProof(
                        f"line {n}: line {i} is {major}, not {proof.lines[j][0]} -> {f}")
            case _:
                raise MalformedProof(f"line {n}: unknown justification {just!r}")


def hilbert_to_nd(proof: HilbertProof) -> Term:
    """A term typed by the proof's conclusion in the proof's hypothesis context."""
    validate(proof)
    terms: list[Term] = []
    for f, just in proof.lines:
        match just:
            case Axiom(scheme=s, parts=parts):
                terms.append(ipc_axiom_term(s, parts))
            case Hyp(name=name):
                terms.append(Var(name))
            case MP(major=i, minor=j):
                terms.append(App(terms[i], terms[j]))
    return terms[-1]


def proof(*lines: tuple[Formula, Justification]) -> HilbertProof:
    return HilbertProof(tuple(lines))


def axiom_line(scheme: str, parts: Sequence[Formula]) -> tuple[Formula, Axiom]:
    return axiom_instance(scheme, parts), Axiom(scheme, tuple(parts))
