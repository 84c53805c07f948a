"""A proof kernel for the intuitionistic belief calculus IEL⁻.

Proof terms are type checked and reduced by the detour, permutation and
absurdity conversions. Alongside sit a CPS translation into simple types and
a decision procedure with its metatheory harness. The submodules ``cps``, ``decide`` and ``degree`` hold the
functions of the same names.
"""

from .cps import cps_mod, neg_type, pos_type, stt_reduces_to
from .decide import check_metatheory, oracle_provable
from .degree import bar_norm, hash_norm
from .formula import BOT, TOP, Atom, Bot, Box, Conj, Disj, Formula, Impl, Top
from .rewrite import RuleKind, normalize, redexes, step
from .syntax import parse_formula, parse_term, print_formula, print_term
from .term import App, BoxIntro, Case, Efq, Inj, Lam, Pair, Proj, Term, Unit, Var
from .typecheck import TypeCheckError, check, infer

__version__ = "0.1.0"

__all__ = [
    "Atom", "Bot", "Top", "Impl", "Conj", "Disj", "Box", "Formula", "BOT", "TOP",
    "Term", "Var", "Lam", "App", "Pair", "Proj", "Inj", "Case", "Efq", "Unit", "BoxIntro",
    "parse_formula", "parse_term", "print_formula", "print_term",
    "infer", "check", "TypeCheckError",
    "RuleKind", "redexes", "step", "normalize",
    "bar_norm", "hash_norm",
    "cps_mod", "pos_type", "neg_type", "stt_reduces_to",
    "oracle_provable", "check_metatheory",
]
