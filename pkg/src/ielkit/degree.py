"""Permutation degree: the pair of norms witnessing termination of permutations.

Both norms are defined on terms without ``efq`` and ``unit``, typed or not.
On every permutation step the ``hash`` norm is invariant and the ``bar`` norm
strictly decreases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .term import App, BoxIntro, Case, Efq, Inj, Lam, Pair, Proj, Term, Unit, Var


class DegreeError(ValueError):
    pass


@dataclass(frozen=True)
class DegreeReport:
    bar: int
    hash: int

    def __str__(self) -> str:
        return f"bar={self.bar} hash={self.hash}"


def degree(t: Term) -> DegreeReport:
    bar, hsh = _norms(t)
    return DegreeReport(bar, hsh)


def bar_norm(t: Term) -> int:
    return _norms(t)[0]


def hash_norm(t: Term) -> int:
    return _norms(t)[1]


def _norms(t: Term) -> tuple[int, int]:
    match t:
        case Var():
            return 1, 1
        case Lam(body=b):
            return _norms(b)[0], 1
        case App(fun=f, arg=a):
            fb, fh = _norms(f)
            ab, _ = _norms(a)
            return fb + fh * ab, fh
        case Pair(fst=a, snd=b):
            return _norms(a)[0] + _norms(b)[0], 1
        case Proj(arg=a):
            ab, ah = _norms(a)
            return ab + ah, ah
        case Inj(arg=a):
            return _norms(a)[0], 1
        case Case(scrut=s, left=l, right=r):
            sb, sh = _norms(s)
            lb, lh = _norms(l)
            rb, rh = _norms(r)
            return sb + sh * (lb + rb), 2 * sh * (lh + rh)
        case BoxIntro(args=args, body=body):
            norms = [_norms(a) for a in args]
            bb, bh = _norms(body)
            bars = math.prod(b for b, _ in norms)
            hashes = math.prod(h for _, h in norms)
            return bb * bars + hashes, bh * hashes
        case Efq() | Unit():
            raise DegreeError(f"permutation degree is undefined on {type(t).__name__}")
    raise DegreeError(f"not a term: {t!r}")
