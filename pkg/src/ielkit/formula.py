"""Propositional formulas with the belief modality."""

from __future__ import annotations

from dataclasses import dataclass, field


class Formula:
    """Base class of formulas. Instances are immutable and hashable."""

    __slots__ = ()

    def children(self) -> tuple[Formula, ...]:
        return ()

    @property
    def size(self) -> int:
        """Number of unary/binary connectives (atoms, bot and top count 0)."""
        return 0

    def __str__(self) -> str:
        from .syntax import print_formula

        return print_formula(self)


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    name: str

    def __repr__(self) -> str:
        return f"Atom({self.name!r})"


@dataclass(frozen=True, slots=True)
class Bot(Formula):
    def __repr__(self) -> str:
        return "Bot()"


@dataclass(frozen=True, slots=True)
class Top(Formula):
    def __repr__(self) -> str:
        return "Top()"


@dataclass(frozen=True, slots=True)
class _Binary(Formula):
    lhs: Formula
    rhs: Formula
    _size: int = field(init=False, repr=False, compare=False, hash=False)
    _hash: int = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_size", 1 + self.lhs.size + self.rhs.size)
        object.__setattr__(self, "_hash", hash((type(self).__name__, self.lhs, self.rhs)))

    def __hash__(self) -> int:
        return self._hash

    def children(self) -> tuple[Formula, ...]:
        return (self.lhs, self.rhs)

    @property
    def size(self) -> int:
        return self._size


@dataclass(frozen=True, slots=True)
class Impl(_Binary):
    __hash__ = _Binary.__hash__

    def __repr__(self) -> str:
        return f"Impl({self.lhs!r}, {self.rhs!r})"


@dataclass(frozen=True, slots=True)
class Conj(_Binary):
    __hash__ = _Binary.__hash__

    def __repr__(self) -> str:
        return f"Conj({self.lhs!r}, {self.rhs!r})"


@dataclass(frozen=True, slots=True)
class Disj(_Binary):
    __hash__ = _Binary.__hash__

    def __repr__(self) -> str:
        return f"Disj({self.lhs!r}, {self.rhs!r})"


@dataclass(frozen=True, slots=True)
class Box(Formula):
    body: Formula
    _size: int = field(init=False, repr=False, compare=False, hash=False)
    _hash: int = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_size", 1 + self.body.size)
        object.__setattr__(self, "_hash", hash(("Box", self.body)))

    def __hash__(self) -> int:
        return self._hash

    def children(self) -> tuple[Formula, ...]:
        return (self.body,)

    @property
    def size(self) -> int:
        return self._size

    def __repr__(self) -> str:
        return f"Box({self.body!r})"


BOT = Bot()
TOP = Top()


def neg(f: Formula) -> Formula:
    return Impl(f, BOT)


def subformulas(f: Formula) -> frozenset[Formula]:
    """All subformulas of ``f``, including ``f`` itself."""
    seen: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        stack.extend(g.children())
    return frozenset(seen)


def atoms(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Atom))


def is_bot_top_free(f: Formula) -> bool:
    return not any(isinstance(g, (Bot, Top)) for g in subformulas(f))
