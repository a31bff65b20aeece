"""The free skeleton as a monoid of canonical terms."""
from __future__ import annotations

from typing import Sequence

from .errors import ArityMismatch, NotSkeleton
from .reduction import DEFAULT_FUEL, canonicalize
from .terms import ONE, Apply, FunctionSymbol, Term, Var, Word, is_skeleton

__all__ = ["SkeletonElement", "identity", "generator", "times", "apply_symbol", "act"]


class SkeletonElement:
    """An element of the free skeleton, held as its canonical representative."""

    __slots__ = ("term",)

    def __init__(self, term: Term):
        self.term = term

    @classmethod
    def of(cls, term: Term, fuel: int = DEFAULT_FUEL) -> SkeletonElement:
        if not is_skeleton(term):
            raise NotSkeleton("skeleton elements cannot contain 0, + or scal")
        return cls(canonicalize(term, fuel))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SkeletonElement):
            return NotImplemented
        return self.term == other.term

    def __hash__(self) -> int:
        return hash(self.term)

    def __lt__(self, other: SkeletonElement) -> bool:
        return self.term.key < other.term.key

    def __mul__(self, other: SkeletonElement) -> SkeletonElement:
        return times(self, other)

    def __str__(self) -> str:
        return str(self.term)

    def __repr__(self) -> str:
        return f"[{self.term}]"

    @property
    def is_identity(self) -> bool:
        return self.term == ONE


_IDENTITY = SkeletonElement(ONE)


def identity() -> SkeletonElement:
    return _IDENTITY


def generator(name: str) -> SkeletonElement:
    return SkeletonElement(Var.parse(name))


def times(a: SkeletonElement, b: SkeletonElement,
          fuel: int = DEFAULT_FUEL) -> SkeletonElement:
    if a.is_identity:
        return b
    if b.is_identity:
        return a
    return SkeletonElement(canonicalize(Word((a.term, b.term)), fuel))


def apply_symbol(symbol: FunctionSymbol, args: Sequence[SkeletonElement],
                 fuel: int = DEFAULT_FUEL) -> SkeletonElement:
    if len(args) != symbol.arity:
        raise ArityMismatch(
            f"symbol takes {symbol.arity} argument(s), got {len(args)}")
    return SkeletonElement(canonicalize(Apply(symbol, [a.term for a in args]), fuel))


def act(m: SkeletonElement, a: SkeletonElement,
        fuel: int = DEFAULT_FUEL) -> SkeletonElement:
    """Image of ``m`` under the right action of ``a``; same as ``times(m, a)``."""
    return times(m, a, fuel)
