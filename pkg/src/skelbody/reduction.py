"""Reduction of skeleton terms, canonical forms and essential equality.

Reduction is innermost with a left-to-right fold over each word: a factor
that is an application fires against the whole prefix accumulated so far,
``P F(a1..an) -> def[%0:=P, %i:=ai]``, and the result is reduced again.
Unit factors are dropped before anything fires, so ``1 F = F``.

Fuel is counted in work units: one per rule firing and one per factor
emitted into a word, and no instantiated body may have more nodes than
the fuel, so terminating but exponentially growing reductions are cut off
as well as endless ones.

Canonical forms additionally sort the arguments of every application by
the term order and permute the slots of its defining term to match.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import Divergent, NotSkeleton
from .terms import (
    ONE, Apply, FunctionSymbol, One, Scal, Slot, Sum, Term, Var, Word, Zero,
    instantiate, relabel_slots,
)

DEFAULT_FUEL = 10_000

__all__ = [
    "DEFAULT_FUEL", "ReductionOutcome", "reduce", "canonicalize", "normal_form",
    "essentially_equal", "provably_equal", "essentially_equal_by_search",
    "is_identity_symbol",
]


@dataclass(frozen=True)
class ReductionOutcome:
    result: Term | None = None
    divergent: Divergent | None = None

    @property
    def ok(self) -> bool:
        return self.divergent is None


def is_identity_symbol(symbol: FunctionSymbol) -> bool:
    return symbol.arity == 0 and isinstance(symbol.definition, Slot)


_ATOMS = (Var, Slot)


class _Reducer:
    def __init__(self, fuel: int):
        self.fuel = fuel
        self.steps = 0
        self.active: set[Term] = set()
        self.memo: dict[Term, Term] = {}

    def nf(self, t: Term) -> Term:
        if isinstance(t, (One, Var, Slot)):
            return t
        if isinstance(t, Apply):
            if is_identity_symbol(t.symbol):
                return ONE
            return Apply(t.symbol, [self.nf(a) for a in t.args])
        if isinstance(t, Word):
            acc: list[Term] = []
            for f in t.factors:
                if type(f) in _ATOMS:
                    # inlined push of an atom: the hot path on large words
                    self.steps += 1
                    if self.steps > self.fuel:
                        raise Divergent(f, "fuel", self.steps)
                    acc.append(f)
                else:
                    self.push(acc, self.nf(f))
            return Word.from_flat(acc)
        if isinstance(t, (Zero, Sum, Scal)):
            raise NotSkeleton("reduce expects a skeleton term; linearize body terms first")
        raise TypeError(f"not a term: {t!r}")

    def push(self, acc: list[Term], f: Term) -> None:
        if isinstance(f, One):
            return
        if isinstance(f, Word):
            for g in f.factors:
                if type(g) in _ATOMS:
                    self.steps += 1
                    if self.steps > self.fuel:
                        raise Divergent(g, "fuel", self.steps)
                    acc.append(g)
                else:
                    self.push(acc, g)
            return
        if isinstance(f, Apply) and acc:
            prefix = Word.from_flat(acc)
            redex = Word((prefix, f))
            done = self.memo.get(redex)
            if done is None:
                if redex in self.active:
                    raise Divergent(redex, "cycle", self.steps)
                self.spend(redex)
                body = instantiate(f.symbol.definition, (prefix,) + f.args)
                if body.size > self.fuel:
                    raise Divergent(redex, "fuel", self.steps)
                self.active.add(redex)
                try:
                    done = self.nf(body)
                finally:
                    self.active.discard(redex)
                self.memo[redex] = done
            # done is already normal, so its factors cannot fire again
            acc.clear()
            if isinstance(done, Word):
                self.spend(done, len(done.factors))
                acc.extend(done.factors)
            elif not isinstance(done, One):
                self.spend(done)
                acc.append(done)
            return
        self.spend(f)
        acc.append(f)

    def spend(self, witness: Term, units: int = 1) -> None:
        self.steps += units
        if self.steps > self.fuel:
            raise Divergent(witness, "fuel", self.steps)


def normal_form(t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    """Reduced form of ``t`` without argument sorting; raises :class:`Divergent`."""
    return _normal_form(t, fuel)


def _normal_form(t: Term, fuel: int) -> Term:
    r = _Reducer(fuel)
    try:
        return r.nf(t)
    except RecursionError:
        raise Divergent(t, "depth", r.steps) from None


@lru_cache(maxsize=1 << 16)
def _sorted(t: Term) -> Term:
    """Sort application arguments of an already reduced term."""
    if isinstance(t, Word):
        return Word(_sorted(f) for f in t.factors)
    if not isinstance(t, Apply):
        return t
    args = [_sorted(a) for a in t.args]
    order = sorted(range(len(args)), key=lambda i: args[i].key)
    groups = [list(g) for _, g in
              itertools.groupby(order, key=lambda i: args[i].key)]
    best = None
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        perm = [i for g in choice for i in g]
        mapping = {old + 1: new + 1 for new, old in enumerate(perm)}
        definition = _sorted(relabel_slots(t.symbol.definition, mapping))
        if best is None or definition.key < best[0].key:
            best = (definition, perm)
    definition, perm = best
    symbol = FunctionSymbol(t.symbol.arity, definition, t.symbol.level)
    return Apply(symbol, [args[i] for i in perm])


def reduce(t: Term, fuel: int = DEFAULT_FUEL) -> ReductionOutcome:
    """Reduce to canonical form, reporting divergence instead of raising."""
    try:
        return ReductionOutcome(result=_sorted(_normal_form(t, fuel)))
    except Divergent as exc:
        return ReductionOutcome(divergent=exc)


def canonicalize(t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    """Canonical representative of ``t``; raises :class:`Divergent`."""
    return _sorted(_normal_form(t, fuel))


def essentially_equal(t1: Term, t2: Term, fuel: int = DEFAULT_FUEL) -> bool:
    return canonicalize(t1, fuel) == canonicalize(t2, fuel)


def provably_equal(t1: Term, t2: Term, fuel: int = DEFAULT_FUEL) -> bool:
    """Decide whether the skeleton axioms prove ``t1 = t2``."""
    return essentially_equal(t1, t2, fuel)


def essentially_equal_by_search(t1: Term, t2: Term) -> bool:
    """Structural matcher on reduced terms, trying every argument permutation.

    Independent of the canonical ordering; used to cross-check
    :func:`essentially_equal`.
    """
    if isinstance(t1, Word):
        return (isinstance(t2, Word) and len(t1.factors) == len(t2.factors)
                and all(essentially_equal_by_search(a, b)
                        for a, b in zip(t1.factors, t2.factors)))
    if isinstance(t1, Apply):
        if not isinstance(t2, Apply) or t1.symbol.arity != t2.symbol.arity:
            return False
        n = t1.symbol.arity
        for pi in itertools.permutations(range(n)):
            if not all(essentially_equal_by_search(t1.args[j], t2.args[pi[j]])
                       for j in range(n)):
                continue
            mapping = {j + 1: pi[j] + 1 for j in range(n)}
            if essentially_equal_by_search(
                    relabel_slots(t1.symbol.definition, mapping),
                    t2.symbol.definition):
                return True
        return False
    if isinstance(t2, (Word, Apply)):
        return False
    return t1 == t2
