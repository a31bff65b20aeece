"""Seeded random generators for symbols, skeleton terms and body terms.

All generators take a :class:`random.Random` so test corpora are
reproducible from a single seed.
"""
from __future__ import annotations

import random
from typing import Sequence

from .body import BodyElement
from .errors import Divergent, DomainError
from .reduction import canonicalize
from .skeleton import SkeletonElement
from .terms import (
    ONE, ZERO, Apply, FunctionSymbol, Scal, Slot, Sum, Term, Var, Word,
    free_vars, length, mk_symbol, relabel_slots, slots_of, word,
)

__all__ = [
    "variables", "random_symbol", "symbol_pool", "random_skeleton_term", "random_body_term",
    "random_monomial_with", "random_body_element", "scramble",
]


def variables(n: int, letter: str = "x") -> list[Var]:
    return [Var(letter, i) for i in range(n)]


def _random_definition(rng: random.Random, arity: int, height: int,
                       max_level: int) -> Term:
    leaves = [Slot(i) for i in range(arity + 1)]
    if height <= 1 or rng.random() < 0.3:
        if height >= 1 and rng.random() < 0.8:
            return Word(rng.choice(leaves) for _ in range(rng.randint(2, 3)))
        return rng.choice(leaves)
    if max_level > 1 and rng.random() < 0.35:
        inner = random_symbol(rng, max_level - 1, max_arity=2)
        args = [_random_definition(rng, arity, height - 2, max_level)
                for _ in range(inner.arity)]
        app = Apply(inner, args)
        return app if rng.random() < 0.5 else word([rng.choice(leaves), app])
    return word(_random_definition(rng, arity, height - 1, max_level)
                for _ in range(rng.randint(2, 3)))


def random_symbol(rng: random.Random, max_level: int = 3,
                  max_arity: int = 2) -> FunctionSymbol:
    """A symbol of level at most ``max_level`` (at least 2)."""
    if max_level < 2:
        raise DomainError("function symbols have level at least 2")
    while True:
        arity = rng.randint(0, max_arity)
        d = _random_definition(rng, arity, max_level - 1, max_level)
        if 0 not in slots_of(d):
            d = word([Slot(0), d])
        if length(d) + 1 > max_level:
            continue
        sym = mk_symbol(d)
        if sym.level <= max_level:
            return sym


def symbol_pool(rng: random.Random, size: int = 64,
                max_level: int = 3) -> list[FunctionSymbol]:
    """Distinct random symbols to draw from when generating many terms."""
    pool: dict[FunctionSymbol, None] = {}
    while len(pool) < size:
        pool[random_symbol(rng, max_level)] = None
    return list(pool)


def random_skeleton_term(rng: random.Random, nvars: int = 4, depth: int = 6,
                         max_level: int = 3,
                         symbols: Sequence[FunctionSymbol] | None = None) -> Term:
    """A skeleton term of height at most ``depth`` over ``x0..x{nvars-1}``.

    Symbols come from ``symbols`` when given, otherwise fresh ones are drawn.
    """
    if depth <= 0 or rng.random() < 0.3:
        return ONE if rng.random() < 0.05 else Var("x", rng.randrange(nvars))
    sub = lambda: random_skeleton_term(rng, nvars, depth - 1, max_level, symbols)  # noqa: E731
    if rng.random() < 0.55:
        return Word(sub() for _ in range(rng.randint(2, 3)))
    sym = rng.choice(symbols) if symbols else random_symbol(rng, max_level)
    return Apply(sym, [sub() for _ in range(sym.arity)])


def random_body_term(rng: random.Random, nvars: int = 4, depth: int = 4,
                     max_level: int = 3,
                     symbols: Sequence[FunctionSymbol] | None = None,
                     atoms: Sequence[Var] | None = None) -> Term:
    """A body term mixing words, applications, sums, scalars and 0.

    Variables are drawn from ``atoms`` when given, else ``x0..x{nvars-1}``.
    """
    if depth <= 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.05:
            return ZERO
        if r < 0.1:
            return ONE
        return rng.choice(atoms) if atoms else Var("x", rng.randrange(nvars))
    r = rng.random()
    sub = lambda: random_body_term(rng, nvars, depth - 1, max_level, symbols, atoms)  # noqa: E731
    if r < 0.3:
        return Sum(sub() for _ in range(rng.randint(2, 3)))
    if r < 0.45:
        return Scal(rng.choice([-3, -2, -1, 2, 3, 5]), sub())
    if r < 0.75:
        return Word(sub() for _ in range(2))
    sym = rng.choice(symbols) if symbols else random_symbol(rng, max_level)
    return Apply(sym, [sub() for _ in range(sym.arity)])


def random_monomial_with(rng: random.Random, must: Var, nvars: int = 3,
                         depth: int = 3, max_level: int = 3,
                         symbols: Sequence[FunctionSymbol] | None = None) -> Term:
    """A convergent skeleton monomial whose canonical form contains ``must``."""
    while True:
        m = random_skeleton_term(rng, nvars, depth, max_level, symbols)
        if must not in free_vars(m):
            m = word([must, m]) if rng.random() < 0.5 else word([m, must])
        try:
            if must in free_vars(canonicalize(m)):
                return m
        except Divergent:
            continue


def random_body_element(rng: random.Random, terms: int = 3, nvars: int = 3,
                        depth: int = 2, max_level: int = 3,
                        symbols: Sequence[FunctionSymbol] | None = None,
                        coeffs: Sequence[int] = (-2, -1, 1, 2, 3)) -> BodyElement:
    """A body element with exactly ``terms`` distinct convergent monomials."""
    acc: dict[SkeletonElement, int] = {}
    while len(acc) < terms:
        try:
            m = SkeletonElement(canonicalize(
                random_skeleton_term(rng, nvars, depth, max_level, symbols)))
        except Divergent:
            continue
        if m not in acc:
            acc[m] = rng.choice(coeffs)
    return BodyElement(acc)


def scramble(rng: random.Random, t: Term) -> Term:
    """An essentially equal variant of ``t``: arguments permuted, units inserted."""
    if isinstance(t, Word):
        factors = [scramble(rng, f) for f in t.factors]
        if rng.random() < 0.3:
            factors.insert(rng.randrange(len(factors) + 1), ONE)
        return Word(factors)
    if isinstance(t, Apply):
        n = t.symbol.arity
        perm = list(range(n))
        rng.shuffle(perm)
        args = [scramble(rng, t.args[perm[j]]) for j in range(n)]
        mapping = {perm[j] + 1: j + 1 for j in range(n)}
        d = relabel_slots(t.symbol.definition, mapping)
        return Apply(FunctionSymbol(n, d, t.symbol.level), args)
    return t
