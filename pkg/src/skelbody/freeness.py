"""Basis exchange, the shift polynomial, linearity analysis and
representation checks for free bodies."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .body import BodyElement, Polynomial, Y, eval_at, expand, linearize
from .errors import DomainError
from .reduction import DEFAULT_FUEL, canonicalize
from .terms import (
    ZERO, Apply, Scal, Slot, Sum, SpecifiedTerm, Term, Var, Word,
    free_vars, substitute, substitute_map, word,
)

__all__ = [
    "BasisExchange", "exchange_add", "exchange_sum",
    "shift", "count_y_occurrences", "depends_on_y",
    "represented_check", "independence_sample_check", "Y1", "Y2",
]

Y1 = Var("y", 1)
Y2 = Var("y", 2)


def _as_polynomial(q: Polynomial | Term) -> Polynomial:
    return q if isinstance(q, Polynomial) else Polynomial(q)


def _sum_term(acc: Mapping[Term, object]) -> Term:
    parts = [m if c == 1 else Scal(c, m)
             for m, c in sorted(acc.items(), key=lambda kv: kv[0].key) if c != 0]
    if not parts:
        return ZERO
    return parts[0] if len(parts) == 1 else Sum(parts)


# ---------------------------------------------------------------- basis exchange

@dataclass(frozen=True)
class BasisExchange:
    """Two bases of the same free body and the maps between them.

    ``forward`` sends each new generator to a term over the old basis and
    ``backward`` sends each old generator to a term over the new basis.
    Generators missing from a map are shared by both bases.
    """

    old_basis: tuple[Var, ...]
    new_basis: tuple[Var, ...]
    forward: Mapping[Var, Term]
    backward: Mapping[Var, Term]

    def to_old(self, t: Term) -> Term:
        return substitute_map(t, dict(self.forward))

    def to_new(self, t: Term) -> Term:
        return substitute_map(t, dict(self.backward))

    def round_trip_old(self, t: Term, fuel: int = DEFAULT_FUEL) -> bool:
        """Old basis -> new basis -> old basis is the identity on ``t``."""
        return linearize(self.to_old(self.to_new(t)), fuel) == linearize(t, fuel)

    def round_trip_new(self, t: Term, fuel: int = DEFAULT_FUEL) -> bool:
        return linearize(self.to_new(self.to_old(t)), fuel) == linearize(t, fuel)

    def verify_generators(self) -> bool:
        return (all(self.round_trip_old(x) for x in self.old_basis)
                and all(self.round_trip_new(x) for x in self.new_basis))


def _fresh(letter: str, taken: Sequence[Var]) -> Var:
    for i in itertools.count():
        v = Var(letter, i)
        if v not in taken:
            return v


def exchange_add(basis: Sequence[Var], v: Var, w: Term,
                 fuel: int = DEFAULT_FUEL) -> BasisExchange:
    """Replace ``v`` by a fresh generator standing for ``v + w``."""
    basis = tuple(basis)
    if v not in basis:
        raise DomainError(f"{v.name} is not in the basis")
    if v in free_vars(w):
        raise DomainError(f"{v.name} occurs in the added term")
    stray = free_vars(w) - set(basis)
    if stray:
        raise DomainError("added term uses variables outside the basis: "
                          + ", ".join(sorted(x.name for x in stray)))
    if not linearize(w, fuel):
        return BasisExchange(basis, basis, {}, {})
    u = _fresh("u", basis)
    new_basis = tuple(u if x == v else x for x in basis)
    return BasisExchange(basis, new_basis,
                         forward={u: Sum((v, w))},
                         backward={v: Sum((u, Scal(-1, w)))})


def exchange_sum(small: Sequence[Var], large: Sequence[Var], u: Term, v: Var,
                 fuel: int = DEFAULT_FUEL) -> BasisExchange:
    """Exchange ``v`` for ``w = u + v`` where ``u`` lives over the smaller basis."""
    small, large = tuple(small), tuple(large)
    if not set(small) <= set(large):
        raise DomainError("the smaller basis is not contained in the larger one")
    if v in small or v not in large:
        raise DomainError(f"{v.name} must be a generator of the larger basis only")
    if not free_vars(u) <= set(small):
        raise DomainError("u must be a term over the smaller basis")
    w = _fresh("w", large)
    new_basis = tuple(w if x == v else x for x in large)
    if not linearize(u, fuel):
        return BasisExchange(large, new_basis, forward={w: v}, backward={v: w})
    return BasisExchange(large, new_basis,
                         forward={w: Sum((u, v))},
                         backward={v: Sum((w, Scal(-1, u)))})


# ---------------------------------------------------------------- shift

def _occurrences(t: Term, target: Var) -> int:
    if t == target:
        return 1
    if isinstance(t, Word):
        return sum(_occurrences(f, target) for f in t.factors)
    if isinstance(t, Apply):
        return sum(_occurrences(a, target) for a in t.args)
    return 0


def _replace_occurrences(t: Term, target: Var, choices: Sequence[Term]) -> Term:
    it = iter(choices)

    def walk(u: Term) -> Term:
        if u == target:
            return next(it)
        if isinstance(u, Word):
            return word(walk(f) for f in u.factors)
        if isinstance(u, Apply):
            return Apply(u.symbol, [walk(a) for a in u.args])
        return u

    return walk(t)


def shift(q: Polynomial | Term, r) -> Polynomial:
    """``q'`` with ``q(y1 + r y2) = q(y1) + r q'(y1, y2)``.

    Every occurrence of ``y`` in an expanded monomial is a separate linear
    slot; ``q'`` collects the choices that put ``y2`` in at least one slot.
    """
    q = _as_polynomial(q)
    acc: dict[Term, object] = {}
    for m, c in expand(q.expr).items():
        k = _occurrences(m, Y)
        for choice in itertools.product((Y1, Y2), repeat=k):
            hits = choice.count(Y2)
            if not hits:
                continue
            t = _replace_occurrences(m, Y, choice)
            acc[t] = acc.get(t, 0) + c * r ** (hits - 1)
    return Polynomial(_sum_term(acc), dict(q.coefficients))


# ---------------------------------------------------------------- linearity

def _weight(t: Term, leaf) -> int:
    """Occurrences of the leaves picked out by ``leaf``, seen through definitions."""
    base = leaf(t)
    if base:
        return base
    if isinstance(t, Word):
        return sum(_weight(f, leaf) for f in t.factors)
    if isinstance(t, Apply):
        total = 0
        for i, a in enumerate(t.args, start=1):
            inner = _weight(a, leaf)
            if inner:
                total += inner * _weight(
                    t.symbol.definition,
                    lambda u, i=i: 1 if isinstance(u, Slot) and u.index == i else 0)
        return total
    return 0


def count_y_occurrences(q: Polynomial | Term,
                        fuel: int = DEFAULT_FUEL) -> tuple[int, int]:
    """``(max per monomial, total)`` occurrences of ``y`` after linearization."""
    q = _as_polynomial(q)
    counts = [_weight(m, lambda u: 1 if u == Y else 0)
              for _, m in linearize(q.expr, fuel)]
    return max(counts, default=0), sum(counts)


def depends_on_y(q: Polynomial | Term, fuel: int = DEFAULT_FUEL) -> bool:
    q = _as_polynomial(q)
    return any(Y in free_vars(m) for _, m in linearize(q.expr, fuel))


# ---------------------------------------------------------------- representation

def represented_check(sample: Mapping[BodyElement, BodyElement] | Sequence,
                      q: Polynomial | Term, fuel: int = DEFAULT_FUEL) -> bool:
    """Does ``q`` agree with the sampled endomorphism on every sample point?

    A finite sample can refute representation but never prove it.
    """
    pairs = sample.items() if isinstance(sample, Mapping) else sample
    q = _as_polynomial(q)
    return all(eval_at(q, g, fuel=fuel) == image for g, image in pairs)


def _dummy_free(s: SpecifiedTerm, b: Sequence[Var], fuel: int):
    t = canonicalize(s.term, fuel)
    fv = free_vars(t)
    keep = [i for i, x in enumerate(s.vars) if x in fv]
    return t, [s.vars[i] for i in keep], [b[i] for i in keep]


def independence_sample_check(s1: SpecifiedTerm, b1: Sequence[Var],
                              s2: SpecifiedTerm, b2: Sequence[Var],
                              fuel: int = DEFAULT_FUEL) -> bool:
    """Check the permutation condition on one pair of basis substitutions.

    Returns False only when the two values coincide but no permutation of
    the variables explains it.
    """
    for s, b in ((s1, b1), (s2, b2)):
        if len(b) != len(s.vars):
            raise DomainError("tuple length does not match the variable list")
        if len(set(b)) != len(b):
            raise DomainError("basis tuples must be repetition-free")
        if not all(isinstance(x, Var) for x in b):
            raise DomainError("tuples must consist of basis variables")
    value1 = canonicalize(substitute(s1, list(b1)), fuel)
    value2 = canonicalize(substitute(s2, list(b2)), fuel)
    if value1 != value2:
        return True
    t1, xs1, bs1 = _dummy_free(s1, b1, fuel)
    t2, xs2, bs2 = _dummy_free(s2, b2, fuel)
    if len(xs1) != len(xs2):
        return False
    for pi in itertools.permutations(range(len(xs1))):
        if any(bs2[i] != bs1[pi[i]] for i in range(len(pi))):
            continue
        renamed = substitute_map(t2, {xs2[i]: xs1[pi[i]] for i in range(len(pi))})
        if canonicalize(renamed, fuel) == t1:
            return True
    return False
