"""Bodies: the R-monoid algebra over the free skeleton.

A :class:`BodyElement` is a finite R-linear combination of skeleton
elements.  Products extend the skeleton product bilinearly, and every
function symbol acts multilinearly on its arguments.

Terms are evaluated structurally: each leaf occurrence of a variable is
one linear slot, words multiply with :func:`mul` from left to right, and
applications go through :func:`apply_symbol_multilinear`.  On basis
values this agrees with substituting and reducing.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ArityMismatch, ConstantMonomial, DomainError, UnboundVariable
from .reduction import DEFAULT_FUEL, canonicalize
from .skeleton import SkeletonElement, apply_symbol, identity, times
from .terms import (
    ZERO, Apply, FunctionSymbol, One, Scal, Slot, Sum, SpecifiedTerm, Term,
    Var, Word, Zero, free_vars, make_apply, substitute_map, word,
)

__all__ = [
    "RingSpec", "BodyElement", "Polynomial", "Y",
    "add", "negate", "scal", "mul", "apply_symbol_multilinear",
    "expand", "linearize", "evaluate", "eval_at", "weak_complete",
]

Y = Var("y")


@dataclass(frozen=True)
class RingSpec:
    """Exact integers with a designated prime ``p``."""

    p: int = 2

    def __post_init__(self):
        if self.p < 2:
            raise DomainError("p must be at least 2")

    def divides(self, a: int, b: int) -> bool:
        return b % a == 0 if a else b == 0

    def valuation(self, x: int) -> float:
        """p-adic valuation by repeated exact division (inf for 0)."""
        if x == 0:
            return float("inf")
        v = 0
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v


class BodyElement:
    """Finite map from skeleton elements to non-zero coefficients."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[SkeletonElement, object] | None = None):
        self._coeffs = {m: c for m, c in (coeffs or {}).items() if c != 0}

    @classmethod
    def zero(cls) -> BodyElement:
        return cls()

    @classmethod
    def one(cls) -> BodyElement:
        return cls({identity(): 1})

    @classmethod
    def basis(cls, m: SkeletonElement | Term | str) -> BodyElement:
        if isinstance(m, str):
            m = Var.parse(m)
        if isinstance(m, Term):
            m = SkeletonElement.of(m)
        return cls({m: 1})

    @classmethod
    def from_term(cls, t: Term, fuel: int = DEFAULT_FUEL) -> BodyElement:
        return cls({SkeletonElement(m): c for c, m in linearize(t, fuel)})

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[object, SkeletonElement]]) -> BodyElement:
        acc: dict[SkeletonElement, object] = {}
        for c, m in pairs:
            acc[m] = acc.get(m, 0) + c
        return cls(acc)

    def items(self) -> list[tuple[SkeletonElement, object]]:
        return sorted(self._coeffs.items(), key=lambda kv: kv[0].term.key)

    def support(self) -> list[SkeletonElement]:
        return [m for m, _ in self.items()]

    def coefficient(self, m: SkeletonElement) -> object:
        return self._coeffs.get(m, 0)

    def __iter__(self) -> Iterator[tuple[SkeletonElement, object]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BodyElement):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def __add__(self, other: BodyElement) -> BodyElement:
        return add(self, other)

    def __sub__(self, other: BodyElement) -> BodyElement:
        return add(self, negate(other))

    def __neg__(self) -> BodyElement:
        return negate(self)

    def __mul__(self, other: BodyElement) -> BodyElement:
        return mul(self, other)

    def __rmul__(self, r) -> BodyElement:
        return scal(r, self)

    def to_term(self) -> Term:
        parts = [m.term if c == 1 else Scal(c, m.term) for m, c in self.items()]
        if not parts:
            return ZERO
        return parts[0] if len(parts) == 1 else Sum(parts)

    def __str__(self) -> str:
        return str(self.to_term())

    def __repr__(self) -> str:
        return f"BodyElement({self})"


def add(a: BodyElement, b: BodyElement) -> BodyElement:
    out = dict(a._coeffs)
    for m, c in b._coeffs.items():
        out[m] = out.get(m, 0) + c
    return BodyElement(out)


def negate(a: BodyElement) -> BodyElement:
    return BodyElement({m: -c for m, c in a._coeffs.items()})


def scal(r, a: BodyElement) -> BodyElement:
    return BodyElement({m: r * c for m, c in a._coeffs.items()})


def mul(a: BodyElement, b: BodyElement, fuel: int = DEFAULT_FUEL) -> BodyElement:
    out: dict[SkeletonElement, object] = {}
    for m, c in a._coeffs.items():
        for n, d in b._coeffs.items():
            k = times(m, n, fuel)
            out[k] = out.get(k, 0) + c * d
    return BodyElement(out)


def apply_symbol_multilinear(symbol: FunctionSymbol, args: Sequence[BodyElement],
                             fuel: int = DEFAULT_FUEL) -> BodyElement:
    if len(args) != symbol.arity:
        raise ArityMismatch(
            f"symbol takes {symbol.arity} argument(s), got {len(args)}")
    out: dict[SkeletonElement, object] = {}
    for combo in itertools.product(*(a.items() for a in args)):
        coeff = 1
        for _, c in combo:
            coeff = coeff * c
        k = apply_symbol(symbol, [m for m, _ in combo], fuel)
        out[k] = out.get(k, 0) + coeff
    return BodyElement(out)


# ---------------------------------------------------------------- linearization

def expand(t: Term) -> dict[Term, object]:
    """Distribute sums and scalars outward, without reducing monomials."""
    if isinstance(t, (One, Var)):
        return {t: 1}
    if isinstance(t, Zero):
        return {}
    if isinstance(t, Slot):
        raise DomainError("slots cannot be linearized outside a defining term")
    if isinstance(t, Scal):
        return {m: t.coeff * c for m, c in expand(t.operand).items()}
    if isinstance(t, Sum):
        out: dict[Term, object] = {}
        for a in t.addends:
            for m, c in expand(a).items():
                out[m] = out.get(m, 0) + c
        return out
    parts = [expand(k) for k in (t.factors if isinstance(t, Word) else t.args)]
    out = {}
    for combo in itertools.product(*(p.items() for p in parts)):
        coeff = 1
        for _, c in combo:
            coeff = coeff * c
        ms = [m for m, _ in combo]
        m = word(ms) if isinstance(t, Word) else Apply(t.symbol, ms)
        out[m] = out.get(m, 0) + coeff
    return out


def linearize(s: SpecifiedTerm | Term,
              fuel: int = DEFAULT_FUEL) -> list[tuple[object, Term]]:
    """Write a body term as sorted ``(coefficient, canonical monomial)`` pairs."""
    t = s.term if isinstance(s, SpecifiedTerm) else s
    acc: dict[Term, object] = {}
    for m, c in expand(t).items():
        k = canonicalize(m, fuel)
        acc[k] = acc.get(k, 0) + c
    return [(c, m) for m, c in sorted(acc.items(), key=lambda kv: kv[0].key)
            if c != 0]


# ---------------------------------------------------------------- evaluation

@dataclass(frozen=True)
class Polynomial:
    """A body term in ``y`` whose other variables are bound to coefficients."""

    expr: Term
    coefficients: Mapping[Var, BodyElement] = field(default_factory=dict)


def evaluate(t: Term, bindings: Mapping[Var, BodyElement],
             fuel: int = DEFAULT_FUEL) -> BodyElement:
    if isinstance(t, One):
        return BodyElement.one()
    if isinstance(t, Zero):
        return BodyElement.zero()
    if isinstance(t, Var):
        try:
            return bindings[t]
        except KeyError:
            raise UnboundVariable(f"no value for {t.name}") from None
    if isinstance(t, Word):
        acc = evaluate(t.factors[0], bindings, fuel)
        for f in t.factors[1:]:
            acc = mul(acc, evaluate(f, bindings, fuel), fuel)
        return acc
    if isinstance(t, Apply):
        return apply_symbol_multilinear(
            t.symbol, [evaluate(a, bindings, fuel) for a in t.args], fuel)
    if isinstance(t, Sum):
        acc = BodyElement.zero()
        for a in t.addends:
            acc = add(acc, evaluate(a, bindings, fuel))
        return acc
    if isinstance(t, Scal):
        return scal(t.coeff, evaluate(t.operand, bindings, fuel))
    raise DomainError(f"cannot evaluate {t}")


def eval_at(q: Polynomial | Term, at: BodyElement | None = None,
            env: Mapping[Var, BodyElement] | None = None,
            fuel: int = DEFAULT_FUEL) -> BodyElement:
    """Evaluate a polynomial with ``y := at`` and the remaining bindings."""
    if isinstance(q, Polynomial):
        expr, bindings = q.expr, dict(q.coefficients)
    else:
        expr, bindings = q, {}
    bindings.update(env or {})
    if at is not None:
        bindings[Y] = at
    return evaluate(expr, bindings, fuel)


def weak_complete(s: SpecifiedTerm, applicand: Var = Var("x", 0),
                  fuel: int = DEFAULT_FUEL) -> Term:
    """Rewrite ``s(x0, xs)`` as ``x0 * s'(xs)`` with ``s'`` a sum of applications."""
    others = [v for v in s.vars if v != applicand]
    acc: dict[Term, object] = {}
    for c, m in linearize(s, fuel):
        if applicand not in free_vars(m):
            raise ConstantMonomial(f"monomial {m} does not contain {applicand.name}")
        mapping = {applicand: Slot(0)}
        mapping.update({v: Slot(i) for i, v in enumerate(others, start=1)})
        app = canonicalize(make_apply(substitute_map(m, mapping), others), fuel)
        acc[app] = acc.get(app, 0) + c
    parts = [m if c == 1 else Scal(c, m)
             for m, c in sorted(acc.items(), key=lambda kv: kv[0].key) if c != 0]
    if not parts:
        return ZERO
    return parts[0] if len(parts) == 1 else Sum(parts)
