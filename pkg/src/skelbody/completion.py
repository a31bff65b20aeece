"""Finite truncations of the completion elements

    w_n = sum_{k >= n} p^(l_k - l_n) a_k v_k

with the part beyond depth ``K`` kept as one symbolic :class:`Tail`.

Coefficients are :class:`PowerSum` values, integer combinations of formal
powers of ``p``.  Exponents grow like ``4^k`` when ``l_{k+1} > 3 l_k``, so
materializing them as integers is out of the question; every identity we
check is exact in the formal representation, which maps onto the integers
by ``p -> p``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .errors import DomainError
from .skeleton import SkeletonElement

__all__ = [
    "PowerSum", "Tail", "TruncatedVector",
    "make_wn", "make_wns", "telescope_difference", "telescope_holds", "telescope_check",
    "p_divisibility_check", "p_divisible", "refine",
]


class PowerSum:
    """``sum c_e * p^e`` with integer ``c_e`` and non-negative ``e``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        acc: dict[int, int] = {}
        for e, c in (terms.items() if hasattr(terms, "items") else terms):
            if e < 0:
                raise DomainError("negative power of p")
            acc[e] = acc.get(e, 0) + c
        self.terms = tuple(sorted((e, c) for e, c in acc.items() if c))

    @classmethod
    def _trusted(cls, terms: tuple[tuple[int, int], ...]) -> PowerSum:
        # sorted, merged and zero-free already
        out = cls.__new__(cls)
        out.terms = terms
        return out

    @classmethod
    def power(cls, e: int, c: int = 1) -> PowerSum:
        if e < 0:
            raise DomainError("negative power of p")
        return cls._trusted(((e, c),) if c else ())

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = PowerSum.power(0, other)
        if not isinstance(other, PowerSum):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def _merge(self, other: PowerSum, sign: int) -> PowerSum:
        if not other.terms:
            return self
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + sign * c
        return PowerSum._trusted(tuple(sorted((e, c) for e, c in acc.items() if c)))

    def __add__(self, other: PowerSum) -> PowerSum:
        return self._merge(other, 1)

    def __neg__(self) -> PowerSum:
        return PowerSum._trusted(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: PowerSum) -> PowerSum:
        return self._merge(other, -1)

    def scale(self, c: int) -> PowerSum:
        if not c:
            return PowerSum()
        return PowerSum._trusted(tuple((e, c * k) for e, k in self.terms))

    def shift(self, e: int) -> PowerSum:
        """Multiply by ``p^e``."""
        if e < 0:
            raise DomainError("negative power of p")
        return PowerSum._trusted(tuple((e + f, c) for f, c in self.terms))

    def to_int(self, p: int) -> int:
        return sum(c * p ** e for e, c in self.terms)

    def valuation(self, p: int) -> float:
        """p-adic valuation of the value at ``p`` (inf for zero).

        Equal exponents are already merged, so carries only happen through
        coefficients divisible by ``p``; those are pushed up by repeated
        exact division until the lowest term settles.
        """
        acc = dict(self.terms)
        while acc:
            low = min(acc)
            c = acc.pop(low)
            if c == 0:
                continue
            if c % p:
                return low
            carry, c = c, 0
            k = 0
            while carry % p == 0:
                carry //= p
                k += 1
            acc[low + k] = acc.get(low + k, 0) + carry
        return float("inf")

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for i, (e, c) in enumerate(self.terms):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                power = "p" if e == 1 else f"p^{e}"
                body = power if mag == 1 else f"{mag}*{power}"
            if i == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append(("- " if c < 0 else "+ ") + body)
        return " ".join(out)

    def __repr__(self) -> str:
        return f"PowerSum({self})"


@dataclass(frozen=True, order=True)
class Tail:
    """Everything from depth ``index`` on, as one formal symbol."""

    index: int

    def __str__(self) -> str:
        return f"Tail({self.index})"


Key = Union[SkeletonElement, Tail]


def _key_order(k: Key):
    return (1, k.index) if isinstance(k, Tail) else (0, k.term.key)


class TruncatedVector:
    """A depth-``K`` truncation: finitely many basis entries plus ``Tail(K)``."""

    __slots__ = ("depth", "entries")

    def __init__(self, depth: int, entries: Mapping[Key, PowerSum]):
        self.depth = depth
        self.entries = {k: c for k, c in entries.items() if c}
        for k in self.entries:
            if isinstance(k, Tail) and k.index != depth:
                raise DomainError(f"{k} in a vector of depth {depth}")

    @classmethod
    def _trusted(cls, depth: int, entries: dict[Key, PowerSum]) -> TruncatedVector:
        # nonzero coefficients, tail index already equal to depth
        out = cls.__new__(cls)
        out.depth = depth
        out.entries = entries
        return out

    def items(self) -> list[tuple[Key, PowerSum]]:
        return sorted(self.entries.items(), key=lambda kv: _key_order(kv[0]))

    def coefficient(self, k: Key) -> PowerSum:
        return self.entries.get(k, PowerSum())

    def _combine(self, other: TruncatedVector, sign: int) -> TruncatedVector:
        if self.depth != other.depth:
            raise DomainError("vectors truncated at different depths")
        acc = dict(self.entries)
        for k, c in other.entries.items():
            mine = acc.get(k)
            if mine is None:
                acc[k] = c if sign == 1 else -c
            else:
                acc[k] = mine._merge(c, sign)
        return TruncatedVector(self.depth, acc)

    def __add__(self, other: TruncatedVector) -> TruncatedVector:
        return self._combine(other, 1)

    def __sub__(self, other: TruncatedVector) -> TruncatedVector:
        return self._combine(other, -1)

    def shift(self, e: int) -> TruncatedVector:
        return TruncatedVector._trusted(self.depth,
                                        {k: c.shift(e) for k, c in self.entries.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedVector):
            return NotImplemented
        return self.depth == other.depth and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.depth, frozenset(self.entries.items())))

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        return " + ".join(f"({c})*{k}" for k, c in self.items())

    def __repr__(self) -> str:
        return f"TruncatedVector({self})"


def _validate(n: int, K: int, l: Sequence[int], a: Sequence[int],
              v: Sequence[SkeletonElement]) -> None:
    if not 0 <= n < K:
        raise DomainError(f"need 0 <= n < K, got n={n}, K={K}")
    if len(l) < K + 1:
        raise DomainError(f"l needs at least K+1 = {K + 1} entries, got {len(l)}")
    if any(b <= c for c, b in zip(l, l[1:])):
        raise DomainError("l must be strictly increasing")
    if len(a) < K or len(v) < K:
        raise DomainError(f"a and v need at least K = {K} entries")
    if any(x not in (0, 1) for x in a[:K]):
        raise DomainError("a must be a 0/1 sequence")
    if len(set(v[:K])) != K:
        raise DomainError("v must be pairwise distinct")


def make_wn(n: int, K: int, l: Sequence[int], a: Sequence[int],
            v: Sequence[SkeletonElement]) -> TruncatedVector:
    _validate(n, K, l, a, v)
    return _build_wn(n, K, l, a, v)


def make_wns(K: int, l: Sequence[int], a: Sequence[int],
             v: Sequence[SkeletonElement]) -> list[TruncatedVector]:
    """``[w_0, ..., w_{K-1}]`` at depth ``K``, validated once."""
    _validate(0, K, l, a, v)
    return [_build_wn(n, K, l, a, v) for n in range(K)]


def _build_wn(n: int, K: int, l, a, v) -> TruncatedVector:
    entries: dict[Key, PowerSum] = {}
    for k in range(n, K):
        if a[k]:
            entries[v[k]] = PowerSum.power(l[k] - l[n], a[k])
    entries[Tail(K)] = PowerSum.power(l[K] - l[n])
    return TruncatedVector._trusted(K, entries)


def telescope_difference(n: int, K: int, l, a, v) -> TruncatedVector:
    """``w_n - p^(l_{n+1} - l_n) w_{n+1}`` at depth ``K``."""
    if n + 1 >= K:
        raise DomainError(f"need n + 1 < K, got n={n}, K={K}")
    return make_wn(n, K, l, a, v) - make_wn(n + 1, K, l, a, v).shift(l[n + 1] - l[n])


def telescope_holds(w_n: TruncatedVector, w_next: TruncatedVector, gap: int,
                    a_n: int, v_n: SkeletonElement) -> bool:
    """Is ``w_n - p^gap w_next`` exactly ``a_n v_n``?"""
    expected = TruncatedVector(w_n.depth, {v_n: PowerSum.power(0, a_n)})
    return w_n - w_next.shift(gap) == expected


def telescope_check(n: int, K: int, l, a, v) -> bool:
    if n + 1 >= K:
        raise DomainError(f"need n + 1 < K, got n={n}, K={K}")
    return telescope_holds(make_wn(n, K, l, a, v), make_wn(n + 1, K, l, a, v),
                           l[n + 1] - l[n], a[n], v[n])


def p_divisibility_check(n: int, K: int, l, a, v,
                         modulo: Iterable[SkeletonElement], p: int = 2) -> bool:
    """``w_n = p^gap w_{n+1}`` modulo the span of ``modulo``, with ``p | p^gap``."""
    residual = telescope_difference(n, K, l, a, v)
    return p_divisible(residual, l[n + 1] - l[n], modulo, p)


def p_divisible(residual: TruncatedVector, gap: int,
                modulo: Iterable[SkeletonElement], p: int = 2) -> bool:
    """Given ``residual = w_n - p^gap w_{n+1}``, is ``w_n`` divisible by ``p^gap``
    (with ``gap >= 1``) modulo the span of ``modulo``?"""
    allowed = modulo if isinstance(modulo, (set, frozenset)) else set(modulo)
    if any(isinstance(k, Tail) or k not in allowed for k in residual.entries):
        return False
    return PowerSum.power(gap).valuation(p) >= 1


def refine(w: TruncatedVector, K2: int, l, a, v) -> TruncatedVector:
    """Unfold ``Tail(K)`` of ``w`` down to depth ``K2``."""
    K = w.depth
    if K2 < K:
        raise DomainError(f"cannot refine depth {K} to {K2}")
    if K2 == K:
        return w
    if len(l) < K2 + 1 or len(a) < K2 or len(v) < K2:
        raise DomainError(f"parameters too short for depth {K2}")
    if any(b <= c for c, b in zip(l, l[1:])):
        raise DomainError("l must be strictly increasing")
    tail = w.coefficient(Tail(K))
    entries = {k: c for k, c in w.entries.items() if not isinstance(k, Tail)}
    for k in range(K, K2):
        if a[k]:
            entries[v[k]] = entries.get(v[k], PowerSum()) + tail.shift(l[k] - l[K]).scale(a[k])
    entries[Tail(K2)] = tail.shift(l[K2] - l[K])
    return TruncatedVector(K2, entries)
