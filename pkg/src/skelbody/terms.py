"""Term syntax for skeleton and body terms.

Terms are immutable and hashable.  Every node carries a lazily computed
sort key which realizes the total order used for canonical argument
sorting and for deterministic output.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ArityMismatch, DomainError, MissingApplicand, NotSkeleton

__all__ = [
    "Term", "One", "Zero", "Var", "Slot", "Word", "Apply", "Sum", "Scal",
    "FunctionSymbol", "SpecifiedTerm", "ONE", "ZERO",
    "word", "var", "length", "free_vars", "substitute", "substitute_map",
    "mk_symbol", "make_apply", "compare", "sort_key", "is_skeleton",
    "slots_of", "relabel_slots", "instantiate", "symbols_of",
]


class Term:
    __slots__ = ("_key", "_hash", "_size")

    def _compute_key(self) -> tuple:
        raise NotImplementedError

    @property
    def key(self) -> tuple:
        k = self._key
        if k is None:
            k = self._key = self._compute_key()
        return k

    @property
    def size(self) -> int:
        """Node count of the tree (shared subterms counted per occurrence)."""
        try:
            return self._size
        except AttributeError:
            n = 1 + sum(k.size for k in children(self))
            if isinstance(self, Apply):
                n += self.symbol.definition.size
            self._size = n
            return n

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = self._hash = hash(self.key)
        return h

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Term):
            return NotImplemented
        return hash(self) == hash(other) and self.key == other.key

    def __lt__(self, other: Term) -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        from .syntax import to_text
        return f"<{type(self).__name__} {to_text(self)}>"

    def __str__(self) -> str:
        from .syntax import to_text
        return to_text(self)


class One(Term):
    __slots__ = ()

    def __init__(self) -> None:
        self._key = (0,)
        self._hash = None


class Zero(Term):
    __slots__ = ()

    def __init__(self) -> None:
        self._key = (1,)
        self._hash = None


ONE = One()
ZERO = Zero()

_NAME = re.compile(r"^([A-Za-z])(\d*)$")


class Var(Term):
    """A free variable: one letter plus an optional decimal index.

    The bare letter (``y``) sorts before every indexed variable with the
    same letter; it is used as the distinguished polynomial variable.
    """

    __slots__ = ("letter", "index")

    def __init__(self, letter: str, index: int | None = None) -> None:
        if len(letter) != 1 or not letter.isalpha():
            raise ValueError(f"bad variable letter {letter!r}")
        if index is not None and index < 0:
            raise ValueError("variable index must be non-negative")
        self.letter = letter
        self.index = index
        self._key = None
        self._hash = None

    @classmethod
    def parse(cls, name: str) -> Var:
        m = _NAME.match(name)
        if not m:
            raise ValueError(f"bad variable name {name!r}")
        return cls(m.group(1), int(m.group(2)) if m.group(2) else None)

    @property
    def name(self) -> str:
        return self.letter if self.index is None else f"{self.letter}{self.index}"

    def _compute_key(self) -> tuple:
        return (3, self.letter, -1 if self.index is None else self.index)


def var(name: str) -> Var:
    return Var.parse(name)


class Slot(Term):
    """Positional bound variable ``%i`` inside a defining term."""

    __slots__ = ("index",)

    def __init__(self, index: int) -> None:
        if index < 0:
            raise ValueError("slot index must be non-negative")
        self.index = index
        self._key = (2, index)
        self._hash = None


class Word(Term):
    __slots__ = ("factors",)

    def __init__(self, factors: Iterable[Term]) -> None:
        flat: list[Term] = []
        for f in factors:
            if isinstance(f, Word):
                flat.extend(f.factors)
            else:
                flat.append(f)
        if len(flat) < 2:
            raise ValueError("a word needs at least two factors")
        self.factors = tuple(flat)
        self._key = None
        self._hash = None

    @classmethod
    def from_flat(cls, factors: Sequence[Term]) -> Term:
        """Trusted constructor for factors that are already flat (no Words)."""
        if len(factors) == 1:
            return factors[0]
        if not factors:
            return ONE
        w = object.__new__(cls)
        w.factors = tuple(factors)
        w._key = None
        w._hash = None
        return w

    @property
    def size(self) -> int:
        try:
            return self._size
        except AttributeError:
            n = 1
            for f in self.factors:
                n += 1 if type(f) is Var or type(f) is Slot else f.size
            self._size = n
            return n

    def _compute_key(self) -> tuple:
        return (5, len(self.factors), tuple(f.key for f in self.factors))


def word(factors: Iterable[Term]) -> Term:
    """Concatenate factors; a single factor is returned bare, none gives 1."""
    flat: list[Term] = []
    for f in factors:
        if isinstance(f, Word):
            flat.extend(f.factors)
        else:
            flat.append(f)
    if not flat:
        return ONE
    if len(flat) == 1:
        return flat[0]
    return Word(flat)


class FunctionSymbol:
    """An n-place symbol whose action is ``x F(a1..an) = def[%0:=x, %i:=ai]``."""

    __slots__ = ("arity", "definition", "level", "_key", "_hash")

    def __init__(self, arity: int, definition: Term, level: int) -> None:
        self.arity = arity
        self.definition = definition
        self.level = level
        self._key = None
        self._hash = None

    @property
    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.level, self.definition.key)
        return self._key

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key)
        return self._hash

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FunctionSymbol):
            return NotImplemented
        return self.arity == other.arity and self.key == other.key

    def __repr__(self) -> str:
        return f"<FunctionSymbol/{self.arity} [{self.definition}] level={self.level}>"


class Apply(Term):
    __slots__ = ("symbol", "args")

    def __init__(self, symbol: FunctionSymbol, args: Sequence[Term] = ()) -> None:
        args = tuple(args)
        if len(args) != symbol.arity:
            raise ArityMismatch(
                f"symbol takes {symbol.arity} argument(s), got {len(args)}")
        self.symbol = symbol
        self.args = args
        self._key = None
        self._hash = None

    def _compute_key(self) -> tuple:
        return (4, self.symbol.level, self.symbol.definition.key,
                tuple(a.key for a in self.args))


class Scal(Term):
    __slots__ = ("coeff", "operand")

    def __init__(self, coeff, operand: Term) -> None:
        self.coeff = coeff
        self.operand = operand
        self._key = None
        self._hash = None

    def _compute_key(self) -> tuple:
        return (6, self.coeff, self.operand.key)


class Sum(Term):
    __slots__ = ("addends",)

    def __init__(self, addends: Iterable[Term]) -> None:
        addends = tuple(addends)
        if len(addends) < 2:
            raise ValueError("a sum needs at least two addends")
        self.addends = addends
        self._key = None
        self._hash = None

    def _compute_key(self) -> tuple:
        return (7, tuple(a.key for a in self.addends))


@dataclass(frozen=True)
class SpecifiedTerm:
    """A term together with an ordered, repetition-free variable list."""

    term: Term
    vars: tuple[Var, ...]

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if len(set(self.vars)) != len(self.vars):
            raise DomainError("variable list has repetitions")
        missing = free_vars(self.term) - set(self.vars)
        if missing:
            names = ", ".join(sorted(v.name for v in missing))
            raise DomainError(f"free variables not listed: {names}")

    @classmethod
    def of(cls, term: Term) -> SpecifiedTerm:
        """Specify a term by its free variables in term order."""
        return cls(term, tuple(sorted(free_vars(term))))

    @property
    def is_reduced(self) -> bool:
        return free_vars(self.term) == set(self.vars)


# ---------------------------------------------------------------- queries

def children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, Word):
        return t.factors
    if isinstance(t, Apply):
        return t.args
    if isinstance(t, Sum):
        return t.addends
    if isinstance(t, Scal):
        return (t.operand,)
    return ()


def length(t: Term) -> int:
    kids = children(t)
    if not kids and not isinstance(t, Apply):
        return 0
    return 1 + max((length(k) for k in kids), default=0)


def free_vars(t: Term) -> frozenset[Var]:
    if isinstance(t, Var):
        return frozenset((t,))
    out: set[Var] = set()
    for k in children(t):
        out |= free_vars(k)
    return frozenset(out)


def slots_of(t: Term) -> set[int]:
    """Slot indices at this binding level (nested definitions are closed)."""
    if isinstance(t, Slot):
        return {t.index}
    out: set[int] = set()
    for k in children(t):
        out |= slots_of(k)
    return out


def symbols_of(t: Term) -> list[FunctionSymbol]:
    """All symbols occurring in ``t``, including inside definitions."""
    out: list[FunctionSymbol] = []
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Apply):
            out.append(u.symbol)
            stack.append(u.symbol.definition)
        stack.extend(children(u))
    return out


def is_skeleton(t: Term) -> bool:
    if isinstance(t, (Zero, Sum, Scal)):
        return False
    return all(is_skeleton(k) for k in children(t))


def sort_key(t: Term) -> tuple:
    return t.key


def compare(t1: Term, t2: Term) -> int:
    """Three-way comparison in the canonical term order (-1, 0, 1)."""
    k1, k2 = t1.key, t2.key
    return (k1 > k2) - (k1 < k2)


# ---------------------------------------------------------------- rebuilding

def _rebuild(t: Term, leaf) -> Term:
    """Rebuild ``t`` bottom-up, mapping leaves through ``leaf``."""
    if isinstance(t, Word):
        return word(_rebuild(f, leaf) for f in t.factors)
    if isinstance(t, Apply):
        return Apply(t.symbol, [_rebuild(a, leaf) for a in t.args])
    if isinstance(t, Sum):
        return Sum(_rebuild(a, leaf) for a in t.addends)
    if isinstance(t, Scal):
        return Scal(t.coeff, _rebuild(t.operand, leaf))
    return leaf(t)


def substitute_map(t: Term, mapping: dict[Var, Term]) -> Term:
    """Simultaneously replace variables by terms; no reduction."""
    if not mapping:
        return t
    return _rebuild(t, lambda u: mapping.get(u, u) if isinstance(u, Var) else u)


def substitute(s: SpecifiedTerm, values: Sequence[Term]) -> Term:
    if len(values) != len(s.vars):
        raise ArityMismatch(
            f"{len(s.vars)} variable(s) but {len(values)} value(s)")
    return substitute_map(s.term, dict(zip(s.vars, values)))


def instantiate(definition: Term, values: Sequence[Term]) -> Term:
    """Replace ``%i`` by ``values[i]`` in a defining term."""
    return _rebuild(definition,
                    lambda u: values[u.index] if isinstance(u, Slot) else u)


def relabel_slots(t: Term, mapping: dict[int, int]) -> Term:
    return _rebuild(t, lambda u: Slot(mapping.get(u.index, u.index))
                    if isinstance(u, Slot) else u)


# ---------------------------------------------------------------- symbols

def _first_occurrence(t: Term) -> list[int]:
    order: list[int] = []

    def walk(u: Term) -> None:
        if isinstance(u, Slot):
            if u.index not in order:
                order.append(u.index)
            return
        for k in children(u):
            walk(k)

    walk(t)
    return order


def symbol_level(definition: Term) -> int:
    """Level of the symbol defined by ``definition``."""
    nested = max((s.level for s in _direct_symbols(definition)), default=0)
    return max(length(definition), nested) + 1


def _direct_symbols(t: Term) -> list[FunctionSymbol]:
    out: list[FunctionSymbol] = []
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Apply):
            out.append(u.symbol)
        stack.extend(children(u))
    return out


def _form_symbol(definition: Term) -> tuple[FunctionSymbol, list[int]]:
    """Build a symbol from a raw defining term.

    Returns the symbol and, for each new slot 1..n, the original slot index
    it came from.
    """
    from .reduction import canonicalize

    if not is_skeleton(definition):
        raise NotSkeleton("defining terms must not contain 0, + or scal")
    if free_vars(definition):
        names = ", ".join(sorted(v.name for v in free_vars(definition)))
        raise DomainError(f"defining term has free variables: {names}")
    current = canonicalize(definition)
    if 0 not in slots_of(current):
        raise MissingApplicand("defining term does not mention %0")
    # each state: (defining term, {current slot: original slot})
    states = [(current, {i: i for i in slots_of(current)})]
    while True:
        term, origin = states[-1]
        order = [i for i in _first_occurrence(term) if i != 0]
        mapping = {old: new for new, old in enumerate(order, start=1)}
        mapping[0] = 0
        nxt = canonicalize(relabel_slots(term, mapping))
        if nxt == term:
            current = term
            break
        terms = [s[0] for s in states]
        if nxt in terms:
            # numbering cycles: settle on the smallest member of the orbit
            current, origin = min(states[terms.index(nxt):],
                                  key=lambda s: s[0].key)
            break
        states.append((nxt, {mapping[i]: o for i, o in origin.items()}))
    arity = len(origin) - 1
    symbol = FunctionSymbol(arity, current, symbol_level(current))
    return symbol, [origin[i] for i in range(1, arity + 1)]


def mk_symbol(definition: Term) -> FunctionSymbol:
    """Form the function symbol of a defining term over slots."""
    return _form_symbol(definition)[0]


def make_apply(definition: Term, args: Sequence[Term]) -> Apply:
    """Apply a raw defining term to positional arguments for ``%1..%n``.

    Arguments whose slot does not occur are dropped and the rest are
    reordered to match the symbol's slot numbering.
    """
    used = slots_of(definition) - {0}
    if used and max(used) > len(args):
        raise ArityMismatch(
            f"slot %{max(used)} used but only {len(args)} argument(s) given")
    symbol, origin = _form_symbol(definition)
    return Apply(symbol, [args[o - 1] for o in origin])
