"""Skeleton and body term algebra.

Terms over stratified function symbols, their reduction to canonical form,
the monoid of skeleton elements and its monoid ring of body elements.
"""
from .body import BodyElement, Polynomial, eval_at, linearize, weak_complete
from .errors import DomainError, Divergent, ParseError, SkelError
from .reduction import canonicalize, essentially_equal, reduce
from .skeleton import SkeletonElement, times
from .syntax import parse, to_text

__version__ = "0.1.0"

__all__ = [
    "BodyElement", "Polynomial", "eval_at", "linearize", "weak_complete",
    "DomainError", "Divergent", "ParseError", "SkelError",
    "canonicalize", "essentially_equal", "reduce",
    "SkeletonElement", "times", "parse", "to_text", "__version__",
]
