"""Exception hierarchy shared by all modules."""


class SkelError(Exception):
    """Base class for every error raised by this package."""


class ParseError(SkelError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class SlotOutsideDef(ParseError):
    pass


class DomainError(SkelError):
    """A precondition of an operation is violated."""


class ArityMismatch(DomainError):
    pass


class MissingApplicand(DomainError):
    pass


class NotSkeleton(DomainError):
    pass


class ConstantMonomial(DomainError):
    pass


class UnboundVariable(DomainError):
    pass


class Divergent(SkelError):
    """Reduction does not reach a normal form.

    ``witness`` is the repeating redex for a detected cycle, or the term
    being reduced when fuel ran out.
    """

    def __init__(self, witness, reason: str = "cycle", steps: int = 0):
        super().__init__(witness, reason, steps)
        self.witness = witness
        self.reason = reason
        self.steps = steps

    def __str__(self) -> str:
        # rendered on demand: fuel witnesses can be very large
        from .syntax import to_text
        return (f"divergent ({self.reason} after {self.steps} step(s)): "
                f"{to_text(self.witness)}")
