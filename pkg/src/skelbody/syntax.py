"""S-expression surface syntax.

    term := "1" | "0" | IDENT | "%"NAT
          | "(*" term term+ ")" | "(+" term term+ ")"
          | "(scal" INT term ")" | "(ap" "[" term "]" term* ")"

Slots may only appear inside a ``[...]`` defining term.  Comments run
from ``;`` to the end of the line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, SlotOutsideDef
from .terms import (
    ONE, ZERO, Apply, FunctionSymbol, One, Scal, Slot, Sum, Term, Var, Word, Zero,
    free_vars, is_skeleton, make_apply, slots_of, symbol_level,
)

__all__ = ["parse", "to_text", "tokenize"]

_TOKEN = re.compile(r"""
    (?P<ws>\s+|;[^\n]*)
  | (?P<punct>[()\[\]])
  | (?P<slot>%\d+)
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op>[*+])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        for i, ch in enumerate(m.group()):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.def_depth = 0

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else Token("", "", 1, 0)
            raise ParseError("unexpected end of input",
                             last.line, last.column + len(last.text))
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, got {tok.text!r}",
                             tok.line, tok.column)
        return tok

    def term(self) -> Term:
        tok = self.next()
        if tok.kind == "slot":
            if not self.def_depth:
                raise SlotOutsideDef(f"slot {tok.text} outside a defining term",
                                     tok.line, tok.column)
            return Slot(int(tok.text[1:]))
        if tok.kind == "int":
            if tok.text == "1":
                return ONE
            if tok.text == "0":
                return ZERO
            raise ParseError(f"integer {tok.text} is not a term", tok.line, tok.column)
        if tok.kind == "ident":
            if tok.text in ("ap", "scal"):
                raise ParseError(f"{tok.text!r} outside parentheses",
                                 tok.line, tok.column)
            try:
                return Var.parse(tok.text)
            except ValueError:
                raise ParseError(f"bad identifier {tok.text!r}",
                                 tok.line, tok.column) from None
        if tok.text == "(":
            return self.compound(tok)
        raise ParseError(f"unexpected {tok.text!r}", tok.line, tok.column)

    def rest(self) -> list[Term]:
        items = []
        while True:
            tok = self.peek()
            if tok is not None and tok.text == ")":
                self.i += 1
                return items
            items.append(self.term())

    def compound(self, open_tok: Token) -> Term:
        head = self.next()
        if head.kind == "slot" and not self.def_depth:
            raise SlotOutsideDef(f"slot {head.text} outside a defining term",
                                 head.line, head.column)
        if head.text in ("*", "+"):
            items = self.rest()
            if len(items) < 2:
                raise ParseError(f"({head.text} ...) needs at least two operands",
                                 open_tok.line, open_tok.column)
            return Word(items) if head.text == "*" else Sum(items)
        if head.text == "scal":
            coeff = self.next()
            if coeff.kind != "int":
                raise ParseError("scal expects an integer coefficient",
                                 coeff.line, coeff.column)
            operand = self.term()
            self.expect(")")
            return Scal(int(coeff.text), operand)
        if head.text == "ap":
            self.expect("[")
            self.def_depth += 1
            definition = self.term()
            self.def_depth -= 1
            self.expect("]")
            return _apply(definition, self.rest())
        raise ParseError(f"unknown operator {head.text!r}", head.line, head.column)


def _apply(definition: Term, args: list[Term]) -> Apply:
    # canonical output keeps the slot order chosen by argument sorting;
    # renumbering it would break parse(to_text(t)) == t
    from .reduction import canonicalize

    if (is_skeleton(definition) and not free_vars(definition)
            and slots_of(definition) == set(range(len(args) + 1))
            and canonicalize(definition) == definition):
        return Apply(FunctionSymbol(len(args), definition, symbol_level(definition)), args)
    return make_apply(definition, args)


def parse(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    extra = p.peek()
    if extra is not None:
        raise ParseError(f"trailing input {extra.text!r}", extra.line, extra.column)
    return t


def to_text(t: Term) -> str:
    if isinstance(t, One):
        return "1"
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Slot):
        return f"%{t.index}"
    if isinstance(t, Word):
        return "(* " + " ".join(to_text(f) for f in t.factors) + ")"
    if isinstance(t, Apply):
        parts = ["ap", f"[{to_text(t.symbol.definition)}]"]
        parts.extend(to_text(a) for a in t.args)
        return "(" + " ".join(parts) + ")"
    if isinstance(t, Sum):
        return "(+ " + " ".join(to_text(a) for a in t.addends) + ")"
    if isinstance(t, Scal):
        return f"(scal {t.coeff} {to_text(t.operand)})"
    raise TypeError(f"not a term: {t!r}")
