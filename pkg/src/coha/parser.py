"""Recursive-descent parser for algebra-element expressions.

Grammar (no implicit multiplication):

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' nonneg-int)?
    atom    := integer | symbol | '(' expr ')'
    symbol  := 't1' | 't2' | 'hbar' | 'beta' | 'x(i,s)' | 'h(k)'

Precedence: ^  >  unary -  >  * /  >  + -.
"""

from __future__ import annotations

import re

from .poly import Polynomial
from .quiver import DimVector
from .ratfun import RationalFunction
from .shuffle import ShuffleElement, slot_symbol, symmetry_witness
from .symbols import BETA, HBAR, T1, T2, cartan_h


class ParseError(Exception):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<xvar>x\(\s*(?P<xv>\w+)\s*,\s*(?P<xs>\d+)\s*\))
  | (?P<hvar>h\(\s*(?P<hv>\w+)\s*\))
  | (?P<name>t1|t2|hbar|beta)
  | (?P<svar>[uvwz]\d*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def tokenize(text: str):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws" and not m.group("ws"):
            kind = None
            if m.group("int"):
                out.append(("int", int(m.group("int")), pos))
            elif m.group("xvar"):
                out.append(("x", (m.group("xv"), int(m.group("xs"))), pos))
            elif m.group("hvar"):
                out.append(("h", m.group("hv"), pos))
            elif m.group("name"):
                out.append(("name", m.group("name"), pos))
            elif m.group("svar"):
                out.append(("svar", m.group("svar"), pos))
            elif m.group("op"):
                out.append(("op", m.group("op"), pos))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


_NAMED = {"t1": T1, "t2": T2, "hbar": HBAR, "beta": BETA}


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)
        return self.advance()

    def parse(self) -> RationalFunction:
        value = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError("trailing input", pos)
        return value

    def expr(self) -> RationalFunction:
        value = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                rhs = self.term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def term(self) -> RationalFunction:
        value = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.advance()
                rhs = self.unary()
                if val == "/":
                    if rhs.is_zero():
                        raise ParseError("division by zero", pos)
                    value = value / rhs
                else:
                    value = value * rhs
            else:
                return value

    def unary(self) -> RationalFunction:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.advance()
            return -self.unary()
        return self.power()

    def power(self) -> RationalFunction:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            kind2, val2, pos2 = self.advance()
            if kind2 != "int":
                raise ParseError("exponent must be a nonnegative integer", pos2)
            return base ** val2
        return base

    def atom(self) -> RationalFunction:
        kind, val, pos = self.advance()
        if kind == "int":
            return RationalFunction.const(val)
        if kind == "name":
            return RationalFunction.var(_NAMED[val])
        if kind == "x":
            vertex, slot = val
            return RationalFunction.var(slot_symbol(vertex, slot))
        if kind == "h":
            return RationalFunction.var(cartan_h(val))
        if kind == "svar":
            from .symbols import series_var
            return RationalFunction.var(series_var(val))
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError("expected a value", pos)


def parse_expression(text: str) -> RationalFunction:
    return _Parser(text).parse()


class SymmetryError(Exception):
    def __init__(self, witness):
        vertex, s, t = witness
        super().__init__(
            f"not symmetric: swapping slots {s} and {t} at vertex {vertex} "
            f"changes the value")
        self.witness = witness


def parse_element(text: str, grade: DimVector, quiver, law) -> ShuffleElement:
    """Parse and validate a homogeneous shuffle element of the given grade.

    Rejects unknown slots (outside the grade) and non-symmetric input; the
    symmetry error carries a violated transposition as witness.
    """
    f = parse_expression(text)
    from .symbols import ROLE_ALPHABET
    allowed = set()
    for vertex in quiver.vertices:
        for s in range(1, grade[vertex] + 1):
            allowed.add(slot_symbol(vertex, s))
    for s in f.symbols():
        if s.role == ROLE_ALPHABET and s not in allowed:
            raise ParseError(f"slot {s.name} out of range for the grade", 0)
    witness = symmetry_witness(f, grade)
    if witness is not None:
        raise SymmetryError(witness)
    return ShuffleElement(quiver, law, {grade: f}, validate=False)
