"""Exact rational functions: canonical fractions of Polynomials.

Canonical representative: gcd(num, den) = 1, the denominator is
integer-primitive with positive leading coefficient (graded lex).  Under
this normalization equal values have equal representations, so equality
is structural.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import ONE, QCOEF, ZERO, Polynomial, exact_div, gcd
from .symbols import Symbol


class RationalFunction:
    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=ONE, *, _canonical=False):
        num = _to_poly(num)
        den = _to_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("division by zero")
        if not _canonical:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors ---------------------------------------------------
    @staticmethod
    def const(c) -> "RationalFunction":
        return RationalFunction(Polynomial.const(c), ONE, _canonical=True)

    @staticmethod
    def var(s: Symbol) -> "RationalFunction":
        return RationalFunction(Polynomial.var(s), ONE, _canonical=True)

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def const_value(self):
        if not self.is_const():
            raise ValueError("not a constant")
        return self.num.const_value() / self.den.const_value()

    def is_polynomial(self) -> bool:
        return self.den.is_const()

    def as_polynomial(self) -> Polynomial:
        if not self.den.is_const():
            raise ValueError("denominator is not a unit")
        return self.num.scale(1 / self.den.const_value())

    def symbols(self) -> set:
        return self.num.symbols() | self.den.symbols()

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        g = gcd(self.den, other.den)
        if g.is_const():
            return RationalFunction(self.num * other.den + other.num * self.den,
                                    self.den * other.den)
        da = exact_div(self.den, g)
        db = exact_div(other.den, g)
        return RationalFunction(self.num * db + other.num * da, da * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RF_ZERO
        # cross-cancel first to keep intermediates small
        g1 = gcd(self.num, other.den)
        g2 = gcd(other.num, self.den)
        n1 = self.num if g1.is_const() else exact_div(self.num, g1)
        d2 = other.den if g1.is_const() else exact_div(other.den, g1)
        n2 = other.num if g2.is_const() else exact_div(other.num, g2)
        d1 = self.den if g2.is_const() else exact_div(self.den, g2)
        return RationalFunction(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n == 0:
            return RF_ONE
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n, _canonical=True)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- substitution ------------------------------------------------------
    def subs(self, table: dict) -> "RationalFunction":
        """Substitute symbols by RationalFunctions (exact composition).

        Raises ZeroDivisionError when the substituted denominator vanishes
        identically.
        """
        rf_table = {s: _coerce(v) for s, v in table.items()}
        num = _subs_poly(self.num, rf_table)
        den = _subs_poly(self.den, rf_table)
        if den.is_zero():
            raise ZeroDivisionError("substitution makes the denominator vanish")
        return num / den

    def derivative(self, s: Symbol) -> "RationalFunction":
        n, d = self.num, self.den
        return RationalFunction(n.derivative(s) * d - n * d.derivative(s), d * d)

    def rename(self, table: dict) -> "RationalFunction":
        """Relabel symbols; only the denominator sign needs renormalizing."""
        num = self.num.rename(table)
        den = self.den.rename(table)
        if not den.is_const():
            c, den = den.primitive()
            num = num.scale(1 / c)
        elif den.const_value() != 1:
            num = num.scale(1 / den.const_value())
            den = ONE
        return RationalFunction(num, den, _canonical=True)

    # -- rendering ---------------------------------------------------------
    def render_pair(self) -> tuple[str, str]:
        return self.num.render(), self.den.render()

    def render(self) -> str:
        if self.den == ONE:
            return self.num.render()
        num = self.num.render()
        if len(self.num.terms) > 1:
            num = f"({num})"
        den = self.den.render()
        if len(self.den.terms) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RationalFunction({self.render()})"


def _to_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial.const(x)
    raise TypeError(f"cannot build polynomial from {type(x)!r}")


def _coerce(x):
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, (int, Fraction)):
        return RationalFunction.const(x)
    if isinstance(x, Polynomial):
        return RationalFunction(x, ONE, _canonical=True)
    return NotImplemented


def _normalize(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    if num.is_zero():
        return ZERO, ONE
    if den.is_const():
        c = den.const_value()
        return num.scale(1 / c), ONE
    g = gcd(num, den)
    if not g.is_const():
        num = exact_div(num, g)
        den = exact_div(den, g)
    c, den = den.primitive()
    num = num.scale(1 / c)
    if den.is_const():
        num = num.scale(1 / den.const_value())
        den = ONE
    return num, den


def _subs_poly(p: Polynomial, table: dict) -> RationalFunction:
    result = RF_ZERO
    pow_cache: dict[tuple[Symbol, int], RationalFunction] = {}
    for m, c in p.terms.items():
        term = RationalFunction.const(c)
        for s, e in m:
            rep = table.get(s)
            if rep is None:
                rep = RationalFunction.var(s)
            key = (s, e)
            q = pow_cache.get(key)
            if q is None:
                q = rep ** e
                pow_cache[key] = q
            term = term * q
        result = result + term
    return result


RF_ZERO = RationalFunction.const(0)
RF_ONE = RationalFunction.const(1)


def normalize(num, den) -> RationalFunction:
    """Public canonical-fraction constructor (errors on zero denominator)."""
    return RationalFunction(num, den)
