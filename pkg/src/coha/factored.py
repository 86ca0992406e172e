"""Fractions kept as multisets of polynomial factors.

The shuffle kernels are built from explicit factors (linear forms and
law-unit factors), so products and ratios cancel by key comparison and
sums assemble over a known common denominator -- no general gcd in the
hot paths.  Factor keys are primitive polynomials with positive leading
coefficient; scalars are tracked separately.

to_rational() cancels denominator factors by trial exact division.  When
the caller knows every denominator factor is irreducible (true for all
kernel factors of the closed-form laws) the result is canonical without a
gcd pass.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import ONE, QCOEF, Polynomial, exact_div, divides
from .ratfun import RationalFunction


def _factor_key(p: Polynomial) -> tuple[Polynomial, Fraction]:
    c, prim = p.primitive()
    return prim, c


class Factored:
    __slots__ = ("scalar", "num", "den")

    def __init__(self, scalar=1, num=None, den=None):
        self.scalar = QCOEF(scalar)
        self.num: dict[Polynomial, int] = dict(num or {})
        self.den: dict[Polynomial, int] = dict(den or {})

    @staticmethod
    def one() -> "Factored":
        return Factored()

    def is_zero(self) -> bool:
        return self.scalar == 0

    def copy(self) -> "Factored":
        return Factored(self.scalar, self.num, self.den)

    def _push(self, table_add, table_cancel, p: Polynomial, mult: int):
        if p.is_zero():
            if table_add is self.num:
                self.scalar = Fraction(0)
                self.num.clear()
                return
            raise ZeroDivisionError("zero factor in denominator")
        if p.is_const():
            c = p.const_value() ** mult
            self.scalar *= c if table_add is self.num else 1 / c
            return
        key, content = _factor_key(p)
        self.scalar *= content ** mult if table_add is self.num else content ** -mult
        cancelled = min(mult, table_cancel.get(key, 0))
        if cancelled:
            if table_cancel[key] == cancelled:
                del table_cancel[key]
            else:
                table_cancel[key] -= cancelled
            mult -= cancelled
        if mult:
            table_add[key] = table_add.get(key, 0) + mult

    def mul_poly(self, p: Polynomial, mult: int = 1) -> "Factored":
        if self.is_zero():
            return self
        self._push(self.num, self.den, p, mult)
        return self

    def div_poly(self, p: Polynomial, mult: int = 1) -> "Factored":
        self._push(self.den, self.num, p, mult)
        return self

    def mul_scalar(self, c) -> "Factored":
        self.scalar *= QCOEF(c)
        if self.scalar == 0:
            self.num.clear()
            self.den.clear()
        return self

    def mul_rf(self, r: RationalFunction) -> "Factored":
        self.mul_poly(r.num)
        if not self.is_zero():
            self.div_poly(r.den)
        return self

    def mul(self, other: "Factored") -> "Factored":
        self.mul_scalar(other.scalar)
        if self.is_zero():
            return self
        for p, m in other.num.items():
            self.mul_poly(p, m)
        for p, m in other.den.items():
            self.div_poly(p, m)
        return self

    def inverse(self) -> "Factored":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return Factored(1 / self.scalar, self.den, self.num)

    def numerator_poly(self) -> Polynomial:
        p = Polynomial.const(self.scalar)
        for q, m in self.num.items():
            p = p * q ** m
        return p

    def denominator_poly(self) -> Polynomial:
        p = ONE
        for q, m in self.den.items():
            p = p * q ** m
        return p

    def to_rational(self, assume_irreducible_den: bool = True) -> RationalFunction:
        num = self.numerator_poly()
        if num.is_zero():
            return RationalFunction.const(0)
        den_left: dict[Polynomial, int] = {}
        for q, m in self.den.items():
            while m:
                try:
                    num = exact_div(num, q)
                except ValueError:
                    break
                m -= 1
            if m:
                den_left[q] = m
        den = ONE
        for q, m in den_left.items():
            den = den * q ** m
        if assume_irreducible_den:
            # trial division exhausted every possible common factor
            if not den.is_const():
                c, den = den.primitive()
                num = num.scale(1 / c)
            else:
                num = num.scale(1 / den.const_value())
                den = ONE
            return RationalFunction(num, den, _canonical=True)
        return RationalFunction(num, den)


def factored_pairwise_sum(terms: list["Factored"],
                          assume_irreducible_den: bool = True) -> RationalFunction:
    """Sum with factored denominators, reducing after every addition.

    Each step takes the multiset lcm of the denominators (key comparison,
    no gcd), cross-multiplies by the complementary factors, and strips
    every denominator factor that divides the new numerator by exact trial
    division.  Intermediate numerators stay close to the reduced result.
    """
    terms = [t for t in terms if not t.is_zero()]
    if not terms:
        return RationalFunction.const(0)
    acc_num = terms[0].numerator_poly()
    acc_den: dict[Polynomial, int] = dict(terms[0].den)
    for t in terms[1:]:
        t_num = t.numerator_poly()
        t_den = t.den
        common: dict[Polynomial, int] = dict(acc_den)
        for q, m in t_den.items():
            if common.get(q, 0) < m:
                common[q] = m
        left = acc_num
        for q, m in common.items():
            extra = m - acc_den.get(q, 0)
            for _ in range(extra):
                left = left * q
        right = t_num
        for q, m in common.items():
            extra = m - t_den.get(q, 0)
            for _ in range(extra):
                right = right * q
        acc_num = left + right
        acc_den = common
        if acc_num.is_zero():
            acc_den = {}
            continue
        reduced: dict[Polynomial, int] = {}
        for q, m in acc_den.items():
            while m:
                try:
                    acc_num = exact_div(acc_num, q)
                except ValueError:
                    break
                m -= 1
            if m:
                reduced[q] = m
        acc_den = reduced
    out = Factored()
    out.mul_poly(acc_num)
    for q, m in acc_den.items():
        out.div_poly(q, m)
    return out.to_rational(assume_irreducible_den)


def factored_sum(terms: list[Factored], assume_irreducible_den: bool = True) -> RationalFunction:
    """Sum over the union common denominator, then reduce once."""
    terms = [t for t in terms if not t.is_zero()]
    if not terms:
        return RationalFunction.const(0)
    common: dict[Polynomial, int] = {}
    for t in terms:
        for q, m in t.den.items():
            if common.get(q, 0) < m:
                common[q] = m
    total = Polynomial()
    for t in terms:
        part = Polynomial.const(t.scalar)
        for q, m in t.num.items():
            part = part * q ** m
        for q, m in common.items():
            extra = m - t.den.get(q, 0)
            if extra:
                part = part * q ** extra
        total = total + part
    out = Factored()
    out.num = {}
    out.scalar = Fraction(1)
    out.den = dict(common)
    if total.is_zero():
        return RationalFunction.const(0)
    out.mul_poly(total)
    return out.to_rational(assume_irreducible_den)
