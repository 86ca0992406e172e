"""Multivariate polynomials truncated by total degree in the coordinates.

Used by the formal-group-law machinery: series-kind laws, formal log/exp
composition, and the kernel-twist comparison, all of which are statements
"modulo total degree > N" in the formal coordinates.

Only coordinate symbols count toward the truncation degree: alphabet and
series variables plus the translation parameters t1, t2, hbar.  Scalars of
the coefficient ring (beta, Cartan symbols) are weightless.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import ONE, ZERO, Polynomial, exact_div
from .symbols import BETA, ROLE_ALPHABET, ROLE_SERIES, Symbol


def coord_weight(s: Symbol) -> int:
    if s.role in (ROLE_ALPHABET, ROLE_SERIES):
        return 1
    if s.name in ("t1", "t2", "hbar"):
        return 1
    return 0


def coord_degree(mono) -> int:
    return sum(e * coord_weight(s) for s, e in mono)


def _chop(p: Polynomial, order: int) -> Polynomial:
    return Polynomial({m: c for m, c in p.terms.items() if coord_degree(m) <= order})


class TruncatedPoly:
    """A polynomial known modulo coordinate degree > order."""

    __slots__ = ("poly", "order")

    def __init__(self, poly, order: int):
        if isinstance(poly, (int, Fraction)):
            poly = Polynomial.const(poly)
        self.poly = _chop(poly, order)
        self.order = order

    def __add__(self, other):
        other = self._promote(other)
        return TruncatedPoly(self.poly + other.poly, min(self.order, other.order))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedPoly(-self.poly, self.order)

    def __sub__(self, other):
        return self + (-self._promote(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._promote(other)
        return TruncatedPoly(self.poly * other.poly, min(self.order, other.order))

    __rmul__ = __mul__

    def _promote(self, other) -> "TruncatedPoly":
        if isinstance(other, TruncatedPoly):
            return other
        if isinstance(other, (int, Fraction, Polynomial)):
            return TruncatedPoly(other, self.order)
        raise TypeError(f"cannot combine TruncatedPoly with {type(other)!r}")

    def __pow__(self, n: int):
        out = TruncatedPoly(ONE, self.order)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, TruncatedPoly):
            return NotImplemented
        o = min(self.order, other.order)
        return _chop(self.poly, o) == _chop(other.poly, o)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def constant_term(self) -> Polynomial:
        """Coordinate-degree-0 part (may involve weightless scalars like beta)."""
        c = ZERO
        for m, coeff in self.poly.terms.items():
            if coord_degree(m) == 0:
                c = c + Polynomial({m: coeff})
        return c

    def homogeneous_part(self, d: int) -> Polynomial:
        return Polynomial({m: c for m, c in self.poly.terms.items() if coord_degree(m) == d})

    def low_degree(self) -> int:
        return min((coord_degree(m) for m in self.poly.terms), default=0)

    def inverse(self) -> "TruncatedPoly":
        """Neumann inverse; the coordinate-degree-0 part must be invertible."""
        c0 = self.constant_term()
        if c0.is_zero():
            raise ZeroDivisionError("no inverse: zero constant term")
        # write self = c0*(1 - u); c0 may involve beta, so invert it exactly
        c0_inv = _invert_scalar(c0)
        u = TruncatedPoly(ONE - c0_inv * self.poly, self.order)
        out = TruncatedPoly(ONE, self.order)
        power = TruncatedPoly(ONE, self.order)
        for _ in range(self.order):
            power = power * u
            if power.is_zero():
                break
            out = out + power
        return TruncatedPoly(c0_inv * out.poly, self.order)

    def divide_exact(self, divisor: "TruncatedPoly | Polynomial") -> "TruncatedPoly":
        """Divide by a truncated polynomial whose lowest homogeneous part
        divides exactly, losing that many orders of precision.

        Solves quotient degree by degree; raises ValueError when the
        division is inexact at any stage.
        """
        if isinstance(divisor, Polynomial):
            divisor = TruncatedPoly(divisor, self.order)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero")
        d = divisor.low_degree()
        g_low = divisor.homogeneous_part(d)
        order = min(self.order, divisor.order) - d
        if self.poly.is_zero():
            return TruncatedPoly(ZERO, order)
        if self.low_degree() < d:
            raise ValueError("inexact truncated division: numerator too low")
        q_parts: dict[int, Polynomial] = {}
        for k in range(order + 1):
            rhs = self.homogeneous_part(d + k)
            for j in range(k):
                rhs = rhs - q_parts[j] * divisor.homogeneous_part(d + k - j)
            q_parts[k] = exact_div(rhs, g_low) if not rhs.is_zero() else ZERO
        out = ZERO
        for q in q_parts.values():
            out = out + q
        return TruncatedPoly(out, order)

    def subs(self, table: dict) -> "TruncatedPoly":
        """Substitute symbols by TruncatedPolys (plain polys are promoted)."""
        tp_table = {}
        for s, v in table.items():
            tp_table[s] = v if isinstance(v, TruncatedPoly) else TruncatedPoly(v, self.order)
        order = min([self.order] + [v.order for v in tp_table.values()])
        result = TruncatedPoly(ZERO, order)
        cache: dict[tuple[Symbol, int], TruncatedPoly] = {}
        for m, c in self.poly.terms.items():
            term = TruncatedPoly(Polynomial.const(c), order)
            for s, e in m:
                rep = tp_table.get(s)
                if rep is None:
                    term = term * Polynomial({((s, e),): Fraction(1)})
                else:
                    key = (s, e)
                    p = cache.get(key)
                    if p is None:
                        p = rep ** e
                        cache[key] = p
                    term = term * p
            result = result + term
        return result

    def render(self) -> str:
        return self.poly.render() + f" + O(deg {self.order + 1})"

    def __repr__(self):
        return f"TruncatedPoly({self.render()})"


def _invert_scalar(c: Polynomial) -> Polynomial:
    """Invert a coordinate-degree-0 polynomial (a pure beta/constant scalar)."""
    if c.is_const():
        return Polynomial.const(1 / c.const_value())
    # scalars involving beta are units only if constant; the engine never
    # needs more (laws have F(u,v) = u + v + higher with unit leading data)
    raise ZeroDivisionError("non-constant scalar cannot be inverted exactly")
