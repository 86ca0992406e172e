"""Truncated Laurent series in one distinguished variable.

A TruncatedSeries stores exact RationalFunction coefficients (in the
remaining symbols) for powers of one variable, in one of two orientations:

  * "zero":      ascending powers, coefficients known for exponents <= order
  * "infinity":  descending powers, coefficients known for exponents >= -order

The window is tracked through arithmetic; coefficient queries outside it
raise OrderError rather than returning silently wrong values.  A series
with order=None is exact (a finite Laurent polynomial in the variable).

Internally exponent e has "depth" n = dir*e (dir = +1 at zero, -1 at
infinity); a window of order N means coefficients are known for n <= N.
"""

from __future__ import annotations

from fractions import Fraction

from .config import SIGMA_RES
from .poly import Polynomial
from .ratfun import RF_ONE, RF_ZERO, RationalFunction
from .symbols import Symbol

AT_ZERO = "zero"
AT_INFINITY = "infinity"


class OrderError(Exception):
    """A coefficient beyond the recorded truncation order was requested."""


def _as_rf(c) -> RationalFunction:
    if isinstance(c, RationalFunction):
        return c
    if isinstance(c, Polynomial):
        return RationalFunction(c)
    return RationalFunction.const(c)


class TruncatedSeries:
    __slots__ = ("var", "orientation", "coeffs", "order")

    def __init__(self, var: Symbol, orientation: str, coeffs: dict, order):
        if orientation not in (AT_ZERO, AT_INFINITY):
            raise ValueError(f"bad orientation {orientation!r}")
        self.var = var
        self.orientation = orientation
        self.order = order  # int or None (exact)
        d = 1 if orientation == AT_ZERO else -1
        cleaned = {}
        for e, c in coeffs.items():
            c = _as_rf(c)
            if not c.is_zero() and (order is None or d * e <= order):
                cleaned[e] = c
        self.coeffs = cleaned

    def _dir(self) -> int:
        return 1 if self.orientation == AT_ZERO else -1

    def _in_window(self, e: int) -> bool:
        return self.order is None or self._dir() * e <= self.order

    def coefficient(self, e: int) -> RationalFunction:
        if not self._in_window(e):
            raise OrderError(
                f"coefficient of {self.var.name}^{e} lies beyond truncation order {self.order}")
        return self.coeffs.get(e, RF_ZERO)

    def min_depth(self) -> int:
        """Smallest dir*e over stored terms (0 for the zero series)."""
        d = self._dir()
        return min((d * e for e in self.coeffs), default=0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check_compat(self, other: "TruncatedSeries"):
        if self.var is not other.var or self.orientation != other.orientation:
            raise ValueError("series mismatch: different variable or orientation")

    @staticmethod
    def _merge_order(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def _promote(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries(self.var, self.orientation, {0: _as_rf(other)}, None)

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = self._promote(other)
        self._check_compat(other)
        order = self._merge_order(self.order, other.order)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, RF_ZERO) + c
        return TruncatedSeries(self.var, self.orientation, out, order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.var, self.orientation,
                               {e: -c for e, c in self.coeffs.items()}, self.order)

    def __sub__(self, other):
        return self + (-self._promote(other)) if not isinstance(other, TruncatedSeries) \
            else self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncatedSeries":
        c = _as_rf(c)
        return TruncatedSeries(self.var, self.orientation,
                               {e: cc * c for e, cc in self.coeffs.items()}, self.order)

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by var**k."""
        order = None if self.order is None else self.order + self._dir() * k
        return TruncatedSeries(self.var, self.orientation,
                               {e + k: c for e, c in self.coeffs.items()}, order)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RationalFunction, Polynomial)):
            return self.scale(other)
        self._check_compat(other)
        if self.order is None and other.order is None:
            order = None
        else:
            cands = []
            if self.order is not None:
                cands.append(self.order + other.min_depth())
            if other.order is not None:
                cands.append(other.order + self.min_depth())
            order = min(cands)
        d = self._dir()
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if order is None or d * e <= order:
                    out[e] = out.get(e, RF_ZERO) + c1 * c2
        return TruncatedSeries(self.var, self.orientation, out, order)

    __rmul__ = __mul__

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse within the truncation window."""
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero series")
        d = self._dir()
        m = self.min_depth()
        lead = self.coeffs[d * m]
        lead_inv = lead.inverse()
        if self.order is None:
            if len(self.coeffs) == 1:
                return TruncatedSeries(self.var, self.orientation, {-d * m: lead_inv}, None)
            raise OrderError("cannot invert an exact multi-term series; truncate first")
        depth_budget = self.order - m
        # self = lead * var^(d*m) * (1 + u), u of positive depth
        u = {}
        for e, c in self.coeffs.items():
            n = d * e - m
            if 0 < n <= depth_budget:
                u[n] = c * lead_inv
        inv_depth = {0: RF_ONE}
        power = {0: RF_ONE}
        if u:
            for _ in range(depth_budget):
                new_power: dict = {}
                for n1, c1 in power.items():
                    for n2, c2 in u.items():
                        n = n1 + n2
                        if n <= depth_budget:
                            new_power[n] = new_power.get(n, RF_ZERO) - c1 * c2
                power = {n: c for n, c in new_power.items() if not c.is_zero()}
                if not power:
                    break
                for n, c in power.items():
                    inv_depth[n] = inv_depth.get(n, RF_ZERO) + c
        out = {d * (n - m): c * lead_inv for n, c in inv_depth.items()}
        return TruncatedSeries(self.var, self.orientation, out, depth_budget - m)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, RationalFunction, Polynomial)):
            return self.scale(_as_rf(other).inverse())
        return self * other.inverse()

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.var is other.var and self.orientation == other.orientation
                and self.order == other.order and self.coeffs == other.coeffs)

    def truncate(self, order: int) -> "TruncatedSeries":
        if self.order is not None and order > self.order:
            raise OrderError(f"cannot extend truncation order {self.order} to {order}")
        return TruncatedSeries(self.var, self.orientation, self.coeffs, order)

    def to_rational(self) -> RationalFunction:
        """Re-sum a finite (exact) series."""
        if self.order is not None:
            raise OrderError("only exact series can be re-summed")
        out = RF_ZERO
        v = RationalFunction.var(self.var)
        for e, c in self.coeffs.items():
            out = out + c * v ** e
        return out

    def render(self) -> str:
        if not self.coeffs:
            body = "0"
        else:
            d = self._dir()
            parts = []
            for e, c in sorted(self.coeffs.items(), key=lambda kv: d * kv[0]):
                cs = c.render()
                if e == 0:
                    parts.append(cs)
                else:
                    vp = self.var.name if e == 1 else f"{self.var.name}^{e}"
                    needs_parens = "+" in cs or " - " in cs
                    parts.append(vp if cs == "1" else
                                 f"({cs})*{vp}" if needs_parens else f"{cs}*{vp}")
            body = " + ".join(parts)
        if self.order is None:
            return body
        return body + f" + O({self.var.name}^{self._dir() * (self.order + 1)})"

    def __repr__(self):
        return f"TruncatedSeries({self.render()})"


def poly_to_series(p, var: Symbol, orientation: str) -> TruncatedSeries:
    """A Polynomial (or RationalFunction numerator) as an exact series in var."""
    if isinstance(p, (int, Fraction)):
        p = Polynomial.const(p)
    coeffs = {e: RationalFunction(cp) for e, cp in p.as_univariate(var).items()}
    return TruncatedSeries(var, orientation, coeffs, None)


def expand_at(f, var: Symbol, orientation: str, order: int) -> TruncatedSeries:
    """Laurent-expand a RationalFunction in `var` at 0 or at infinity.

    The denominator must have a nonzero extreme term in `var` for the
    chosen orientation; constants and polynomials expand to themselves
    (finite series, then truncated to the requested window).
    """
    if isinstance(f, TruncatedSeries):
        if f.var is not var or f.orientation != orientation:
            raise ValueError("series already expanded with different settings")
        if f.order is None or order <= f.order:
            return f.truncate(order)
        return f
    if isinstance(f, (Polynomial, int, Fraction)):
        f = _as_rf(f)
    num = poly_to_series(f.num, var, orientation)
    if num.is_zero():
        return TruncatedSeries(var, orientation, {}, order)
    den = poly_to_series(f.den, var, orientation)
    m_num = num.min_depth()
    m_den = den.min_depth()
    if len(den.coeffs) == 1:
        inv = den.inverse()
    else:
        inv = den.truncate(order - m_num + 2 * m_den).inverse()
    prod = num * inv
    if prod.order is None or prod.order > order:
        prod = prod.truncate(order)
    return prod


def _rational_c_minus_1(f: RationalFunction, var: Symbol) -> RationalFunction:
    """Coefficient of var**-1 at infinity, by fraction-free reduction.

    Reduce N/D to a proper fraction R/D in var (pseudo-division, so at
    most one gcd at the very end), then read off R_{m-1} / lc(D).
    """
    N = f.num.as_univariate(var)
    D = f.den.as_univariate(var)
    m = max(D)
    lc = D[m]
    deg_n = max(N)
    scale_pow = 0
    while deg_n >= m:
        q = N[deg_n]
        shift = deg_n - m
        # lc * N - q * x^shift * D  kills the leading term
        new: dict = {}
        for e, c in N.items():
            new[e] = c * lc
        for e, c in D.items():
            ne = e + shift
            v = new.get(ne, None)
            v = (v - q * c) if v is not None else -q * c
            if v.is_zero():
                new.pop(ne, None)
            else:
                new[ne] = v
        new.pop(deg_n, None)
        N = {e: c for e, c in new.items() if not c.is_zero()}
        scale_pow += 1
        if not N:
            return RF_ZERO
        deg_n = max(N)
    r = N.get(m - 1)
    if r is None:
        return RF_ZERO
    return RationalFunction(r, D[m] * lc ** scale_pow)


def residue_at_infinity(f, var: Symbol) -> RationalFunction:
    """SIGMA_RES times the coefficient of var**-1 in the expansion at infinity."""
    if isinstance(f, TruncatedSeries):
        if f.var is not var or f.orientation != AT_INFINITY:
            raise ValueError("series not oriented at infinity in this variable")
        c = f.coefficient(-1)
    else:
        if isinstance(f, (Polynomial, int, Fraction)):
            f = _as_rf(f)
        c = _rational_c_minus_1(f, var)
    return c * SIGMA_RES
