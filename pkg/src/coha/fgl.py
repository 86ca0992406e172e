"""One-parameter formal group laws as pluggable coordinate arithmetic.

Three kinds are supported:

  * additive:      F(u,v) = u + v
  * connective-k:  F(u,v) = u + v - beta*u*v, with exact rational-function
                   closed forms for inverses and arbitrary integer forms
  * series:        F(u,v) given as a bivariate polynomial truncated at a
                   global order, all operations performed modulo that order

The engine evaluates a linear form sum(c_i * s_i) through the law as the
iterated formal sum of the (inverses of) its variables; the coordinate
itself is the identity chart, so the additive law returns the form
unchanged.  For connective-k everything is an exact rational function via
the unit transform U(a) = 1 - beta*a, which turns formal addition into
multiplication: U(a +_F b) = U(a) * U(b).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .config import DEFAULT_ORDER
from .poly import ONE, ZERO, Polynomial
from .ratfun import RF_ONE, RF_ZERO, RationalFunction
from .symbols import BETA, Symbol, series_var
from .truncpoly import TruncatedPoly

ADDITIVE = "additive"
CONNECTIVE_K = "connective-k"
SERIES = "series"


@dataclass(frozen=True)
class LinearForm:
    """Finitely supported integer combination of symbols."""

    coeffs: tuple  # tuple[(Symbol, int), ...], nonzero coefficients

    @staticmethod
    def make(entries) -> "LinearForm":
        table: dict[Symbol, int] = {}
        for s, c in entries:
            table[s] = table.get(s, 0) + int(c)
        items = tuple(sorted(((s, c) for s, c in table.items() if c), key=lambda e: e[0].key))
        return LinearForm(items)

    def as_polynomial(self) -> Polynomial:
        p = ZERO
        for s, c in self.coeffs:
            p = p + Polynomial.var(s).scale(c)
        return p


class FormalGroupLaw:
    """A law instance; use the module-level constructors."""

    def __init__(self, kind: str, series_coeffs=None, order: int = DEFAULT_ORDER):
        if kind not in (ADDITIVE, CONNECTIVE_K, SERIES):
            raise ValueError(f"unknown formal group law kind {kind!r}")
        self.kind = kind
        self.order = order
        self._series: Polynomial | None = None
        if kind == SERIES:
            if series_coeffs is None:
                raise ValueError("series law needs coefficients")
            self._series = _build_series_poly(series_coeffs)
            _check_series_axioms(self._series, order)

    # -- closed-form sector (additive / connective-k) -------------------
    def rational_closed_form(self) -> bool:
        return self.kind in (ADDITIVE, CONNECTIVE_K)

    def plus(self, a: RationalFunction, b: RationalFunction) -> RationalFunction:
        """a +_F b for laws with rational closed forms."""
        if self.kind == ADDITIVE:
            return a + b
        if self.kind == CONNECTIVE_K:
            beta = RationalFunction.var(BETA)
            return a + b - beta * a * b
        raise ValueError("series law has no rational closed form")

    def minus_one(self, a: RationalFunction) -> RationalFunction:
        """The formal inverse [-1](a)."""
        if self.kind == ADDITIVE:
            return -a
        if self.kind == CONNECTIVE_K:
            beta = RationalFunction.var(BETA)
            return -a / (RF_ONE - beta * a)
        raise ValueError("series law has no rational closed form")

    def ell(self, form: LinearForm):
        """Evaluate the linear form through the law.

        Returns a RationalFunction for additive/connective-k, and a
        TruncatedPoly at the law's order for series laws.
        """
        if self.kind == ADDITIVE:
            return RationalFunction(form.as_polynomial())
        if self.kind == CONNECTIVE_K:
            # U(sum) = prod U(s)^c with U(a) = 1 - beta*a; ell = (1-U)/beta
            beta = RationalFunction.var(BETA)
            num, den = RF_ONE, RF_ONE
            for s, c in form.coeffs:
                u = RF_ONE - beta * RationalFunction.var(s)
                if c > 0:
                    num = num * u ** c
                else:
                    den = den * u ** (-c)
            return (RF_ONE - num / den) / beta
        # series law: fold formal additions at truncation order
        acc = TruncatedPoly(ZERO, self.order)
        for s, c in form.coeffs:
            x = TruncatedPoly(Polynomial.var(s), self.order)
            step = x if c > 0 else self.series_inverse(x)
            for _ in range(abs(c)):
                acc = self.series_plus(acc, step)
        return acc

    # -- series sector ----------------------------------------------------
    def series_poly(self) -> Polynomial:
        """F(u,v) as a polynomial in the reserved series variables u, v."""
        if self.kind == ADDITIVE:
            return Polynomial.var(series_var("u")) + Polynomial.var(series_var("v"))
        if self.kind == CONNECTIVE_K:
            u, v = Polynomial.var(series_var("u")), Polynomial.var(series_var("v"))
            return u + v - Polynomial.var(BETA) * u * v
        return self._series

    def series_plus(self, a: TruncatedPoly, b: TruncatedPoly) -> TruncatedPoly:
        u, v = series_var("u"), series_var("v")
        F = TruncatedPoly(self.series_poly(), min(a.order, b.order))
        return F.subs({u: a, v: b})

    def series_inverse(self, a: TruncatedPoly) -> TruncatedPoly:
        """[-1](a) for the series sector, solved order by order."""
        order = a.order
        inv = -a
        for _ in range(order):
            err = self.series_plus(a, inv)
            if err.is_zero():
                break
            inv = inv - err
        return inv


def additive() -> FormalGroupLaw:
    return FormalGroupLaw(ADDITIVE)


def connective_k() -> FormalGroupLaw:
    return FormalGroupLaw(CONNECTIVE_K)


def series_law(coeffs, order: int = DEFAULT_ORDER) -> FormalGroupLaw:
    """coeffs: iterable of [i, j, c] triples for the monomials u^i v^j."""
    return FormalGroupLaw(SERIES, series_coeffs=coeffs, order=order)


def _build_series_poly(coeffs) -> Polynomial:
    u, v = series_var("u"), series_var("v")
    p = ZERO
    for i, j, c in coeffs:
        mono = []
        if i:
            mono.append((u, int(i)))
        if j:
            mono.append((v, int(j)))
        p = p + Polynomial({tuple(sorted(mono, key=lambda t: t[0].key)): Fraction(c)})
    return p


def _check_series_axioms(F: Polynomial, order: int):
    u, v, w = series_var("u"), series_var("v"), series_var("w")
    Ft = TruncatedPoly(F, order)
    zero = TruncatedPoly(ZERO, order)
    uu = TruncatedPoly(Polynomial.var(u), order)
    vv = TruncatedPoly(Polynomial.var(v), order)
    ww = TruncatedPoly(Polynomial.var(w), order)
    if Ft.subs({v: zero}) != uu:
        raise ValueError("series law violates F(u,0) = u")
    if Ft.subs({u: zero, v: uu}) != uu:
        raise ValueError("series law violates F(0,v) = v")
    if Ft.subs({u: vv, v: uu}) != Ft:
        raise ValueError("series law is not commutative")
    lhs = Ft.subs({u: Ft, v: ww})
    rhs = Ft.subs({u: uu, v: Ft.subs({u: vv, v: ww})})
    if lhs != rhs:
        raise ValueError("series law is not associative to the given order")


# -- formal logarithm / exponential ---------------------------------------

def fgl_log(law: FormalGroupLaw, order: int = DEFAULT_ORDER):
    """Log series l(x) with l(F(u,v)) = l(u) + l(v), as {n: coeff} dict.

    Coefficients are RationalFunctions in beta (exactly rational for the
    additive law).  l'(t) = 1 / (dF/dv)(t, 0), integrated termwise.
    """
    if law.kind == ADDITIVE:
        return {1: RF_ONE}
    u, v = series_var("u"), series_var("v")
    F = law.series_poly()
    dFdv = F.derivative(v)
    # substitute v = 0, keep u as the series variable
    at0 = ZERO
    for e, cp in dFdv.as_univariate(v).items():
        if e == 0:
            at0 = cp
    # invert 1/at0 as a power series in u to the needed order
    inv = TruncatedPoly(at0, order).inverse()
    coeffs: dict[int, RationalFunction] = {}
    for e, cp in inv.poly.as_univariate(u).items():
        if e + 1 <= order:
            coeffs[e + 1] = RationalFunction(cp) / (e + 1)
    return coeffs


def fgl_exp(law: FormalGroupLaw, order: int = DEFAULT_ORDER):
    """Compositional inverse of fgl_log, as {n: coeff}."""
    log_c = fgl_log(law, order)
    exp_c: dict[int, RationalFunction] = {1: RF_ONE}
    for n in range(2, order + 1):
        # coefficient of x^n in log(exp(x)) must vanish
        acc = RF_ZERO
        for k, lc in log_c.items():
            if k > n:
                continue
            # coefficient of x^n in (exp(x))^k using current exp_c (orders < n known)
            acc = acc + lc * _power_coeff(exp_c, k, n, upto=n - 1)
        exp_c[n] = -acc
    return exp_c


def _power_coeff(series: dict[int, RationalFunction], k: int, n: int, upto: int):
    """Coefficient of x^n in (sum_{m<=upto} series_m x^m)^k; series_1 = 1."""
    if k == 0:
        return RF_ONE if n == 0 else RF_ZERO
    cur = {m: c for m, c in series.items() if m <= upto}
    acc = {0: RF_ONE}
    for _ in range(k):
        new: dict[int, RationalFunction] = {}
        for m1, c1 in acc.items():
            for m2, c2 in cur.items():
                m = m1 + m2
                if m <= n:
                    new[m] = new.get(m, RF_ZERO) + c1 * c2
        acc = new
    return acc.get(n, RF_ZERO)


def log_series_apply(coeffs: dict, x: TruncatedPoly) -> TruncatedPoly:
    """Evaluate a {n: c_n} series at a TruncatedPoly argument."""
    out = TruncatedPoly(ZERO, x.order)
    power = TruncatedPoly(ONE, x.order)
    top = max(coeffs) if coeffs else 0
    for n in range(1, min(top, x.order) + 1):
        power = power * x
        c = coeffs.get(n)
        if c is not None:
            if not c.is_polynomial():
                raise ValueError("series coefficient is not polynomial")
            out = out + power * c.as_polynomial()
    return out


def ell(form: LinearForm, law: FormalGroupLaw):
    """Module-level alias for FormalGroupLaw.ell."""
    return law.ell(form)
