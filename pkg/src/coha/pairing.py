"""Residue pairings: scalar, twisted (Cartan-valued) and higher rank.

All of this lives over the additive law with the one-form dx and the
polynomial sector.  The twisted pairing of single-variable f, g against
the Cartan series of vertex k follows the mixed expansion convention: the
Cartan factor is a descending series 1 - sum_i g(k,i) x^(-i-1), while
f(x) g(-x) is expanded in ascending powers of x.  Writing P = f(x)g(-x) =
polar + regular (the split at x = 0), the value collapses exactly to

    SIGMA_RES * ( c_{-1}(polar)  -  regular(x -> h) )

where h is the collapsed Cartan variable; the g-free part c_{-1} and the
mode part are kept separate because the reduced double transforms them
differently (g^-(i) -> (-1)^(i+1) g^+(i), i.e. mode part F -> -F(-h)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .config import SIGMA_PAIR, SIGMA_RES
from .extended import _fac_mixed
from .factored import Factored
from .fgl import FormalGroupLaw, additive
from .poly import Polynomial, divides
from .quiver import DimVector, Quiver
from .ratfun import RF_ONE, RF_ZERO, RationalFunction
from .series import AT_ZERO, expand_at
from .shuffle import ShuffleElement, fac_diagonal, slot_symbol
from .symbols import PLAIN, Symbol, cartan_g, cartan_h


class PairingError(Exception):
    """Pairing requested for an unsupported combination of elements."""


@dataclass
class TwistedValue:
    """sigma_res * (scalar part + mode part), mode part collapsed at h.

    scalar: the Cartan-free contribution (from the leading 1 of the twist
    series).  mode(h): the collapsed sum over Cartan modes; substitute the
    appropriate h-copy before combining values from different copies.
    """

    scalar: RationalFunction
    mode: RationalFunction  # function of the collapsed Cartan variables

    def total(self) -> RationalFunction:
        return self.scalar + self.mode

    def reduce_minus(self, quiver: Quiver, minus_copy: int, plus_copy: int = PLAIN
                     ) -> "TwistedValue":
        """Apply g^-(i) -> (-1)^(i+1) g^+(i): mode F(h^-) -> -F(-h^+)."""
        table = {}
        for vertex in quiver.vertices:
            hminus = cartan_h(vertex, minus_copy)
            hplus = RationalFunction.var(cartan_h(vertex, plus_copy))
            table[hminus] = -hplus
        return TwistedValue(self.scalar, -self.mode.subs(table))


def _polar_split(f: RationalFunction, x: Symbol):
    """f = polar + regular at x = 0; returns (c_minus_1, regular)."""
    den_low = min(f.den.as_univariate(x), default=0)
    if den_low == 0:
        return RF_ZERO, f
    ser = expand_at(f, x, AT_ZERO, 0)
    polar = RF_ZERO
    xv = RationalFunction.var(x)
    c_minus_1 = RF_ZERO
    for e in range(-den_low, 0):
        c = ser.coefficient(e)
        if e == -1:
            c_minus_1 = c
        polar = polar + c * xv ** e
    return c_minus_1, f - polar


def twisted_residue(f: RationalFunction, x: Symbol, vertex: str,
                    cartan_copy: int = PLAIN) -> TwistedValue:
    """The x-residue of (Cartan series at x) * f(x) dx, collapsed."""
    c1, regular = _polar_split(f, x)
    h = RationalFunction.var(cartan_h(vertex, cartan_copy))
    mode = regular.subs({x: h})
    return TwistedValue(c1 * SIGMA_RES, mode * (-SIGMA_RES))


def twisted_pair_collapsed(f: RationalFunction, g: RationalFunction, vertex: str,
                           cartan_copy: int = PLAIN) -> TwistedValue:
    """Twisted pairing of single-variable f, g (collapsed Cartan)."""
    x = slot_symbol(str(vertex), 1)
    p = f * g.subs({x: -RationalFunction.var(x)})
    return twisted_residue(p, x, vertex, cartan_copy)


def twisted_pair(f, g, vertex: str) -> RationalFunction:
    """Symbolic twisted pairing of polynomials: a finite sum of g(k,i).

    twisted_pair(x^a, x^b) = SIGMA_PAIR * (-1)^b * g(k, a+b), extended
    bilinearly; raises PairingError on non-polynomial input (use the
    collapsed form for series arguments).
    """
    vertex = str(vertex)
    x = slot_symbol(vertex, 1)
    f = _as_rf(f)
    g = _as_rf(g)
    if not f.is_polynomial() or not g.is_polynomial():
        raise PairingError("symbolic twisted pairing needs polynomial arguments")
    p = (f * g.subs({x: -RationalFunction.var(x)})).as_polynomial()
    out = RF_ZERO
    for e, coeff in p.as_univariate(x).items():
        out = out + RationalFunction(coeff) * RationalFunction.var(cartan_g(vertex, e)) \
            * (-SIGMA_RES)
    return out


def pair_rank1(f, g, vertex: str) -> RationalFunction:
    """Untwisted residue pairing on degree e_k (zero for polynomials)."""
    from .series import residue_at_infinity
    vertex = str(vertex)
    x = slot_symbol(vertex, 1)
    f = _as_rf(f)
    g = _as_rf(g)
    p = f * g.subs({x: -RationalFunction.var(x)})
    return residue_at_infinity(p, x)


def _as_rf(f) -> RationalFunction:
    if isinstance(f, RationalFunction):
        return f
    if isinstance(f, Polynomial):
        return RationalFunction(f)
    return RationalFunction.const(f)


def pair_cartan(quiver: Quiver, law: FormalGroupLaw, k: str, l: str,
                u: Symbol, w: Symbol) -> RationalFunction:
    """(H_k(u), H_l(w)) = fac(u|w) / fac(w|u) on single e_k, e_l slots."""
    k, l = str(k), str(l)
    k_sides = tuple((1,) if q == k else () for q in quiver.vertices)
    l_sides = tuple((1,) if q == l else () for q in quiver.vertices)

    def vm_u(vertex, slot):
        return u

    def vm_w(vertex, slot):
        return w

    num = _fac_mixed(k_sides, l_sides, quiver, law, vm_u, vm_w)
    den = _fac_mixed(l_sides, k_sides, quiver, law, vm_w, vm_u)
    num.mul(den.inverse())
    return num.to_rational()


def residual_fac_pole(f: RationalFunction, g: RationalFunction, v: DimVector,
                      quiver: Quiver, law: FormalGroupLaw):
    """Denominator factors of (f*g)/fac(x_A) among same-vertex differences.

    Returns the offending factor, or None when the quotient is regular
    along every same-vertex difference divisor (the spherical case).
    """
    quotient = Factored.one()
    quotient.mul_rf(f)
    quotient.mul_rf(g)
    quotient.mul(fac_diagonal(v, quiver, law).inverse())
    den = quotient.to_rational().den
    for vertex in quiver.vertices:
        n = v[vertex]
        for s in range(1, n + 1):
            for t in range(1, n + 1):
                if s == t:
                    continue
                diff = Polynomial.var(slot_symbol(vertex, s)) \
                    - Polynomial.var(slot_symbol(vertex, t))
                diff = diff.primitive()[1]
                if divides(diff, den):
                    return diff
    return None


def pair_full(f: ShuffleElement, g: ShuffleElement, cartan_copy: int = PLAIN,
              check_regularity: bool = True) -> RationalFunction:
    """Iterated twisted residue pairing of equal-grade elements (collapsed).

    Per grade v:  all slot variables are integrated out in descending slot
    order (each residue twisted by its vertex Cartan series), against the
    kernel f(x) g(-x) / (|A|! fac(x_A)).  Grade mismatches contribute 0.
    """
    total = RF_ZERO
    quiver, law = f.quiver, f.law
    for v, fv in f.comps.items():
        gv = g.comps.get(v)
        if gv is None:
            continue
        total = total + _pair_full_component(fv, gv, v, quiver, law, cartan_copy,
                                             check_regularity)
    return total


def _pair_full_component(fv, gv, v: DimVector, quiver, law, cartan_copy,
                         check_regularity, slot_order=None) -> RationalFunction:
    from .series import residue_at_infinity

    if check_regularity:
        bad = residual_fac_pole(fv, gv, v, quiver, law)
        if bad is not None:
            raise PairingError(
                f"kernel quotient has a residual fac pole along {bad.render()}")
    refl = {}
    slots = []
    for vertex in quiver.vertices:
        for s in range(1, v[vertex] + 1):
            x = slot_symbol(vertex, s)
            refl[x] = -RationalFunction.var(x)
            slots.append((vertex, s))
    kernel = Factored.one()
    kernel.mul_rf(fv)
    kernel.mul_rf(gv.subs(refl))
    kernel.mul(fac_diagonal(v, quiver, law).inverse())
    value = kernel.to_rational(assume_irreducible_den=False)
    # the twist: one collapsed Cartan factor H_k(x_s) per slot
    for vertex, s in slots:
        h = RationalFunction.var(cartan_h(vertex, cartan_copy))
        x = RationalFunction.var(slot_symbol(vertex, s))
        value = value * (RF_ONE + (h - x).inverse())
    if slot_order is None:
        # descending slot index within each vertex, vertices in order
        slot_order = sorted(slots, key=lambda t: (t[0], -t[1]))
    for vertex, s in slot_order:
        value = residue_at_infinity(value, slot_symbol(vertex, s))
    nfact = 1
    for vertex in quiver.vertices:
        nfact *= math.factorial(v[vertex])
    return value * Fraction(1, nfact)
