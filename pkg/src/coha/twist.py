"""Comparison of star products across formal group laws.

The coordinate change to the additive law sends a function f to
f(exp_F(x)) per slot; kernels transform the same way, so each kernel
factor of the original law becomes exp_F(additive linear form) and the
ratio against the additive kernel is a unit power series: the kernel
twist.  For the standard bipartition at (v1, v2):

    twist = prod over kernel factors of exp_F(form) / form

and the additive product of the transported functions times the twist
reproduces the transported product.  All of this is checked to a fixed
truncation order in the coordinates.
"""

from __future__ import annotations

from fractions import Fraction

from .config import DEFAULT_ORDER
from .fgl import FormalGroupLaw, LinearForm, additive, fgl_exp
from .poly import ONE, ZERO, Polynomial, exact_div
from .quiver import DimVector, Quiver, enumerate_bipartitions, euler_sign
from .ratfun import RationalFunction
from .shuffle import ShuffleElement, slot_symbol, t_substitution
from .symbols import T1, T2, Symbol
from .truncpoly import TruncatedPoly


def _exp_series_poly(law: FormalGroupLaw, order: int):
    """exp_F as {n: Polynomial coefficient} with the beta-scalars inline."""
    out = {}
    for n, c in fgl_exp(law, order).items():
        if not c.is_polynomial():
            raise ValueError("exponential coefficients must be polynomial scalars")
        out[n] = c.as_polynomial()
    return out


def exp_of_poly(law: FormalGroupLaw, base: Polynomial, order: int) -> TruncatedPoly:
    """exp_F evaluated at a polynomial argument, truncated."""
    coeffs = _exp_series_poly(law, order)
    arg = TruncatedPoly(base, order)
    out = TruncatedPoly(ZERO, order)
    power = TruncatedPoly(ONE, order)
    for n in range(1, order + 1):
        power = power * arg
        c = coeffs.get(n)
        if c is not None:
            out = out + power * c
    return out


def exp_of_form(law: FormalGroupLaw, form: LinearForm, order: int,
                tsubs=None) -> TruncatedPoly:
    """exp_F evaluated at an additive linear form, truncated."""
    base = form.as_polynomial()
    if tsubs:
        base = base.subs_poly(tsubs)
    return exp_of_poly(law, base, order)


def transport(f: RationalFunction, law: FormalGroupLaw, v: DimVector,
              order: int, varmap=None) -> TruncatedPoly:
    """f with every slot coordinate replaced by its exponential series."""
    if varmap is None:
        varmap = slot_symbol
    quiver = v.quiver
    table = {}
    for vertex in quiver.vertices:
        for s in range(1, v[vertex] + 1):
            x = varmap(vertex, s)
            table[x] = exp_of_form(law, LinearForm.make([(x, 1)]), order)
    # t1, t2 are group coordinates too and transport alongside the slots;
    # under the symmetric-hbar specialization hbar = 2t transports through
    # the exponential of hbar/2
    for t in (T1, T2):
        table[t] = exp_of_form(law, LinearForm.make([(t, 1)]), order)
    from .symbols import HBAR
    if HBAR in f.num.symbols() | f.den.symbols():
        half = Polynomial.var(HBAR).scale(Fraction(1, 2))
        table[HBAR] = exp_of_poly(law, half, order) * Polynomial.const(2)
    num = TruncatedPoly(f.num, order).subs(table)
    den = TruncatedPoly(f.den, order).subs(table)
    return num * den.inverse() if not den.constant_term().is_zero() \
        else num.divide_exact(den)


def _kernel_forms(a_sides, b_sides, quiver: Quiver):
    """The additive linear forms of fac(x_A|x_B), split num/den."""
    num, den = [], []
    A = {v: [slot_symbol(v, s) for s in a_sides[quiver.index[v]]]
         for v in quiver.vertices}
    B = {v: [slot_symbol(v, s) for s in b_sides[quiver.index[v]]]
         for v in quiver.vertices}
    for vertex in quiver.vertices:
        for xs in A[vertex]:
            for xt in B[vertex]:
                num.append(LinearForm.make([(xs, 1), (xt, -1), (T1, 1), (T2, 1)]))
                den.append(LinearForm.make([(xt, 1), (xs, -1)]))
    for arrow in quiver.arrows:
        for xs in A[arrow.out]:
            for xt in B[arrow.inc]:
                num.append(LinearForm.make([(xt, 1), (xs, -1), (T1, arrow.m_out)]))
        for xs in A[arrow.inc]:
            for xt in B[arrow.out]:
                num.append(LinearForm.make([(xt, 1), (xs, -1), (T2, arrow.m_inc)]))
    return num, den


def todd_twist(v1: DimVector, v2: DimVector, law: FormalGroupLaw,
               order: int = DEFAULT_ORDER) -> TruncatedPoly:
    """The kernel ratio (law over additive) at the standard bipartition.

    Each factor contributes exp_F(form)/form; the result is a unit series
    to the requested order (constant term 1).
    """
    quiver = v1.quiver
    tsubs = t_substitution(quiver)
    a_sides = tuple(tuple(range(1, v1.vec[i] + 1)) for i in range(len(quiver.vertices)))
    b_sides = tuple(tuple(range(v1.vec[i] + 1, v1.vec[i] + v2.vec[i] + 1))
                    for i in range(len(quiver.vertices)))
    num_forms, den_forms = _kernel_forms(a_sides, b_sides, quiver)
    out = TruncatedPoly(ONE, order)
    for form in num_forms:
        base = form.as_polynomial()
        if tsubs:
            base = base.subs_poly(tsubs)
        out = out * exp_of_form(law, form, order, tsubs).divide_exact(
            TruncatedPoly(base, order + base.total_degree()))
    for form in den_forms:
        base = form.as_polynomial()
        if tsubs:
            base = base.subs_poly(tsubs)
        out = out * TruncatedPoly(base, order + base.total_degree()).divide_exact(
            exp_of_form(law, form, order, tsubs))
    return out


def check_twist_identity(f: ShuffleElement, g: ShuffleElement,
                         order: int = DEFAULT_ORDER) -> dict:
    """Additive product of transported factors times the twist equals the
    transported product of the original law, to the truncation order."""
    law = f.law
    quiver = f.quiver
    add = additive()
    prod = f.star(g)
    from .shuffle import fac_factored
    for v1, fv in f.comps.items():
        for v2, gv in g.comps.items():
            v = v1 + v2
            sign = euler_sign(v1, v2, quiver)
            # the single poles only cancel in the bipartition sum: put all
            # terms over the union denominator, divide once at the end;
            # everything is computed at the padded order from the start
            kernels = []
            union: dict = {}
            for bp in enumerate_bipartitions(v1, v2):
                kern = fac_factored(bp.a_sides, bp.b_sides, quiver, add)
                kernels.append((bp, kern))
                for q, m in kern.den.items():
                    if union.get(q, 0) < m:
                        union[q] = m
            deg_all = sum(q.total_degree() * m for q, m in union.items())
            padded = order + deg_all
            tf = transport(fv, law, v1, padded)
            tg = transport(gv, law, v2, padded)
            tw = todd_twist(v1, v2, law, padded)
            denom = ONE
            for q, m in union.items():
                denom = denom * q ** m
            total = TruncatedPoly(ZERO, padded)
            for bp, kern in kernels:
                ren_f, ren_g, ren_tw = {}, {}, {}
                for i, vertex in enumerate(quiver.vertices):
                    for s, slot in enumerate(bp.a_sides[i], start=1):
                        ren_f[slot_symbol(vertex, s)] = slot_symbol(vertex, slot)
                        ren_tw[slot_symbol(vertex, s)] = slot_symbol(vertex, slot)
                    for s, slot in enumerate(bp.b_sides[i], start=1):
                        ren_g[slot_symbol(vertex, s)] = slot_symbol(vertex, slot)
                        # the twist's leg-2 block is labeled v1+1 .. v1+v2
                        ren_tw[slot_symbol(vertex, v1.vec[i] + s)] = \
                            slot_symbol(vertex, slot)
                num = TruncatedPoly(tf.poly.rename(ren_f), padded) \
                    * TruncatedPoly(tg.poly.rename(ren_g), padded) \
                    * TruncatedPoly(tw.poly.rename(ren_tw), padded)
                num = num * kern.numerator_poly()  # scalar sign included
                comp = ONE
                for q, m in union.items():
                    extra = m - kern.den.get(q, 0)
                    if extra:
                        comp = comp * q ** extra
                total = total + num * comp
            lhs = total.divide_exact(TruncatedPoly(denom, padded))
            if sign < 0:
                lhs = TruncatedPoly(-lhs.poly, lhs.order)
            rhs = transport(prod.component(v), law, v, order)
            lo = min(lhs.order, rhs.order)
            if TruncatedPoly(lhs.poly, lo) != TruncatedPoly(rhs.poly, lo):
                return {"relation": "fgl-twist", "status": "fail", "order": order,
                        "witness": {"grades": [list(v1.vec), list(v2.vec)]}}
    return {"relation": "fgl-twist", "status": "pass", "order": order,
            "witness": None}


