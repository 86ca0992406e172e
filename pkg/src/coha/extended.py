"""The extended algebra: Cartan words acting on shuffle elements.

A Cartan word is a product of generating-series factors H_k(arg)^(+-1),
with arguments that are symbols (series variables or slot coordinates).
In the collapsed model H_k(a) is the exact rational function
1 + 1/(h(k) - a); the symbolic model expands it as the descending series
1 - sum_r g(k,r) a^(-r-1).

Conjugation: H_k(w) g H_k(w)^{-1} = g * phi_k(w, deg g), where phi is the
kernel ratio fac(z_B|z_A)/fac(z_A|z_B).  Reordering g to the left of a
word therefore divides by the word's phi factor:

    g * H = H * (g * phi_H(deg g)^{-1})

which is the rule ext_star uses for its normal form (Cartan on the left).
"""

from __future__ import annotations

from fractions import Fraction

from .factored import Factored
from .fgl import FormalGroupLaw
from .poly import Polynomial
from .quiver import DimVector, Quiver
from .ratfun import RF_ONE, RF_ZERO, RationalFunction
from .shuffle import ShuffleElement, fac_factored, slot_symbol
from .symbols import PLAIN, Symbol, cartan_g, cartan_h


# -- kernel ratios ----------------------------------------------------------

def phi_hat(a_sides, b_sides, quiver: Quiver, law: FormalGroupLaw,
            varmap_a=None, varmap_b=None) -> RationalFunction:
    """phi(z_B | z_A) = fac(z_B|z_A) / fac(z_A|z_B).

    a_sides/b_sides are per-vertex slot tuples; separate varmaps allow the
    two sides to live in different alphabets (e.g. a fresh series symbol
    on the B side).
    """
    if varmap_a is None:
        varmap_a = slot_symbol
    if varmap_b is None:
        varmap_b = slot_symbol
    num = _fac_mixed(b_sides, a_sides, quiver, law, varmap_b, varmap_a)
    den = _fac_mixed(a_sides, b_sides, quiver, law, varmap_a, varmap_b)
    num.mul(den.inverse())
    return num.to_rational()


def _fac_mixed(first_sides, second_sides, quiver, law, varmap_first, varmap_second):
    """fac(first | second) where each side carries its own alphabet."""
    from .fgl import LinearForm
    from .shuffle import ell_factored, t_substitution
    from .symbols import T1, T2

    tsubs = t_substitution(quiver)
    A = {v: [varmap_first(v, s) for s in first_sides[quiver.index[v]]]
         for v in quiver.vertices}
    B = {v: [varmap_second(v, s) for s in second_sides[quiver.index[v]]]
         for v in quiver.vertices}
    out = Factored.one()
    for vertex in quiver.vertices:
        for xs in A[vertex]:
            for xt in B[vertex]:
                out.mul(ell_factored(
                    law, LinearForm.make([(xs, 1), (xt, -1), (T1, 1), (T2, 1)]), tsubs))
                out.mul(ell_factored(
                    law, LinearForm.make([(xt, 1), (xs, -1)]), tsubs).inverse())
    for arrow in quiver.arrows:
        for xs in A[arrow.out]:
            for xt in B[arrow.inc]:
                out.mul(ell_factored(
                    law, LinearForm.make([(xt, 1), (xs, -1), (T1, arrow.m_out)]), tsubs))
        for xs in A[arrow.inc]:
            for xt in B[arrow.out]:
                out.mul(ell_factored(
                    law, LinearForm.make([(xt, 1), (xs, -1), (T2, arrow.m_inc)]), tsubs))
    return out


def phi_k(quiver: Quiver, law: FormalGroupLaw, vertex: str, v: DimVector,
          z: Symbol, varmap=None) -> RationalFunction:
    """phi_k(z, v): the ratio for one extra degree-e_k slot named z."""
    vertex = str(vertex)
    if varmap is None:
        varmap = slot_symbol
    b_sides = tuple((1,) if q == vertex else () for q in quiver.vertices)
    a_sides = tuple(tuple(range(1, v[q] + 1)) for q in quiver.vertices)

    def vm_b(vq, slot):
        return z

    return phi_hat(a_sides, b_sides, quiver, law, varmap_a=varmap, varmap_b=vm_b)


def phi_k_closed_form(quiver: Quiver, law: FormalGroupLaw, vertex: str,
                      v: DimVector, z: Symbol, branch: str,
                      corrected: bool = True, varmap=None) -> RationalFunction:
    """Case formulas for phi_k under the two weight conventions.

    branch "generic" (m_h = m_h* = 1) or "symmetric-hbar" (t1 = t2 =
    hbar/2, bundle weights).  These use oddness of the coordinate, so they
    are closed forms for the additive law.

    corrected=True follows the ratio definition exactly: the arrow factors
    keep their orientation signs, and under symmetric-hbar each arrow
    bundle contributes its full arithmetic progression of shifts.
    corrected=False reproduces the single-shift display without the
    orientation signs; the two agree only when at most one arrow joins
    any two distinct vertices.
    """
    from .fgl import LinearForm
    from .shuffle import ell_factored, t_substitution
    from .symbols import T1, T2

    k = str(vertex)
    if varmap is None:
        varmap = slot_symbol
    tsubs = t_substitution(quiver)
    abar = quiver.abar()
    idx = quiver.index
    out = Factored.one()

    def ell(entries):
        return ell_factored(law, LinearForm.make(entries), tsubs)

    def same_vertex_factor(xj):
        out.mul(ell([(z, 1), (xj, -1), (T1, 1), (T2, 1)]))
        out.mul(ell([(z, 1), (xj, -1), (T1, -1), (T2, -1)]).inverse())

    if branch == "generic":
        for i in quiver.vertices:
            a_ik = abar[idx[i]][idx[k]]
            a_ki = abar[idx[k]][idx[i]]
            for j in range(1, v[i] + 1):
                xj = varmap(i, j)
                if i == k:
                    same_vertex_factor(xj)
                    continue
                if corrected:
                    # numerator ell(z-x-t1)^a_ki ell(z-x-t2)^a_ik over
                    # denominator ell(z-x+t1)^a_ik ell(z-x+t2)^a_ki
                    out.mul_scalar((-1) ** (a_ik + a_ki))
                    for _ in range(a_ki):
                        out.mul(ell([(z, 1), (xj, -1), (T1, -1)]))
                        out.mul(ell([(z, 1), (xj, -1), (T2, 1)]).inverse())
                    for _ in range(a_ik):
                        out.mul(ell([(z, 1), (xj, -1), (T2, -1)]))
                        out.mul(ell([(z, 1), (xj, -1), (T1, 1)]).inverse())
                else:
                    for _ in range(a_ik):
                        out.mul(ell([(z, 1), (xj, -1), (T1, -1)]))
                        out.mul(ell([(z, 1), (xj, -1), (T2, 1)]).inverse())
                    for _ in range(a_ki):
                        out.mul(ell([(z, 1), (xj, -1), (T2, -1)]))
                        out.mul(ell([(z, 1), (xj, -1), (T1, 1)]).inverse())
        return out.to_rational()

    if branch != "symmetric-hbar":
        raise ValueError(f"unknown branch {branch!r}")

    if corrected:
        for i in quiver.vertices:
            a = abar[idx[k]][idx[i]]
            b = abar[idx[i]][idx[k]]
            for j in range(1, v[i] + 1):
                xj = varmap(i, j)
                if i == k:
                    same_vertex_factor(xj)
                    continue
                out.mul_scalar((-1) ** (a + b))
                shifts = [a + 2 - 2 * p for p in range(1, a + 1)] + \
                         [-b + 2 * q for q in range(1, b + 1)]
                for s in shifts:
                    # t1 = t2 = hbar/2, so a shift of s*hbar/2 is s*t1
                    out.mul(ell([(z, 1), (xj, -1), (T1, -s)]))
                    out.mul(ell([(z, 1), (xj, -1), (T1, s)]).inverse())
        return out.to_rational()

    cartan = quiver.cartan()
    out.mul_scalar((-1) ** v[k])
    for i in quiver.vertices:
        c_ki = cartan[idx[k]][idx[i]]
        for j in range(1, v[i] + 1):
            xj = varmap(i, j)
            out.mul(ell([(xj, 1), (z, -1), (T1, -c_ki)]))
            out.mul(ell([(z, 1), (xj, -1), (T1, -c_ki)]).inverse())
    return out.to_rational()


def h_conjugate(g: ShuffleElement, vertex: str, w: Symbol) -> "dict":
    """g |-> g * phi_k(w, deg g) per homogeneous component."""
    out = {}
    for v, f in g.comps.items():
        out[v] = f * phi_k(g.quiver, g.law, vertex, v, w)
    return out


# -- Cartan words -----------------------------------------------------------

class HWord:
    """Product of H_k(arg)^(+-1) factors in canonical multiset form."""

    __slots__ = ("factors",)

    def __init__(self, factors=()):
        table: dict = {}
        for vertex, arg, power in factors:
            key = (str(vertex), arg)
            table[key] = table.get(key, 0) + power
        self.factors = tuple(sorted(
            ((k[0], k[1], p) for k, p in table.items() if p),
            key=lambda t: (t[0], t[1].key if isinstance(t[1], Symbol) else str(t[1]), t[2])))

    @staticmethod
    def single(vertex, arg, power: int = 1) -> "HWord":
        return HWord(((str(vertex), arg, power),))

    def __mul__(self, other: "HWord") -> "HWord":
        return HWord(self.factors + other.factors)

    def inverse(self) -> "HWord":
        return HWord(tuple((k, a, -p) for k, a, p in self.factors))

    def is_trivial(self) -> bool:
        return not self.factors

    def __eq__(self, other):
        return isinstance(other, HWord) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def collapsed(self, copy: int = PLAIN) -> RationalFunction:
        """prod (1 + 1/(h(k) - arg))^power, exact rational."""
        out = RF_ONE
        for vertex, arg, power in self.factors:
            h = RationalFunction.var(cartan_h(vertex, copy))
            a = RationalFunction.var(arg) if isinstance(arg, Symbol) else arg
            out = out * (RF_ONE + (h - a).inverse()) ** power
        return out

    def phi_factor(self, v: DimVector, law: FormalGroupLaw, varmap=None) -> RationalFunction:
        """prod phi_k(arg, v)^power: the conjugation factor of this word."""
        out = RF_ONE
        for vertex, arg, power in self.factors:
            if isinstance(arg, Symbol):
                p = phi_k(v.quiver, law, vertex, v, arg, varmap=varmap)
            else:
                # rational argument: evaluate at a fresh symbol, substitute
                from .symbols import series_var
                fresh = series_var("z")
                p = phi_k(v.quiver, law, vertex, v, fresh, varmap=varmap).subs({fresh: arg})
            out = out * p ** power
        return out

    def rename_args(self, table: dict) -> "HWord":
        out = []
        for vertex, arg, power in self.factors:
            out.append((vertex, table.get(arg, arg) if isinstance(arg, Symbol) else arg,
                        power))
        return HWord(tuple(out))

    def __repr__(self):
        if not self.factors:
            return "HWord(1)"
        body = "*".join(
            f"H_{k}({a.name if isinstance(a, Symbol) else a.render()})^{p}"
            for k, a, p in self.factors)
        return f"HWord({body})"


class ModelMixError(Exception):
    """Collapsed and symbolic Cartan data combined in one operation."""


class ExtendedElement:
    """Finite sum of (Cartan word, shuffle element) pairs, word-collected."""

    def __init__(self, quiver: Quiver, law: FormalGroupLaw, pairs=None,
                 model: str = "collapsed"):
        self.quiver = quiver
        self.law = law
        self.model = model
        self.pairs: dict[HWord, ShuffleElement] = {}
        for word, elem in (pairs or {}).items():
            if elem.is_zero():
                continue
            if word in self.pairs:
                self.pairs[word] = self.pairs[word] + elem
            else:
                self.pairs[word] = elem
        self.pairs = {w: e for w, e in self.pairs.items() if not e.is_zero()}

    @staticmethod
    def from_shuffle(elem: ShuffleElement) -> "ExtendedElement":
        return ExtendedElement(elem.quiver, elem.law, {HWord(): elem})

    @staticmethod
    def from_word(quiver, law, word: HWord) -> "ExtendedElement":
        return ExtendedElement(quiver, law, {word: ShuffleElement.unit(quiver, law)})

    def __add__(self, other: "ExtendedElement") -> "ExtendedElement":
        out = dict(self.pairs)
        for w, e in other.pairs.items():
            out[w] = out[w] + e if w in out else e
        return ExtendedElement(self.quiver, self.law, out, self.model)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "ExtendedElement":
        return ExtendedElement(self.quiver, self.law,
                               {w: e.scale(c) for w, e in self.pairs.items()}, self.model)

    def star(self, other: "ExtendedElement") -> "ExtendedElement":
        if self.model != other.model:
            raise ModelMixError(
                f"cannot multiply {self.model} and {other.model} Cartan models")
        out: dict[HWord, ShuffleElement] = {}
        for w1, g1 in self.pairs.items():
            for w2, g2 in other.pairs.items():
                word = w1 * w2
                if w2.is_trivial():
                    moved = g1
                else:
                    comps = {}
                    for v, f in g1.comps.items():
                        comps[v] = f * w2.phi_factor(v, self.law).inverse()
                    moved = ShuffleElement(self.quiver, self.law, comps, validate=False)
                prod = moved.star(g2)
                if word in out:
                    out[word] = out[word] + prod
                else:
                    out[word] = prod
        return ExtendedElement(self.quiver, self.law, out, self.model)

    def counit(self) -> RationalFunction:
        """Augmentation: words |-> 1, positive grades |-> 0."""
        total = RF_ZERO
        for _, elem in self.pairs.items():
            total = total + elem.component(self.quiver.zero())
        return total

    def collapsed_value(self) -> dict:
        """Grade -> rational function with words materialized at h(k)."""
        out: dict[DimVector, RationalFunction] = {}
        for word, elem in self.pairs.items():
            factor = word.collapsed()
            for v, f in elem.comps.items():
                out[v] = out.get(v, RF_ZERO) + factor * f
        return {v: f for v, f in out.items() if not f.is_zero()}

    def __eq__(self, other):
        if not isinstance(other, ExtendedElement):
            return NotImplemented
        return self.collapsed_value() == other.collapsed_value()

    def __repr__(self):
        body = "; ".join(f"{w!r} x {e!r}" for w, e in self.pairs.items())
        return f"ExtendedElement({body or '0'})"
