"""Drinfeld-double words, the cross relation and the E/F commutator.

The double is handled as a rewriting engine on formal words, never as a
normal-form algebra with a basis.  Letters are single-vertex series
elements of the plus copy (E-type), the minus copy (F-type), or Cartan
words of either copy; coefficients live in the collapsed Cartan rings.

Plus-copy Cartan collapses at h(k); minus-copy Cartan at hr(k).  The
reduced double imposes H+_k(u) = H-_k(-u), i.e. the minus modes satisfy
g-(k,i) = (-1)^(i+1) g+(k,i); on collapsed mode parts this is F -> -F(-h).

Exchange rules (derived from the cross relation with the residue pairing):

  * E and F letters at different vertices commute;
  * F_l(g) E_k(f) = E_k(f) F_l(g) + delta_kl [ Tw+(f,g) - Tw-(g,f) ]
    where Tw± are the twisted pairings valued in the ± Cartan;
  * a Cartan word of either copy moves right past a shuffle letter at the
    price of phi^(-1) on the letter's variable (and phi when moving left).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .config import DEFAULT_ORDER
from .extended import HWord, phi_k
from .fgl import FormalGroupLaw, additive
from .pairing import TwistedValue, twisted_pair_collapsed
from .quiver import Quiver
from .ratfun import RF_ONE, RF_ZERO, RationalFunction
from .series import AT_INFINITY, TruncatedSeries, expand_at
from .shuffle import ShuffleElement, slot_symbol, star_component
from .symbols import HBAR, PLAIN, RIGHT, Symbol, cartan_h, series_var

MINUS_COPY = RIGHT  # collapsed Cartan copy used for the coop leg


def hbar_rf() -> RationalFunction:
    return RationalFunction.var(HBAR)


def e_series_func(quiver: Quiver, vertex: str, u) -> RationalFunction:
    """E_k(u) as the rational function hbar/(u - x(k,1))."""
    x = RationalFunction.var(slot_symbol(str(vertex), 1))
    uu = RationalFunction.var(u) if isinstance(u, Symbol) else u
    return hbar_rf() * (uu - x).inverse()


def f_series_func(quiver: Quiver, vertex: str, u) -> RationalFunction:
    """F_k(u) = -E_k(-u) on the coop leg: hbar/(u + x(k,1))."""
    x = RationalFunction.var(slot_symbol(str(vertex), 1))
    uu = RationalFunction.var(u) if isinstance(u, Symbol) else u
    return hbar_rf() * (uu + x).inverse()


def h_plus_collapsed(vertex: str, u) -> RationalFunction:
    h = RationalFunction.var(cartan_h(str(vertex), PLAIN))
    uu = RationalFunction.var(u) if isinstance(u, Symbol) else u
    return RF_ONE + (h - uu).inverse()


def h_minus_collapsed(vertex: str, u) -> RationalFunction:
    h = RationalFunction.var(cartan_h(str(vertex), MINUS_COPY))
    uu = RationalFunction.var(u) if isinstance(u, Symbol) else u
    return RF_ONE + (h - uu).inverse()


def h_reduced_collapsed(vertex: str, u) -> RationalFunction:
    """H_k(u) = -hbar H+_k(u) - hbar H-_k(-u) after the reduction.

    With the reduction imposed both summands collapse to the plus copy,
    so this equals -2 hbar H+_k(u).
    """
    return h_plus_collapsed(vertex, u) * hbar_rf() * (-2)


@dataclass(frozen=True)
class Letter:
    side: str      # "+" (E-type), "-" (F-type)
    vertex: str
    func: RationalFunction  # single-variable function of x(vertex, 1)


class UnsupportedWord(Exception):
    """The rewriting engine has no rule for this combination."""


class Combination:
    """Linear combination of words with RationalFunction coefficients."""

    def __init__(self, terms=None):
        # terms: list of (coeff: RationalFunction, word: tuple[Letter, ...])
        self.terms = [(c, w) for c, w in (terms or []) if not c.is_zero()]

    @staticmethod
    def word(letters, coeff=RF_ONE) -> "Combination":
        return Combination([(coeff, tuple(letters))])

    def __add__(self, other):
        return Combination(self.terms + other.terms)

    def scale(self, c) -> "Combination":
        return Combination([(coeff * c, w) for coeff, w in self.terms])

    def collect(self) -> "Combination":
        table: dict = {}
        for c, w in self.terms:
            key = tuple((l.side, l.vertex, l.func) for l in w)
            if key in table:
                table[key] = (table[key][0] + c, w)
            else:
                table[key] = (c, w)
        return Combination([(c, w) for c, w in table.values() if not c.is_zero()])


def cross_commute(quiver: Quiver, law: FormalGroupLaw,
                  combo: Combination) -> Combination:
    """Normal-order a combination: all + letters left of all - letters.

    Implements the cross relation for single-vertex series letters; the
    corrections are Cartan-valued twisted pairings, entering as collapsed
    coefficients of the shortened words.
    """
    out = []
    work = list(combo.terms)
    while work:
        coeff, word = work.pop()
        idx = None
        for i in range(len(word) - 1):
            if word[i].side == "-" and word[i + 1].side == "+":
                idx = i
                break
        if idx is None:
            out.append((coeff, word))
            continue
        fminus, eplus = word[idx], word[idx + 1]
        swapped = word[:idx] + (eplus, fminus) + word[idx + 2:]
        work.append((coeff, swapped))
        if fminus.vertex == eplus.vertex:
            k = fminus.vertex
            tw_plus = twisted_pair_collapsed(eplus.func, fminus.func, k, PLAIN)
            tw_minus = twisted_pair_collapsed(fminus.func, eplus.func, k, MINUS_COPY)
            corr = tw_plus.total() - tw_minus.total()
            shorter = word[:idx] + word[idx + 2:]
            work.append((coeff * corr, shorter))
    return Combination(out).collect()


def reduce_modes(value: TwistedValue, quiver: Quiver) -> RationalFunction:
    """Impose H+(u) = H-(-u) on a minus-Cartan twisted value."""
    return value.reduce_minus(quiver, MINUS_COPY).total()


@dataclass
class SeriesIdentity:
    """An identity of Cartan-valued series in two spectral variables."""

    label: str
    lhs: RationalFunction
    rhs: RationalFunction
    order: int

    def exact_equal(self) -> bool:
        return self.lhs == self.rhs

    def series_equal(self) -> bool:
        u, v = series_var("u"), series_var("v")
        su_l = expand_at(self.lhs, u, AT_INFINITY, self.order)
        su_r = expand_at(self.rhs, u, AT_INFINITY, self.order)
        for e in range(-self.order, 1):
            cl = su_l.coefficient(e)
            cr = su_r.coefficient(e)
            sl = expand_at(cl, v, AT_INFINITY, self.order)
            sr = expand_at(cr, v, AT_INFINITY, self.order)
            for e2 in range(-self.order, 1):
                if sl.coefficient(e2) != sr.coefficient(e2):
                    return False
        return True

    def report(self) -> dict:
        ok = self.exact_equal() and self.series_equal()
        return {"relation": self.label, "status": "pass" if ok else "fail",
                "order": self.order,
                "witness": None if ok else {"difference": (self.lhs - self.rhs).render()}}


def commutator_EF(quiver: Quiver, k: str, l: str,
                  order: int = DEFAULT_ORDER) -> SeriesIdentity:
    """[E_k(u), F_l(v)] in the reduced double versus its closed form.

    For k != l both sides are zero.  For k = l the commutator is computed
    through the cross relation (twisted pairings against both Cartan
    copies, then the reduction), and compared with

        -hbar (H_k(u) - H_k(v)) / (u - v).
    """
    k, l = str(k), str(l)
    u, v = series_var("u"), series_var("v")
    if k != l:
        e = Letter("+", k, e_series_func(quiver, k, u))
        f = Letter("-", l, f_series_func(quiver, l, v))
        combo = Combination.word((e, f)) + Combination.word((f, e), RF_ONE * -1)
        normal = cross_commute(quiver, additive(), combo)
        # after normal ordering EF - FE must cancel identically
        lhs = RF_ZERO
        for c, w in normal.terms:
            if w:
                raise UnsupportedWord("unexpected residual word in k != l commutator")
            lhs = lhs + c
        return SeriesIdentity(f"commutator-E{k}-F{l}", lhs, RF_ZERO, order)
    ef = e_series_func(quiver, k, u)
    ff = f_series_func(quiver, k, v)
    tw_plus = twisted_pair_collapsed(ef, ff, k, PLAIN)
    tw_minus = twisted_pair_collapsed(ff, ef, k, MINUS_COPY)
    # [E(u), F(v)] = -( Tw+ - Tw- ) after swapping F E -> E F
    lhs = -(tw_plus.total() - reduce_modes(tw_minus, quiver))
    hk_u = h_reduced_collapsed(k, u)
    hk_v = h_reduced_collapsed(k, v)
    uu, vv = RationalFunction.var(u), RationalFunction.var(v)
    rhs = -(hk_u - hk_v) * (uu - vv).inverse() * hbar_rf()
    return SeriesIdentity(f"commutator-E{k}-F{k}", lhs, rhs, order)
