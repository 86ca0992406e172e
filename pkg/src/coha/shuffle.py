"""The graded shuffle algebra: kernels, star product, symmetrization.

Elements carry one symmetric rational function per dimension vector, in
the slot coordinates x(i,s).  The product of homogeneous pieces sums the
kernel-weighted slot relabelings over all bipartitions, with the Euler
sign in front:

    (f * g)_v = sign(v1,v2) * sum_{(A,B)} f(x_A) g(x_B) fac(x_A|x_B)

Kernels are assembled factor by factor (see factored.py), so the simple
poles of fac cancel by one exact division at the end; a residual
non-unit denominator raises "product not regular".
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .factored import Factored, factored_sum
from .fgl import ADDITIVE, CONNECTIVE_K, FormalGroupLaw, LinearForm
from .poly import ONE, Polynomial, exact_div, divides
from .quiver import Bipartition, DimVector, Quiver, enumerate_bipartitions, euler_sign
from .ratfun import RF_ONE, RF_ZERO, RationalFunction
from .symbols import BETA, PLAIN, Symbol, T1, T2, alphabet


def slot_symbol(vertex: str, slot: int, copy: int = PLAIN) -> Symbol:
    return alphabet(vertex, slot, copy)


def t_substitution(quiver: Quiver) -> dict:
    """Specialization applied to every kernel factor (t1=t2=hbar/2 or none)."""
    from .symbols import HBAR
    if quiver.weights == "symmetric-hbar":
        half = Polynomial.var(HBAR).scale(Fraction(1, 2))
        return {T1: half, T2: half}
    return {}


def ell_factored(law: FormalGroupLaw, form: LinearForm, tsubs: dict) -> Factored:
    """The coordinate of a linear form, as numerator/denominator factors."""
    out = Factored.one()
    if law.kind == ADDITIVE:
        p = form.as_polynomial()
        if tsubs:
            p = p.subs_poly(tsubs)
        return out.mul_poly(p)
    if law.kind == CONNECTIVE_K:
        beta = Polynomial.var(BETA)
        pos, neg = ONE, ONE
        for s, c in form.coeffs:
            u = ONE - beta * Polynomial.var(s)
            if c > 0:
                pos = pos * u ** c
            else:
                neg = neg * u ** (-c)
        num = exact_div(neg - pos, beta)
        if tsubs:
            num = num.subs_poly(tsubs)
        out.mul_poly(num)
        for s, c in form.coeffs:
            if c < 0:
                u = ONE - beta * Polynomial.var(s)
                if tsubs:
                    u = u.subs_poly(tsubs)
                out.div_poly(u, -c)
        return out
    raise ValueError("factored kernels require a law with rational closed form")


def _side_slots(quiver: Quiver, side, varmap):
    """side: per-vertex slot tuples; yields (vertex, symbol) pairs."""
    out = {}
    for i, vertex in enumerate(quiver.vertices):
        out[vertex] = [varmap(vertex, s) for s in side[i]]
    return out


def fac_factored(a_sides, b_sides, quiver: Quiver, law: FormalGroupLaw,
                 varmap=None) -> Factored:
    """fac(x_A | x_B) = fac1 * fac2 with explicit factors.

    a_sides/b_sides are per-vertex slot tuples (Bipartition sides); varmap
    maps (vertex, slot) to the symbol standing in that slot.
    """
    if varmap is None:
        varmap = slot_symbol
    tsubs = t_substitution(quiver)
    A = _side_slots(quiver, a_sides, varmap)
    B = _side_slots(quiver, b_sides, varmap)
    out = Factored.one()
    # fac1: same-vertex pairs
    for vertex in quiver.vertices:
        for xs in A[vertex]:
            for xt in B[vertex]:
                num = LinearForm.make([(xs, 1), (xt, -1), (T1, 1), (T2, 1)])
                den = LinearForm.make([(xt, 1), (xs, -1)])
                out.mul(ell_factored(law, num, tsubs))
                out.mul(ell_factored(law, den, tsubs).inverse())
    # fac2: arrow factors
    for arrow in quiver.arrows:
        for xs in A[arrow.out]:
            for xt in B[arrow.inc]:
                form = LinearForm.make([(xt, 1), (xs, -1), (T1, arrow.m_out)])
                out.mul(ell_factored(law, form, tsubs))
        for xs in A[arrow.inc]:
            for xt in B[arrow.out]:
                form = LinearForm.make([(xt, 1), (xs, -1), (T2, arrow.m_inc)])
                out.mul(ell_factored(law, form, tsubs))
    return out


def fac_pair(a_sides, b_sides, quiver: Quiver, law: FormalGroupLaw,
             varmap=None) -> RationalFunction:
    """Public kernel value fac(x_A|x_B) as a canonical rational function."""
    return fac_factored(a_sides, b_sides, quiver, law, varmap).to_rational()


def fac_diagonal(slot_counts: DimVector, quiver: Quiver, law: FormalGroupLaw,
                 varmap=None) -> Factored:
    """fac(x_A): the kernel over all ordered pairs inside one slot set."""
    if varmap is None:
        varmap = slot_symbol
    tsubs = t_substitution(quiver)
    slots = {v: [varmap(v, s) for s in range(1, slot_counts[v] + 1)]
             for v in quiver.vertices}
    out = Factored.one()
    for vertex in quiver.vertices:
        for xs in slots[vertex]:
            for xt in slots[vertex]:
                if xs is xt:
                    continue
                out.mul(ell_factored(
                    law, LinearForm.make([(xs, 1), (xt, -1), (T1, 1), (T2, 1)]), tsubs))
                out.mul(ell_factored(
                    law, LinearForm.make([(xt, 1), (xs, -1)]), tsubs).inverse())
    for arrow in quiver.arrows:
        for xs in slots[arrow.out]:
            for xt in slots[arrow.inc]:
                out.mul(ell_factored(
                    law, LinearForm.make([(xt, 1), (xs, -1), (T1, arrow.m_out)]), tsubs))
        for xs in slots[arrow.inc]:
            for xt in slots[arrow.out]:
                out.mul(ell_factored(
                    law, LinearForm.make([(xt, 1), (xs, -1), (T2, arrow.m_inc)]), tsubs))
    return out


class ProductNotRegular(Exception):
    """A star product left a pole that should have cancelled."""


def is_unit_denominator(den: Polynomial, law: FormalGroupLaw) -> bool:
    """True when the denominator is invertible on the group.

    Additive law: constants only.  Connective-k: factors specializing to a
    nonzero constant at beta = 0 (products of 1 - beta*(...) unit factors).
    """
    if den.is_const():
        return True
    if law.kind == CONNECTIVE_K:
        at0 = den.subs_poly({BETA: Polynomial()})
        return at0.is_const() and not at0.is_zero()
    return False


class ShuffleElement:
    """An N^I-graded family of per-vertex-symmetric rational functions."""

    def __init__(self, quiver: Quiver, law: FormalGroupLaw, comps: dict,
                 validate: bool = True, word=None):
        self.quiver = quiver
        self.law = law
        self.comps: dict[DimVector, RationalFunction] = {}
        for v, f in comps.items():
            if not isinstance(f, RationalFunction):
                f = RationalFunction(f) if isinstance(f, Polynomial) \
                    else RationalFunction.const(f)
            if f.is_zero():
                continue
            if validate:
                _check_component(f, v)
            self.comps[v] = f
        self.word = word  # spherical provenance, if any

    # -- constructors ------------------------------------------------------
    @staticmethod
    def unit(quiver: Quiver, law: FormalGroupLaw) -> "ShuffleElement":
        return ShuffleElement(quiver, law, {quiver.zero(): RF_ONE}, validate=False,
                              word=())

    @staticmethod
    def generator(quiver: Quiver, law: FormalGroupLaw, vertex: str,
                  power: int) -> "ShuffleElement":
        x = RationalFunction.var(slot_symbol(str(vertex), 1))
        return ShuffleElement(quiver, law, {quiver.unit(vertex): x ** power},
                              validate=False, word=((str(vertex), power),))

    @staticmethod
    def homogeneous(quiver: Quiver, law: FormalGroupLaw, v: DimVector,
                    f) -> "ShuffleElement":
        return ShuffleElement(quiver, law, {v: f})

    def component(self, v: DimVector) -> RationalFunction:
        return self.comps.get(v, RF_ZERO)

    def grades(self):
        return sorted(self.comps, key=lambda v: v.vec)

    def is_zero(self) -> bool:
        return not self.comps

    def __add__(self, other: "ShuffleElement") -> "ShuffleElement":
        self._compat(other)
        out = dict(self.comps)
        for v, f in other.comps.items():
            s = out.get(v, RF_ZERO) + f
            if s.is_zero():
                out.pop(v, None)
            else:
                out[v] = s
        return ShuffleElement(self.quiver, self.law, out, validate=False)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ShuffleElement":
        return ShuffleElement(self.quiver, self.law,
                              {v: f * c for v, f in self.comps.items()}, validate=False)

    def __eq__(self, other):
        if not isinstance(other, ShuffleElement):
            return NotImplemented
        return self.comps == other.comps

    def _compat(self, other: "ShuffleElement"):
        if self.quiver is not other.quiver or self.law is not other.law:
            raise ValueError("elements over different quivers or laws")

    def star(self, other: "ShuffleElement") -> "ShuffleElement":
        self._compat(other)
        out: dict[DimVector, RationalFunction] = {}
        for v1, f in self.comps.items():
            for v2, g in other.comps.items():
                h = star_component(f, v1, g, v2, self.quiver, self.law)
                v = v1 + v2
                s = out.get(v, RF_ZERO) + h
                if s.is_zero():
                    out.pop(v, None)
                else:
                    out[v] = s
        word = None
        if self.word is not None and other.word is not None:
            word = self.word + other.word
        return ShuffleElement(self.quiver, self.law, out, validate=False, word=word)

    def __repr__(self):
        body = ", ".join(f"{v.vec}: {f.render()}" for v, f in sorted(
            self.comps.items(), key=lambda kv: kv[0].vec))
        return f"ShuffleElement({body or '0'})"


def _check_component(f: RationalFunction, v: DimVector):
    quiver = v.quiver
    allowed = set()
    for vertex in quiver.vertices:
        for s in range(1, v[vertex] + 1):
            allowed.add(slot_symbol(vertex, s))
    from .symbols import ROLE_ALPHABET
    for s in f.symbols():
        if s.role == ROLE_ALPHABET and s not in allowed:
            raise ValueError(f"component of grade {v.vec} uses out-of-range slot {s.name}")
    if not is_symmetric(f, v):
        raise ValueError(f"component of grade {v.vec} is not per-vertex symmetric")


def is_symmetric(f: RationalFunction, v: DimVector) -> bool:
    """Invariance under adjacent slot swaps (generators of the product group)."""
    for vertex in v.quiver.vertices:
        n = v[vertex]
        for s in range(1, n):
            a, b = slot_symbol(vertex, s), slot_symbol(vertex, s + 1)
            if f.rename({a: b, b: a}) != f:
                return False
    return True


def symmetry_witness(f: RationalFunction, v: DimVector):
    """A violated adjacent transposition (vertex, s, s+1), or None."""
    for vertex in v.quiver.vertices:
        n = v[vertex]
        for s in range(1, n):
            a, b = slot_symbol(vertex, s), slot_symbol(vertex, s + 1)
            if f.rename({a: b, b: a}) != f:
                return (vertex, s, s + 1)
    return None


def symmetrize(f, v: DimVector) -> RationalFunction:
    """Average of f over the product of per-vertex symmetric groups."""
    if isinstance(f, Polynomial):
        f = RationalFunction(f)
    groups = []
    for vertex in v.quiver.vertices:
        groups.append(list(itertools.permutations(range(1, v[vertex] + 1))))
    total = RF_ZERO
    count = 0
    for combo in itertools.product(*groups):
        ren = {}
        for vertex, perm in zip(v.quiver.vertices, combo):
            for s, image in enumerate(perm, start=1):
                if s != image:
                    ren[slot_symbol(vertex, s)] = slot_symbol(vertex, image)
        total = total + (f.rename(ren) if ren else f)
        count += 1
    return total * Fraction(1, count)


_FAC_CACHE: dict = {}


def _law_signature(law: FormalGroupLaw):
    if law.kind == "series":
        return (law.kind, law.order, law._series)
    return (law.kind,)


def _quiver_signature(quiver: Quiver):
    return (quiver.vertices, tuple((a.out, a.inc, a.m_out, a.m_inc)
                                   for a in quiver.arrows), quiver.weights)


def fac_cached(a_sides, b_sides, quiver: Quiver, law: FormalGroupLaw) -> Factored:
    """fac(x_A|x_B) in factored form, cached per kernel shape."""
    key = (_quiver_signature(quiver), _law_signature(law), a_sides, b_sides)
    hit = _FAC_CACHE.get(key)
    if hit is None:
        hit = fac_factored(a_sides, b_sides, quiver, law)
        _FAC_CACHE[key] = hit
    return hit.copy()


def fac_rational(a_sides, b_sides, quiver: Quiver, law: FormalGroupLaw
                 ) -> RationalFunction:
    """fac(x_A|x_B) reduced to canonical form."""
    return fac_cached(a_sides, b_sides, quiver, law).to_rational()


def unit_factor_candidates(den: Polynomial, quiver: Quiver, law: FormalGroupLaw):
    """Candidate irreducible factors of a group-unit denominator."""
    from .symbols import ROLE_PARAM
    if law.kind != CONNECTIVE_K:
        return []
    beta = Polynomial.var(BETA)
    out = []
    seen = set()
    for s in den.symbols():
        if s is BETA:
            continue
        if s not in seen:
            seen.add(s)
            out.append(ONE - beta * Polynomial.var(s))
    # the symmetric-hbar substitution turns t-shifts into hbar/2 units
    from .symbols import HBAR
    if HBAR in den.symbols():
        half = Polynomial.var(HBAR).scale(Fraction(1, 2))
        out.append(ONE - beta * half)
    return out


def push_rf_split(t: Factored, rf: RationalFunction, quiver: Quiver,
                  law: FormalGroupLaw):
    """Multiply a fraction in, splitting its denominator into known unit
    factors so later cancellations work key by key."""
    from .poly import exact_div as _exact_div
    t.mul_poly(rf.num)
    if t.is_zero() or rf.den.is_const():
        return
    den = rf.den
    for cand in unit_factor_candidates(den, quiver, law):
        while not den.is_const():
            try:
                den = _exact_div(den, cand)
            except ValueError:
                break
            t.div_poly(cand)
    t.div_poly(den)


def star_component(f: RationalFunction, v1: DimVector, g: RationalFunction,
                   v2: DimVector, quiver: Quiver, law: FormalGroupLaw,
                   threads: int = 1) -> RationalFunction:
    """One graded piece of the star product (see module docstring).

    Terms are accumulated as reduced fractions; the pairwise additions
    cancel the simple kernel poles early, which keeps the intermediate
    numerators small.
    """
    bps = enumerate_bipartitions(v1, v2)
    sign = euler_sign(v1, v2, quiver)

    def term(bp: Bipartition) -> Factored:
        ren_f, ren_g = {}, {}
        for i, vertex in enumerate(quiver.vertices):
            for s, slot in enumerate(bp.a_sides[i], start=1):
                if s != slot:
                    ren_f[slot_symbol(vertex, s)] = slot_symbol(vertex, slot)
            for s, slot in enumerate(bp.b_sides[i], start=1):
                if s != slot:
                    ren_g[slot_symbol(vertex, s)] = slot_symbol(vertex, slot)
        t = fac_cached(bp.a_sides, bp.b_sides, quiver, law)
        if not t.is_zero():
            push_rf_split(t, f.rename(ren_f), quiver, law)
        if not t.is_zero():
            push_rf_split(t, g.rename(ren_g), quiver, law)
        return t

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            terms = list(pool.map(term, bps))
    else:
        terms = [term(bp) for bp in bps]
    total = factored_sum(terms, assume_irreducible_den=False)
    if sign < 0:
        total = -total
    if (f.is_polynomial() or is_unit_denominator(f.den, law)) and \
       (g.is_polynomial() or is_unit_denominator(g.den, law)):
        if not is_unit_denominator(total.den, law):
            raise ProductNotRegular(
                f"residual denominator {total.den.render()} in star product")
    return total


def spherical_generate(quiver: Quiver, law: FormalGroupLaw, v: DimVector,
                       degree_bound: int):
    """All star products of single-slot monomial generators of total grade v.

    Words run in lexicographic order over (vertex position, power); each
    result records its generator word.
    """
    letters = []
    for vertex in quiver.vertices:
        for r in range(degree_bound + 1):
            letters.append((vertex, r))

    def target(seq):
        counts = [0] * len(quiver.vertices)
        for vertex, _ in seq:
            counts[quiver.index[vertex]] += 1
        return tuple(counts)

    n = v.total()
    out = []
    if n == 0:
        out.append(ShuffleElement.unit(quiver, law))
        return out
    for seq in itertools.product(letters, repeat=n):
        if target(seq) != v.vec:
            continue
        elem = ShuffleElement.generator(quiver, law, seq[0][0], seq[0][1])
        for vertex, r in seq[1:]:
            elem = elem.star(ShuffleElement.generator(quiver, law, vertex, r))
        out.append(elem)
    return out
