"""The comultiplication, counit and the bialgebra-axiom checks.

A tensor component at bigrade (v1, v2) is stored as a Cartan dressing pair
plus a core rational function in two disjoint slot alphabets xl(i,s) and
xr(i,s).  The dressing on the left leg is a word of H_k(arg) factors whose
Cartan sits in leg 1 (collapsed variable hl(k)) while the arguments are
leg-2 slots; the right-leg dressing mirrors this with hr(k).

The coproduct of a homogeneous shuffle element P at grade v is

    sum over v1+v2=v of sign(v1,v2) H(leg-2 slots) P(xl ox xr) / fac(xr|xl)

and H_k(w) itself is grouplike.  Tensor products multiply legwise, with
the reordering factor phi^{-1} whenever a dressing of the right factor
moves past the shuffle slots of the left factor.
"""

from __future__ import annotations

import itertools

from .extended import ExtendedElement, HWord, phi_k, _fac_mixed
from .fgl import FormalGroupLaw
from .poly import Polynomial
from .quiver import (DimVector, Quiver, crossing_sign, enumerate_bipartitions,
                     euler_sign)
from .ratfun import RF_ONE, RF_ZERO, RationalFunction
from .shuffle import ShuffleElement, slot_symbol
from .symbols import LEFT, MID, PLAIN, RIGHT, Symbol, alphabet


def leg_varmap(copy: int):
    def vm(vertex, slot):
        return alphabet(vertex, slot, copy)
    return vm


class TensorElement:
    """Bigraded coproduct data: (v1, v2) -> list of (dl, dr, core)."""

    def __init__(self, quiver: Quiver, law: FormalGroupLaw, comps=None):
        self.quiver = quiver
        self.law = law
        # comps: {(v1vec, v2vec): [(HWord, HWord, RationalFunction), ...]}
        self.comps: dict = {}
        for grade, parts in (comps or {}).items():
            kept = [(dl, dr, core) for dl, dr, core in parts if not core.is_zero()]
            if kept:
                self.comps[grade] = kept

    def add_part(self, grade, dl: HWord, dr: HWord, core: RationalFunction):
        if core.is_zero():
            return
        parts = self.comps.setdefault(grade, [])
        for i, (edl, edr, ecore) in enumerate(parts):
            if edl == dl and edr == dr:
                s = ecore + core
                if s.is_zero():
                    parts.pop(i)
                else:
                    parts[i] = (edl, edr, s)
                if not parts:
                    del self.comps[grade]
                return
        parts.append((dl, dr, core))

    def __add__(self, other: "TensorElement") -> "TensorElement":
        out = TensorElement(self.quiver, self.law, self.comps)
        for grade, parts in other.comps.items():
            for dl, dr, core in parts:
                out.add_part(grade, dl, dr, core)
        return out

    def scale(self, c) -> "TensorElement":
        out = TensorElement(self.quiver, self.law)
        for grade, parts in self.comps.items():
            for dl, dr, core in parts:
                out.add_part(grade, dl, dr, core * c)
        return out

    def materialized(self, grade) -> RationalFunction:
        """Exact rational value of a component, dressings collapsed."""
        total = RF_ZERO
        for dl, dr, core in self.comps.get(grade, []):
            total = total + dl.collapsed(LEFT) * dr.collapsed(RIGHT) * core
        return total

    def grades(self):
        return sorted(self.comps)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        for grade in set(self.grades()) | set(other.grades()):
            if self.materialized(grade) != other.materialized(grade):
                return False
        return True

    def difference_witness(self, other: "TensorElement"):
        """First differing bigrade with the canonical difference, or None."""
        for grade in sorted(set(self.grades()) | set(other.grades())):
            d = self.materialized(grade) - other.materialized(grade)
            if not d.is_zero():
                return grade, d
        return None

    def star(self, other: "TensorElement") -> "TensorElement":
        """Legwise star with phi^(-1) reordering corrections."""
        out = TensorElement(self.quiver, self.law)
        quiver, law = self.quiver, self.law
        for (a1v, a2v), parts1 in self.comps.items():
            a1, a2 = quiver.dim(a1v), quiver.dim(a2v)
            for (b1v, b2v), parts2 in other.comps.items():
                b1, b2 = quiver.dim(b1v), quiver.dim(b2v)
                sign = euler_sign(a1, b1, quiver) * euler_sign(a2, b2, quiver) \
                    * crossing_sign(a2, b1, quiver)
                grade = ((a1 + b1).vec, (a2 + b2).vec)
                for bp1 in enumerate_bipartitions(a1, b1):
                    for bp2 in enumerate_bipartitions(a2, b2):
                        ren1, ren2 = {}, {}
                        for i, vertex in enumerate(quiver.vertices):
                            for s, slot in enumerate(bp1.a_sides[i], start=1):
                                ren1[alphabet(vertex, s, LEFT)] = alphabet(vertex, slot, LEFT)
                            for s, slot in enumerate(bp2.a_sides[i], start=1):
                                ren1[alphabet(vertex, s, RIGHT)] = alphabet(vertex, slot, RIGHT)
                            for s, slot in enumerate(bp1.b_sides[i], start=1):
                                ren2[alphabet(vertex, s, LEFT)] = alphabet(vertex, slot, LEFT)
                            for s, slot in enumerate(bp2.b_sides[i], start=1):
                                ren2[alphabet(vertex, s, RIGHT)] = alphabet(vertex, slot, RIGHT)
                        kernel_l = _fac_mixed(bp1.a_sides, bp1.b_sides, quiver, law,
                                              leg_varmap(LEFT), leg_varmap(LEFT))
                        kernel_r = _fac_mixed(bp2.a_sides, bp2.b_sides, quiver, law,
                                              leg_varmap(RIGHT), leg_varmap(RIGHT))
                        kernel = kernel_l.to_rational() * kernel_r.to_rational()
                        for dl1, dr1, core1 in parts1:
                            c1 = core1.rename(ren1)
                            d1l = dl1.rename_args(ren1)
                            d1r = dr1.rename_args(ren1)
                            for dl2, dr2, core2 in parts2:
                                c2 = core2.rename(ren2)
                                d2l = dl2.rename_args(ren2)
                                d2r = dr2.rename_args(ren2)
                                corr = RF_ONE
                                if not d2l.is_trivial() and not a1.is_zero():
                                    corr = corr * _phi_on_slots(
                                        d2l, a1, bp1.a_sides, quiver, law, LEFT).inverse()
                                if not d2r.is_trivial() and not a2.is_zero():
                                    corr = corr * _phi_on_slots(
                                        d2r, a2, bp2.a_sides, quiver, law, RIGHT).inverse()
                                core = c1 * c2 * kernel * corr
                                if sign < 0:
                                    core = -core
                                out.add_part(grade, d1l * d2l, d1r * d2r, core)
        return out

    def render_json(self):
        out = []
        for grade in self.grades():
            v1, v2 = grade
            f = self.materialized(grade)
            num, den = f.render_pair()
            out.append({
                "v1": {v: n for v, n in zip(self.quiver.vertices, v1)},
                "v2": {v: n for v, n in zip(self.quiver.vertices, v2)},
                "num": num,
                "den": den,
            })
        return out

    def __repr__(self):
        body = "; ".join(f"{g}: {self.materialized(g).render()}" for g in self.grades())
        return f"TensorElement({body or '0'})"


def _phi_on_slots(word: HWord, v: DimVector, sides, quiver, law, copy) -> RationalFunction:
    """Conjugation factor of a word over the given slot embedding."""
    def vm(vertex, s):
        i = quiver.index[vertex]
        return alphabet(vertex, sides[i][s - 1], copy)
    return word.phi_factor(v, law, varmap=vm)


def coproduct(P) -> TensorElement:
    """The comultiplication of a shuffle or extended element."""
    if isinstance(P, ShuffleElement):
        return _coproduct_shuffle(P)
    if isinstance(P, ExtendedElement):
        out = TensorElement(P.quiver, P.law)
        for word, elem in P.pairs.items():
            t = coproduct_cartan(P.quiver, P.law, word).star(_coproduct_shuffle(elem))
            out = out + t
        return out
    raise TypeError("coproduct expects a shuffle or extended element")


def _coproduct_shuffle(P: ShuffleElement) -> TensorElement:
    quiver, law = P.quiver, P.law
    out = TensorElement(quiver, law)
    for v, f in P.comps.items():
        for v1, v2 in v.splittings():
            sign = euler_sign(v1, v2, quiver)
            ren = {}
            dressing = []
            a_sides, b_sides = [], []
            for i, vertex in enumerate(quiver.vertices):
                n1 = v1.vec[i]
                a_sides.append(tuple(range(1, n1 + 1)))
                b_sides.append(tuple(range(1, v2.vec[i] + 1)))
                for s in range(1, v[vertex] + 1):
                    if s <= n1:
                        ren[slot_symbol(vertex, s)] = alphabet(vertex, s, LEFT)
                    else:
                        ren[slot_symbol(vertex, s)] = alphabet(vertex, s - n1, RIGHT)
                for s in range(1, v2.vec[i] + 1):
                    dressing.append((vertex, alphabet(vertex, s, RIGHT), 1))
            core = f.rename(ren)
            # kernel 1/fac(x_right | x_left)
            kern = _fac_mixed(b_sides, a_sides, quiver, law,
                              leg_varmap(RIGHT), leg_varmap(LEFT))
            core = core * kern.to_rational().inverse()
            if sign < 0:
                core = -core
            out.add_part((v1.vec, v2.vec), HWord(tuple(dressing)), HWord(), core)
    return out


def coproduct_cartan(quiver: Quiver, law: FormalGroupLaw, word: HWord) -> TensorElement:
    """Grouplike image: each H_k(w) goes to H_k(w) ox H_k(w)."""
    out = TensorElement(quiver, law)
    zero = quiver.zero().vec
    out.add_part((zero, zero), word, word, RF_ONE)
    return out


def counit_tensor_left(T: TensorElement) -> ExtendedElement:
    """(eps ox id): keep the (0, v2) components, dressings on leg 1 -> 1."""
    quiver, law = T.quiver, T.law
    pairs: dict = {}
    zero = quiver.zero().vec
    for (v1v, v2v), parts in T.comps.items():
        if v1v != zero:
            continue
        v2 = quiver.dim(v2v)
        ren = {alphabet(vx, s, RIGHT): slot_symbol(vx, s)
               for vx in quiver.vertices for s in range(1, v2[vx] + 1)}
        for dl, dr, core in parts:
            word = dr.rename_args(ren)
            elem = ShuffleElement(quiver, law, {v2: core.rename(ren)}, validate=False)
            pairs[word] = pairs[word] + elem if word in pairs else elem
    return ExtendedElement(quiver, law, pairs)


def counit_tensor_right(T: TensorElement) -> ExtendedElement:
    """(id ox eps): keep the (v1, 0) components, dressings on leg 2 -> 1."""
    quiver, law = T.quiver, T.law
    pairs: dict = {}
    zero = quiver.zero().vec
    for (v1v, v2v), parts in T.comps.items():
        if v2v != zero:
            continue
        v1 = quiver.dim(v1v)
        ren = {alphabet(vx, s, LEFT): slot_symbol(vx, s)
               for vx in quiver.vertices for s in range(1, v1[vx] + 1)}
        for dl, dr, core in parts:
            # dl has Cartan in leg 1 but arguments in leg 2: with v2 = 0 the
            # word can only carry series arguments; it survives as-is
            word = dl.rename_args(ren)
            elem = ShuffleElement(quiver, law, {v1: core.rename(ren)}, validate=False)
            pairs[word] = pairs[word] + elem if word in pairs else elem
    return ExtendedElement(quiver, law, pairs)


def counit(a) -> RationalFunction:
    """The augmentation on a shuffle or extended element."""
    if isinstance(a, ShuffleElement):
        return a.component(a.quiver.zero())
    if isinstance(a, ExtendedElement):
        return a.counit()
    raise TypeError("counit expects a shuffle or extended element")


# -- checks ------------------------------------------------------------------

def check_hom(P, Q) -> dict:
    """Delta(P * Q) = Delta(P) * Delta(Q), componentwise."""
    if isinstance(P, ShuffleElement):
        P = ExtendedElement.from_shuffle(P)
    if isinstance(Q, ShuffleElement):
        Q = ExtendedElement.from_shuffle(Q)
    lhs = coproduct(P.star(Q))
    rhs = coproduct(P).star(coproduct(Q))
    witness = lhs.difference_witness(rhs)
    return {
        "relation": "coproduct-homomorphism",
        "status": "pass" if witness is None else "fail",
        "witness": None if witness is None else {
            "grade": witness[0], "difference": witness[1].render()},
    }


def check_counit(P) -> dict:
    """(eps ox id) Delta = id = (id ox eps) Delta."""
    if isinstance(P, ShuffleElement):
        P = ExtendedElement.from_shuffle(P)
    T = coproduct(P)
    left = counit_tensor_left(T)
    right = counit_tensor_right(T)
    ok = (left == P) and (right == P)
    return {"relation": "counit", "status": "pass" if ok else "fail",
            "witness": None}


def check_cocycle(quiver: Quiver, law: FormalGroupLaw, va: DimVector,
                  vb: DimVector, vc: DimVector) -> dict:
    """fac(z_{BuC}|z_A) fac(z_C|z_B) = fac(z_C|z_{AuB}) fac(z_B|z_A)."""
    def block_sides(lo: DimVector, hi: DimVector):
        # slots lo+1 .. lo+hi per vertex
        return tuple(tuple(range(lo.vec[i] + 1, lo.vec[i] + hi.vec[i] + 1))
                     for i in range(len(quiver.vertices)))

    zero = quiver.zero()
    A = block_sides(zero, va)
    B = block_sides(va, vb)
    C = block_sides(va + vb, vc)
    BC = tuple(tuple(sorted(b + c)) for b, c in zip(B, C))
    AB = tuple(tuple(sorted(a + b)) for a, b in zip(A, B))
    vm = slot_symbol
    lhs = _fac_mixed(BC, A, quiver, law, vm, vm)
    lhs.mul(_fac_mixed(C, B, quiver, law, vm, vm))
    rhs = _fac_mixed(C, AB, quiver, law, vm, vm)
    rhs.mul(_fac_mixed(B, A, quiver, law, vm, vm))
    ok = lhs.to_rational() == rhs.to_rational()
    return {"relation": "cocycle", "status": "pass" if ok else "fail",
            "sizes": [list(va.vec), list(vb.vec), list(vc.vec)], "witness": None}


def check_coassoc(P: ShuffleElement) -> dict:
    """(id ox Delta) Delta = (Delta ox id) Delta on a homogeneous element.

    Both sides are materialized as exact rational functions in three slot
    alphabets (legs LEFT, MID, RIGHT) with collapsed Cartan dressings.
    """
    quiver, law = P.quiver, P.law
    from .symbols import cartan_h

    def h_factor(vertex, arg, cartan_copy):
        h = RationalFunction.var(cartan_h(vertex, cartan_copy))
        a = RationalFunction.var(arg)
        return RF_ONE + (h - a).inverse()

    for v, f in P.comps.items():
        for v1, v23 in v.splittings():
            for v2, v3 in v23.splittings():
                legs = (v1, v2, v3)
                ren = {}
                for i, vertex in enumerate(quiver.vertices):
                    n1, n2 = v1.vec[i], v2.vec[i]
                    for s in range(1, v[vertex] + 1):
                        if s <= n1:
                            ren[slot_symbol(vertex, s)] = alphabet(vertex, s, LEFT)
                        elif s <= n1 + n2:
                            ren[slot_symbol(vertex, s)] = alphabet(vertex, s - n1, MID)
                        else:
                            ren[slot_symbol(vertex, s)] = alphabet(vertex, s - n1 - n2, RIGHT)
                core = f.rename(ren)

                def sides(leg: DimVector):
                    return tuple(tuple(range(1, leg.vec[i] + 1))
                                 for i in range(len(quiver.vertices)))

                def merged_sides(x: DimVector, y: DimVector):
                    # block slots for the concatenation (x then y)
                    return tuple(tuple(range(1, x.vec[i] + y.vec[i] + 1))
                                 for i in range(len(quiver.vertices)))

                def merged_vm(x: DimVector, copy_x, copy_y):
                    def vm(vertex, s):
                        nx = x[vertex]
                        if s <= nx:
                            return alphabet(vertex, s, copy_x)
                        return alphabet(vertex, s - nx, copy_y)
                    return vm

                def dress(leg_v: DimVector, cartan_copy, arg_copy):
                    out = RF_ONE
                    for vertex in quiver.vertices:
                        for s in range(1, leg_v[vertex] + 1):
                            out = out * h_factor(vertex, alphabet(vertex, s, arg_copy),
                                                 cartan_copy)
                    return out

                vm1, vm2, vm3 = leg_varmap(LEFT), leg_varmap(MID), leg_varmap(RIGHT)
                # side 1: (id ox Delta) Delta
                s1 = euler_sign(v1, v23, quiver) * euler_sign(v2, v3, quiver)
                kern23_1 = _fac_mixed(merged_sides(v2, v3), sides(v1), quiver, law,
                                      merged_vm(v2, MID, RIGHT), vm1)
                kern3_2 = _fac_mixed(sides(v3), sides(v2), quiver, law, vm3, vm2)
                lhs = core * kern23_1.to_rational().inverse() \
                    * kern3_2.to_rational().inverse()
                lhs = lhs * dress(v2, LEFT, MID) * dress(v3, LEFT, RIGHT) \
                    * dress(v3, MID, RIGHT)
                if s1 < 0:
                    lhs = -lhs
                # side 2: (Delta ox id) Delta
                s2 = euler_sign(v1 + v2, v3, quiver) * euler_sign(v1, v2, quiver)
                kern3_1 = _fac_mixed(sides(v3), merged_sides(v1, v2), quiver, law,
                                     vm3, merged_vm(v1, LEFT, MID))
                kern2_2 = _fac_mixed(sides(v2), sides(v1), quiver, law, vm2, vm1)
                rhs = core * kern3_1.to_rational().inverse() \
                    * kern2_2.to_rational().inverse()
                rhs = rhs * dress(v3, LEFT, RIGHT) * dress(v3, MID, RIGHT) \
                    * dress(v2, LEFT, MID)
                if s2 < 0:
                    rhs = -rhs
                if lhs != rhs:
                    return {"relation": "coassociativity", "status": "fail",
                            "witness": {"grade": [list(x.vec) for x in legs],
                                        "difference": (lhs - rhs).render()}}
    return {"relation": "coassociativity", "status": "pass", "witness": None}
