"""Quiver data, dimension vectors, bipartitions and shuffle enumeration.

A quiver here is an ordered vertex list plus an arrow list; the derived
matrices are

    abar[k][l] = number of arrows k -> l
    cbar       = id - abar            (Euler form matrix)
    cartan[k][k] = 2,  cartan[k][l] = -abar[k][l] - abar[l][k]  (k != l)

Two weight conventions are supported.  "generic" keeps t1, t2 independent
and puts weight 1 on every arrow and reversed arrow.  "symmetric-hbar"
specializes t1 = t2 = hbar/2 and, for the a arrows h_1..h_a between an
ordered vertex pair (in input file order), assigns m_{h_p} = a + 2 - 2p
and m_{h_p*} = -a + 2p.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .poly import Polynomial
from .ratfun import RationalFunction
from .symbols import HBAR, T1, T2

GENERIC = "generic"
SYMMETRIC_HBAR = "symmetric-hbar"


@dataclass(frozen=True)
class Arrow:
    out: str
    inc: str
    m_out: int  # weight on t1 for the arrow itself
    m_inc: int  # weight on t2 for the reversed arrow


class Quiver:
    def __init__(self, vertices, arrows, weights: str = GENERIC):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex ids must be unique")
        self.index = {v: i for i, v in enumerate(self.vertices)}
        self.weights = weights
        if weights not in (GENERIC, SYMMETRIC_HBAR):
            raise ValueError(f"unknown weight convention {weights!r}")
        raw = [(str(a), str(b)) for a, b in arrows]
        for a, b in raw:
            if a not in self.index or b not in self.index:
                raise ValueError(f"arrow ({a},{b}) uses undeclared vertex")
        self.arrows = self._assign_weights(raw)

    def _assign_weights(self, raw) -> tuple:
        if self.weights == GENERIC:
            return tuple(Arrow(a, b, 1, 1) for a, b in raw)
        by_pair: dict[tuple[str, str], list[int]] = {}
        out = []
        for pos, (a, b) in enumerate(raw):
            by_pair.setdefault((a, b), []).append(pos)
        weights: dict[int, tuple[int, int]] = {}
        for (a, b), positions in by_pair.items():
            count = len(positions)
            for p, pos in enumerate(positions, start=1):
                weights[pos] = (count + 2 - 2 * p, -count + 2 * p)
        for pos, (a, b) in enumerate(raw):
            m_out, m_inc = weights[pos]
            out.append(Arrow(a, b, m_out, m_inc))
        return tuple(out)

    def has_loops(self) -> bool:
        return any(a.out == a.inc for a in self.arrows)

    def abar(self) -> list[list[int]]:
        n = len(self.vertices)
        m = [[0] * n for _ in range(n)]
        for a in self.arrows:
            m[self.index[a.out]][self.index[a.inc]] += 1
        return m

    def cbar(self) -> list[list[int]]:
        m = self.abar()
        n = len(self.vertices)
        return [[(1 if i == j else 0) - m[i][j] for j in range(n)] for i in range(n)]

    def cartan(self) -> list[list[int]]:
        a = self.abar()
        n = len(self.vertices)
        return [[2 if i == j else -a[i][j] - a[j][i] for j in range(n)] for i in range(n)]

    # t-values used by the fac kernels under this convention
    def t1_value(self) -> RationalFunction:
        if self.weights == SYMMETRIC_HBAR:
            return RationalFunction(Polynomial.var(HBAR)) / 2
        return RationalFunction.var(T1)

    def t2_value(self) -> RationalFunction:
        if self.weights == SYMMETRIC_HBAR:
            return RationalFunction(Polynomial.var(HBAR)) / 2
        return RationalFunction.var(T2)

    def check_weight_compatibility(self) -> bool:
        """t1^m_h * t2^m_h* must not depend on h under the convention."""
        if self.weights == GENERIC:
            return all(a.m_out == 1 and a.m_inc == 1 for a in self.arrows)
        # with t1 = t2 the product depends only on m_h + m_h*
        sums = {a.m_out + a.m_inc for a in self.arrows}
        return sums <= {2}

    def zero(self) -> "DimVector":
        return DimVector((0,) * len(self.vertices), self)

    def unit(self, vertex: str) -> "DimVector":
        e = [0] * len(self.vertices)
        e[self.index[str(vertex)]] = 1
        return DimVector(tuple(e), self)

    def dim(self, entries) -> "DimVector":
        if isinstance(entries, dict):
            vec = [0] * len(self.vertices)
            for v, n in entries.items():
                vec[self.index[str(v)]] = int(n)
            return DimVector(tuple(vec), self)
        return DimVector(tuple(int(n) for n in entries), self)

    def __repr__(self):
        arrows = ", ".join(f"{a.out}->{a.inc}" for a in self.arrows)
        return f"Quiver({list(self.vertices)}; {arrows}; {self.weights})"


@dataclass(frozen=True)
class DimVector:
    vec: tuple
    quiver: Quiver

    def __post_init__(self):
        if len(self.vec) != len(self.quiver.vertices):
            raise ValueError("dimension vector length mismatch")
        if any(n < 0 for n in self.vec):
            raise ValueError("dimension vectors are componentwise nonnegative")

    def __add__(self, other: "DimVector") -> "DimVector":
        return DimVector(tuple(a + b for a, b in zip(self.vec, other.vec)), self.quiver)

    def __sub__(self, other: "DimVector") -> "DimVector":
        return DimVector(tuple(a - b for a, b in zip(self.vec, other.vec)), self.quiver)

    def __getitem__(self, vertex: str) -> int:
        return self.vec[self.quiver.index[str(vertex)]]

    def __le__(self, other: "DimVector") -> bool:
        return all(a <= b for a, b in zip(self.vec, other.vec))

    def total(self) -> int:
        return sum(self.vec)

    def is_zero(self) -> bool:
        return all(n == 0 for n in self.vec)

    def splittings(self):
        """All (v1, v2) with v1 + v2 = self, lexicographic in v1."""
        ranges = [range(n + 1) for n in self.vec]
        for v1 in itertools.product(*ranges):
            d1 = DimVector(v1, self.quiver)
            yield d1, self - d1

    def __repr__(self):
        return f"DimVector({dict(zip(self.quiver.vertices, self.vec))})"


@dataclass(frozen=True)
class Bipartition:
    """Per-vertex disjoint slot sets A, B with A u B = [1, v]."""

    a_sides: tuple  # tuple of sorted slot tuples, one per vertex
    b_sides: tuple

    def a_at(self, quiver: Quiver, vertex: str):
        return self.a_sides[quiver.index[str(vertex)]]

    def b_at(self, quiver: Quiver, vertex: str):
        return self.b_sides[quiver.index[str(vertex)]]


def enumerate_bipartitions(v1: DimVector, v2: DimVector):
    """All (A, B) |- v1+v2 with |A| = v1, |B| = v2; the standard one first.

    Per vertex the A-sets run through combinations in lexicographic order,
    so the block [1, v1] comes first.
    """
    if v1.quiver is not v2.quiver:
        raise ValueError("dimension vectors over different quivers")
    per_vertex = []
    for n1, n2 in zip(v1.vec, v2.vec):
        slots = tuple(range(1, n1 + n2 + 1))
        choices = []
        for a in itertools.combinations(slots, n1):
            b = tuple(s for s in slots if s not in a)
            choices.append((a, b))
        per_vertex.append(choices)
    out = []
    for combo in itertools.product(*per_vertex):
        out.append(Bipartition(tuple(c[0] for c in combo), tuple(c[1] for c in combo)))
    return out


def count_bipartitions(v1: DimVector, v2: DimVector) -> int:
    return int(__import__("math").prod(comb(a + b, a) for a, b in zip(v1.vec, v2.vec)))


def enumerate_shuffles(v1: DimVector, v2: DimVector):
    """Order-preserving permutations, bijective with the bipartitions.

    Each permutation is a tuple (one entry per vertex) of slot images: the
    i-th standard slot goes to position sigma[i-1].
    """
    out = []
    for bp in enumerate_bipartitions(v1, v2):
        sigma = []
        for a, b in zip(bp.a_sides, bp.b_sides):
            n = len(a) + len(b)
            images = [0] * n
            for i, slot in enumerate(a, start=1):
                images[i - 1] = slot
            for j, slot in enumerate(b, start=1):
                images[len(a) + j - 1] = slot
            sigma.append(tuple(images))
        out.append(tuple(sigma))
    return out


def euler_sign(v1: DimVector, v2: DimVector, quiver: Quiver) -> int:
    """(-1) to the dot product of v2 with cbar . v1."""
    cbar = quiver.cbar()
    n = len(quiver.vertices)
    cv1 = [sum(cbar[i][j] * v1.vec[j] for j in range(n)) for i in range(n)]
    exponent = sum(v2.vec[i] * cv1[i] for i in range(n))
    return -1 if exponent % 2 else 1


def euler_exponent(v1: DimVector, v2: DimVector, quiver: Quiver) -> int:
    cbar = quiver.cbar()
    n = len(quiver.vertices)
    cv1 = [sum(cbar[i][j] * v1.vec[j] for j in range(n)) for i in range(n)]
    return sum(v2.vec[i] * cv1[i] for i in range(n))


def crossing_sign(v1: DimVector, v2: DimVector, quiver: Quiver) -> int:
    """The braiding sign (-1)^{v1 . (abar + abar^T) . v2}.

    With the Euler sign present in both the product and the coproduct,
    tensor legs of bidegrees crossing each other pick up this sign (the
    symmetrized Euler form mod 2); it is trivial whenever every vertex
    pair is joined by an even number of arrows, e.g. on quivers with no
    arrows at all.
    """
    a = quiver.abar()
    n = len(quiver.vertices)
    total = sum(v1.vec[i] * (a[i][j] + a[j][i]) * v2.vec[j]
                for i in range(n) for j in range(n))
    return -1 if total % 2 else 1
