"""Exact sparse multivariate polynomials over the rationals.

A monomial is a tuple of (Symbol, exponent) pairs, sorted by the global
symbol order, exponents strictly positive.  A polynomial maps monomials to
nonzero Fraction coefficients; the zero polynomial has an empty table.

Monomials are compared in graded lexicographic order: higher total degree
first, ties broken by the exponent vector read along the symbol order
(larger exponent on the earlier symbol wins).  This is the canonical order
used everywhere, including string rendering.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd

try:
    from gmpy2 import mpq as QCOEF
except ImportError:  # pragma: no cover - gmpy2 is a hard speedup, soft dep
    QCOEF = Fraction
_QTYPES = (int, type(QCOEF(1)), Fraction)

from .symbols import Symbol

Monomial = tuple  # tuple[tuple[Symbol, int], ...]

ONE_MONO: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        sa, ea = a[i]
        sb, eb = b[j]
        if sa is sb:
            out.append((sa, ea + eb))
            i += 1
            j += 1
        elif sa < sb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """a / b, or None when b does not divide a."""
    if not b:
        return a
    out = []
    bd = dict(b)
    for s, e in a:
        eb = bd.pop(s, 0)
        if eb > e:
            return None
        if e > eb:
            out.append((s, e - eb))
    if bd:
        return None
    return tuple(out)


def _mono_deg(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_key(m: Monomial):
    # graded lex: total degree, then exponents along the symbol order.
    # Exponents are negated so that the *larger* exponent on the earlier
    # symbol sorts as the larger monomial under plain tuple comparison.
    return (_mono_deg(m), tuple((s.key, -e) for s, e in m), )


_KEY_CACHE: dict = {}


def mono_cmp_key(m: Monomial):
    """Sort key: ascending = smaller monomial first (cached per monomial)."""
    k = _KEY_CACHE.get(m)
    if k is None:
        deg, body = _mono_key(m)
        k = (deg, _NegBody(body))
        _KEY_CACHE[m] = k
    return k


class _NegBody:
    """Compare exponent bodies so that lexicographically 'bigger along the
    symbol order' counts as bigger.  A shorter body that is a prefix of a
    longer one is the one with smaller support on later symbols."""

    __slots__ = ("body",)

    def __init__(self, body):
        self.body = body

    def _norm(self, other):
        return other.body

    def __lt__(self, other):
        a, b = self.body, other.body
        for (ka, ea), (kb, eb) in zip(a, b):
            if ka != kb:
                # the earlier symbol carries a positive exponent only on one
                # side; that side is lex-larger
                return ka > kb
            if ea != eb:
                return ea > eb  # ea,eb are negated exponents
        return len(a) < len(b)

    def __eq__(self, other):
        return self.body == other.body


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: dict | None = None):
        t = {}
        if terms:
            for m, c in terms.items():
                if not isinstance(c, int):
                    c = QCOEF(c)
                if c != 0:
                    t[m] = c
        self.terms = t
        self._hash = None

    # -- constructors -------------------------------------------------
    @staticmethod
    def const(c) -> "Polynomial":
        if not isinstance(c, int):
            c = QCOEF(c)
        return Polynomial({ONE_MONO: c}) if c else Polynomial()

    @staticmethod
    def var(s: Symbol) -> "Polynomial":
        return Polynomial({((s, 1),): 1})

    # -- predicates ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE_MONO in self.terms)

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError("not a constant polynomial")
        return QCOEF(self.terms.get(ONE_MONO, 0))

    def symbols(self) -> set:
        out = set()
        for m in self.terms:
            for s, _ in m:
                out.add(s)
        return out

    def total_degree(self) -> int:
        return max((_mono_deg(m) for m in self.terms), default=0)

    def degree_in(self, s: Symbol) -> int:
        d = 0
        for m in self.terms:
            for sym, e in m:
                if sym is s and e > d:
                    d = e
        return d

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        p = Polynomial.__new__(Polynomial)
        p.terms = out
        p._hash = None
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Polynomial.__new__(Polynomial)
        p.terms = {m: -c for m, c in self.terms.items()}
        p._hash = None
        return p

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return Polynomial()
        if other.is_const():
            c = other.const_value()
            return self.scale(c)
        if self.is_const():
            return other.scale(self.const_value())
        if len(self.terms) * len(other.terms) >= 64:
            ctx = _PackCtx(self.symbols() | other.symbols())
            packed = _packed_mul(_pack_poly(self.terms, ctx),
                                 _pack_poly(other.terms, ctx))
            return _unpack_poly(packed, ctx)
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = _mono_mul(ma, mb)
                v = out.get(m)
                if v is None:
                    out[m] = ca * cb
                else:
                    v = v + ca * cb
                    if v:
                        out[m] = v
                    else:
                        del out[m]
        p = Polynomial.__new__(Polynomial)
        p.terms = out
        p._hash = None
        return p

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        if not isinstance(c, int):
            c = QCOEF(c)
        if not c:
            return Polynomial()
        p = Polynomial.__new__(Polynomial)
        p.terms = {m: cc * c for m, cc in self.terms.items()}
        p._hash = None
        return p

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- structure -----------------------------------------------------
    def leading(self) -> tuple[Monomial, Fraction]:
        """Leading term in graded lex order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=mono_cmp_key)
        return m, self.terms[m]

    def content(self):
        """Positive rational c with self/c integer-primitive."""
        if not self.terms:
            return QCOEF(1)
        num = 0
        den = 1
        for c in self.terms.values():
            num = _int_gcd(num, c.numerator)
            den = den * c.denominator // _int_gcd(den, c.denominator)
        return QCOEF(num, den)

    def primitive(self) -> tuple:
        """(content-with-sign, primitive part with positive leading coeff)."""
        if not self.terms:
            return Fraction(1), self
        c = self.content()
        _, lc = self.leading()
        if lc < 0:
            c = -c
        return c, self.scale(1 / c)

    def map_coeffs(self, f) -> "Polynomial":
        return Polynomial({m: f(c) for m, c in self.terms.items()})

    def coeff_of(self, s: Symbol, e: int) -> "Polynomial":
        """Coefficient of s**e, a polynomial in the remaining symbols."""
        out = {}
        for m, c in self.terms.items():
            got = 0
            rest = []
            for sym, ex in m:
                if sym is s:
                    got = ex
                else:
                    rest.append((sym, ex))
            if got == e:
                out[tuple(rest)] = c
        return Polynomial(out)

    def as_univariate(self, s: Symbol) -> dict[int, "Polynomial"]:
        """Split into {exponent of s: coefficient polynomial}."""
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            got = 0
            rest = []
            for sym, ex in m:
                if sym is s:
                    got = ex
                else:
                    rest.append((sym, ex))
            out.setdefault(got, {})[tuple(rest)] = c
        return {e: Polynomial(t) for e, t in out.items()}

    def subs_poly(self, table: dict) -> "Polynomial":
        """Substitute symbols by polynomials (missing symbols unchanged)."""
        result = Polynomial()
        pow_cache: dict[tuple[Symbol, int], Polynomial] = {}
        for m, c in self.terms.items():
            term = Polynomial.const(c)
            for s, e in m:
                rep = table.get(s)
                if rep is None:
                    term = term * Polynomial({((s, e),): Fraction(1)})
                else:
                    key = (s, e)
                    p = pow_cache.get(key)
                    if p is None:
                        p = rep ** e
                        pow_cache[key] = p
                    term = term * p
            result = result + term
        return result

    def rename(self, table: dict) -> "Polynomial":
        """Relabel symbols (a ring map sending variables to variables)."""
        out: dict = {}
        for m, c in self.terms.items():
            merged: dict = {}
            for s, e in m:
                ns = table.get(s, s)
                merged[ns] = merged.get(ns, 0) + e
            nm = tuple(sorted(merged.items(), key=lambda t: t[0].key))
            v = out.get(nm)
            if v is None:
                out[nm] = c
            else:
                v = v + c
                if v:
                    out[nm] = v
                else:
                    del out[nm]
        p = Polynomial.__new__(Polynomial)
        p.terms = out
        p._hash = None
        return p

    def derivative(self, s: Symbol) -> "Polynomial":
        out = {}
        for m, c in self.terms.items():
            for i, (sym, e) in enumerate(m):
                if sym is s:
                    nm = m[:i] + ((s, e - 1),) + m[i + 1:] if e > 1 else m[:i] + m[i + 1:]
                    out[nm] = out.get(nm, Fraction(0)) + c * e
        return Polynomial(out)

    # -- rendering -------------------------------------------------------
    def sorted_terms(self):
        """Terms in descending canonical order."""
        return sorted(self.terms.items(), key=lambda kv: mono_cmp_key(kv[0]), reverse=True)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = [f"{s.name}^{e}" if e > 1 else s.name for s, e in m]
            if not factors:
                body = str(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(abs(c))] + factors)
            parts.append(("-" if c < 0 else "+", body))
        sign0, body0 = parts[0]
        out = ("-" if sign0 == "-" else "") + body0
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Polynomial({self.render()})"


def _coerce(x):
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial.const(x)
    return NotImplemented


ZERO = Polynomial()
ONE = Polynomial.const(1)


# -- exact division and gcd ------------------------------------------------

class _MaxEntry:
    """heapq adapter turning the min-heap into a max-heap on monomial keys."""

    __slots__ = ("key", "mono")

    def __init__(self, mono):
        self.key = mono_cmp_key(mono)
        self.mono = mono

    def __lt__(self, other):
        return other.key < self.key


class _PackCtx:
    """Exponent vectors packed into one int per monomial.

    Fields (most significant first): total degree, then one field per
    symbol in symbol order.  Each field has `width` bits with the top bit
    reserved as a borrow guard, so packed ints compare in graded lex
    order, multiply by integer addition, and test divisibility with the
    classic guard-bit subtraction trick.
    """

    __slots__ = ("syms", "width", "shifts", "deg_shift", "guards")

    def __init__(self, symbols, width: int = 24):
        self.syms = sorted(symbols)
        self.width = width
        n = len(self.syms)
        # least significant field = last symbol, degree field on top
        self.shifts = {s: (n - 1 - i) * width for i, s in enumerate(self.syms)}
        self.deg_shift = n * width
        g = 0
        for i in range(n + 1):
            g |= 1 << (i * width + (width - 1))
        self.guards = g

    def pack(self, mono) -> int:
        out = 0
        deg = 0
        for s, e in mono:
            out |= e << self.shifts[s]
            deg += e
        return out | (deg << self.deg_shift)

    def unpack(self, packed: int):
        mask = (1 << self.width) - 1
        out = []
        for s in self.syms:
            e = (packed >> self.shifts[s]) & mask
            if e:
                out.append((s, e))
        return tuple(out)


def _pack_poly(terms: dict, ctx: _PackCtx) -> dict:
    return {ctx.pack(m): c for m, c in terms.items()}


def _unpack_poly(packed: dict, ctx: _PackCtx) -> "Polynomial":
    p = Polynomial.__new__(Polynomial)
    p.terms = {ctx.unpack(k): c for k, c in packed.items()}
    p._hash = None
    return p


def _packed_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    get = out.get
    if len(a) > len(b):
        a, b = b, a
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            v = get(k)
            if v is None:
                out[k] = ca * cb
            else:
                v = v + ca * cb
                if v:
                    out[k] = v
                else:
                    del out[k]
    return out


def exact_div(f: Polynomial, g: Polynomial) -> Polynomial:
    """Quotient f/g when g divides f exactly; raises ValueError otherwise.

    Works on packed exponent keys: leading-term selection is a max-heap
    of ints, monomial products are integer additions, and divisibility is
    the guard-bit subtraction test.
    """
    import heapq

    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if f.is_zero():
        return ZERO
    if g.is_const():
        return f.scale(QCOEF(1) / g.const_value())
    ctx = _PackCtx(f.symbols() | g.symbols())
    guards = ctx.guards
    gp = _pack_poly(g.terms, ctx)
    kg = max(gp)
    cg = gp.pop(kg)
    cg_inv = QCOEF(1, cg) if isinstance(cg, int) else 1 / cg
    g_rest = list(gp.items())
    work = _pack_poly(f.terms, ctx)
    heap = [-k for k in work]
    heapq.heapify(heap)
    quo: dict = {}
    while heap:
        k = -heapq.heappop(heap)
        c = work.pop(k, None)
        if c is None:
            continue  # stale entry
        t = (k | guards) - kg
        if t & guards != guards:
            raise ValueError("inexact polynomial division")
        qk = t ^ guards
        qc = c * cg_inv
        if qc.denominator == 1:
            qc = qc.numerator
        quo[qk] = qc
        for k2, c2 in g_rest:
            kk = qk + k2
            v = work.get(kk)
            if v is None:
                work[kk] = -qc * c2
                heapq.heappush(heap, -kk)
            else:
                v = v - qc * c2
                if v:
                    work[kk] = v
                else:
                    del work[kk]
    return _unpack_poly(quo, ctx)


def divides(g: Polynomial, f: Polynomial) -> bool:
    try:
        exact_div(f, g)
        return True
    except ValueError:
        return False


def _pseudo_rem(f: dict[int, Polynomial], g: dict[int, Polynomial]) -> dict[int, Polynomial]:
    """Pseudo-remainder of univariate polys with Polynomial coefficients."""
    df = max(f)
    dg = max(g)
    lg = g[dg]
    r = dict(f)
    while r and max(r) >= dg:
        dr = max(r)
        lr = r[dr]
        shift = dr - dg
        new = {}
        for e, c in r.items():
            new[e] = c * lg
        for e, c in g.items():
            ne = e + shift
            v = new.get(ne, ZERO) - c * lr
            if v.is_zero():
                new.pop(ne, None)
            else:
                new[ne] = v
        new.pop(dr, None)
        r = {e: c for e, c in new.items() if not c.is_zero()}
    return r


def _poly_from_univariate(d: dict[int, Polynomial], s: Symbol) -> Polynomial:
    out = Polynomial()
    xp = Polynomial.var(s)
    for e, c in d.items():
        out = out + c * xp ** e
    return out


def _content_wrt(d: dict[int, Polynomial]) -> Polynomial:
    c = ZERO
    for coeff in d.values():
        c = gcd_prs(c, coeff)
        if c.is_const() and not c.is_zero():
            break
    return c if not c.is_zero() else ONE


_SYMPY_RING_CACHE: dict = {}


def _sympy_ring(n: int):
    # generator names are positional; only the count matters for gcd
    hit = _SYMPY_RING_CACHE.get(n)
    if hit is None:
        from sympy.polys.domains import QQ
        from sympy.polys.rings import PolyRing
        hit = PolyRing(tuple(f"v{i}" for i in range(n)), QQ)
        _SYMPY_RING_CACHE[n] = hit
    return hit


def gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Canonical gcd: integer-primitive, positive leading coefficient.

    The heavy lifting is delegated to sympy's sparse polynomial rings
    (heuristic gcd with modular fallbacks); gcd_prs below is an
    independent textbook implementation kept as a cross-check oracle.
    """
    if f.is_zero():
        return g.primitive()[1] if not g.is_zero() else ZERO
    if g.is_zero():
        return f.primitive()[1]
    if f.is_const() or g.is_const():
        return ONE
    syms = sorted(f.symbols() | g.symbols())
    index = {s: i for i, s in enumerate(syms)}
    n = len(syms)
    R = _sympy_ring(n)
    from sympy.polys.domains import QQ

    def to_sympy(p: Polynomial):
        table = {}
        for m, c in p.terms.items():
            exps = [0] * n
            for s, e in m:
                exps[index[s]] = e
            table[tuple(exps)] = QQ(int(c.numerator), int(c.denominator))
        return R.from_dict(table)

    gg = to_sympy(f).gcd(to_sympy(g))
    out = {}
    for exps, c in gg.terms():
        mono = tuple((syms[i], e) for i, e in enumerate(exps) if e)
        out[mono] = QCOEF(int(c.numerator), int(c.denominator))
    return Polynomial(out).primitive()[1]


def gcd_prs(f: Polynomial, g: Polynomial) -> Polynomial:
    """Primitive-PRS gcd (reference implementation, used as a test oracle).

    Recurses on the last symbol occurring in either argument, with
    contents handled recursively.  Exponential in bad cases; fine at the
    scales the tests use.
    """
    if f.is_zero():
        return g.primitive()[1] if not g.is_zero() else ZERO
    if g.is_zero():
        return f.primitive()[1]
    if f.is_const() or g.is_const():
        return ONE
    syms = f.symbols() | g.symbols()
    s = max(syms)
    fu = f.as_univariate(s)
    gu = g.as_univariate(s)
    if max(fu) == 0 or max(gu) == 0:
        # s does not actually occur in one of them: gcd divides its content
        base = f if max(fu) == 0 else g
        other = gu if max(fu) == 0 else fu
        return gcd_prs(base, _content_wrt(other))
    cf = _content_wrt(fu)
    cg = _content_wrt(gu)
    fp = {e: exact_div(c, cf) for e, c in fu.items()}
    gp = {e: exact_div(c, cg) for e, c in gu.items()}
    # primitive PRS
    a, b = (fp, gp) if max(fp) >= max(gp) else (gp, fp)
    while b:
        r = _pseudo_rem(a, b)
        if not r:
            break
        rc = _content_wrt(r)
        r = {e: exact_div(c, rc) for e, c in r.items()}
        a, b = b, r
    if b:
        gpoly = _poly_from_univariate(b, s)
    else:
        gpoly = _poly_from_univariate(a, s)
    result = gcd_prs(cf, cg) * gpoly.primitive()[1]
    return result.primitive()[1]
