"""Indeterminates and their session-wide total order.

Every polynomial in the engine is written over a single global alphabet of
interned symbols.  The order is fixed once and for all:

    parameters < cartan symbols < alphabet variables < series variables

Parameters are t1, t2, hbar, beta.  Cartan symbols are the collapsed
variables h(k) (one per quiver vertex, with primed copies hl/hr for tensor
legs) and the free generators g(k,r) of the symbolic Cartan ring.  Alphabet
variables are the slot coordinates x(i,s) (copies xl/xr for tensor legs).
Series variables are u, v, w, z, u1, u2, ...

The order of two symbols is a pure function of their identity, so it does
not depend on creation order.
"""

from __future__ import annotations

from functools import total_ordering

# roles, in increasing order
ROLE_PARAM = 0
ROLE_CARTAN = 1
ROLE_ALPHABET = 2
ROLE_SERIES = 3

# copy tags for tensor legs: 0 = plain, 1 = left leg, 2 = right leg,
# 3 = middle leg of triple tensors
PLAIN, LEFT, RIGHT, MID = 0, 1, 2, 3

_PARAM_RANK = {"t1": 0, "t2": 1, "hbar": 2, "beta": 3}
_SERIES_NAMES = ("u", "v", "w", "z")


@total_ordering
class Symbol:
    """An interned indeterminate with a deterministic sort key."""

    __slots__ = ("name", "role", "key")
    _registry: dict[str, "Symbol"] = {}

    def __new__(cls, name: str, role: int, key: tuple):
        sym = cls._registry.get(name)
        if sym is not None:
            return sym
        sym = object.__new__(cls)
        sym.name = name
        sym.role = role
        sym.key = (role,) + key
        cls._registry[name] = sym
        return sym

    def __repr__(self):
        return self.name

    def __lt__(self, other):
        return self.key < other.key

    # identity semantics: symbols are interned, so the default object
    # __eq__/__hash__ are correct and run at C speed


def param(name: str) -> Symbol:
    if name not in _PARAM_RANK:
        raise ValueError(f"unknown parameter {name!r}")
    return Symbol(name, ROLE_PARAM, (_PARAM_RANK[name],))


T1 = param("t1")
T2 = param("t2")
HBAR = param("hbar")
BETA = param("beta")


def cartan_h(vertex: str, copy: int = PLAIN) -> Symbol:
    """Collapsed Cartan variable h(k); hl(k)/hr(k) on tensor legs."""
    prefix = {PLAIN: "h", LEFT: "hl", RIGHT: "hr", MID: "hm"}[copy]
    # index -1 places h(k) before every g(k,r) at the same vertex
    return Symbol(f"{prefix}({vertex})", ROLE_CARTAN, (str(vertex), -1, copy))


def cartan_g(vertex: str, r: int, copy: int = PLAIN) -> Symbol:
    """Free generator g(k,r) of the symbolic Cartan ring (degree-r mode)."""
    prefix = {PLAIN: "g", LEFT: "gl", RIGHT: "gr", MID: "gm"}[copy]
    if r < 0:
        raise ValueError("cartan mode index must be nonnegative")
    return Symbol(f"{prefix}({vertex},{r})", ROLE_CARTAN, (str(vertex), r, copy))


def alphabet(vertex: str, slot: int, copy: int = PLAIN) -> Symbol:
    """Slot coordinate x(i,s); xl/xr are the tensor-leg copies."""
    prefix = {PLAIN: "x", LEFT: "xl", RIGHT: "xr", MID: "xm"}[copy]
    if slot < 1:
        raise ValueError("slots are 1-based")
    return Symbol(f"{prefix}({vertex},{slot})", ROLE_ALPHABET, (copy, str(vertex), slot))


def series_var(name: str) -> Symbol:
    """A formal series variable: u, v, w, z or an indexed one like u1."""
    if name in _SERIES_NAMES:
        return Symbol(name, ROLE_SERIES, (_SERIES_NAMES.index(name), 0))
    base, idx = name.rstrip("0123456789"), name[len(name.rstrip("0123456789")):]
    if base in _SERIES_NAMES and idx:
        return Symbol(name, ROLE_SERIES, (_SERIES_NAMES.index(base), int(idx)))
    raise ValueError(f"not a series variable: {name!r}")


def lookup(name: str) -> Symbol | None:
    """Find an already-interned symbol by name."""
    return Symbol._registry.get(name)
