"""Syntax trees for formulas over <Z, L, +, 0, 1, <>.

Atoms come in two families.  The surface atoms (:class:`Cmp`, :class:`InZ`,
:class:`InL`, :class:`Cong`) carry arbitrary linear terms and are what the
parser produces.  The special atoms (:class:`FracGE`, :class:`FloorGE`,
:class:`FloorCong`, :class:`LinInL`, :class:`QisL`) are the five building
blocks every formula reduces to; their coefficients are plain integers keyed
by variable name.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator, Mapping, Union

from .linear import LinearForm, cached_hash

RELS = ("<", "<=", "=", ">=", ">")

Coeffs = tuple[tuple[str, int], ...]


def make_coeffs(items: Mapping[str, int] | Iterable[tuple[str, int]]) -> Coeffs:
    acc: dict[str, int] = {}
    pairs = items.items() if isinstance(items, Mapping) else items
    for name, c in pairs:
        acc[name] = acc.get(name, 0) + int(c)
    return tuple(sorted((n, c) for n, c in acc.items() if c != 0))


def neg_coeffs(coeffs: Coeffs) -> Coeffs:
    return tuple((n, -c) for n, c in coeffs)


def coeffs_gcd(coeffs: Coeffs) -> int:
    g = 0
    for _, c in coeffs:
        g = gcd(g, c)
    return g


class Formula:
    """Base class; concrete nodes are frozen dataclasses."""

    __slots__ = ()

    def __and__(self, other: Formula) -> Formula:
        return And((self, other))

    def __or__(self, other: Formula) -> Formula:
        return Or((self, other))

    def __invert__(self) -> Formula:
        return Not(self)

    def __str__(self) -> str:
        from .printer import to_text
        return to_text(self)


@dataclass(frozen=True, repr=False)
class Const(Formula):
    value: bool

    def __repr__(self) -> str:
        return "TRUE" if self.value else "FALSE"


TRUE = Const(True)
FALSE = Const(False)


class Atom(Formula):
    __slots__ = ()


class SpecialAtom(Atom):
    __slots__ = ()


@dataclass(frozen=True)
class Cmp(Atom):
    lhs: LinearForm
    rel: str
    rhs: LinearForm

    def __post_init__(self) -> None:
        if self.rel not in RELS:
            raise ValueError(f"unknown relation {self.rel!r}")


@dataclass(frozen=True)
class InZ(Atom):
    term: LinearForm


@dataclass(frozen=True)
class InL(Atom):
    term: LinearForm


@dataclass(frozen=True)
class Cong(Atom):
    """``term ≡ k (mod m)``, i.e. ``(term - k) / m`` lies in Z."""

    term: LinearForm
    k: int
    m: int

    def __post_init__(self) -> None:
        if self.m <= 0 or not 0 <= self.k < self.m:
            raise ValueError(f"congruence needs 0 <= k < m, got k={self.k}, m={self.m}")


@dataclass(frozen=True)
class QisL(SpecialAtom):
    """The sentence Q = L."""


@dataclass(frozen=True)
class FracGE(SpecialAtom):
    """``sum n_i * frac(x_i) >= bound``."""

    coeffs: Coeffs
    bound: int


@dataclass(frozen=True)
class FloorGE(SpecialAtom):
    """``sum n_i * floor(x_i) >= bound``."""

    coeffs: Coeffs
    bound: int


@dataclass(frozen=True)
class FloorCong(SpecialAtom):
    """``floor(var) ≡ k (mod m)``."""

    var: str
    k: int
    m: int

    def __post_init__(self) -> None:
        if self.m <= 0 or not 0 <= self.k < self.m:
            raise ValueError(f"congruence needs 0 <= k < m, got k={self.k}, m={self.m}")


@dataclass(frozen=True)
class LinInL(SpecialAtom):
    """``sum n_i * x_i`` lies in L."""

    coeffs: Coeffs


@cached_hash
@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@cached_hash
@dataclass(frozen=True)
class And(Formula):
    args: tuple[Formula, ...]


@cached_hash
@dataclass(frozen=True)
class Or(Formula):
    args: tuple[Formula, ...]


@cached_hash
@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@cached_hash
@dataclass(frozen=True)
class Iff(Formula):
    lhs: Formula
    rhs: Formula


@cached_hash
@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@cached_hash
@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


Quantifier = Union[Exists, Forall]


def conj(args: Iterable[Formula]) -> Formula:
    """Flattening conjunction with constant folding."""
    out: list[Formula] = []
    for a in args:
        if a == TRUE:
            continue
        if a == FALSE:
            return FALSE
        if isinstance(a, And):
            out.extend(a.args)
        else:
            out.append(a)
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(args: Iterable[Formula]) -> Formula:
    """Flattening disjunction with constant folding."""
    out: list[Formula] = []
    for a in args:
        if a == FALSE:
            continue
        if a == TRUE:
            return TRUE
        if isinstance(a, Or):
            out.extend(a.args)
        else:
            out.append(a)
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else Or(tuple(out))


def neg(f: Formula) -> Formula:
    if isinstance(f, Const):
        return Const(not f.value)
    if isinstance(f, Not):
        return f.arg
    return Not(f)


# Smart constructors for special atoms: fold constants, keep coefficients
# integral and reduce by content where that is exact.

def frac_ge(coeffs: Mapping[str, int] | Iterable[tuple[str, int]], bound: int) -> Formula:
    cs = make_coeffs(coeffs)
    if not cs:
        return Const(0 >= bound)
    lo = sum(c for _, c in cs if c < 0)
    hi = sum(c for _, c in cs if c > 0)
    # sum over [lo, hi), attaining lo; hi attained only with no positive coefficient
    if bound <= lo:
        return TRUE
    if bound > hi or (bound == hi and hi > 0):
        return FALSE
    g = coeffs_gcd(cs)
    if g > 1 and bound % g == 0:
        cs = tuple((n, c // g) for n, c in cs)
        bound //= g
    return FracGE(cs, bound)


def floor_ge(coeffs: Mapping[str, int] | Iterable[tuple[str, int]], bound: int) -> Formula:
    cs = make_coeffs(coeffs)
    if not cs:
        return Const(0 >= bound)
    g = coeffs_gcd(cs)
    if g > 1:
        cs = tuple((n, c // g) for n, c in cs)
        bound = -((-bound) // g)  # ceil(bound / g)
    return FloorGE(cs, bound)


def floor_cong(var: str, k: int, m: int) -> Formula:
    if m == 1:
        return TRUE
    return FloorCong(var, k % m, m)


def lin_in_l(coeffs: Mapping[str, int] | Iterable[tuple[str, int]]) -> Formula:
    cs = make_coeffs(coeffs)
    if not cs:
        return TRUE
    g = coeffs_gcd(cs)
    if cs[0][1] < 0:
        g = -g
    return LinInL(tuple((n, c // g) for n, c in cs))


def iter_atoms(f: Formula) -> Iterator[Atom]:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            yield g
        elif isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, (And, Or)):
            stack.extend(reversed(g.args))
        elif isinstance(g, (Implies, Iff)):
            stack.extend((g.rhs, g.lhs))
        elif isinstance(g, (Exists, Forall)):
            stack.append(g.body)


def is_quantifier_free(f: Formula) -> bool:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (Exists, Forall)):
            return False
        if isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, (And, Or)):
            stack.extend(g.args)
        elif isinstance(g, (Implies, Iff)):
            stack.extend((g.lhs, g.rhs))
    return True


def atom_names(a: Atom) -> set[str]:
    match a:
        case Cmp(lhs, _, rhs):
            return lhs.names() | rhs.names()
        case InZ(t) | InL(t) | Cong(t, _, _):
            return t.names()
        case FracGE(cs, _) | FloorGE(cs, _) | LinInL(cs):
            return {n for n, _ in cs}
        case FloorCong(v, _, _):
            return {v}
    return set()
