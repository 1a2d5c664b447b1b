"""Rewriting surface atoms into special formulas.

Every linear term splits as ``F + G`` where ``F`` collects floors (an element
of Z) and ``G = sum b_i * frac(x_i)`` ranges over a bounded standard interval.
``F + G >= 0`` then holds iff ``F >= t and G >= -t`` for ``t = F``, and only
the finitely many ``t`` (multiples of the gcd of the floor coefficients)
whose threshold ``-t`` falls between the bounds of ``G`` need testing.  Equalities and congruences are split the same way.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd, lcm

from .formula import (
    FALSE, TRUE, And, Atom, Cmp, Cong, Const, Exists, FloorCong, FloorGE, Forall, Formula,
    FracGE, Iff, Implies, InL, InZ, LinInL, Not, Or, QisL, SpecialAtom, conj, disj,
    floor_cong, floor_ge, frac_ge, lin_in_l, make_coeffs, neg,
)
from .linear import FLOOR, FRAC, PLAIN, LinearForm, Var


def split_parts(form: LinearForm) -> tuple[dict[str, int], dict[str, int], int]:
    """Integer floor coefficients, frac coefficients and constant of ``form``.

    ``form`` must already have integral coefficients.  A plain variable ``x``
    contributes to both sides since ``x = floor(x) + frac(x)``.
    """
    fl: dict[str, int] = {}
    fr: dict[str, int] = {}
    for key, c in form.terms:
        if c.denominator != 1:
            raise ValueError(f"non-integral coefficient in {form}")
        c = c.numerator
        if key.part in (PLAIN, FLOOR):
            fl[key.name] = fl.get(key.name, 0) + c
        if key.part in (PLAIN, FRAC):
            fr[key.name] = fr.get(key.name, 0) + c
    if form.const.denominator != 1:
        raise ValueError(f"non-integral constant in {form}")
    fl = {n: c for n, c in fl.items() if c}
    fr = {n: c for n, c in fr.items() if c}
    return fl, fr, form.const.numerator


def frac_range(fr: dict[str, int]) -> tuple[int, int, bool, bool]:
    """Bounds of ``sum fr[x] * frac(x)``: (lo, hi, lo_attained, hi_attained)."""
    lo = sum(c for c in fr.values() if c < 0)
    hi = sum(c for c in fr.values() if c > 0)
    return lo, hi, all(c > 0 for c in fr.values()), all(c < 0 for c in fr.values())


def _floor_step(fl: dict[str, int]) -> int:
    # the floor part only takes multiples of the gcd of its coefficients
    g = 0
    for c in fl.values():
        g = gcd(g, c)
    return g


def _cut_points(top: int, bottom: int, g: int) -> range:
    """Multiples of ``g`` from the least one >= ``top`` down to just above ``bottom``."""
    return range(-((-top) // g) * g, bottom, -g)


def ge_zero(form: LinearForm) -> Formula:
    """Special formula for ``form >= 0``."""
    fl, fr, r = split_parts(form.cleared())
    if not fr:
        return floor_ge(fl, -r)
    if not fl:
        return frac_ge(fr, -r)
    lo, hi, _, hi_attained = frac_range(fr)
    top = hi if hi_attained else hi - 1
    # F >= t and G >= -t - r for t = F; only G-thresholds in [lo, top] matter
    return disj(conj((floor_ge(fl, t), frac_ge(fr, -t - r)))
                for t in _cut_points(-r - lo, -r - top - 1, _floor_step(fl)))


def gt_zero(form: LinearForm) -> Formula:
    """Special formula for ``form > 0``.

    With ``F`` integral, ``F + G > 0`` iff ``F >= t and G > -t`` for
    ``t = F``; the strict frac comparison is a negated atom.
    """
    fl, fr, r = split_parts(form.cleared())
    if not fr:
        return floor_ge(fl, 1 - r)
    nfr = {n: -c for n, c in fr.items()}
    if not fl:
        return neg(frac_ge(nfr, r))
    lo, hi, _, _ = frac_range(fr)
    return disj(conj((floor_ge(fl, t), neg(frac_ge(nfr, t + r))))
                for t in _cut_points(1 - r - lo, -r - hi, _floor_step(fl)))


def eq_zero(form: LinearForm) -> Formula:
    """Special formula for ``form = 0``."""
    fl, fr, r = split_parts(form.cleared())
    if not fr:
        return conj((floor_ge(fl, -r), floor_ge({n: -c for n, c in fl.items()}, r)))
    nfr = {n: -c for n, c in fr.items()}
    if not fl:
        return conj((frac_ge(fr, -r), frac_ge(nfr, r)))
    nfl = {n: -c for n, c in fl.items()}
    g = _floor_step(fl)
    lo, hi, lo_att, hi_att = frac_range(fr)
    out = []
    for j in range(lo if lo_att else lo + 1, (hi if hi_att else hi - 1) + 1):
        if (j + r) % g:
            continue
        out.append(conj((floor_ge(fl, -j - r), floor_ge(nfl, j + r),
                         frac_ge(fr, j), frac_ge(nfr, -j))))
    return disj(out)


def floor_congruence(fl: dict[str, int], c: int, m: int) -> Formula:
    """Special formula for ``sum fl[x] * floor(x) ≡ c (mod m)``.

    Each variable matters only modulo ``m / gcd(coeff, m)``; all but the last
    variable are enumerated and the last one is solved for.
    """
    items = sorted((n, a % m) for n, a in fl.items() if a % m)
    c %= m
    if not items:
        return Const(c == 0)
    *front, (last, a_last) = items
    g_last = gcd(a_last, m)
    m_last = m // g_last
    a_red = a_last // g_last
    inv = pow(a_red, -1, m_last) if m_last > 1 else 0
    mods = [m // gcd(a, m) for _, a in front]
    out = []
    for residues in product(*(range(mi) for mi in mods)):
        rest = (c - sum(a * r for (_, a), r in zip(front, residues))) % m
        if rest % g_last:
            continue
        y = (rest // g_last) * inv % m_last if m_last > 1 else 0
        lits = [floor_cong(n, r, mi) for (n, _), r, mi in zip(front, residues, mods)]
        lits.append(floor_cong(last, y, m_last))
        out.append(conj(lits))
    return disj(out)


def cong_zero(form: LinearForm, m: int) -> Formula:
    """Special formula for ``form ≡ 0 (mod m)``, i.e. ``form / m`` in Z."""
    d = form.denominator_lcm()
    fl, fr, r = split_parts(form * d)
    big = m * d
    if not fr:
        return floor_congruence(fl, -r, big)
    lo, hi, lo_att, hi_att = frac_range(fr)
    nfr = {n: -c for n, c in fr.items()}
    by_residue: dict[int, list[Formula]] = {}
    for j in range(lo if lo_att else lo + 1, (hi if hi_att else hi - 1) + 1):
        frac_eq = conj((frac_ge(fr, j), frac_ge(nfr, -j)))
        by_residue.setdefault((-r - j) % big, []).append(frac_eq)
    return disj(conj((floor_congruence(fl, res, big), disj(eqs)))
                for res, eqs in sorted(by_residue.items()))


def in_l(form: LinearForm) -> Formula:
    """Special formula for ``form`` in L.

    Fractional parts and rational constants all lie in L, so only the plain
    coefficients (with floors counted as their variable) survive.
    """
    acc: dict[str, Fraction] = {}
    for key, c in form.terms:
        if key.part in (PLAIN, FLOOR):
            acc[key.name] = acc.get(key.name, Fraction(0)) + c
    d = 1
    for c in acc.values():
        d = lcm(d, c.denominator)
    return lin_in_l({n: int(c * d) for n, c in acc.items()})


def ne_zero(form: LinearForm) -> Formula:
    return disj((gt_zero(form), gt_zero(-form)))


def not_cong_zero(form: LinearForm, m: int) -> Formula:
    """Special formula for ``form`` not ≡ 0 (mod m), as a disjunction."""
    d = form.denominator_lcm()
    fl, fr, r = split_parts(form * d)
    big = m * d
    if not fr:
        return disj(floor_congruence(fl, c, big) for c in range(big) if c != -r % big)
    lo, hi, lo_att, hi_att = frac_range(fr)
    nfr = {n: -c for n, c in fr.items()}
    out = []
    for j in range(lo if lo_att else lo + 1, (hi if hi_att else hi - 1) + 1):
        # G = j but the floor part has the wrong residue
        frac_eq = conj((frac_ge(fr, j), frac_ge(nfr, -j)))
        wrong = disj(floor_congruence(fl, c, big) for c in range(big) if c != (-r - j) % big)
        out.append(conj((frac_eq, wrong)))
    for j in range(lo, hi):
        # j < G < j + 1
        out.append(conj((neg(frac_ge(nfr, -j)), neg(frac_ge(fr, j + 1)))))
    return disj(out)


def atomize_atom(a: Atom, positive: bool = True) -> Formula:
    """Special formula for ``a`` (or its negation), free of negated disjunctions.

    Negative literals are rewritten directly into disjunctions so that the
    output stays close to disjunctive normal form.
    """
    match a:
        case SpecialAtom():
            return a if positive else negate_special(a)
        case Cmp(lhs, rel, rhs):
            t = lhs - rhs
            if not positive:
                rel = _NEGATED[rel]
            match rel:
                case ">=":
                    return ge_zero(t)
                case "<=":
                    return ge_zero(-t)
                case ">":
                    return gt_zero(t)
                case "<":
                    return gt_zero(-t)
                case "=":
                    return eq_zero(t)
                case "!=":
                    return ne_zero(t)
        case InZ(t):
            return cong_zero(t, 1) if positive else not_cong_zero(t, 1)
        case Cong(t, k, m):
            return cong_zero(t - k, m) if positive else not_cong_zero(t - k, m)
        case InL(t):
            return in_l(t) if positive else neg(in_l(t))
    raise TypeError(f"cannot atomize {a!r}")


_NEGATED = {">=": "<", "<=": ">", ">": "<=", "<": ">=", "=": "!="}


def negate_special(a: SpecialAtom) -> Formula:
    """Negation of a special atom without a ``Not`` over floor atoms."""
    match a:
        case FloorGE(cs, b):
            return floor_ge({n: -c for n, c in cs}, 1 - b)
        case FloorCong(v, k, m):
            return disj(FloorCong(v, r, m) for r in range(m) if r != k)
    return neg(a)


def atomize(f: Formula, positive: bool = True) -> Formula:
    """Quantifier-free ``f`` (negated unless ``positive``) with special atoms only.

    The output is in negation normal form; only FracGE, LinInL and QisL
    atoms appear under ``not``.
    """
    match f:
        case Const(v):
            return Const(v == positive)
        case Atom():
            return atomize_atom(f, positive)
        case Not(arg):
            return atomize(arg, not positive)
        case And(args):
            return (conj if positive else disj)(atomize(g, positive) for g in args)
        case Or(args):
            return (disj if positive else conj)(atomize(g, positive) for g in args)
        case Implies(lhs, rhs):
            if positive:
                return disj((atomize(lhs, False), atomize(rhs)))
            return conj((atomize(lhs), atomize(rhs, False)))
        case Iff(lhs, rhs):
            a, b = atomize(lhs), atomize(rhs)
            na, nb = atomize(lhs, False), atomize(rhs, False)
            if positive:
                return disj((conj((a, b)), conj((na, nb))))
            return disj((conj((a, nb)), conj((na, b))))
        case Exists() | Forall():
            raise ValueError("atomize expects a quantifier-free formula")
    raise TypeError(f"unknown node {f!r}")


def as_special(a: Atom) -> SpecialAtom | None:
    """The special atom ``a`` literally is (up to clearing denominators)."""
    match a:
        case SpecialAtom():
            return a
        case Cmp(lhs, rel, rhs) if rel in (">=", "<="):
            t = lhs - rhs if rel == ">=" else rhs - lhs
            parts = {k.part for k in t.keys()}
            if len(parts) != 1 or PLAIN in parts:
                return None
            t = t.cleared()
            cs = make_coeffs((k.name, int(c)) for k, c in t.terms)
            return (FracGE if parts == {FRAC} else FloorGE)(cs, -int(t.const))
        case Cong(t, k, m):
            if len(t.terms) == 1 and t.const == 0:
                key, c = t.terms[0]
                if key.part == FLOOR and c == 1:
                    return FloorCong(key.name, k, m)
            return None
        case InL(t):
            if t.const != 0 or any(k.part != PLAIN for k in t.keys()) or t.is_constant():
                return None
            t = t.cleared()
            return LinInL(make_coeffs((k.name, int(c)) for k, c in t.terms))
    return None


def special_to_surface(a: Atom) -> Atom:
    """Surface atom with the same meaning as special atom ``a``."""
    match a:
        case FracGE(cs, b):
            return Cmp(LinearForm.make((Var(n, FRAC), c) for n, c in cs), ">=", LinearForm.constant(b))
        case FloorGE(cs, b):
            return Cmp(LinearForm.make((Var(n, FLOOR), c) for n, c in cs), ">=", LinearForm.constant(b))
        case FloorCong(v, k, m):
            return Cong(LinearForm.var(v, FLOOR), k, m)
        case LinInL(cs):
            return InL(LinearForm.make((Var(n, PLAIN), c) for n, c in cs))
    return a

