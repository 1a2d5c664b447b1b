"""Independent semantic oracle for one existential quantifier.

``exists_oracle`` decides ``exists x. body`` at concrete parameter values by
evaluating ``body`` on a finite set of representatives of x.  Truth of
``body`` as a function of x only changes at points computed from its atoms,
so one point per region suffices:

* the floor of x is scanned over every integer near a threshold, padded by
  two periods of the congruence moduli;
* the fractional part of x runs over all frac thresholds and midpoints;
* in LEX the hi part of x runs over critical values, midpoints and one point
  beyond each end.
"""
from __future__ import annotations

from fractions import Fraction
from math import ceil, floor, lcm

from .semantics import LEX, Lex, eval_qf, floor_val, frac_val
from .syntax import FloorCong, FloorGE, FracGE, LinInL, atomize, iter_atoms


def _hi(v) -> Fraction:
    return v.hi if isinstance(v, Lex) else Fraction(0)


def _lo(v) -> Fraction:
    return v.lo if isinstance(v, Lex) else v


def _points(crit: set[Fraction]) -> list[Fraction]:
    pts = sorted(crit)
    if not pts:
        return [Fraction(0)]
    out = [pts[0] - 1, pts[-1] + 1] + pts
    out += [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    return sorted(set(out))


def representatives(model, x: str, body, a: dict) -> list:
    """Values of x covering every region on which ``body`` is constant."""
    floor_thr: set[Fraction] = set()
    frac_thr: set[Fraction] = {Fraction(0)}
    hi_crit: set[Fraction] = set()
    period = 1

    def rest(cs, part):
        vals = [(c, a[n]) for n, c in cs if n != x]
        fn = {"floor": floor_val, "frac": frac_val, "": lambda m, v: v}[part]
        acc_hi = sum((c * _hi(fn(model, v)) for c, v in vals), Fraction(0))
        acc_lo = sum((c * _lo(fn(model, v)) for c, v in vals), Fraction(0))
        return acc_hi, acc_lo

    for atom in iter_atoms(atomize(body)):
        match atom:
            case FloorGE(cs, b) if x in dict(cs):
                c = dict(cs)[x]
                h, lo = rest(cs, "floor")
                hi_crit.add(-h / c)
                floor_thr.add((b - lo) / c)
            case FracGE(cs, b) if x in dict(cs):
                c = dict(cs)[x]
                _, lo = rest(cs, "frac")
                t = (b - lo) / c
                if 0 <= t < 1:
                    frac_thr.add(t)
            case FloorCong(v, _, m) if v == x:
                period = lcm(period, m)
            case LinInL(cs) if x in dict(cs):
                h, _ = rest(cs, "")
                hi_crit.add(-h / dict(cs)[x])

    ints = sorted({t for v in floor_thr for t in (floor(v), ceil(v))} or {0})
    lo_ints = range(ints[0] - 2 * period - 1, ints[-1] + 2 * period + 2)
    fr = sorted(frac_thr) + [Fraction(1)]
    fracs = fr[:-1] + [(p + q) / 2 for p, q in zip(fr, fr[1:])]
    los = [n + f for n in lo_ints for f in fracs]
    if model is not LEX:
        return los
    return [Lex(h, lo) for h in _points(hi_crit | {Fraction(0)}) for lo in los]


def exists_oracle(model, x: str, body, a: dict) -> bool:
    """Truth of ``exists x. body`` at the assignment ``a`` (which must not bind x)."""
    for v in representatives(model, x, body, a):
        if eval_qf(model, body, {**a, x: v}):
            return True
    return False
