"""Quantifier elimination down to special formulas, and sentence deciders.

A single existential ``exists x. theta`` with ``theta`` special is handled by
putting ``theta`` in disjunctive normal form (lazily, distributing one
disjunction at a time so contradictory branches are pruned early) and
splitting every conjunction into a part about ``frac(x)`` and a part about
``floor(x)``; the two parts are independent because any value in [0, 1) can be
added to any element of Z.

* The fractional part is a dense linear problem on (0, 1), solved by
  substituting an equality or by Fourier-Motzkin pairing of bounds, plus the
  separate case ``frac(x) = 0``.
* The integer part is scaled so that ``floor(x)`` has coefficient 1, its
  congruences are merged by the Chinese remainder theorem, and the remaining
  bounds and L-conditions are resolved by the case analysis on whether some
  ``x - l`` is required to lie in L.
"""
from __future__ import annotations

from collections import Counter
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterator, Sequence

from .syntax.formula import (
    FALSE, TRUE, And, Atom, Const, Exists, FloorCong, FloorGE, Forall, Formula, FracGE, Iff,
    Implies, InL, LinInL, Not, Or, QisL, atom_names, conj, disj, is_quantifier_free, iter_atoms,
    neg,
)
from .syntax.linear import FLOOR, FRAC, LinearForm, Var, format_linear
from .syntax.special import atomize, eq_zero, floor_congruence, ge_zero, gt_zero, in_l
from .syntax.transform import free_vars, is_literal, nnf, simplify

# -- case accounting ------------------------------------------------------

CASES = (
    "frac_zero",        # the frac(x) = 0 disjunct
    "frac_equality",    # an equation n*frac(x) = l fixes frac(x)
    "frac_pairs",       # Fourier-Motzkin pairing of strict/closed bounds
    "frac_points",      # frac(x) removed by test points before expanding
    "floor_scaling",    # coefficients of floor(x) unified, mod-n trick applied
    "crt_merge",        # two congruences on floor(x) combined
    "crt_unsat",        # incompatible congruences
    "closure_split",    # case split making bounds and L-conditions share forms
    "floor_pairs",      # no x - l in L: pairs l+ >= l- with l+ - l- not in L
    "floor_one_sided",  # no x - l in L, bounds on one side only: Q != L
    "floor_unbounded",  # no bounds at all, only a congruence
    "floor_in_l",       # some x - l in L: shift and bounded residue search
    "floor_pinned",     # an upper and a lower bound differ by a small constant
    "floor_presburger", # no L-conditions: pairwise bounded residue search
    "floor_cosets",     # no x - l in L, many forms: split on the coset of x
)

_cases: ContextVar[Counter | None] = ContextVar("qe_cases", default=None)


def _hit(name: str) -> None:
    c = _cases.get()
    if c is not None:
        c[name] += 1


@contextmanager
def record_cases() -> Iterator[Counter]:
    """Count which elimination cases fire inside the ``with`` block."""
    counter: Counter = Counter()
    token = _cases.set(counter)
    try:
        yield counter
    finally:
        _cases.reset(token)


class NotASentence(ValueError):
    pass


class CompletenessViolation(AssertionError):
    """The two completions disagree on a sentence without L; an engine bug."""


# -- Chinese remainder ----------------------------------------------------

def crt_merge(c1: tuple[int, int], c2: tuple[int, int]) -> tuple[int, int] | None:
    """Combine ``y ≡ k0 (mod m0)`` and ``y ≡ k1 (mod m1)``; None if incompatible."""
    (k0, m0), (k1, m1) = c1, c2
    g = gcd(m0, m1)
    if (k1 - k0) % g:
        return None
    m = lcm(m0, m1)
    # k0 + m0 * t ≡ k1 (mod m1)  =>  t ≡ (k1 - k0)/g * inv(m0/g) (mod m1/g)
    step = m1 // g
    t = ((k1 - k0) // g) * pow(m0 // g, -1, step) % step if step > 1 else 0
    return (k0 + m0 * t) % m, m


# -- fractional part ------------------------------------------------------

@dataclass
class FracProblem:
    """Constraints on ``X = frac(var)`` with forms over fractional parts.

    ``equalities`` holds pairs ``(n, l)`` for ``n * X = l``; bounds are
    ``X > l`` / ``X >= l`` (lower) and ``X < l`` / ``X <= l`` (upper) with the
    flag telling whether the bound is strict.
    """

    var: str
    equalities: list[tuple[int, LinearForm]] = field(default_factory=list)
    lower: list[tuple[LinearForm, bool]] = field(default_factory=list)
    upper: list[tuple[LinearForm, bool]] = field(default_factory=list)

    def is_empty(self) -> bool:
        return not (self.equalities or self.lower or self.upper)

    def at_zero(self) -> Formula:
        """The constraints with ``X = 0`` plugged in."""
        out = [eq_zero(l) for _, l in self.equalities]
        out += [gt_zero(-l) if s else ge_zero(-l) for l, s in self.lower]
        out += [gt_zero(u) if s else ge_zero(u) for u, s in self.upper]
        return conj(out)

    def open_unit(self) -> FracProblem:
        """The same problem with ``0 < X < 1`` adjoined."""
        return replace(self, lower=self.lower + [(LinearForm(), True)],
                       upper=self.upper + [(LinearForm.constant(1), True)])


def _bound(value: LinearForm, lo: LinearForm, strict: bool) -> Formula:
    d = value - lo
    return gt_zero(d) if strict else ge_zero(d)


def eliminate_frac(p: FracProblem) -> Formula:
    """Special formula equivalent to ``exists X`` satisfying ``p``.

    The caller adjoins ``0 < X < 1`` (see :meth:`FracProblem.open_unit`).
    """
    if p.equalities:
        _hit("frac_equality")
        n, l = p.equalities[0]
        x = l / n
        out = [eq_zero(x * n2 - l2) for n2, l2 in p.equalities[1:]]
        out += [_bound(x, lo, s) for lo, s in p.lower]
        out += [_bound(up, x, s) for up, s in p.upper]
        return conj(out)
    _hit("frac_pairs")
    return conj(_bound(up, lo, s1 or s2) for lo, s1 in p.lower for up, s2 in p.upper)


# -- integer part ---------------------------------------------------------

@dataclass
class FloorProblem:
    """Constraints on an integer ``Y`` with forms over floors of parameters.

    ``Y <= u`` for u in ``upper``, ``Y >= l`` for l in ``lower``,
    ``Y - j`` in L for j in ``in_l``, not in L for j in ``not_in_l``, and
    ``Y ≡ k (mod m)`` for ``congruence = (k, m)``.
    """

    var: str
    congruence: tuple[int, int] | None = None
    upper: list[LinearForm] = field(default_factory=list)
    lower: list[LinearForm] = field(default_factory=list)
    in_l: list[LinearForm] = field(default_factory=list)
    not_in_l: list[LinearForm] = field(default_factory=list)


def _uniq(forms: Sequence[LinearForm]) -> list[LinearForm]:
    return list(dict.fromkeys(forms))


def _l_key(form: LinearForm) -> LinearForm:
    # rational constants lie in L, so L-membership of Y - l ignores l's constant
    return form.without_const()


def _residue_formula(form: LinearForm, k: int, m: int) -> Formula:
    """``form ≡ k (mod m)`` for an integral form over floors."""
    fl = {key.name: int(c) for key, c in form.terms}
    return floor_congruence(fl, k - int(form.const), m)


def bounded_residue(lo: LinearForm, up: LinearForm, k: int, m: int) -> Formula:
    """``exists Y in Z: lo <= Y <= up and Y ≡ k (mod m)`` without the quantifier.

    The largest admissible ``Y`` is ``up - a`` where ``a`` is the residue of
    ``up - k``; enumerate ``a``.
    """
    return disj(conj((_residue_formula(up, (k + a) % m, m), ge_zero(up - a - lo)))
                for a in range(m))


def _text_key(form: LinearForm) -> str:
    return format_linear(form)


_PINNED = 16


def _at_value(p: FloorProblem, e: LinearForm, k: int, m: int) -> Formula:
    """The constraints of ``p`` with ``Y := e``."""
    parts = [_residue_formula(e, k, m)]
    parts += [ge_zero(u - e) for u in p.upper]
    parts += [ge_zero(e - l) for l in p.lower]
    parts += [in_l(e - j) for j in p.in_l]
    parts += [neg(in_l(e - j)) for j in p.not_in_l]
    return conj(parts)


def eliminate_floor(p: FloorProblem) -> Formula:
    """Special formula equivalent to ``exists Y in Z`` satisfying ``p``."""
    k, m = p.congruence or (0, 1)
    upper, lower = _uniq(p.upper), _uniq(p.lower)
    ins, outs = _uniq(p.in_l), _uniq(p.not_in_l)
    in_keys = {_l_key(j) for j in ins}
    if any(_l_key(j) in in_keys for j in outs):
        return FALSE

    # bounds a constant distance apart leave finitely many values for Y
    for u in upper:
        for l in lower:
            gap = u - l
            if gap.is_constant() and gap.const < _PINNED:
                _hit("floor_pinned")
                return disj(_at_value(p, l + a, k, m) for a in range(int(gap.const) + 1))

    if not ins and not outs:
        # Z alone is a Z-group: the tightest pair of bounds decides
        _hit("floor_presburger")
        return conj(bounded_residue(l, u, k, m) for u in upper for l in lower)

    if ins:
        _hit("floor_in_l")
        s = min(ins, key=_text_key)
        parts: list[Formula] = []
        parts += [in_l(s - j) for j in ins if j != s]
        parts += [neg(in_l(s - j)) for j in outs]
        parts += [disj((ge_zero(u - s), in_l(u - s))) for u in upper]
        parts += [disj((ge_zero(s - l), in_l(l - s))) for l in lower]
        parts += [bounded_residue(l, u, k, m) for u in upper for l in lower]
        return conj(parts)

    if not upper and not lower and not outs:
        _hit("floor_unbounded")
        return TRUE
    out_keys = {_l_key(j) for j in outs}
    bound_keys = {_l_key(b) for b in upper + lower}
    missing = len({_l_key(b) for b in upper + lower} - out_keys) + len(out_keys - bound_keys)
    if missing > _CLOSURE_SPLITS:
        return _by_cosets(p, upper, lower, outs)

    # make every bound carry an L-condition and vice versa
    for b in upper + lower:
        if _l_key(b) not in out_keys:
            _hit("closure_split")
            return disj((eliminate_floor(replace(p, in_l=ins + [b])),
                         eliminate_floor(replace(p, not_in_l=outs + [b]))))
    for j in outs:
        if _l_key(j) not in bound_keys:
            _hit("closure_split")
            return disj((eliminate_floor(replace(p, lower=lower + [j])),
                         eliminate_floor(replace(p, upper=upper + [j]))))

    if not upper and not lower:
        _hit("floor_unbounded")
        return TRUE
    if not upper or not lower:
        _hit("floor_one_sided")
        return neg(QisL())
    _hit("floor_pairs")
    return conj(conj((ge_zero(u - l), neg(in_l(u - l)))) for u in upper for l in lower)


# closure splits double the work each; beyond this many, split on cosets instead
_CLOSURE_SPLITS = 2


def _by_cosets(p: FloorProblem, upper, lower, outs) -> Formula:
    """``exists Y`` for a problem with no positive L-condition, by the position of Y.

    Either Y lies in the coset ``s + L`` of a bound ``s`` (then the problem
    with ``Y - s`` in L applies), or Y lies outside every coset ``t + L`` of
    the forms t involved.  In the latter case Q != L, and the truth of every
    bound only depends on which coset Y sits just above (or whether it lies
    below them all); such gaps contain every residue.
    """
    _hit("floor_cosets")
    inside = [eliminate_floor(replace(p, in_l=[s])) for s in _uniq(upper + lower)]
    gaps = [] if lower else [TRUE]
    for s in _uniq(upper + lower + outs):
        parts = [disj((ge_zero(s - l), in_l(l - s))) for l in lower]
        parts += [conj((gt_zero(u - s), neg(in_l(u - s)))) for u in upper]
        gaps.append(conj(parts))
    return disj(inside + [conj((neg(QisL()), disj(gaps)))])


# -- one existential ------------------------------------------------------

def _mentions(f: Formula, x: str) -> bool:
    return x in free_vars(f)


def _expand_congruences(f: Formula, x: str) -> Formula:
    """Replace ``not floor(x) ≡ k`` by the disjunction of the other residues."""
    match f:
        case Not(FloorCong(v, k, m)) if v == x:
            return disj(FloorCong(v, r, m) for r in range(m) if r != k)
        case And(args):
            return conj(_expand_congruences(a, x) for a in args)
        case Or(args):
            return disj(_expand_congruences(a, x) for a in args)
    return f


def _coeff_of(cs, x: str) -> int:
    for n, c in cs:
        if n == x:
            return c
    return 0


def _others(cs, x: str, part: str) -> LinearForm:
    return LinearForm.make((Var(n, part), c) for n, c in cs if n != x)


def _frac_side(x: str, lits: Sequence[Formula]) -> Formula:
    p = FracProblem(x)
    for lit in lits:
        positive = not isinstance(lit, Not)
        cs, b = (lit if positive else lit.arg).coeffs, (lit if positive else lit.arg).bound
        a = _coeff_of(cs, x)
        l = (LinearForm.constant(b) - _others(cs, x, FRAC)) / a
        # positive: a*X >= l; negated: a*X < l
        if positive:
            (p.lower if a > 0 else p.upper).append((l, False))
        else:
            (p.upper if a > 0 else p.lower).append((l, True))
    return _solve_frac(p)


def eliminate_floor_literals(x: str, lits: Sequence[Formula]) -> Formula:
    """``exists x`` over a conjunction of floor-side literals: FLOOR_GE, L-atoms
    and congruences mentioning x (each literal must mention x)."""
    return _floor_side(x, lits)


def _floor_side(x: str, lits: Sequence[Formula]) -> Formula:
    ineqs: list[tuple[int, LinearForm]] = []       # a*Y >= l
    lins: list[tuple[int, LinearForm, bool]] = []  # a*Y + l in L (or not)
    congs: list[tuple[int, int]] = []
    for lit in lits:
        match lit:
            case FloorGE(cs, b):
                ineqs.append((_coeff_of(cs, x), LinearForm.constant(b) - _others(cs, x, FLOOR)))
            case FloorCong(_, k, m):
                congs.append((k, m))
            case LinInL(cs):
                lins.append((_coeff_of(cs, x), _others(cs, x, FLOOR), True))
            case Not(LinInL(cs)):
                lins.append((_coeff_of(cs, x), _others(cs, x, FLOOR), False))
            case _:
                raise ValueError(f"unexpected literal {lit!r}")
    return _solve_floor(x, ineqs, lins, congs)


def _is_frac_literal(lit: Formula) -> bool:
    return isinstance(lit, FracGE) or (isinstance(lit, Not) and isinstance(lit.arg, FracGE))


def _solve_frac(p: FracProblem) -> Formula:
    if p.is_empty():
        return TRUE
    # a closed lower and closed upper bound on the same form pin X down
    closed_up = {u for u, s in p.upper if not s}
    for lo, s in p.lower:
        if not s and lo in closed_up:
            p = FracProblem(p.var, p.equalities + [(1, lo)],
                            [(l2, s2) for l2, s2 in p.lower if (l2, s2) != (lo, False)],
                            [(u2, s2) for u2, s2 in p.upper if (u2, s2) != (lo, False)])
            break
    _hit("frac_zero")
    return disj((p.at_zero(), eliminate_frac(p.open_unit())))


def _solve_floor(x: str, ineqs, lins, congs) -> Formula:
    if not ineqs and not lins:
        merged: tuple[int, int] | None = (0, 1)
        for c in congs:
            merged = crt_merge(merged, c)
            if merged is None:
                _hit("crt_unsat")
                return FALSE
        _hit("floor_unbounded")
        return TRUE
    n = 1
    for a, *_ in ineqs + lins:
        n = lcm(n, abs(a))
    p = FloorProblem(x)
    all_congs = [(n * k % (n * m), n * m) for k, m in congs]
    if n > 1:
        _hit("floor_scaling")
        all_congs.append((0, n))
    for a, l in ineqs:
        s = n // abs(a)
        if a > 0:
            p.lower.append(l * s)
        else:
            p.upper.append(l * -s)
    for a, l, positive in lins:
        s = n // abs(a)
        j = l * -s if a > 0 else l * s
        (p.in_l if positive else p.not_in_l).append(j)
    merged = (0, 1)
    for c in all_congs:
        if merged != (0, 1):
            _hit("crt_merge")
        merged = crt_merge(merged, c)
        if merged is None:
            _hit("crt_unsat")
            return FALSE
    p.congruence = merged
    return eliminate_floor(p)


@lru_cache(maxsize=1 << 14)
def _kind(f: Formula, x: str) -> str:
    """'frac' or 'floor' if every atom of ``f`` about x concerns only that part."""
    kinds = {"frac" if isinstance(a, FracGE) else "floor"
             for a in iter_atoms(f) if x in atom_names(a)}
    return kinds.pop() if len(kinds) == 1 else "mixed"


def _any_of(parts: Iterator[Formula]) -> Formula:
    """Disjunction that stops producing parts once one of them is TRUE."""
    out = []
    for p in parts:
        if p == TRUE:
            return TRUE
        out.append(p)
    return disj(out)


def _congruence_clash(alt: Formula, rest: list[Formula]) -> bool:
    """Whether ``alt`` is a congruence incompatible with one among ``rest``."""
    if not isinstance(alt, FloorCong):
        return False
    return any(isinstance(r, FloorCong) and r.var == alt.var
               and crt_merge((r.k, r.m), (alt.k, alt.m)) is None for r in rest)


class _Eliminator:
    """Lazy DNF expansion for one variable, sharing work between branches."""

    def __init__(self, x: str):
        self.x = x
        self.memo: dict[tuple[bool, frozenset], Formula] = {}

    def side(self, frac: bool, lits: list[Formula]) -> Formula:
        key = (frac, frozenset(lits))
        r = self.memo.get(key)
        if r is None:
            r = (_frac_side if frac else _floor_side)(self.x, lits)
            self.memo[key] = r
        return r

    def conjunction(self, lits: list[Formula]) -> Formula:
        fr = [l for l in lits if _is_frac_literal(l)]
        fl = [l for l in lits if not _is_frac_literal(l)]
        return conj((self.side(True, fr) if fr else TRUE, self.side(False, fl) if fl else TRUE))

    def run(self, f: Formula) -> Formula:
        x = self.x
        if not _mentions(f, x):
            return f
        match f:
            case Or(args):
                return _any_of(self.run(a) for a in args)
            case And(args):
                free = [a for a in args if not _mentions(a, x)]
                dep = [a for a in args if _mentions(a, x)]
                if all(not isinstance(a, Or) for a in dep):
                    return conj(free + [self.conjunction(dep)])
                # the frac and floor parts of x vary independently
                groups: dict[str, list[Formula]] = {}
                for a in dep:
                    groups.setdefault(_kind(a, x), []).append(a)
                if "mixed" not in groups and len(groups) == 2:
                    return conj(free + [self.run(conj(g)) for g in groups.values()])
                branch = min((a for a in dep if isinstance(a, Or)), key=lambda a: len(a.args))
                rest = [a for a in dep if a is not branch]
                # later branches may assume the earlier literal alternatives fail
                alts, fails = [], []
                for alt in branch.args:
                    if _congruence_clash(alt, rest):
                        _hit("crt_unsat")
                        continue
                    r = self.run(simplify(conj(rest + fails + [alt])))
                    if r == TRUE:
                        return conj(free)
                    alts.append(r)
                    if is_literal(alt) and not isinstance(alt, FloorCong):
                        fails.append(_negate(alt))
                return conj(free + [disj(alts)])
        return self.conjunction([f])


DNF_BUDGET = 256


def _dnf_size(f: Formula, x: str, cap: int = DNF_BUDGET + 1) -> int:
    """Number of disjuncts (capped) the lazy expansion would create for x."""
    match f:
        case Or(args):
            return min(cap, sum(_dnf_size(a, x, cap) for a in args if _mentions(a, x)) or 1)
        case And(args):
            n = 1
            for a in args:
                if _mentions(a, x):
                    n = min(cap, n * _dnf_size(a, x, cap))
            return n
    return 1


def _frac_point(x: str, cs, b: int) -> tuple[int, LinearForm]:
    """Coefficient ``a`` of frac(x) and the point ``l`` where ``a*X + R = b``."""
    a = _coeff_of(cs, x)
    return a, (LinearForm.constant(b) - _others(cs, x, FRAC)) / a


def _at_frac(f: Formula, x: str, point: LinearForm, eps: bool,
             points: dict, memo: dict) -> Formula:
    """``f`` with frac(x) replaced by ``point`` (plus an infinitesimal if ``eps``).

    ``points`` maps each frac atom to its coefficient and boundary point.
    """
    r = memo.get(f)
    if r is not None:
        return r
    match f:
        case And(args):
            r = conj(_at_frac(a, x, point, eps, points, memo) for a in args)
        case Or(args):
            r = disj(_at_frac(a, x, point, eps, points, memo) for a in args)
        case FracGE() if f in points:
            a, l = points[f]
            d = (point - l) * a      # a*X + R - b at X = point
            r = gt_zero(d) if eps and a < 0 else ge_zero(d)
        case Not(FracGE() as g) if g in points:
            a, l = points[g]
            d = (l - point) * a
            r = ge_zero(d) if eps and a < 0 else gt_zero(d)
        case _:
            r = f
    memo[f] = r
    return r


def eliminate_frac_points(x: str, f: Formula) -> Formula:
    """Remove frac(x) from the NNF special formula ``f`` by test points.

    The set of frac(x) in [0, 1) satisfying ``f`` is a finite union of
    intervals whose left ends are 0 or a boundary point of some frac atom,
    either attained or approached from the right.
    """
    _hit("frac_points")
    points = {a: _frac_point(x, a.coeffs, a.bound) for a in iter_atoms(f)
              if isinstance(a, FracGE) and x in dict(a.coeffs)}
    bounds = dict.fromkeys(l for _, l in points.values())

    def at(point: LinearForm, eps: bool) -> Formula:
        return _at_frac(f, x, point, eps, points, {})

    out = [at(LinearForm(), False)]
    for l in bounds:
        inside = conj((ge_zero(l), gt_zero(LinearForm.constant(1) - l)))
        if inside == FALSE:
            continue
        out.append(conj((inside, disj((at(l, False), at(l, True))))))
    return disj(out)


def eliminate_exists(x: str, f: Formula) -> Formula:
    """Special formula equivalent to ``exists x. f`` for special ``f``."""
    f = _prepare(f, x)
    if _dnf_size(f, x) > DNF_BUDGET:
        f = simplify(eliminate_frac_points(x, f))
    return simplify(_Eliminator(x).run(f))


# -- full formulas --------------------------------------------------------

def qe(f: Formula) -> Formula:
    """Quantifier-free special formula equivalent to ``f``; innermost first."""
    return simplify(_qe(miniscope(nnf(f, expand_congruence=False))))


def miniscope(f: Formula) -> Formula:
    """Push quantifiers of an NNF formula as far inwards as they go."""
    match f:
        case And(args):
            return conj(miniscope(a) for a in args)
        case Or(args):
            return disj(miniscope(a) for a in args)
        case Exists(v, body) | Forall(v, body):
            body = miniscope(body)
            if v not in free_vars(body):
                return body
            spread, keep = (Or, And) if isinstance(f, Exists) else (And, Or)
            join = disj if spread is Or else conj
            if isinstance(body, spread):
                return join(miniscope(type(f)(v, a)) for a in body.args)
            if isinstance(body, keep):
                free = [a for a in body.args if v not in free_vars(a)]
                if free:
                    dep = [a for a in body.args if v in free_vars(a)]
                    inner = (conj if keep is And else disj)(dep)
                    return (conj if keep is And else disj)(free + [type(f)(v, inner)])
            return type(f)(v, body)
    return f


def _negate(f: Formula) -> Formula:
    return nnf(Not(f), expand_congruence=False)


def _qe(f: Formula, positive: bool = True) -> Formula:
    match f:
        case Const() | Atom() | Not() | And() | Or() | Implies() | Iff() if is_quantifier_free(f):
            return atomize(f, positive)
        case Not(arg):
            return _qe(arg, not positive)
        case And(args):
            return (conj if positive else disj)(_qe(a, positive) for a in args)
        case Or(args):
            return (disj if positive else conj)(_qe(a, positive) for a in args)
        case Implies(lhs, rhs):
            if positive:
                return disj((_qe(lhs, False), _qe(rhs)))
            return conj((_qe(lhs), _qe(rhs, False)))
        case Iff(lhs, rhs):
            a, b = _qe(lhs), _qe(rhs)
            na, nb = _negate(a), _negate(b)
            if positive:
                return disj((conj((a, b)), conj((na, nb))))
            return disj((conj((a, nb)), conj((na, b))))
        case Exists() | Forall():
            kind = type(f)
            names, body = [], f
            while isinstance(body, kind):
                names.append(body.var)
                body = body.body
            r = _eliminate_block(names, _qe(body, kind is Exists))
            return r if positive == (kind is Exists) else _negate(r)
    raise TypeError(f"unknown node {f!r}")


def _prepare(f: Formula, x: str) -> Formula:
    return simplify(_expand_congruences(nnf(f, expand_congruence=False), x))


def _eliminate_block(names: list[str], f: Formula) -> Formula:
    """``exists`` over every name, cheapest estimated expansion first."""
    names = [v for v in names if v in free_vars(f)]
    while names:
        if len(names) > 1:
            # ties keep the innermost-first order
            v = min(reversed(names), key=lambda v: _dnf_size(_prepare(f, v), v))
        else:
            v = names[0]
        names.remove(v)
        f = eliminate_exists(v, f)
    return f


def eval_sentence(f: Formula, q_is_l: bool) -> bool:
    """Truth value of a variable-free special formula given the value of Q = L."""
    match f:
        case Const(v):
            return v
        case QisL():
            return q_is_l
        case Not(arg):
            return not eval_sentence(arg, q_is_l)
        case And(args):
            return all(eval_sentence(a, q_is_l) for a in args)
        case Or(args):
            return any(eval_sentence(a, q_is_l) for a in args)
    raise ValueError(f"not a closed special formula: {f!r}")


def decide(f: Formula) -> tuple[bool, bool]:
    """Truth of the sentence ``f`` in the completions with Q = L and Q != L."""
    fv = free_vars(f)
    if fv:
        raise NotASentence(f"not a sentence; free variables: {', '.join(sorted(fv))}")
    r = qe(f)
    return eval_sentence(r, True), eval_sentence(r, False)


def decide_gg(f: Formula) -> bool:
    """Truth of an L-free sentence, which the theory without L already decides."""
    for a in iter_atoms(f):
        if isinstance(a, (InL, LinInL, QisL)):
            raise ValueError("decide_gg takes sentences without L and QisL")
    eq, ne = decide(f)
    if eq != ne:
        raise CompletenessViolation(f"completions disagree ({eq} vs {ne})")
    return eq
