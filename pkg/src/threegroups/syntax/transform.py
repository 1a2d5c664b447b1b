"""Structural transformations: free variables, renaming, substitution,
normalization, negation normal form and the simplifier."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import floor, gcd, lcm
from typing import Callable

from .formula import (
    FALSE, TRUE, And, Atom, Cmp, Coeffs, Cong, Const, Exists, FloorCong, FloorGE, Forall,
    Formula, FracGE, Iff, Implies, InL, InZ, LinInL, Not, Or, QisL, SpecialAtom, atom_names,
    coeffs_gcd, conj, disj, floor_cong, is_quantifier_free, iter_atoms, neg, neg_coeffs,
)
from .linear import FLOOR, FRAC, PLAIN, LinearForm, Var
from .special import as_special, special_to_surface


@lru_cache(maxsize=1 << 16)
def free_vars(f: Formula) -> frozenset[str]:
    match f:
        case Atom():
            return frozenset(atom_names(f))
        case Const():
            return frozenset()
        case Not(arg):
            return free_vars(arg)
        case And(args) | Or(args):
            out: set[str] = set()
            for a in args:
                out |= free_vars(a)
            return frozenset(out)
        case Implies(lhs, rhs) | Iff(lhs, rhs):
            return free_vars(lhs) | free_vars(rhs)
        case Exists(v, body) | Forall(v, body):
            return free_vars(body) - {v}
    raise TypeError(f"unknown node {f!r}")


def all_names(f: Formula) -> set[str]:
    out: set[str] = set()
    for a in iter_atoms(f):
        out |= atom_names(a)
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (Exists, Forall)):
            out.add(g.var)
            stack.append(g.body)
        elif isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, (And, Or)):
            stack.extend(g.args)
        elif isinstance(g, (Implies, Iff)):
            stack.extend((g.lhs, g.rhs))
    return out


def fresh_name(base: str, used: set[str]) -> str:
    i = 1
    while f"{base}_{i}" in used:
        i += 1
    name = f"{base}_{i}"
    used.add(name)
    return name


def map_atoms(f: Formula, fn: Callable[[Atom], Formula]) -> Formula:
    """Rebuild ``f`` with every atom replaced by ``fn(atom)`` (no capture checks)."""
    match f:
        case Atom():
            return fn(f)
        case Const():
            return f
        case Not(arg):
            return Not(map_atoms(arg, fn))
        case And(args):
            return And(tuple(map_atoms(a, fn) for a in args))
        case Or(args):
            return Or(tuple(map_atoms(a, fn) for a in args))
        case Implies(lhs, rhs):
            return Implies(map_atoms(lhs, fn), map_atoms(rhs, fn))
        case Iff(lhs, rhs):
            return Iff(map_atoms(lhs, fn), map_atoms(rhs, fn))
        case Exists(v, body):
            return Exists(v, map_atoms(body, fn))
        case Forall(v, body):
            return Forall(v, map_atoms(body, fn))
    raise TypeError(f"unknown node {f!r}")


def _rename_coeffs(cs: Coeffs, old: str, new: str) -> Coeffs:
    return tuple(sorted((new if n == old else n, c) for n, c in cs))


def rename_atom(a: Atom, old: str, new: str) -> Atom:
    def key(k: Var) -> Var:
        return Var(new, k.part) if k.name == old else k

    match a:
        case Cmp(lhs, rel, rhs):
            return Cmp(lhs.map_keys(key), rel, rhs.map_keys(key))
        case InZ(t):
            return InZ(t.map_keys(key))
        case InL(t):
            return InL(t.map_keys(key))
        case Cong(t, k, m):
            return Cong(t.map_keys(key), k, m)
        case FracGE(cs, b):
            return FracGE(_rename_coeffs(cs, old, new), b)
        case FloorGE(cs, b):
            return FloorGE(_rename_coeffs(cs, old, new), b)
        case FloorCong(v, k, m):
            return FloorCong(new if v == old else v, k, m)
        case LinInL(cs):
            return LinInL(_rename_coeffs(cs, old, new))
    return a


def rename_free(f: Formula, old: str, new: str) -> Formula:
    """Rename free occurrences of ``old``; ``new`` must not be bound in ``f``."""
    match f:
        case Atom():
            return rename_atom(f, old, new)
        case Exists(v, body) | Forall(v, body):
            if v == old:
                return f
            return type(f)(v, rename_free(body, old, new))
        case Const():
            return f
        case Not(arg):
            return Not(rename_free(arg, old, new))
        case And(args) | Or(args):
            return type(f)(tuple(rename_free(a, old, new) for a in args))
        case Implies(lhs, rhs) | Iff(lhs, rhs):
            return type(f)(rename_free(lhs, old, new), rename_free(rhs, old, new))
    raise TypeError(f"unknown node {f!r}")


def rename_bound(f: Formula, avoid: set[str], used: set[str]) -> Formula:
    """Rename binders clashing with ``avoid`` or an enclosing binder."""
    used = set(used) | all_names(f)

    def go(g: Formula, scope: frozenset[str]) -> Formula:
        match g:
            case Exists(v, body) | Forall(v, body):
                if v in scope or v in avoid:
                    nv = fresh_name(v, used)
                    body = rename_free(body, v, nv)
                    v = nv
                return type(g)(v, go(body, scope | {v}))
            case Not(arg):
                return Not(go(arg, scope))
            case And(args) | Or(args):
                return type(g)(tuple(go(a, scope) for a in args))
            case Implies(lhs, rhs) | Iff(lhs, rhs):
                return type(g)(go(lhs, scope), go(rhs, scope))
        return g

    return go(f, frozenset())


# -- substitution ---------------------------------------------------------

def _part_of(t: LinearForm, part: str) -> LinearForm | None:
    """floor(t) or frac(t) as a linear form, when expressible without new variables."""
    c = t.const
    if t.is_constant():
        fl = Fraction(floor(c))
        return LinearForm.constant(fl if part == FLOOR else c - fl)
    if c.denominator == 1 and all(k.part == FLOOR and v.denominator == 1 for k, v in t.terms):
        return t if part == FLOOR else LinearForm()
    if len(t.terms) == 1 and c.denominator == 1 and t.terms[0][1] == 1:
        key = t.terms[0][0]
        if key.part == PLAIN:
            return LinearForm.make({Var(key.name, part): 1}, c if part == FLOOR else 0)
        if key.part == FRAC:
            return LinearForm.constant(c) if part == FLOOR else LinearForm.var(key.name, FRAC)
    return None


def substitute(f: Formula, v: str, t: LinearForm) -> Formula:
    """Capture-avoiding substitution of the term ``t`` for the variable ``v``.

    Occurrences under floor/frac are resolved directly when possible; otherwise
    ``floor(t)`` is bound to a fresh integer variable ``u`` with
    ``u <= t < u + 1`` around the affected atom.
    """
    if v in t.names():
        raise ValueError(f"substituted term mentions {v}")
    t_names = t.names()
    used = all_names(f) | t_names | {v}

    def sub_form(form: LinearForm, pending: list[tuple[str, LinearForm]]) -> LinearForm:
        out = form.substitute(Var(v, PLAIN), t)
        for part in (FLOOR, FRAC):
            key = Var(v, part)
            if out.coeff(key) == 0:
                continue
            repl = _part_of(t, part)
            if repl is None:
                if not pending:
                    pending.append((fresh_name("u", used), t))
                u = LinearForm.var(pending[0][0])
                repl = u if part == FLOOR else t - u
            out = out.substitute(key, repl)
        return out

    def sub_atom(a: Atom) -> Formula:
        if v not in atom_names(a):
            return a
        a = special_to_surface(a)
        pending: list[tuple[str, LinearForm]] = []
        match a:
            case Cmp(lhs, rel, rhs):
                new: Formula = Cmp(sub_form(lhs, pending), rel, sub_form(rhs, pending))
            case InZ(s):
                new = InZ(sub_form(s, pending))
            case InL(s):
                new = InL(sub_form(s, pending))
            case Cong(s, k, m):
                new = Cong(sub_form(s, pending), k, m)
            case _:
                raise TypeError(f"cannot substitute into {a!r}")
        new = normalize_atom(new)
        for name, s in pending:
            u = LinearForm.var(name)
            new = Exists(name, And((InZ(u), Cmp(u, "<=", s), Cmp(s, "<", u + 1), new)))
        return new

    def go(g: Formula) -> Formula:
        match g:
            case Atom():
                return sub_atom(g)
            case Exists(w, body) | Forall(w, body):
                if w == v:
                    return g
                if w in t_names:
                    nw = fresh_name(w, used)
                    body = rename_free(body, w, nw)
                    w = nw
                return type(g)(w, go(body))
            case Const():
                return g
            case Not(arg):
                return Not(go(arg))
            case And(args) | Or(args):
                return type(g)(tuple(go(a) for a in args))
            case Implies(lhs, rhs) | Iff(lhs, rhs):
                return type(g)(go(lhs), go(rhs))
        raise TypeError(f"unknown node {g!r}")

    return go(f)


# -- normal forms ---------------------------------------------------------

def normalize_atom(a: Atom) -> Atom:
    s = as_special(a)
    return a if s is None else s


def normalize(f: Formula) -> Formula:
    """Replace every atom that literally has a special shape by that special atom."""
    return map_atoms(f, normalize_atom)


def is_special(f: Formula) -> bool:
    """Quantifier-free with every atom one of the five special forms."""
    if not is_quantifier_free(f):
        return False
    return all(as_special(a) is not None for a in iter_atoms(f))


def negate_literal(a: Atom, expand_congruence: bool = True) -> Formula:
    """Positive replacement for ``not a`` where one exists."""
    match a:
        case FloorGE(cs, b):
            return FloorGE(neg_coeffs(cs), 1 - b)
        case FloorCong(v, k, m) if expand_congruence:
            return disj(FloorCong(v, r, m) for r in range(m) if r != k)
    return Not(a)


def nnf(f: Formula, expand_congruence: bool = True) -> Formula:
    """Negation normal form over And/Or; negated floor atoms become positive."""
    match f:
        case Const() | Atom():
            return f
        case Not(arg):
            return _nnf_neg(arg, expand_congruence)
        case And(args):
            return conj(nnf(a, expand_congruence) for a in args)
        case Or(args):
            return disj(nnf(a, expand_congruence) for a in args)
        case Implies(lhs, rhs):
            return disj((_nnf_neg(lhs, expand_congruence), nnf(rhs, expand_congruence)))
        case Iff(lhs, rhs):
            return disj((conj((nnf(lhs, expand_congruence), nnf(rhs, expand_congruence))),
                         conj((_nnf_neg(lhs, expand_congruence), _nnf_neg(rhs, expand_congruence)))))
        case Exists(v, body):
            return Exists(v, nnf(body, expand_congruence))
        case Forall(v, body):
            return Forall(v, nnf(body, expand_congruence))
    raise TypeError(f"unknown node {f!r}")


def _nnf_neg(f: Formula, ec: bool) -> Formula:
    match f:
        case Const(v):
            return Const(not v)
        case Atom():
            return negate_literal(f, ec)
        case Not(arg):
            return nnf(arg, ec)
        case And(args):
            return disj(_nnf_neg(a, ec) for a in args)
        case Or(args):
            return conj(_nnf_neg(a, ec) for a in args)
        case Implies(lhs, rhs):
            return conj((nnf(lhs, ec), _nnf_neg(rhs, ec)))
        case Iff(lhs, rhs):
            return disj((conj((nnf(lhs, ec), _nnf_neg(rhs, ec))),
                         conj((_nnf_neg(lhs, ec), nnf(rhs, ec)))))
        case Exists(v, body):
            return Forall(v, _nnf_neg(body, ec))
        case Forall(v, body):
            return Exists(v, _nnf_neg(body, ec))
    raise TypeError(f"unknown node {f!r}")


# -- simplifier -----------------------------------------------------------

@lru_cache(maxsize=1 << 16)
def simplify(f: Formula) -> Formula:
    """Constant folding, flattening, duplicate and complementary literal
    removal, subsumption, and merging of bounds that share a coefficient vector."""
    match f:
        case Not(arg):
            inner = simplify(arg)
            if isinstance(inner, FloorGE):
                return FloorGE(neg_coeffs(inner.coeffs), 1 - inner.bound)
            return neg(inner)
        case And(args):
            return _simplify_junction(args, conjunctive=True)
        case Or(args):
            return _simplify_junction(args, conjunctive=False)
        case Implies(lhs, rhs):
            return _simplify_junction((Not(lhs), rhs), conjunctive=False)
        case Iff(lhs, rhs):
            a, b = simplify(lhs), simplify(rhs)
            if a == b:
                return TRUE
            return _simplify_junction((And((a, b)), And((neg(a), neg(b)))), conjunctive=False)
        case Exists(v, body) | Forall(v, body):
            body = simplify(body)
            if isinstance(body, Const) or v not in free_vars(body):
                return body
            return type(f)(v, body)
    return f


def _flatten(args, conjunctive: bool) -> list[Formula] | Const:
    kind = And if conjunctive else Or
    absorbing = FALSE if conjunctive else TRUE
    out: list[Formula] = []
    seen: set[Formula] = set()
    for a in args:
        a = simplify(a)
        parts = a.args if isinstance(a, kind) else (a,)
        for p in parts:
            if p == absorbing:
                return absorbing
            if isinstance(p, Const) or p in seen:
                continue
            seen.add(p)
            out.append(p)
    for p in out:
        if neg(p) in seen:
            return absorbing
    return out


def _simplify_junction(args, conjunctive: bool) -> Formula:
    items = _flatten(args, conjunctive)
    if isinstance(items, Const):
        return items
    items = _merge_bounds(items, conjunctive)
    if isinstance(items, Const):
        return items
    if conjunctive:
        reduced = _propagate(items)
        if reduced is not None:
            return _simplify_junction(reduced, True)
    if 1 < len(items) <= _SUBSUME_LIMIT:
        items = _subsume(items, conjunctive)
    if not items:
        return TRUE if conjunctive else FALSE
    if len(items) == 1:
        return items[0]
    return And(tuple(items)) if conjunctive else Or(tuple(items))


def _merge_bounds(items: list[Formula], conjunctive: bool) -> list[Formula] | Const:
    """Keep only the tightest (And) or loosest (Or) bound per coefficient vector
    and detect empty / full ranges between a vector and its negation."""
    floor_b: dict[Coeffs, int] = {}
    # frac bounds keyed by primitive direction, with rational thresholds
    frac_b: dict[Coeffs, Fraction] = {}
    frac_strict: dict[Coeffs, Fraction] = {}  # not (cs >= b), i.e. cs < b
    congs: dict[str, list[tuple[int, int]]] = {}
    rest: list[Formula] = []
    pick = max if conjunctive else min
    for p in items:
        if isinstance(p, FloorGE):
            floor_b[p.coeffs] = pick(floor_b.get(p.coeffs, p.bound), p.bound)
        elif isinstance(p, FracGE):
            cs, b = _direction(p)
            frac_b[cs] = pick(frac_b.get(cs, b), b)
        elif isinstance(p, Not) and isinstance(p.arg, FracGE):
            cs, b = _direction(p.arg)
            other = min if conjunctive else max
            frac_strict[cs] = other(frac_strict.get(cs, b), b)
        else:
            if isinstance(p, FloorCong):
                if conjunctive:
                    for k, m in congs.get(p.var, ()):
                        if (k - p.k) % gcd(m, p.m):
                            return FALSE
                congs.setdefault(p.var, []).append((p.k, p.m))
            rest.append(p)
    if not conjunctive and any(_covers(cs) for cs in congs.values()):
        return TRUE
    for cs, b in floor_b.items():
        nb = floor_b.get(neg_coeffs(cs))
        if nb is not None:
            # cs >= b and cs <= -nb
            if conjunctive and b > -nb:
                return FALSE
            if not conjunctive and b <= -nb + 1:
                return TRUE
    for cs, b in frac_b.items():
        nb = frac_b.get(neg_coeffs(cs))
        if nb is not None:
            if conjunctive and b > -nb:
                return FALSE
            if not conjunctive and b <= -nb:
                return TRUE
        sb = frac_strict.get(cs)
        if sb is not None:
            # cs >= b together with cs < sb
            if conjunctive and b >= sb:
                return FALSE
            if not conjunctive and b <= sb:
                return TRUE
    out: list[Formula] = []
    done_floor: set[Coeffs] = set()
    done_frac: set[Coeffs] = set()
    done_strict: set[Coeffs] = set()
    for p in items:
        if isinstance(p, FloorGE):
            if p.coeffs not in done_floor:
                done_floor.add(p.coeffs)
                out.append(FloorGE(p.coeffs, floor_b[p.coeffs]))
        elif isinstance(p, FracGE):
            cs = _direction(p)[0]
            if cs not in done_frac:
                done_frac.add(cs)
                out.append(_frac_atom(cs, frac_b[cs]))
        elif isinstance(p, Not) and isinstance(p.arg, FracGE):
            cs = _direction(p.arg)[0]
            if cs not in done_strict:
                done_strict.add(cs)
                out.append(Not(_frac_atom(cs, frac_strict[cs])))
        else:
            out.append(p)
    return out


def _direction(a: FracGE) -> tuple[Coeffs, Fraction]:
    """Primitive coefficient vector and rational threshold of a frac atom."""
    g = coeffs_gcd(a.coeffs)
    return tuple((n, c // g) for n, c in a.coeffs), Fraction(a.bound, g)


def _frac_atom(cs: Coeffs, q: Fraction) -> FracGE:
    d = q.denominator
    return FracGE(tuple((n, c * d) for n, c in cs), q.numerator)


def _covers(congs: list[tuple[int, int]], limit: int = 256) -> bool:
    """Whether the residue classes in ``congs`` exhaust Z."""
    big = lcm(*(m for _, m in congs))
    if big > limit:
        return False
    hit = {r for k, m in congs for r in range(k, big, m)}
    return len(hit) == big


def is_literal(f: Formula) -> bool:
    return isinstance(f, Atom) or (isinstance(f, Not) and isinstance(f.arg, Atom))


class Facts:
    """What a set of literals implies about other literals (bounds and residues)."""

    def __init__(self, lits):
        self.lits = set(lits)
        self.floor_b: dict[Coeffs, int] = {}
        self.frac_b: dict[Coeffs, Fraction] = {}
        self.frac_strict: dict[Coeffs, Fraction] = {}
        self.congs: dict[str, list[tuple[int, int]]] = {}
        self._seen: dict[Formula, bool | None] = {}
        for l in self.lits:
            match l:
                case FloorGE(cs, b):
                    self.floor_b[cs] = max(self.floor_b.get(cs, b), b)
                case FracGE():
                    cs, b = _direction(l)
                    self.frac_b[cs] = max(self.frac_b.get(cs, b), b)
                case Not(FracGE() as a):
                    cs, b = _direction(a)
                    self.frac_strict[cs] = min(self.frac_strict.get(cs, b), b)
                case FloorCong(v, k, m):
                    self.congs.setdefault(v, []).append((k, m))

    def status(self, f: Formula) -> bool | None:
        """True if implied, False if refuted, None if undetermined."""
        try:
            return self._seen[f]
        except KeyError:
            st = self._seen[f] = self._status(f)
            return st

    def _status(self, f: Formula) -> bool | None:
        if isinstance(f, And):
            sts = [self.status(a) for a in f.args]
            if False in sts:
                return False
            return True if all(sts) else None
        if not is_literal(f):
            return None
        if f in self.lits:
            return True
        if neg(f) in self.lits:
            return False
        match f:
            case FloorGE(cs, b):
                fb, nb = self.floor_b.get(cs), self.floor_b.get(neg_coeffs(cs))
                if fb is not None and fb >= b:
                    return True
                if nb is not None and -nb < b:
                    return False
            case FracGE():
                cs, b = _direction(f)
                fb, nb = self.frac_b.get(cs), self.frac_b.get(neg_coeffs(cs))
                sb = self.frac_strict.get(cs)
                if fb is not None and fb >= b:
                    return True
                if (nb is not None and -nb < b) or (sb is not None and sb <= b):
                    return False
            case Not(FracGE() as a):
                cs, b = _direction(a)
                fb, nb = self.frac_b.get(cs), self.frac_b.get(neg_coeffs(cs))
                sb = self.frac_strict.get(cs)
                if fb is not None and fb >= b:
                    return False
                if (sb is not None and sb <= b) or (nb is not None and -nb < b):
                    return True
            case FloorCong(v, k, m):
                for k2, m2 in self.congs.get(v, ()):
                    if m2 % m == 0 and k2 % m == k:
                        return True
                    if (k - k2) % gcd(m, m2):
                        return False
            case Not(FloorCong() as c):
                st = self.status(c)
                return None if st is None else not st
        return None


_SUBSUME_LIMIT = 200


@lru_cache(maxsize=1 << 16)
def _implies(a: Formula, b: Formula) -> bool:
    return a == b or Facts((a,)).status(b) is True


def _split(f: Formula, kind) -> tuple[list[Formula], frozenset]:
    parts = f.args if isinstance(f, kind) else (f,)
    return [p for p in parts if is_literal(p)], frozenset(p for p in parts if not is_literal(p))


def _subsume(items: list[Formula], conjunctive: bool) -> list[Formula]:
    """Drop disjuncts that imply another disjunct, and conjuncts implied by
    another conjunct, judged on their literals with the rest compared exactly."""
    inner = Or if conjunctive else And
    split = [_split(it, inner) for it in items]
    if conjunctive:
        # a clause whose every literal implies some literal of another clause
        def stronger(i: int, j: int) -> bool:
            (li, ri), (lj, rj) = split[i], split[j]
            return ri <= rj and all(any(_implies(a, b) for b in lj) for a in li)
    else:
        cube = [Facts(lits) for lits, _ in split]

        def stronger(i: int, j: int) -> bool:
            (li, ri), (lj, rj) = split[i], split[j]
            return rj <= ri and all(cube[i].status(b) is True for b in lj)

    dropped: set[int] = set()
    for i in range(len(items)):
        for j in range(len(items)):
            if i == j or j in dropped or i in dropped:
                continue
            # drop the stronger disjunct / the weaker conjunct
            if conjunctive and stronger(j, i):
                dropped.add(i)
            elif not conjunctive and stronger(i, j):
                dropped.add(i)
    return [it for k, it in enumerate(items) if k not in dropped]


def _propagate(items: list[Formula]) -> list[Formula] | None:
    """Drop disjunctions satisfied by the literal conjuncts and refuted disjuncts
    from the others; None when nothing changes."""
    facts = Facts(i for i in items if is_literal(i))
    out: list[Formula] = []
    changed = False
    for it in items:
        if not isinstance(it, Or):
            out.append(it)
            continue
        keep = []
        for a in it.args:
            st = facts.status(a)
            if st is True:
                keep = None
                break
            if st is None:
                keep.append(a)
        if keep is None:
            changed = True
        elif len(keep) < len(it.args):
            changed = True
            out.append(disj(keep))
        else:
            out.append(it)
    return out if changed else None
