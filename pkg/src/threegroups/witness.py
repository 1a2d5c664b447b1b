"""Least witnesses for one-variable constraint systems over the rationals.

A constraint is a disjunction of atoms about one unknown ``x`` whose
parameters are already concrete numbers.  Truth of a conjunction of such
constraints only depends on which side of finitely many thresholds ``frac(x)``
and ``floor(x)`` lie and on ``floor(x)`` modulo the merged modulus, so testing
one point per region (the candidate set) decides satisfiability.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, lcm
from typing import Iterable, Sequence

from .syntax.formula import (
    FALSE, TRUE, And, Cmp, Cong, Const, FloorCong, FloorGE, Formula, FracGE, LinInL, Not, Or,
    QisL, conj, disj,
)
from .syntax.linear import FLOOR, FRAC, LinearForm
from .syntax.special import atomize
from .syntax.transform import free_vars


@dataclass(frozen=True)
class FracGt:
    """``n * frac(x) > rhs``, or ``>=`` when not strict."""

    n: int
    rhs: Fraction
    strict: bool = True

    def holds(self, x: Fraction) -> bool:
        v = self.n * (x - floor(x))
        return v > self.rhs if self.strict else v >= self.rhs


@dataclass(frozen=True)
class FloorAtLeast:
    """``n * floor(x) >= rhs``."""

    n: int
    rhs: Fraction

    def holds(self, x: Fraction) -> bool:
        return self.n * floor(x) >= self.rhs


@dataclass(frozen=True)
class FloorMod:
    """``floor(x) ≡ k (mod m)``."""

    k: int
    m: int

    def holds(self, x: Fraction) -> bool:
        return (floor(x) - self.k) % self.m == 0


@dataclass(frozen=True)
class ParamMod:
    """``value ≡ k (mod m)`` for a concrete parameter value; does not involve x."""

    value: Fraction
    k: int
    m: int

    def holds(self, x: Fraction | None = None) -> bool:
        return ((self.value - self.k) / self.m).denominator == 1


WitnessAtom = FracGt | FloorAtLeast | FloorMod | ParamMod


@dataclass(frozen=True)
class WitnessConstraint:
    """A disjunction of witness atoms; the empty disjunction is false."""

    atoms: tuple[WitnessAtom, ...]

    def __post_init__(self):
        for a in self.atoms:
            if isinstance(a, (FracGt, FloorAtLeast)) and a.n == 0:
                raise ValueError("coefficient of x must be nonzero")
            if isinstance(a, (FloorMod, ParamMod)) and not (a.m > 0 and 0 <= a.k < a.m):
                raise ValueError("congruence needs 0 <= k < m")


def truth_pred(c: WitnessConstraint, x: Fraction) -> bool:
    """Whether some disjunct of ``c`` holds at ``x``."""
    return any(a.holds(x) for a in c.atoms)


def w_jk(w: int, k: int, m: int) -> int:
    """Least integer ``>= w`` congruent to ``k`` modulo ``m``."""
    return m * -((k - w) // m) + k


@dataclass(frozen=True)
class CandidateSet:
    V: tuple[Fraction, ...]          # 0 = v_0 < ... < v_p = 1
    midpoints: tuple[Fraction, ...]
    W: tuple[int, ...]               # finite floor thresholds, sorted
    modulus: int
    floors: tuple[int, ...]          # the w_{j,k} and the points below w_1
    fracs: tuple[Fraction, ...]
    X: tuple[Fraction, ...]


def _atoms(cs: Iterable[WitnessConstraint]):
    for c in cs:
        yield from c.atoms


def build_candidates(cs: Sequence[WitnessConstraint]) -> CandidateSet:
    atoms = list(_atoms(cs))
    inner = {a.rhs / a.n for a in atoms if isinstance(a, FracGt)}
    V = (Fraction(0),) + tuple(sorted(v for v in inner if 0 < v < 1)) + (Fraction(1),)
    mids = tuple((a + b) / 2 for a, b in zip(V, V[1:]))

    W = tuple(sorted({ceil(a.rhs / a.n) if a.n > 0 else floor(a.rhs / a.n) + 1
                      for a in atoms if isinstance(a, FloorAtLeast)}))
    m = lcm(1, *(a.m for a in atoms if isinstance(a, (FloorMod, ParamMod))))
    if W:
        floors = {w_jk(w, k, m) for w in W for k in range(m)}
        # one representative of each residue below every threshold
        floors |= {w_jk(W[0], k, m) - m for k in range(m)}
    else:
        floors = set(range(m))

    if any(isinstance(a, FracGt) for a in atoms):
        fracs = sorted(set(mids) | set(V[:-1]))
    else:
        fracs = [Fraction(0)]
    X = tuple(sorted({w + f for w in floors for f in fracs}))
    return CandidateSet(V, mids, W, m, tuple(sorted(floors)), tuple(fracs), X)


def fold_params(cs: Sequence[WitnessConstraint]) -> list[WitnessConstraint]:
    """Evaluate the x-free congruences: constraints they satisfy are dropped,
    false ones are removed from their disjunction."""
    out = []
    for c in cs:
        if any(isinstance(a, ParamMod) and a.holds() for a in c.atoms):
            continue
        out.append(WitnessConstraint(tuple(a for a in c.atoms if not isinstance(a, ParamMod))))
    return out


def find_witness(cs: Sequence[WitnessConstraint]) -> Fraction | None:
    """Least candidate satisfying every constraint, or None when unsatisfiable."""
    cs = fold_params(cs)
    for x in build_candidates(cs).X:
        if all(truth_pred(c, x) for c in cs):
            return x
    return None


def grid_search(cs: Sequence[WitnessConstraint]) -> Fraction | None:
    """Brute force over a dense grid; independent of the candidate construction."""
    cs = fold_params(cs)
    atoms = list(_atoms(cs))
    den = 1
    for a in atoms:
        if isinstance(a, FracGt):
            den = lcm(den, (a.rhs / a.n).denominator)
        elif isinstance(a, (FloorMod, ParamMod)):
            den = lcm(den, a.m)
    den *= 2
    m = lcm(1, *(a.m for a in atoms if isinstance(a, (FloorMod, ParamMod))))
    ws = [a.rhs / a.n for a in atoms if isinstance(a, FloorAtLeast)]
    lo, hi = (floor(min(ws)) - m, ceil(max(ws)) + 2 * m) if ws else (-m, 2 * m)
    for i in range(lo * den, hi * den + 1):
        x = Fraction(i, den)
        if all(truth_pred(c, x) for c in cs):
            return x
    return None


# -- formulas -------------------------------------------------------------

def _convert_literal(lit: Formula, x: str) -> list[WitnessAtom]:
    match lit:
        case Not(FloorGE(((v, n),), b)) if v == x:
            return [FloorAtLeast(-n, Fraction(1 - b))]
        case Not(FloorCong(v, k, m)) if v == x:
            return [FloorMod(r, m) for r in range(m) if r != k]
    return [_convert_atom(lit, x)]


def _convert_atom(lit: Formula, x: str) -> WitnessAtom:
    match lit:
        case FracGE(((v, n),), b) if v == x:
            return FracGt(n, Fraction(b), strict=False)
        case Not(FracGE(((v, n),), b)) if v == x:
            return FracGt(-n, Fraction(-b))
        case FloorGE(((v, n),), b) if v == x:
            return FloorAtLeast(n, Fraction(b))
        case FloorCong(v, k, m) if v == x:
            return FloorMod(k, m)
        case LinInL() | QisL() | Not(LinInL()) | Not(QisL()):
            raise ValueError("witness search takes formulas without L and QisL")
    raise ValueError(f"not a one-variable constraint: {lit}")


def _cnf(f: Formula) -> list[list[Formula]]:
    match f:
        case Const(True):
            return []
        case Const(False):
            return [[]]
        case And(args):
            return [cl for a in args for cl in _cnf(a)]
        case Or(args):
            clauses: list[list[Formula]] = [[]]
            for a in args:
                clauses = [c + d for c in clauses for d in _cnf(a)]
            return clauses
    return [[f]]


def constraints_from_formula(f: Formula) -> tuple[str, list[WitnessConstraint]]:
    """The variable of the quantifier-free ``f`` and its constraint list."""
    names = sorted(free_vars(f))
    if len(names) > 1:
        raise ValueError(f"expected one variable, found {', '.join(names)}")
    x = names[0] if names else "x"
    g = atomize(f)
    return x, [WitnessConstraint(tuple(a for l in cl for a in _convert_literal(l, x))) for cl in _cnf(g)]


def atom_formula(a: WitnessAtom, x: str = "x") -> Formula:
    match a:
        case FracGt(n, rhs, strict):
            return Cmp(LinearForm.var(x, FRAC) * n, ">" if strict else ">=", LinearForm.constant(rhs))
        case FloorAtLeast(n, rhs):
            return Cmp(LinearForm.var(x, FLOOR) * n, ">=", LinearForm.constant(rhs))
        case FloorMod(k, m):
            return Cong(LinearForm.var(x, FLOOR), k, m)
        case ParamMod():
            return TRUE if a.holds() else FALSE
    raise TypeError(a)


def to_formula(cs: Sequence[WitnessConstraint], x: str = "x") -> Formula:
    """Quantifier-free formula in ``x`` equivalent to the conjunction ``cs``."""
    return conj(disj(atom_formula(a, x) for a in c.atoms) for c in cs)
