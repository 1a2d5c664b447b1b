"""Two computable models of the theory, one for each completion.

``STD`` is the rationals with Z = integers and L = everything, so Q = L holds.
``LEX`` is pairs of rationals ordered lexicographically, with Z = Q x Z,
L = {0} x Q and 1 = (0, 1); the element (1, 0) lies outside L.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Any, Mapping, NamedTuple

from .syntax.formula import (
    And, Atom, Cmp, Cong, Const, Exists, FloorCong, FloorGE, Forall, Formula, FracGE, Iff,
    Implies, InL, InZ, LinInL, Not, Or, QisL,
)
from .syntax.linear import FLOOR, FRAC, PLAIN, LinearForm, format_rational


class Lex(NamedTuple):
    """Element of the lexicographic model; tuple order is the model order."""

    hi: Fraction
    lo: Fraction

    def __add__(self, other: Lex) -> Lex:  # type: ignore[override]
        return Lex(self.hi + other.hi, self.lo + other.lo)

    def __neg__(self) -> Lex:
        return Lex(-self.hi, -self.lo)

    def __sub__(self, other: Lex) -> Lex:
        return Lex(self.hi - other.hi, self.lo - other.lo)

    def __mul__(self, q: Fraction | int) -> Lex:  # type: ignore[override]
        return Lex(self.hi * q, self.lo * q)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"({format_rational(self.hi)},{format_rational(self.lo)})"


ModelValue = Any  # Fraction in STD, Lex in LEX
Assignment = Mapping[str, ModelValue]


class UnboundVariable(KeyError):
    def __str__(self) -> str:
        return f"unbound variable {self.args[0]}"


class Model:
    """Operations of a model of the theory on its concrete value type."""

    tag = "?"

    def zero(self) -> ModelValue:
        return self.const(0)

    def one(self) -> ModelValue:
        return self.const(1)

    def const(self, q) -> ModelValue:
        raise NotImplementedError

    def floor(self, v: ModelValue) -> ModelValue:
        raise NotImplementedError

    def frac(self, v: ModelValue) -> ModelValue:
        return v - self.floor(v)

    def in_z(self, v: ModelValue) -> bool:
        raise NotImplementedError

    def in_l(self, v: ModelValue) -> bool:
        raise NotImplementedError

    def q_is_l(self) -> bool:
        raise NotImplementedError

    def random_value(self, rng: random.Random, span: int = 20) -> ModelValue:
        raise NotImplementedError

    def forced_values(self) -> list[ModelValue]:
        return [self.zero(), self.one()]

    def parse_value(self, text: str) -> ModelValue:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.tag.upper()


def _random_rational(rng: random.Random, span: int) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, 16))


class StdModel(Model):
    tag = "std"

    def const(self, q) -> Fraction:
        return Fraction(q)

    def floor(self, v: Fraction) -> Fraction:
        return Fraction(floor(v))

    def in_z(self, v: Fraction) -> bool:
        return v.denominator == 1

    def in_l(self, v: Fraction) -> bool:
        return True

    def q_is_l(self) -> bool:
        return True

    def random_value(self, rng: random.Random, span: int = 20) -> Fraction:
        return _random_rational(rng, span)

    def parse_value(self, text: str) -> Fraction:
        return Fraction(text.strip())


class LexModel(Model):
    tag = "lex"

    def const(self, q) -> Lex:
        return Lex(Fraction(0), Fraction(q))

    def floor(self, v: Lex) -> Lex:
        return Lex(v.hi, Fraction(floor(v.lo)))

    def in_z(self, v: Lex) -> bool:
        return v.lo.denominator == 1

    def in_l(self, v: Lex) -> bool:
        return v.hi == 0

    def q_is_l(self) -> bool:
        return False

    def random_value(self, rng: random.Random, span: int = 20) -> Lex:
        # a third of the draws land in L so that convexity checks are not vacuous
        hi = Fraction(0) if rng.random() < 1 / 3 else _random_rational(rng, span)
        return Lex(hi, _random_rational(rng, span))

    def forced_values(self) -> list[Lex]:
        return super().forced_values() + [Lex(Fraction(1), Fraction(0))]

    def parse_value(self, text: str) -> Lex:
        m = re.fullmatch(r"\s*\(\s*([^,()]+?)\s*,\s*([^,()]+?)\s*\)\s*", text)
        if m is None:
            raise ValueError(f"expected a pair (hi,lo), got {text!r}")
        return Lex(Fraction(m.group(1)), Fraction(m.group(2)))


STD = StdModel()
LEX = LexModel()
MODELS = {"std": STD, "lex": LEX}


def get_model(name: str) -> Model:
    try:
        return MODELS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; expected std or lex") from None


def floor_val(m: Model, v: ModelValue) -> ModelValue:
    return m.floor(v)


def frac_val(m: Model, v: ModelValue) -> ModelValue:
    return m.frac(v)


def format_value(v: ModelValue) -> str:
    return format_rational(v) if isinstance(v, Fraction) else str(v)


_BINDING = re.compile(r"\s*([a-z][A-Za-z0-9_]*)\s*=\s*(\([^)]*\)|[^,]+)\s*(?:,|$)")


def parse_assignment(text: str, m: Model) -> dict[str, ModelValue]:
    """Parse ``x=3/2, y=-1`` (STD) or ``x=(1/2,3)`` (LEX)."""
    out: dict[str, ModelValue] = {}
    pos = 0
    text = text.strip()
    while pos < len(text):
        match = _BINDING.match(text, pos)
        if match is None:
            raise ValueError(f"bad assignment near {text[pos:]!r}")
        out[match.group(1)] = m.parse_value(match.group(2))
        pos = match.end()
    return out


# -- evaluation -----------------------------------------------------------

class _Env:
    """Variable values with floor/frac parts computed once."""

    def __init__(self, m: Model, a: Assignment):
        self.m = m
        self.a = a
        self.cache: dict[tuple[str, str], ModelValue] = {}

    def get(self, name: str, part: str = PLAIN) -> ModelValue:
        key = (name, part)
        v = self.cache.get(key)
        if v is None:
            try:
                base = self.a[name]
            except KeyError:
                raise UnboundVariable(name) from None
            if part == PLAIN:
                v = base
            elif part == FLOOR:
                v = self.m.floor(base)
            else:
                v = base - self.m.floor(base)
            self.cache[key] = v
        return v

    def linear(self, form: LinearForm) -> ModelValue:
        acc = self.m.const(form.const)
        for key, c in form.terms:
            acc = acc + self.get(key.name, key.part) * c
        return acc

    def coeffs(self, cs, part: str) -> ModelValue:
        acc = self.m.zero()
        for name, c in cs:
            acc = acc + self.get(name, part) * c
        return acc


def _cmp(x, rel: str, y) -> bool:
    match rel:
        case "<":
            return x < y
        case "<=":
            return x <= y
        case "=":
            return x == y
        case ">=":
            return x >= y
        case ">":
            return x > y
    raise ValueError(rel)


def eval_atom(env: _Env, a: Atom) -> bool:
    m = env.m
    match a:
        case Cmp(lhs, rel, rhs):
            return _cmp(env.linear(lhs - rhs), rel, m.zero())
        case InZ(t):
            return m.in_z(env.linear(t))
        case InL(t):
            return m.in_l(env.linear(t))
        case Cong(t, k, mod):
            return m.in_z(env.linear((t - k) / mod))
        case QisL():
            return m.q_is_l()
        case FracGE(cs, b):
            return env.coeffs(cs, FRAC) >= m.const(b)
        case FloorGE(cs, b):
            return env.coeffs(cs, FLOOR) >= m.const(b)
        case FloorCong(v, k, mod):
            return m.in_z((env.get(v, FLOOR) - m.const(k)) * Fraction(1, mod))
        case LinInL(cs):
            return m.in_l(env.coeffs(cs, PLAIN))
    raise TypeError(f"unknown atom {a!r}")


def _eval(env: _Env, f: Formula) -> bool:
    match f:
        case Const(v):
            return v
        case Atom():
            return eval_atom(env, f)
        case Not(arg):
            return not _eval(env, arg)
        case And(args):
            return all(_eval(env, g) for g in args)
        case Or(args):
            return any(_eval(env, g) for g in args)
        case Implies(lhs, rhs):
            return (not _eval(env, lhs)) or _eval(env, rhs)
        case Iff(lhs, rhs):
            return _eval(env, lhs) == _eval(env, rhs)
        case Exists() | Forall():
            raise ValueError("eval_qf cannot evaluate quantifiers; eliminate them first")
    raise TypeError(f"unknown node {f!r}")


def eval_qf(m: Model, f: Formula, a: Assignment) -> bool:
    """Truth value of the quantifier-free ``f`` in model ``m`` under ``a``."""
    return _eval(_Env(m, a), f)


# -- axiom checker --------------------------------------------------------

@dataclass
class FamilyResult:
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, what: str) -> None:
        self.checked += 1
        if not ok and len(self.failures) < 20:
            self.failures.append(what)


@dataclass
class AxiomReport:
    model: str
    n_samples: int
    seed: int
    families: dict[str, FamilyResult]
    q_is_l: bool
    q_ne_l_witness: str | None = None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.families.values())

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "samples": self.n_samples,
            "seed": self.seed,
            "passed": self.passed,
            "q_is_l": self.q_is_l,
            "q_ne_l_witness": self.q_ne_l_witness,
            "families": {
                name: {"passed": r.passed, "checked": r.checked, "failures": r.failures}
                for name, r in self.families.items()
            },
        }

    def lines(self) -> list[str]:
        out = [f"model {self.model}: {self.n_samples} samples, seed {self.seed}"]
        for name, r in self.families.items():
            status = "pass" if r.passed else "FAIL"
            out.append(f"  {name:<16} {status} ({r.checked} checks)")
            out.extend(f"    {msg}" for msg in r.failures[:5])
        out.append(f"  Q=L: {'true' if self.q_is_l else 'false'}"
                   + (f" (witness {self.q_ne_l_witness} not in L)" if self.q_ne_l_witness else ""))
        return out


FAMILIES = ("group", "order", "divisible", "integer_part", "convex_subgroup", "q_is_l")


def check_axioms(m: Model, n_samples: int, seed: int) -> AxiomReport:
    """Check instances of the three axiom groups on seeded random values.

    Divisibility is checked constructively: ``v / n`` is computed and added
    back up ``n`` times.
    """
    if n_samples <= 0:
        raise ValueError("n_samples must be positive")
    rng = random.Random(seed)
    fam = {name: FamilyResult() for name in FAMILIES}
    g, o, d, zp, lc, ql = (fam[n] for n in FAMILIES)
    zero, one = m.zero(), m.one()
    fmt = format_value

    lc.check(m.in_l(one), "1 not in L")
    lc.check(m.in_l(zero), "0 not in L")
    zp.check(m.in_z(zero) and m.in_z(one), "0 or 1 not in Z")
    o.check(zero < one, "not 0 < 1")
    witness = None
    for v in m.forced_values():
        if not m.in_l(v) and witness is None:
            witness = v

    for _ in range(n_samples):
        a, b, c = (m.random_value(rng) for _ in range(3))
        sa, sb, sc = fmt(a), fmt(b), fmt(c)
        # group laws
        g.check((a + b) + c == a + (b + c), f"associativity at {sa}, {sb}, {sc}")
        g.check(a + b == b + a, f"commutativity at {sa}, {sb}")
        g.check(a + zero == a, f"identity at {sa}")
        g.check(a + (-a) == zero, f"inverse at {sa}")
        # ordered group
        o.check((a < b) + (a == b) + (b < a) == 1, f"trichotomy at {sa}, {sb}")
        lo, mid, hi = sorted((a, b, c))
        o.check(lo <= hi, f"transitivity at {sa}, {sb}, {sc}")
        if a <= b:
            o.check(a + c <= b + c, f"translation invariance at {sa} <= {sb} + {sc}")
        # divisibility
        n = rng.randint(1, 10)
        q = a * Fraction(1, n)
        total = zero
        for _ in range(n):
            total = total + q
        d.check(total == a, f"{sa} / {n} times {n} != {sa}")
        # integer part
        for v in (a, b):
            fl = m.floor(v)
            zp.check(m.in_z(fl), f"floor({fmt(v)}) not in Z")
            zp.check(fl <= v < fl + one, f"floor inequality fails at {fmt(v)}")
        za, zb = m.floor(a), m.floor(b)
        zp.check(m.in_z(za + zb) and m.in_z(za - zb), f"Z not closed at {fmt(za)}, {fmt(zb)}")
        for z in (za, zb, za - zb):
            zp.check(not (zero < z < one), f"{fmt(z)} in Z strictly between 0 and 1")
        # convex subgroup
        if m.in_l(a) and m.in_l(b):
            lc.check(m.in_l(a + b) and m.in_l(a - b), f"L not closed at {sa}, {sb}")
        if m.in_l(lo) and m.in_l(hi):
            lc.check(m.in_l(mid), f"convexity: {fmt(mid)} between L elements not in L")
        t = Fraction(rng.randint(0, 16), 16)
        if m.in_l(a) and m.in_l(b):
            between = a + (b - a) * t
            lc.check(m.in_l(between), f"convexity: {fmt(between)} between {sa}, {sb} not in L")
        # Q = L instance
        for v in (a, b, c):
            if not m.in_l(v) and witness is None:
                witness = v
    if m.q_is_l():
        ql.check(witness is None, f"Q=L claimed but {fmt(witness)} not in L" if witness is not None else "")
    else:
        ql.check(witness is not None, "Q!=L claimed but every sampled value lies in L")
    return AxiomReport(m.tag, n_samples, seed, fam, m.q_is_l(),
                       None if witness is None else format_value(witness))
