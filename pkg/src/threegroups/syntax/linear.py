"""Exact affine combinations of variables and their floor/fractional parts."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, NamedTuple, Union

Number = Union[int, Fraction]

PLAIN = ""
FLOOR = "floor"
FRAC = "frac"


def cached_hash(cls):
    """Memoize the dataclass-generated hash; trees are hashed over and over."""
    raw = cls.__hash__

    def __hash__(self) -> int:
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = raw(self)
            object.__setattr__(self, "_hash", h)
            return h

    cls.__hash__ = __hash__
    return cls


class Var(NamedTuple):
    """A term key: variable ``name`` itself, or its floor / fractional part.

    Tuples sort by name first, which gives the canonical printing order.
    """

    name: str
    part: str = PLAIN

    def __str__(self) -> str:
        return self.name if self.part == PLAIN else f"{self.part}({self.name})"


@cached_hash
@dataclass(frozen=True)
class LinearForm:
    """``sum(c * key) + const`` with rational coefficients.

    ``terms`` is sorted by key and never holds a zero coefficient, so two
    forms are equal exactly when they denote the same polynomial.
    """

    terms: tuple[tuple[Var, Fraction], ...] = ()
    const: Fraction = Fraction(0)

    @staticmethod
    def make(coeffs: Mapping[Var, Number] | Iterable[tuple[Var, Number]] = (),
             const: Number = 0) -> LinearForm:
        acc: dict[Var, Fraction] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for key, c in items:
            acc[key] = acc.get(key, Fraction(0)) + Fraction(c)
        terms = tuple(sorted((k, c) for k, c in acc.items() if c != 0))
        return LinearForm(terms, Fraction(const))

    @staticmethod
    def constant(c: Number) -> LinearForm:
        return LinearForm((), Fraction(c))

    @staticmethod
    def var(name: str, part: str = PLAIN, coeff: Number = 1) -> LinearForm:
        return LinearForm.make({Var(name, part): coeff})

    @property
    def coeffs(self) -> dict[Var, Fraction]:
        return dict(self.terms)

    def coeff(self, key: Var) -> Fraction:
        for k, c in self.terms:
            if k == key:
                return c
        return Fraction(0)

    def is_constant(self) -> bool:
        return not self.terms

    def names(self) -> set[str]:
        return {k.name for k, _ in self.terms}

    def keys(self) -> list[Var]:
        return [k for k, _ in self.terms]

    def __add__(self, other: LinearForm | Number) -> LinearForm:
        if not isinstance(other, LinearForm):
            return LinearForm(self.terms, self.const + Fraction(other))
        return LinearForm.make(self.terms + other.terms, self.const + other.const)

    def __radd__(self, other: Number) -> LinearForm:
        return self + other

    def __neg__(self) -> LinearForm:
        return LinearForm(tuple((k, -c) for k, c in self.terms), -self.const)

    def __sub__(self, other: LinearForm | Number) -> LinearForm:
        return self + (-other)

    def __rsub__(self, other: Number) -> LinearForm:
        return (-self) + other

    def __mul__(self, q: Number) -> LinearForm:
        q = Fraction(q)
        if q == 0:
            return LinearForm()
        return LinearForm(tuple((k, c * q) for k, c in self.terms), self.const * q)

    __rmul__ = __mul__

    def __truediv__(self, q: Number) -> LinearForm:
        return self * (1 / Fraction(q))

    def without_const(self) -> LinearForm:
        return LinearForm(self.terms)

    def denominator_lcm(self) -> int:
        d = self.const.denominator
        for _, c in self.terms:
            d = lcm(d, c.denominator)
        return d

    def content(self) -> int:
        """gcd of the (integer) coefficients, ignoring the constant; 0 if none."""
        g = 0
        for _, c in self.terms:
            g = gcd(g, c.numerator)
        return g

    def cleared(self) -> LinearForm:
        """The positive multiple with all-integer coefficients and constant."""
        return self * self.denominator_lcm()

    def substitute(self, key: Var, repl: LinearForm) -> LinearForm:
        c = self.coeff(key)
        if c == 0:
            return self
        rest = LinearForm(tuple((k, d) for k, d in self.terms if k != key), self.const)
        return rest + repl * c

    def map_keys(self, fn) -> LinearForm:
        return LinearForm.make(((fn(k), c) for k, c in self.terms), self.const)

    def __str__(self) -> str:
        return format_linear(self)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_linear(form: LinearForm) -> str:
    out: list[str] = []
    for key, c in form.terms:
        mag = abs(c)
        body = str(key) if mag == 1 else f"{format_rational(mag)}*{key}"
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f"+ {body}" if c > 0 else f"- {body}")
    if form.const != 0 or not out:
        if not out:
            out.append(format_rational(form.const))
        else:
            sign = "+" if form.const > 0 else "-"
            out.append(f"{sign} {format_rational(abs(form.const))}")
    return " ".join(out)
