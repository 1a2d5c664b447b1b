"""Seeded random formulas for property tests and ``tg fuzz``."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .semantics import Lex
from .syntax.formula import (
    And, Cmp, Cong, Exists, Forall, Formula, Iff, Implies, InL, InZ, Not, Or, QisL, RELS,
)
from .syntax.linear import FLOOR, FRAC, PLAIN, LinearForm, Var


@dataclass(frozen=True)
class GenConfig:
    variables: tuple[str, ...] = ("x", "y", "z")
    max_atoms: int = 6
    max_coeff: int = 20
    max_const_den: int = 4
    max_mod: int = 6
    # probability that a coefficient is drawn from the full range rather than 1..3
    wide_coeff: float = 0.1
    l_atoms: bool = True
    # relative weights of and / or / implies / iff when joining subformulas
    op_weights: tuple[int, int, int, int] = (5, 5, 1, 1)


def _coeff(rng: random.Random, cfg: GenConfig) -> int:
    top = cfg.max_coeff if rng.random() < cfg.wide_coeff else min(3, cfg.max_coeff)
    return rng.choice((-1, 1)) * rng.randint(1, top)


def _const(rng: random.Random, cfg: GenConfig) -> Fraction:
    den = rng.randint(1, cfg.max_const_den)
    return Fraction(rng.randint(-cfg.max_coeff, cfg.max_coeff), den)


def random_term(rng: random.Random, cfg: GenConfig, names=None) -> LinearForm:
    names = list(names or cfg.variables)
    chosen = rng.sample(names, rng.randint(1, min(2, len(names))))
    terms = []
    for n in chosen:
        part = rng.choices((PLAIN, FLOOR, FRAC), weights=(6, 2, 2))[0]
        terms.append((Var(n, part), _coeff(rng, cfg)))
    const = _const(rng, cfg) if rng.random() < 0.6 else Fraction(0)
    return LinearForm.make(terms, const)


def random_atom(rng: random.Random, cfg: GenConfig, names=None) -> Formula:
    kinds = ["cmp"] * 5 + ["z", "cong"] + (["l", "l"] if cfg.l_atoms else [])
    if cfg.l_atoms and rng.random() < 0.03:
        return QisL()
    t = random_term(rng, cfg, names)
    match rng.choice(kinds):
        case "cmp":
            return Cmp(t, rng.choice(RELS), LinearForm.constant(_const(rng, cfg)))
        case "z":
            return InZ(t)
        case "cong":
            m = rng.randint(2, cfg.max_mod)
            return Cong(t, rng.randrange(m), m)
        case _:
            return InL(t)


def random_qf(rng: random.Random, cfg: GenConfig, n_atoms: int | None = None, names=None) -> Formula:
    """Random Boolean combination of ``n_atoms`` random atoms."""
    n = n_atoms if n_atoms is not None else rng.randint(1, cfg.max_atoms)
    nodes = [random_atom(rng, cfg, names) for _ in range(n)]
    nodes = [Not(a) if rng.random() < 0.25 else a for a in nodes]
    while len(nodes) > 1:
        i = rng.randrange(len(nodes) - 1)
        a, b = nodes[i], nodes[i + 1]
        op = rng.choices(("and", "or", "implies", "iff"), weights=cfg.op_weights)[0]
        match op:
            case "and":
                node: Formula = And((a, b))
            case "or":
                node = Or((a, b))
            case "implies":
                node = Implies(a, b)
            case _:
                node = Iff(a, b)
        if rng.random() < 0.1:
            node = Not(node)
        nodes[i:i + 2] = [node]
    return nodes[0]


def random_quantified(rng: random.Random, cfg: GenConfig, depth: int, n_atoms: int | None = None) -> Formula:
    """Random formula with ``depth`` nested quantifiers over the first variables."""
    body = random_qf(rng, cfg, n_atoms)
    for v in reversed(cfg.variables[:depth]):
        body = (Exists if rng.random() < 0.5 else Forall)(v, body)
    return body


def random_values(rng: random.Random, model, names, span: int = 20) -> dict:
    return {n: model.random_value(rng, span) for n in names}


def _small_rational(rng: random.Random, span: int) -> Fraction:
    den = rng.choice((1, 1, 2, 3, 4, rng.randint(1, 16)))
    return Fraction(rng.randint(-span * den, span * den), den)


def random_assignment(rng: random.Random, model, names, span: int = 10) -> dict:
    """Values biased towards coincidences: integers, shared hi parts in LEX."""
    out = {}
    for n in names:
        lo = _small_rational(rng, span)
        if model.tag == "lex":
            hi = rng.choice((Fraction(0), Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2),
                             _small_rational(rng, 3)))
            out[n] = Lex(hi, lo)
        else:
            out[n] = lo
    return out


def random_witness_instance(rng: random.Random, max_constraints: int = 4, params: bool = False):
    """Random conjunction of disjunctions of forms 13-15 (and 16 if ``params``).

    Right-hand sides are small integer combinations of two concrete parameter
    values, mirroring ``n*x > sum(n_i * a_i)`` with the ``a_i`` already bound.
    """
    from .witness import FloorAtLeast, FloorMod, FracGt, ParamMod, WitnessConstraint

    a = [_small_rational(rng, 4) for _ in range(2)]

    def rhs() -> Fraction:
        return sum((rng.randint(-3, 3) * v for v in a), Fraction(0))

    def nonzero(top: int) -> int:
        return rng.choice((-1, 1)) * rng.randint(1, top)

    def atom():
        kinds = ["frac", "floor", "mod"] + (["param"] if params else [])
        match rng.choice(kinds):
            case "frac":
                return FracGt(nonzero(4), rhs())
            case "floor":
                return FloorAtLeast(nonzero(4), rhs())
            case "mod":
                m = rng.randint(1, 6)
                return FloorMod(rng.randrange(m), m)
            case _:
                m = rng.randint(2, 4)
                return ParamMod(rng.randint(-3, 3) * a[0] + rng.randint(-3, 3), rng.randrange(m), m)

    return [WitnessConstraint(tuple(atom() for _ in range(rng.choice((1, 1, 2)))))
            for _ in range(rng.randint(1, max_constraints))]
