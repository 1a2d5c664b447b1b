"""Canonical text rendering; the output parses back to the same tree."""
from __future__ import annotations

from .formula import (
    And, Cmp, Coeffs, Cong, Const, Exists, FloorCong, FloorGE, Forall, FracGE, Formula,
    Iff, Implies, InL, InZ, LinInL, Not, Or, QisL,
)
from .linear import FLOOR, FRAC, PLAIN, LinearForm, Var, format_linear

# binding strength; quantifiers extend maximally right so they rank lowest
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}


def _coeff_form(coeffs: Coeffs, part: str) -> LinearForm:
    return LinearForm.make((Var(n, part), c) for n, c in coeffs)


def atom_text(f: Formula) -> str:
    match f:
        case Cmp(lhs, rel, rhs):
            return f"{format_linear(lhs)} {rel} {format_linear(rhs)}"
        case InZ(t):
            return f"Z({format_linear(t)})"
        case InL(t):
            return f"L({format_linear(t)})"
        case Cong(t, k, m):
            return f"{format_linear(t)} ~ {k} mod {m}"
        case QisL():
            return "QisL"
        case FracGE(cs, b):
            return f"{format_linear(_coeff_form(cs, FRAC))} >= {b}"
        case FloorGE(cs, b):
            return f"{format_linear(_coeff_form(cs, FLOOR))} >= {b}"
        case FloorCong(v, k, m):
            return f"floor({v}) ~ {k} mod {m}"
        case LinInL(cs):
            return f"L({format_linear(_coeff_form(cs, PLAIN))})"
    raise TypeError(f"not an atom: {f!r}")


def to_text(f: Formula) -> str:
    match f:
        case Const(v):
            return "true" if v else "false"
        case Not(arg):
            return f"not {_wrap(arg, 5)}"
        case And(args):
            return " & ".join(_wrap(a, 5) for a in args)
        case Or(args):
            return " | ".join(_wrap(a, 4) for a in args)
        case Implies(lhs, rhs):
            return f"{_wrap(lhs, 3)} -> {_wrap(rhs, 3)}"
        case Iff(lhs, rhs):
            return f"{_wrap(lhs, 2)} <-> {_wrap(rhs, 2)}"
        case Exists(v, body):
            return f"exists {v}. {to_text(body)}"
        case Forall(v, body):
            return f"forall {v}. {to_text(body)}"
    return atom_text(f)


def _wrap(f: Formula, min_prec: int) -> str:
    """Parenthesize ``f`` unless it binds at least as tightly as ``min_prec``."""
    if isinstance(f, (Exists, Forall)):
        return f"({to_text(f)})"
    prec = _PREC.get(type(f), 6)
    if prec < min_prec:
        return f"({to_text(f)})"
    return to_text(f)
