"""Formula syntax: linear terms, trees, parsing, printing and normal forms."""
from .formula import (
    FALSE, TRUE, And, Atom, Cmp, Cong, Const, Exists, FloorCong, FloorGE, Forall, Formula,
    FracGE, Iff, Implies, InL, InZ, LinInL, Not, Or, QisL, SpecialAtom, conj, disj,
    floor_cong, floor_ge, frac_ge, is_quantifier_free, iter_atoms, lin_in_l, neg,
)
from .linear import FLOOR, FRAC, PLAIN, LinearForm, Var
from .parser import ParseError, parse
from .printer import to_text
from .special import atomize, as_special
from .transform import free_vars, is_special, nnf, normalize, simplify, substitute

print_formula = to_text

__all__ = [
    "FALSE", "TRUE", "And", "Atom", "Cmp", "Cong", "Const", "Exists", "FloorCong", "FloorGE",
    "Forall", "Formula", "FracGE", "Iff", "Implies", "InL", "InZ", "LinInL", "Not", "Or",
    "QisL", "SpecialAtom", "conj", "disj", "floor_cong", "floor_ge", "frac_ge",
    "is_quantifier_free", "iter_atoms", "lin_in_l", "neg", "FLOOR", "FRAC", "PLAIN",
    "LinearForm", "Var", "ParseError", "parse", "to_text", "print_formula", "atomize",
    "as_special", "free_vars", "is_special", "nnf", "normalize", "simplify", "substitute",
]
