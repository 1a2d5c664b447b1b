"""Exact quantifier elimination for ordered groups with an integer part and a
convex subgroup, with two computable models and a witness procedure.

The elimination entry point lives at ``threegroups.qe.qe``; it is not
re-exported here so that ``threegroups.qe`` keeps naming the module.
"""
from .qe import (
    CASES, CompletenessViolation, FloorProblem, FracProblem, NotASentence, crt_merge, decide,
    decide_gg, eliminate_exists, eliminate_floor, eliminate_frac, record_cases,
)
from .semantics import LEX, STD, Lex, check_axioms, eval_qf, floor_val, frac_val, get_model
from .syntax import atomize, is_special, parse, print_formula, substitute
from .witness import (
    CandidateSet, FloorAtLeast, FloorMod, FracGt, ParamMod, WitnessConstraint, build_candidates,
    find_witness, grid_search, truth_pred, w_jk,
)

__all__ = [
    "CASES", "CompletenessViolation", "FloorProblem", "FracProblem", "NotASentence", "crt_merge",
    "decide", "decide_gg", "eliminate_exists", "eliminate_floor", "eliminate_frac", "record_cases",
    "LEX", "STD", "Lex", "check_axioms", "eval_qf", "floor_val", "frac_val",
    "get_model", "atomize", "is_special", "parse", "print_formula", "substitute", "CandidateSet",
    "FloorAtLeast", "FloorMod", "FracGt", "ParamMod", "WitnessConstraint", "build_candidates",
    "find_witness", "grid_search", "truth_pred", "w_jk",
]
