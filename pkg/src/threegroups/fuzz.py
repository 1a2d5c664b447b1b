"""Differential testing of the elimination engine.

Five kinds of case rotate through the run:

* ``qf``: quantifier-free formulas, ``qe(f)`` must agree with ``f`` at
  random assignments in both models;
* ``exists``: one existential, compared with the region-scan oracle;
* ``nested``: two quantifiers, the outer one compared with the oracle on top
  of the (already checked) inner elimination, plus the two-completion
  agreement for sentences without L;
* ``witness``: constraint systems, QE verdict vs. candidate search vs. grid;
* ``floor``: conjunctions of floor-side literals handed straight to the
  integer-part elimination, so that its rarer cases (clashing congruences
  among them, which the simplifier otherwise removes first) are reached.

Every case also checks that the output is special and introduces no
variables.  Each case draws from its own generator seeded by ``(seed, i)`` so
that runs are reproducible case by case.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

from .gen import GenConfig, random_assignment, random_qf, random_quantified, random_witness_instance
from .oracle import exists_oracle
from .qe import CASES, CompletenessViolation, decide, eliminate_floor_literals, qe, record_cases
from .semantics import LEX, STD, eval_qf
from .syntax import (
    Exists, Forall, Formula, InL, LinInL, Not, QisL, conj, floor_cong, floor_ge, iter_atoms, lin_in_l,
    neg, to_text,
)
from .syntax.transform import free_vars, is_special
from .witness import find_witness, grid_search, to_formula

KINDS = ("qf", "exists", "nested", "witness", "floor")

QF_CONFIG = GenConfig(max_atoms=6, max_coeff=20)
EXISTS_CONFIG = GenConfig(max_atoms=4, max_coeff=20, wide_coeff=0.15)
NESTED_CONFIG = GenConfig(max_atoms=5, max_coeff=3, wide_coeff=0.0, op_weights=(5, 5, 1, 0))


@dataclass
class FuzzReport:
    cases: int
    seed: int
    per_kind: Counter = field(default_factory=Counter)
    mismatches: list[str] = field(default_factory=list)
    coverage: Counter = field(default_factory=Counter)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    @property
    def uncovered(self) -> list[str]:
        return [c for c in CASES if not self.coverage[c]]

    def to_dict(self) -> dict:
        return {
            "cases": self.cases,
            "seed": self.seed,
            "per_kind": {k: self.per_kind[k] for k in KINDS},
            "mismatches": self.mismatches,
            "coverage": {c: self.coverage[c] for c in CASES},
            "uncovered": self.uncovered,
        }

    def lines(self) -> list[str]:
        out = [f"fuzz: {self.cases} cases, seed {self.seed}"]
        out += [f"  {k:<8} {self.per_kind[k]} cases" for k in KINDS]
        out.append(f"mismatches: {len(self.mismatches)}")
        out += [f"  {m}" for m in self.mismatches[:10]]
        out.append("elimination cases:")
        out += [f"  {c:<17} {self.coverage[c]}" for c in CASES]
        if self.uncovered:
            out.append(f"uncovered: {', '.join(self.uncovered)}")
        return out


def _has_l(f: Formula) -> bool:
    return any(isinstance(a, (InL, LinInL, QisL)) for a in iter_atoms(f))


def _shape_problems(f: Formula, r: Formula) -> list[str]:
    out = []
    if not is_special(r):
        out.append(f"output not special for {to_text(f)}")
    if not free_vars(r) <= free_vars(f):
        out.append(f"output has new variables for {to_text(f)}")
    return out


def _check_qf(rng: random.Random) -> list[str]:
    f = random_qf(rng, QF_CONFIG)
    r = qe(f)
    names = sorted(free_vars(f))
    for m in (STD, LEX):
        for _ in range(5):
            a = random_assignment(rng, m, names)
            if eval_qf(m, f, a) != eval_qf(m, r, a):
                return [f"qf {m.tag}: {to_text(f)} at {a}"]
    return _shape_problems(f, r)


def _check_exists(rng: random.Random) -> list[str]:
    body = random_qf(rng, EXISTS_CONFIG)
    f = Exists("x", body)
    r = qe(f)
    names = sorted(free_vars(f))
    for m in (STD, LEX):
        for _ in range(3):
            a = random_assignment(rng, m, names)
            if eval_qf(m, r, a) != exists_oracle(m, "x", body, a):
                return [f"exists {m.tag}: {to_text(f)} at {a}"]
    return _shape_problems(f, r)


def _check_nested(rng: random.Random) -> list[str]:
    cfg = NESTED_CONFIG
    if rng.random() < 0.3:
        cfg = GenConfig(variables=("x", "y"), max_atoms=5, max_coeff=3, wide_coeff=0.0,
                        l_atoms=rng.random() < 0.5, op_weights=(5, 5, 1, 0))
    f = random_quantified(rng, cfg, 2, rng.randint(1, cfg.max_atoms))
    r = qe(f)
    problems = _shape_problems(f, r)
    # outer quantifier against the oracle, trusting the inner elimination
    inner = qe(f.body)
    outer_body = inner if isinstance(f, Exists) else Not(inner)
    names = sorted(free_vars(f))
    for m in (STD, LEX):
        for _ in range(3):
            a = random_assignment(rng, m, names)
            want = exists_oracle(m, f.var, outer_body, a)
            if isinstance(f, Forall):
                want = not want
            if eval_qf(m, r, a) != want:
                return problems + [f"nested {m.tag}: {to_text(f)} at {a}"]
    if not names and not _has_l(f):
        eq, ne = decide(f)
        if eq != ne:
            problems.append(f"completions disagree on {to_text(f)}")
    return problems


def _check_witness(rng: random.Random) -> list[str]:
    cs = random_witness_instance(rng, params=rng.random() < 0.3)
    sentence = Exists("x", to_formula(cs))
    eq, ne = decide(sentence)
    w = find_witness(cs)
    g = grid_search(cs)
    if not eq == ne == (w is not None) == (g is not None):
        return [f"witness: {to_text(sentence)} qe={eq},{ne} witness={w} grid={g}"]
    if w is not None and not eval_qf(STD, to_formula(cs), {"x": w}):
        return [f"witness {w} fails {to_text(sentence)}"]
    return []


def _floor_literal(rng: random.Random) -> Formula:
    others = [(v, rng.choice((-2, -1, 1, 2))) for v in rng.sample("yz", rng.randint(0, 2))]
    x = [("x", rng.choice((-3, -2, -1, 1, 1, 2, 3)))]
    match rng.choice(("ge", "ge", "ge", "in", "out", "out", "cong")):
        case "ge":
            return floor_ge(x + others, rng.randint(-4, 4))
        case "in":
            return lin_in_l(x + others)
        case "out":
            return neg(lin_in_l(x + others))
        case _:
            m = rng.randint(2, 6)
            return floor_cong("x", rng.randrange(m), m)


def _check_floor(rng: random.Random) -> list[str]:
    lits = [_floor_literal(rng) for _ in range(rng.randint(1, 5))]
    lits = [l for l in lits if "x" in free_vars(l)]
    if not lits:
        return []
    r = eliminate_floor_literals("x", lits)
    body = conj(lits)
    f = Exists("x", body)
    for m in (STD, LEX):
        for _ in range(3):
            a = random_assignment(rng, m, ["y", "z"], 4)
            if eval_qf(m, r, a) != exists_oracle(m, "x", body, a):
                return [f"floor {m.tag}: {to_text(f)} at {a}"]
    return _shape_problems(f, r)


_CHECKS = {"qf": _check_qf, "exists": _check_exists, "nested": _check_nested,
           "witness": _check_witness, "floor": _check_floor}


def run_fuzz(cases: int, seed: int) -> FuzzReport:
    report = FuzzReport(cases, seed)
    with record_cases() as counter:
        for i in range(cases):
            kind = KINDS[i % len(KINDS)]
            rng = random.Random(f"{seed}:{i}")
            report.per_kind[kind] += 1
            try:
                problems = _CHECKS[kind](rng)
            except CompletenessViolation as e:
                problems = [f"case {i}: {e}"]
            report.mismatches += [f"case {i}: {p}" for p in problems]
    report.coverage = counter
    return report
