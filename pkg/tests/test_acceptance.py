"""Acceptance suite: one test group per criterion, summarised at the end of the run.

Every test records its measured outcome through ``support.record`` before
asserting, so the terminal summary shows one pass/fail line per criterion
even when an assertion fails.
"""
import random
import time
from math import lcm

import pytest

from support import CorruptedLex, record, std_floor_scan
from threegroups.fuzz import NESTED_CONFIG, QF_CONFIG, run_fuzz
from threegroups.gen import GenConfig, random_assignment, random_qf, random_quantified, random_witness_instance
from threegroups.qe import crt_merge, decide, decide_gg, qe
from threegroups.semantics import LEX, STD, check_axioms, eval_qf
from threegroups.syntax import (
    Exists, InL, LinInL, QisL, free_vars, is_quantifier_free, is_special, iter_atoms, parse,
)
from threegroups.witness import find_witness, grid_search, to_formula, w_jk

SEED = 0
_START = time.perf_counter()


def _timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


# -- 1. quantifier-free differential suite --------------------------------

def test_criterion_1_qf_differential():
    def go():
        rng = random.Random(SEED)
        bad = []
        for _ in range(1000):
            f = random_qf(rng, QF_CONFIG)
            r = qe(f)
            names = sorted(free_vars(f))
            for m in (STD, LEX):
                for _ in range(20):
                    a = random_assignment(rng, m, names)
                    if eval_qf(m, f, a) != eval_qf(m, r, a):
                        bad.append((f, m.tag, a))
        return bad

    bad, dt = _timed(go)
    ok = not bad and dt < 60
    record(1, "QE differential (qf)", ok, f"1000 formulas x 20 assignments x 2 models, "
                                          f"{len(bad)} mismatches, {dt:.1f}s (limit 60s)")
    assert not bad, bad[:3]
    assert dt < 60


# -- 2. one-quantifier equivalence against the witness procedure -----------

def test_criterion_2_witness_equivalence():
    def go():
        rng = random.Random(SEED)
        bad, sat = [], 0
        for _ in range(500):
            cs = random_witness_instance(rng)
            eq, ne = decide(Exists("x", to_formula(cs)))
            w, g = find_witness(cs), grid_search(cs)
            sat += w is not None
            if not eq == ne == (w is not None) == (g is not None):
                bad.append((cs, eq, ne, w, g))
        return bad, sat

    (bad, sat), dt = _timed(go)
    ok = not bad and dt < 120
    record(2, "qe-decide = find_witness = grid", ok,
           f"500 instances ({sat} sat), {len(bad)} mismatches, {dt:.1f}s (limit 120s)")
    assert not bad, bad[:3]
    assert dt < 120


# -- 3. special-form guarantee --------------------------------------------

def test_criterion_3_special_form():
    rng = random.Random(SEED)
    bad, n = [], 0
    configs = (QF_CONFIG, GenConfig(max_atoms=4, max_coeff=20, wide_coeff=0.15), NESTED_CONFIG)
    for i in range(600):
        cfg = configs[i % 3]
        f = random_quantified(rng, cfg, i % 3, rng.randint(1, cfg.max_atoms))
        r = qe(f)
        n += 1
        if not (is_special(r) and is_quantifier_free(r) and free_vars(r) <= free_vars(f)):
            bad.append(f)
    report = run_fuzz(300, SEED)
    ok = not bad and not report.mismatches
    record(3, "special form and free variables", ok,
           f"{n} generated + 300 fuzz cases, {len(bad) + len(report.mismatches)} violations")
    assert not bad
    assert not report.mismatches, report.mismatches[:3]


# -- 4. curated sentences --------------------------------------------------

T, F = True, False
CORPUS = [
    ("QisL", (T, F)),
    ("QisL | not QisL", (T, T)),
    ("forall x. L(x)", (T, F)),
    ("exists x. not L(x)", (F, T)),
    ("exists x. (x > 0 & not L(x))", (F, T)),
    ("forall x. forall y. (L(x) & L(y) -> L(x + y))", (T, T)),
    ("forall x. (not L(x) -> x > 1000 | x < -1000)", (T, T)),
    ("exists x. (L(x) & forall y. (L(y) -> y <= x))", (F, F)),
    # integer part
    ("forall x. exists y. (Z(y) & y <= x & x < y + 1)", (T, T)),
    ("exists x. (Z(x) & x > 0 & x < 1)", (F, F)),
    ("forall x. frac(x) >= 0", (T, T)),
    ("forall x. floor(x) <= x", (T, T)),
    ("forall x. (floor(x) = x <-> Z(x))", (T, T)),
    ("exists x. (frac(x) = 1/2 & floor(x) = 3)", (T, T)),
    ("forall x. exists y. (Z(y) & y > x)", (T, T)),
    ("exists x. forall y. (Z(y) -> y <= x)", (F, F)),
    # divisibility
    ("forall y. exists x. x + x = y", (T, T)),
    ("forall y. exists x. 3*x = y", (T, T)),
    ("forall y. exists x. 7*x = y + 1", (T, T)),
    ("forall x. (x > 0 -> exists y. (0 < y & y < x))", (T, T)),
    ("forall x. forall y. (x < y -> exists z. (x < z & z < y & not Z(z)))", (T, T)),
    # integers as a Z-group
    ("exists x. (Z(x) & 2*x = 3)", (F, F)),
    ("forall y. (Z(y) & y ~ 0 mod 2 -> exists x. (Z(x) & 2*x = y))", (T, T)),
    ("forall x. (Z(x) -> x ~ 0 mod 2 | x ~ 1 mod 2)", (T, T)),
    ("forall x. (Z(x) -> exists y. (Z(y) & (x = 2*y | x = 2*y + 1)))", (T, T)),
    ("exists x. (Z(x) & x ~ 1 mod 2 & x ~ 0 mod 4)", (F, F)),
    ("exists x. (Z(x) & x ~ 2 mod 3 & x ~ 3 mod 4)", (T, T)),
    ("exists x. exists y. (Z(x) & Z(y) & 3*x + 5*y = 1)", (T, T)),
    ("exists x. exists y. (Z(x) & Z(y) & 4*x + 6*y = 1)", (F, F)),
    ("exists x. (2*frac(x) > 1 & floor(x) >= 3 & floor(x) ~ 1 mod 2)", (T, T)),
    # universal closures of elimination examples
    ("forall y. exists x. (floor(x) >= floor(y) & -floor(x) >= -floor(y))", (T, T)),
    ("forall y. exists x. (L(x - y) & not L(x - y))", (F, F)),
    ("forall y. exists x. (2*floor(x) >= floor(y) & floor(x) ~ 1 mod 2)", (T, T)),
    # Z and L together
    ("exists x. (L(x) & not Z(x))", (T, T)),
    ("forall x. (Z(x) -> L(x))", (T, F)),
    ("exists x. (Z(x) & not L(x))", (F, T)),
    ("forall x. (L(x) -> exists y. (Z(y) & L(y) & y <= x & x < y + 1))", (T, T)),
    ("exists x. (Z(x) & L(x) & x > 0 & x < 2 & not x = 1)", (F, F)),
    ("exists x. (Z(x) & not L(x) & x ~ 1 mod 3)", (F, T)),
    ("forall x. (L(x) & x > 0 -> exists y. (L(y) & not Z(y) & 0 < y & y < x))", (T, T)),
]


def _uses_l(f) -> bool:
    return any(isinstance(a, (InL, LinInL, QisL)) for a in iter_atoms(f))


def test_criterion_4_sentence_corpus():
    wrong, gg = [], 0
    for text, want in CORPUS:
        f = parse(text)
        if decide(f) != want:
            wrong.append(text)
        if not _uses_l(f):
            gg += 1
            if decide_gg(f) != want[0]:
                wrong.append(text)
    mixed = sum(1 for text, _ in CORPUS if "Z(" in text and "L(" in text)
    ok = not wrong and len(CORPUS) >= 30 and mixed >= 5
    record(4, "sentence corpus", ok, f"{len(CORPUS)} sentences ({gg} without L, {mixed} mixing Z and L), "
                                     f"{len(wrong)} wrong")
    assert not wrong, wrong
    assert len(CORPUS) >= 30 and mixed >= 5


@pytest.mark.parametrize("text", [t for t, _ in CORPUS])
def test_corpus_excluded_middle(text):
    f = parse(text)
    assert decide(parse(f"({text}) | not ({text})")) == (True, True)
    if not _uses_l(f):
        decide_gg(f)


# -- 5. CRT ---------------------------------------------------------------

def test_criterion_5_crt_exhaustive():
    bad, calls, unsat = 0, 0, 0
    for m0 in range(1, 37):
        for m1 in range(1, 37):
            period = lcm(m0, m1)
            least = {}
            for r in range(period):
                least.setdefault((r % m0, r % m1), r)
            for k0 in range(m0):
                for k1 in range(m1):
                    want = (least[k0, k1], period) if (k0, k1) in least else None
                    unsat += want is None
                    calls += 1
                    bad += crt_merge((k0, m0), (k1, m1)) != want
    record(5, "CRT merge", not bad, f"{calls} residue pairs ({unsat} unsat), {bad} mismatches")
    assert not bad


# -- 6. w_jk closed form ----------------------------------------------------

def test_criterion_6_w_jk():
    checked = bad = 0
    for m in range(1, 13):
        for w in range(-20, 21):
            for k in range(m):
                checked += 1
                bad += w_jk(w, k, m) != std_floor_scan(w, k, m)
    record(6, "w_jk closed form", not bad, f"{checked} cases, {bad} mismatches")
    assert not bad


# -- 7. axiom checker --------------------------------------------------------

@pytest.mark.parametrize("model", [STD, LEX], ids=["std", "lex"])
def test_criterion_7_axioms(model):
    report = check_axioms(model, 10_000, SEED)
    record(7, "axiom checker", report.passed, f"{model.tag} {'passes' if report.passed else 'FAILS'} 10000 samples")
    assert report.passed, report.lines()


def test_criterion_7_negative_control():
    report = check_axioms(CorruptedLex(), 10_000, SEED)
    failed = [n for n, r in report.families.items() if not r.passed]
    record(7, "axiom checker", not report.passed, f"corrupted model fails {', '.join(failed) or 'nothing'}")
    assert not report.passed


# -- 8. performance ---------------------------------------------------------

DEPTH2 = GenConfig(max_atoms=8, max_coeff=3, wide_coeff=0.0, op_weights=(5, 5, 1, 0))


def test_criterion_8_depth_two_timing():
    rng = random.Random(SEED)
    times = []
    for _ in range(1000):
        f = random_quantified(rng, DEPTH2, 2, rng.randint(1, DEPTH2.max_atoms))
        _, dt = _timed(lambda: qe(f))
        times.append(dt)
    slow = sum(t >= 1 for t in times)
    record(8, "performance", not slow, f"1000 depth-2 formulas, max {max(times):.2f}s, {slow} over 1s")
    assert not slow


def test_criterion_8_full_run():
    # runs last in this module, so this covers the whole acceptance suite
    total = time.perf_counter() - _START
    record(8, "performance", total < 300, f"acceptance module {total:.0f}s (limit 300s)")
    assert total < 300
