import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from threegroups.gen import GenConfig, random_assignment, random_qf, random_quantified
from threegroups.qe import qe
from threegroups.semantics import LEX, STD, eval_qf
from threegroups.syntax import (
    And, Cmp, Cong, Exists, FloorCong, FloorGE, FracGE, InZ, LinearForm, LinInL, ParseError, QisL,
    Var, atomize, free_vars, is_quantifier_free, is_special, iter_atoms, normalize, parse, substitute, to_text,
)
from threegroups.syntax.linear import FRAC

seeds = st.integers(0, 2**32 - 1)


class TestParse:
    def test_nullary_atom(self):
        assert parse("QisL") == QisL()

    def test_sorted_quantifier_desugars_to_guard(self):
        f = parse("exists x:Z. x >= y")
        assert isinstance(f, Exists) and f.var == "x"
        assert isinstance(f.body, And)
        assert f.body.args[0] == InZ(LinearForm.var("x"))

    def test_frac_term(self):
        f = parse("2*frac(x) + 1/2 < 1")
        assert isinstance(f, Cmp)
        assert f.lhs.coeff(Var("x", FRAC)) == 2

    def test_precedence(self):
        from threegroups.syntax import Iff, Implies, Not, Or
        f = parse("QisL | QisL & not QisL -> QisL <-> QisL")
        q = QisL()
        assert f == Iff(Implies(Or((q, And((q, Not(q))))), q), q)

    def test_quantifier_body_extends_right(self):
        assert to_text(parse("exists x. x > 0 & x < y")) == "exists x. x > 0 & x < y"

    @pytest.mark.parametrize("text", ["x ~ 3 mod 3", "x ~ 1 mod 0", "x ~ -1 mod 2", "x >", "floor(x",
                                      "exists X. x > 0", "2*x*y > 0", "x > 0.5"])
    def test_rejects(self, text):
        with pytest.raises(ParseError):
            parse(text)

    def test_error_location(self):
        with pytest.raises(ParseError) as e:
            parse("x >= 1 &\n  y >")
        assert (e.value.line, e.value.col) == (2, 6)

    def test_compound_floor_gets_guarded_fresh_variable(self):
        f = parse("floor(x + y) >= 1")
        assert isinstance(f, Exists) and f.var not in {"x", "y"}
        # the fresh variable is the integer part of x + y
        for xv, yv, want in [(Fraction(1, 2), Fraction(1, 2), True), (Fraction(1, 3), Fraction(1, 3), False)]:
            assert eval_qf(STD, qe(f), {"x": xv, "y": yv}) is want

    def test_no_shadowing_after_parse(self):
        f = parse("exists x. (x > 0 & exists x. x < 0)")
        assert f.var != f.body.args[1].var


class TestPrint:
    def test_collects_like_terms(self):
        assert to_text(parse("x + x = y")) == "2*x = y"

    def test_q_is_l(self):
        assert to_text(QisL()) == "QisL"

    @settings(max_examples=300, deadline=None)
    @given(seeds)
    def test_round_trip(self, seed):
        rng = random.Random(seed)
        f = normalize(random_quantified(rng, GenConfig(), rng.randint(0, 2)))
        assert normalize(parse(to_text(f))) == f

    @settings(max_examples=200, deadline=None)
    @given(seeds)
    def test_round_trip_special(self, seed):
        # special atoms print in surface syntax and atomize back to themselves
        f = atomize(random_qf(random.Random(seed), GenConfig()))
        assert atomize(parse(to_text(f))) == f


class TestIsSpecial:
    def test_examples(self):
        assert is_special(parse("floor(x) >= 3 | QisL"))
        assert not is_special(parse("exists x. frac(x) >= 0"))
        assert is_special(atomize(parse("L(2*x - y)")))
        assert not is_special(parse("x + y = z"))


class TestAtomize:
    def test_z(self):
        assert atomize(parse("Z(x)")) == FracGE((("x", -1),), 0)

    def test_x_equals_one(self):
        f = atomize(parse("x = 1"))
        assert set(iter_atoms(f)) == {FloorGE((("x", 1),), 1), FloorGE((("x", -1),), -1),
                                      FracGE((("x", -1),), 0)}
        for v, want in [(1, True), (Fraction(1, 2), False), (2, False)]:
            assert eval_qf(STD, f, {"x": Fraction(v)}) is want

    def test_sum_splits_into_two_cases(self):
        f = atomize(parse("x + y = z"))
        assert to_text(f).count("|") == 1
        g = parse("x + y = z")
        rng = random.Random(5)
        for _ in range(200):
            a = random_assignment(rng, STD, ["x", "y", "z"])
            a["z"] = a["x"] + a["y"] if rng.random() < 0.5 else a["z"]
            assert eval_qf(STD, f, a) == eval_qf(STD, g, a)

    def test_l_clears_denominators(self):
        assert atomize(parse("L(1/2*x + 1/3*y)")) == LinInL((("x", 3), ("y", 2)))

    def test_congruence(self):
        f = atomize(parse("x ~ 1 mod 2"))
        assert is_special(f)
        assert FloorCong("x", 1, 2) in set(iter_atoms(f))

    @settings(max_examples=300, deadline=None)
    @given(seeds)
    def test_preserves_truth(self, seed):
        rng = random.Random(seed)
        f = random_qf(rng, GenConfig())
        g = atomize(f)
        assert is_special(g)
        names = sorted(free_vars(f))
        for m in (STD, LEX):
            for _ in range(5):
                a = random_assignment(rng, m, names)
                assert eval_qf(m, f, a) == eval_qf(m, g, a)

    @settings(max_examples=200, deadline=None)
    @given(seeds)
    def test_congruences_in_range(self, seed):
        f = atomize(random_qf(random.Random(seed), GenConfig()))
        for a in iter_atoms(f):
            if isinstance(a, (FloorCong, Cong)):
                assert 0 <= a.k < a.m


class TestSubstitute:
    def test_simple(self):
        f = substitute(parse("x >= y"), "x", LinearForm.var("y") + 1)
        assert to_text(f) == "y + 1 >= y"

    def test_bound_variable_is_untouched(self):
        f = parse("exists x. x >= y")
        assert substitute(f, "x", LinearForm.var("y") + 1) == f

    def test_avoids_capture(self):
        f = parse("exists y. x < y")
        g = substitute(f, "x", LinearForm.var("y"))
        assert free_vars(g) == {"y"}
        assert g.var != "y"

    @settings(max_examples=200, deadline=None)
    @given(seeds)
    def test_agrees_with_evaluation(self, seed):
        rng = random.Random(seed)
        f = random_qf(rng, GenConfig())
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 6))
        t = LinearForm.var("y") * Fraction(rng.randint(-3, 3), rng.randint(1, 3)) + c
        g = substitute(f, "x", t)
        # floor(x) and frac(x) of a compound term come back guarded by a quantifier
        g = qe(g) if not is_quantifier_free(g) else g
        a = random_assignment(rng, STD, ["y", "z"])
        assert eval_qf(STD, g, a) == eval_qf(STD, f, {**a, "x": t.const + t.coeff(Var("y")) * a["y"]})


class TestFreeVars:
    def test_examples(self):
        assert free_vars(parse("exists x. x >= y")) == {"y"}
        assert free_vars(parse("QisL")) == frozenset()
