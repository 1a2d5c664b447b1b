import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from support import CorruptedLex
from threegroups.semantics import (
    LEX, STD, Lex, UnboundVariable, check_axioms, eval_qf, floor_val, format_value, frac_val,
    get_model, parse_assignment,
)
from threegroups.syntax import parse

F = Fraction
rationals = st.fractions(min_value=-50, max_value=50, max_denominator=64)
lex_values = st.builds(Lex, rationals, rationals)


def test_floor_examples():
    assert floor_val(STD, F(7, 2)) == 3
    assert floor_val(STD, F(-1, 2)) == -1
    assert floor_val(LEX, Lex(F(1, 2), F(5, 2))) == Lex(F(1, 2), F(2))


@pytest.mark.parametrize("model, values", [(STD, rationals), (LEX, lex_values)])
def test_floor_is_integer_part(model, values):
    @settings(max_examples=500)
    @given(values)
    def check(v):
        fl = floor_val(model, v)
        fr = frac_val(model, v)
        assert model.in_z(fl)
        assert fl <= v < fl + model.one()
        assert model.zero() <= fr < model.one()
        assert fl + fr == v

    check()


def test_frac_in_unit_interval_many_samples():
    rng = random.Random(0)
    for m in (STD, LEX):
        for _ in range(10_000):
            v = m.random_value(rng)
            assert m.zero() <= frac_val(m, v) < m.one()


class TestEvalQf:
    def test_std_examples(self):
        assert eval_qf(STD, parse("Z(x)"), {"x": F(3, 2)}) is False
        assert eval_qf(STD, parse("2*frac(x) >= 1"), {"x": F(7, 4)}) is True
        assert eval_qf(STD, parse("QisL"), {}) is True

    def test_lex_examples(self):
        assert eval_qf(LEX, parse("Z(x)"), {"x": Lex(F(1, 2), F(3))}) is True
        assert eval_qf(LEX, parse("L(x)"), {"x": Lex(F(1), F(0))}) is False
        assert eval_qf(LEX, parse("L(x)"), {"x": Lex(F(0), F(17, 3))}) is True
        assert eval_qf(LEX, parse("QisL"), {}) is False

    def test_lex_order_is_lexicographic(self):
        a = {"x": Lex(F(1), F(-100)), "y": Lex(F(0), F(100))}
        assert eval_qf(LEX, parse("x > y"), a)

    def test_congruence(self):
        # (t - k) / m must land in the integer part
        assert eval_qf(STD, parse("x ~ 1 mod 3"), {"x": F(7)})
        assert not eval_qf(STD, parse("x ~ 1 mod 3"), {"x": F(8)})
        assert not eval_qf(STD, parse("x ~ 1 mod 3"), {"x": F(13, 2)})
        assert eval_qf(LEX, parse("x ~ 1 mod 3"), {"x": Lex(F(5), F(4))})

    def test_unbound(self):
        with pytest.raises(UnboundVariable):
            eval_qf(STD, parse("x > y"), {"x": F(1)})

    def test_quantifiers_rejected(self):
        with pytest.raises(ValueError):
            eval_qf(STD, parse("exists x. x > 0"), {})


def test_assignment_text():
    assert parse_assignment("x=3/2, y=-1", STD) == {"x": F(3, 2), "y": F(-1)}
    assert parse_assignment("x=(1/2,3)", LEX) == {"x": Lex(F(1, 2), F(3))}
    assert format_value(Lex(F(1, 2), F(3))) == "(1/2,3)"
    with pytest.raises(ValueError):
        parse_assignment("x=(1,2)", STD)
    with pytest.raises(ValueError):
        get_model("nonstandard")


@settings(max_examples=300)
@given(lex_values, lex_values, lex_values)
def test_lex_order_translation_invariant(x, y, z):
    if x <= y:
        assert x + z <= y + z


class TestAxiomChecker:
    def test_std(self):
        r = check_axioms(STD, 1000, 0)
        assert r.passed and r.q_is_l and r.q_ne_l_witness is None

    def test_lex_reports_witness_outside_l(self):
        r = check_axioms(LEX, 1000, 0)
        assert r.passed and not r.q_is_l
        assert r.q_ne_l_witness == "(1,0)"

    def test_corrupted_model_fails(self):
        r = check_axioms(CorruptedLex(), 1000, 0)
        assert not r.passed
        assert not r.families["convex_subgroup"].passed
        assert "1 not in L" in r.families["convex_subgroup"].failures

    def test_rejects_empty_sample(self):
        with pytest.raises(ValueError):
            check_axioms(STD, 0, 0)

    def test_deterministic(self):
        assert check_axioms(LEX, 200, 7).to_dict() == check_axioms(LEX, 200, 7).to_dict()
