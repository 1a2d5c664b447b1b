import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from support import std_floor_scan
from threegroups.gen import random_witness_instance
from threegroups.qe import decide
from threegroups.semantics import STD, eval_qf
from threegroups.syntax import Exists, parse
from threegroups.witness import (
    FloorAtLeast, FloorMod, FracGt, ParamMod, WitnessConstraint, atom_formula, build_candidates,
    constraints_from_formula, find_witness, fold_params, grid_search, to_formula, truth_pred, w_jk,
)

F = Fraction
seeds = st.integers(0, 2**32 - 1)


def single(*atoms):
    return [WitnessConstraint((a,)) for a in atoms]


EXAMPLE = single(FracGt(2, F(1)), FloorAtLeast(1, F(3)), FloorMod(1, 2))


class TestTruthPredicate:
    def test_examples(self):
        assert truth_pred(WitnessConstraint((FracGt(2, F(1)),)), F(7, 4))
        assert truth_pred(WitnessConstraint((FloorMod(1, 2),)), F(15, 4))
        assert not truth_pred(WitnessConstraint(()), F(0))

    @settings(max_examples=500)
    @given(seeds)
    def test_agrees_with_evaluator(self, seed):
        rng = random.Random(seed)
        for c in random_witness_instance(rng, params=True):
            x = F(rng.randint(-200, 200), rng.randint(1, 12))
            assert truth_pred(c, x) == eval_qf(STD, to_formula([c]), {"x": x})

    def test_invariants_enforced(self):
        with pytest.raises(ValueError):
            WitnessConstraint((FracGt(0, F(1)),))
        with pytest.raises(ValueError):
            WitnessConstraint((FloorMod(3, 3),))


class TestCandidates:
    def test_example(self):
        c = build_candidates(EXAMPLE)
        assert c.V == (0, F(1, 2), 1)
        assert c.midpoints == (F(1, 4), F(3, 4))
        assert c.W == (3,)
        assert c.modulus == 2
        assert {w_jk(3, 0, 2), w_jk(3, 1, 2)} == {4, 3}
        assert {3, 4} <= set(c.floors)

    def test_empty(self):
        assert build_candidates([]).X == (0,)

    def test_defaults_without_floor_bounds(self):
        c = build_candidates(single(FloorMod(2, 3)))
        assert c.floors == (0, 1, 2)

    def test_w_jk_example(self):
        assert w_jk(5, 1, 3) == 7

    def test_w_jk_matches_scan(self):
        for m in range(1, 13):
            for w in range(-20, 21):
                for k in range(m):
                    assert w_jk(w, k, m) == std_floor_scan(w, k, m)

    @settings(max_examples=200)
    @given(seeds)
    def test_v_strictly_increasing(self, seed):
        c = build_candidates(random_witness_instance(random.Random(seed)))
        assert c.V[0] == 0 and c.V[-1] == 1
        assert all(a < b for a, b in zip(c.V, c.V[1:]))


class TestFindWitness:
    def test_example(self):
        assert find_witness(EXAMPLE) == F(15, 4)

    def test_empty(self):
        assert find_witness([]) == 0

    def test_contradictory_fracs(self):
        assert find_witness(single(FracGt(2, F(1)), FracGt(-2, F(-1)))) is None

    def test_closed_frac_constraint_hits_exact_point(self):
        # 3 frac(x) >= 1 and 3 frac(x) <= 1 only leave frac(x) = 1/3
        cs = single(FracGt(3, F(1), strict=False), FracGt(-3, F(-1), strict=False))
        assert find_witness(cs) == F(1, 3)

    def test_param_congruences_are_folded(self):
        cs = [WitnessConstraint((ParamMod(F(5), 1, 3), FloorAtLeast(1, F(10)))),
              WitnessConstraint((ParamMod(F(6), 0, 3),))]
        assert fold_params(cs) == single(FloorAtLeast(1, F(10)))
        assert find_witness(cs) == 10
        assert find_witness(single(ParamMod(F(5), 0, 2))) is None

    @settings(max_examples=300, deadline=None)
    @given(seeds)
    def test_sound_minimal_and_agrees_with_grid(self, seed):
        cs = random_witness_instance(random.Random(seed), params=True)
        w = find_witness(cs)
        assert (w is None) == (grid_search(cs) is None)
        if w is not None:
            assert all(truth_pred(c, w) for c in cs)
            assert eval_qf(STD, to_formula(cs), {"x": w})
            folded = fold_params(cs)
            assert not any(all(truth_pred(c, x) for c in folded)
                           for x in build_candidates(folded).X if x < w)

    @settings(max_examples=150, deadline=None)
    @given(seeds)
    def test_consistent_with_qe(self, seed):
        cs = random_witness_instance(random.Random(seed), params=True)
        assert decide(Exists("x", to_formula(cs))) == ((find_witness(cs) is not None),) * 2


class TestFormulas:
    def test_from_text(self):
        x, cs = constraints_from_formula(parse("2*frac(x) > 1 & floor(x) >= 3 & floor(x) ~ 1 mod 2"))
        assert x == "x" and find_witness(cs) == F(15, 4)

    def test_negated_literals(self):
        _, cs = constraints_from_formula(parse("not floor(x) ~ 0 mod 3 & x >= 0 & x <= 1"))
        assert find_witness(cs) == 1

    def test_rejects_two_variables(self):
        with pytest.raises(ValueError):
            constraints_from_formula(parse("x > y"))

    def test_rejects_l(self):
        with pytest.raises(ValueError):
            constraints_from_formula(parse("L(x)"))

    @pytest.mark.parametrize("atom", [FracGt(-3, F(1, 2)), FracGt(2, F(1), strict=False),
                                      FloorAtLeast(-2, F(7, 3)), FloorMod(2, 5)])
    def test_atom_formula_round_trip(self, atom):
        _, cs = constraints_from_formula(atom_formula(atom))
        for i in range(-40, 40):
            x = F(i, 7)
            assert all(truth_pred(c, x) for c in cs) == truth_pred(WitnessConstraint((atom,)), x)
