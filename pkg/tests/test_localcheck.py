import itertools
import random
from fractions import Fraction

import pytest

from goldbach_lab.localcheck import (
    BudgetExceeded,
    EvenModulus,
    LocalWitness,
    ModulusNotDivisibleBy3,
    NoWitness,
    SupportViolation,
    UnitWeight,
    WrongModulus,
    best_witness,
    check_mod15_instance,
    local_class_selection,
    min_support_size,
    random_weighted_check,
    verify_local_indicator,
    verify_sharpness,
)
from goldbach_lab.residues import factorize_squarefree, unit_class_set

MOD15 = factorize_squarefree(15)
MOD21 = factorize_squarefree(21)


def indicator(mod, support):
    return UnitWeight.indicator(mod, support, support_filter=True)


class TestUnitWeight:
    def test_rejects_non_unit(self):
        with pytest.raises(ValueError):
            UnitWeight(MOD15, {3: Fraction(1)})

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            UnitWeight(MOD15, {1: Fraction(5, 4)})

    def test_support_filter(self):
        with pytest.raises(SupportViolation):
            UnitWeight(MOD15, {2: Fraction(1)}, support_filter=True)
        # zero weight on a 2 mod 3 unit is fine
        UnitWeight(MOD15, {2: Fraction(0), 1: Fraction(1)}, support_filter=True)

    def test_total_and_support(self):
        f = UnitWeight(MOD15, {1: Fraction(1, 2), 4: Fraction(1, 3), 7: Fraction(0)})
        assert f.total() == Fraction(5, 6)
        assert f.support() == (1, 4)


class TestSharpness:
    def test_report(self):
        rep = verify_sharpness()
        assert rep.holds
        assert rep.missing_class == 12
        assert rep.sumset == (0, 3, 6, 9)
        assert rep.indicator_sum == 2 == rep.quarter_phi


def naive_indicator_oracle(m, min_size):
    """Independent loop-based enumeration of all indicator failures."""
    mod = factorize_squarefree(m)
    units1 = unit_class_set(mod, class_mod3=1).members()
    targets = [x for x in range(m) if x % 3 == 0]
    failures = set()
    checked = 0
    for k in range(min_size, len(units1) + 1):
        for subset in itertools.combinations(units1, k):
            checked += 1
            sums = {(a + b + c) % m for a in subset for b in subset for c in subset}
            for x in targets:
                if x not in sums:
                    failures.add((subset, x))
    return checked, failures


class TestVerifyLocalIndicator:
    def test_m15_at_threshold(self):
        rep = verify_local_indicator(MOD15)
        assert rep.min_size == 3
        assert rep.checked_subsets == 5
        assert rep.failure_count == 0

    def test_m15_lowered_threshold_fails(self):
        rep = verify_local_indicator(MOD15, min_size=2)
        assert rep.failure_count > 0
        assert ((1, 7), 12) in rep.failures

    def test_m21(self):
        rep = verify_local_indicator(MOD21)
        assert rep.min_size == 4
        assert rep.checked_subsets == 22
        assert rep.failure_count == 0

    def test_matches_naive_oracle_m15(self):
        for min_size in (2, 3):
            rep = verify_local_indicator(MOD15, min_size=min_size)
            checked, failures = naive_indicator_oracle(15, min_size)
            assert rep.checked_subsets == checked
            assert rep.failure_count == len({s for s, _ in failures})
            for subset, x in rep.failures:
                assert (subset, x) in failures

    def test_matches_naive_oracle_m21_lowered(self):
        rep = verify_local_indicator(MOD21, min_size=3)
        checked, failures = naive_indicator_oracle(21, 3)
        assert rep.checked_subsets == checked
        assert rep.failure_count == len({s for s, _ in failures})

    def test_rejects_even(self):
        with pytest.raises(EvenModulus):
            verify_local_indicator(factorize_squarefree(6))

    def test_rejects_not_div_3(self):
        with pytest.raises(ModulusNotDivisibleBy3):
            verify_local_indicator(factorize_squarefree(35))

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            verify_local_indicator(factorize_squarefree(105), budget=100)


class TestWitnessSearch:
    def test_full_weight_witness(self):
        f = indicator(MOD15, (1, 4, 7, 13))
        w = best_witness(f, 0)
        assert w is not None and w.weight_sum == 3
        assert w.check(f, 0)

    def test_class_selection_target_12(self):
        f = indicator(MOD15, (1, 4, 7))
        w = local_class_selection(f, 12)
        assert w.triple == (1, 4, 7)
        assert w.weight_sum == 3

    def test_class_selection_target_0_lex_smallest(self):
        # (1,7,7) and (4,4,7) both sum to 0 mod 15 with weight 3; the
        # lexicographically smallest ordered maximizer wins.
        f = indicator(MOD15, (1, 4, 7))
        w = local_class_selection(f, 0)
        assert w.triple == (1, 7, 7)

    def test_sharpness_has_no_witness(self):
        f = indicator(MOD15, (1, 7))
        with pytest.raises(NoWitness):
            local_class_selection(f, 12)

    def test_below_three_halves_rejected(self):
        f = UnitWeight(MOD15, {1: Fraction(1, 2), 4: Fraction(1, 2),
                               7: Fraction(1, 2)}, support_filter=True)
        with pytest.raises(NoWitness):
            local_class_selection(f, 12)

    def test_non_multiple_target_rejected(self):
        f = indicator(MOD15, (1, 4, 7))
        with pytest.raises(ValueError):
            local_class_selection(f, 7)

    def test_monotonicity_on_random_pairs(self):
        # f <= g pointwise: any witness for f stays a witness for g.
        rng = random.Random(3)
        units1 = unit_class_set(MOD15, class_mod3=1).members()
        for _ in range(200):
            fv = {a: Fraction(rng.randint(0, 8), 8) for a in units1}
            gv = {a: min(v + Fraction(rng.randint(0, 4), 8), Fraction(1))
                  for a, v in fv.items()}
            f = UnitWeight(MOD15, fv, support_filter=True)
            g = UnitWeight(MOD15, gv, support_filter=True)
            for x in (0, 3, 6, 9, 12):
                wf = best_witness(f, x)
                if wf is not None and wf.weight_sum > Fraction(3, 2):
                    wg = best_witness(g, x)
                    assert wg is not None
                    assert wg.weight_sum >= wf.weight_sum

    def test_scaling_preserves_support_witness(self):
        # scaling all weights by lambda in (0,1] keeps the support, so the
        # support indicator admits a witness whenever exhaustive search
        # does for the scaled weight.
        f = UnitWeight(MOD15, {1: Fraction(3, 4), 4: Fraction(2, 3),
                               7: Fraction(9, 10)}, support_filter=True)
        lam = Fraction(1, 2)
        scaled = UnitWeight(MOD15, {a: lam * v for a, v in f.values.items()},
                            support_filter=True)
        assert scaled.support() == f.support()
        ind = indicator(MOD15, f.support())
        for x in (0, 3, 6, 9, 12):
            if best_witness(scaled, x) is not None:
                assert best_witness(ind, x).weight_sum == 3


class TestGridExhaustive:
    def test_m15_quarter_grid_weights(self):
        # all weights over the units 1 mod 3 with values in {0,1/4,...,1}:
        # whenever sum f > phi(15)/4 = 2, every target 0 mod 3 carries a
        # witness with weight sum above 3/2 (grid-exhaustive theorem check)
        units1 = (1, 4, 7, 13)
        levels = [Fraction(k, 4) for k in range(5)]
        hypothesis_hits = 0
        for v1 in levels:
            for v2 in levels:
                for v3 in levels:
                    for v4 in levels:
                        values = dict(zip(units1, (v1, v2, v3, v4)))
                        f = UnitWeight(MOD15, values, support_filter=True)
                        if not f.total() > 2:
                            continue
                        hypothesis_hits += 1
                        for x in (0, 3, 6, 9, 12):
                            w = best_witness(f, x)
                            assert w is not None and w.weight_sum > Fraction(3, 2), \
                                (values, x)
        assert hypothesis_hits == sum(
            1 for a in levels for b in levels for c in levels for d in levels
            if a + b + c + d > 2)


class TestRandomWeighted:
    def test_m15_ten_thousand_trials_clean(self):
        rep = random_weighted_check(MOD15, trials=10**4, seed=1)
        assert rep.failures == []

    def test_m21_small_run_clean(self):
        rep = random_weighted_check(MOD21, trials=100, seed=7)
        assert rep.failures == []

    def test_deterministic(self):
        a = random_weighted_check(MOD15, trials=50, seed=9)
        b = random_weighted_check(MOD15, trials=50, seed=9)
        assert a == b

    def test_sampled_weights_satisfy_hypothesis(self):
        from goldbach_lab.localcheck import _sample_weight
        units1 = unit_class_set(MOD15, class_mod3=1).members()
        rng = random.Random(5)
        for _ in range(200):
            f = _sample_weight(MOD15, units1, rng, 64)
            assert f.total() > Fraction(MOD15.totient, 4)
            assert len(f.support()) > MOD15.totient // 4


class TestMod15Instance:
    def test_full_indicators(self):
        f = indicator(MOD15, (1, 4, 7, 13))
        res = check_mod15_instance(f, f, f, 12)
        assert res.totals == (4, 4, 4)
        assert res.hypothesis_margin == 48 - 24
        assert res.hypothesis_holds and res.witness_found
        assert res.witness.check(f, 12, f, f)

    def test_boundary_totals_two(self):
        # F1 = F2 = F3 = 2 gives margin 12 - 12 = 0: hypothesis strict fail.
        f = indicator(MOD15, (1, 4))
        res = check_mod15_instance(f, f, f, 12)
        assert res.hypothesis_margin == 0
        assert not res.hypothesis_holds

    def test_zero_third_function_never_hypothesis(self):
        # With f3 = 0 the product condition becomes F1F2 > 2(F1+F2),
        # impossible for F_i <= 4.
        zero = UnitWeight(MOD15, {})
        for s1 in range(1, 5):
            for s2 in range(1, 5):
                f1 = indicator(MOD15, (1, 4, 7, 13)[:s1])
                f2 = indicator(MOD15, (1, 4, 7, 13)[:s2])
                res = check_mod15_instance(f1, f2, zero, 0)
                assert not res.hypothesis_holds

    def test_wrong_modulus(self):
        f = indicator(MOD21, (1, 4))
        with pytest.raises(WrongModulus):
            check_mod15_instance(f, f, f, 0)

    def test_support_violation(self):
        good = indicator(MOD15, (1, 4))
        bad = UnitWeight(MOD15, {2: Fraction(1)})
        with pytest.raises(SupportViolation):
            check_mod15_instance(good, good, bad, 0)

    def test_hypothesis_implies_witness_randomized(self):
        rng = random.Random(11)
        units1 = (1, 4, 7, 13)
        hits = 0
        for _ in range(500):
            fs = []
            for _ in range(3):
                vals = {a: Fraction(rng.randint(0, 16), 16) for a in units1}
                fs.append(UnitWeight(MOD15, vals, support_filter=True))
            for x in (0, 3, 6, 9, 12):
                res = check_mod15_instance(fs[0], fs[1], fs[2], x)
                if res.hypothesis_holds:
                    hits += 1
                    assert res.witness_found, (fs, x)
                    assert res.witness.weight_sum > Fraction(3, 2)
        assert hits > 50  # the sampler does reach the hypothesis region


def test_min_support_size_values():
    assert min_support_size(MOD15) == 3
    assert min_support_size(MOD21) == 4
    assert min_support_size(factorize_squarefree(33)) == 6
    assert min_support_size(factorize_squarefree(105)) == 13


def test_witness_invariants_rechecked():
    w = LocalWitness(1, 4, 7, Fraction(3))
    f = UnitWeight.indicator(MOD15, (1, 4, 7))
    assert w.check(f, 12)
    assert not w.check(f, 9)
    assert not LocalWitness(1, 4, 7, Fraction(2)).check(f, 12)
