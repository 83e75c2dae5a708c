import random
from fractions import Fraction

import pytest

from goldbach_lab.lemmas import (
    HALF,
    SequenceTriple,
    boundary_equality_case,
    lemma_hypothesis_check,
    random_counterexample_search,
    transformed_hypothesis_equivalent,
)

FR = Fraction


class TestSequenceTriple:
    def test_validation(self):
        with pytest.raises(ValueError):
            SequenceTriple.symmetric([FR(1)] * 5)  # odd n
        with pytest.raises(ValueError):
            SequenceTriple.symmetric([FR(1)] * 4)  # n < 6
        with pytest.raises(ValueError):
            SequenceTriple.symmetric([FR(1, 2), FR(3, 4)] + [FR(0)] * 4)  # increasing
        with pytest.raises(ValueError):
            SequenceTriple.symmetric([FR(3, 2)] + [FR(0)] * 5)  # > 1

    def test_averages(self):
        seq = SequenceTriple.symmetric([FR(1), FR(1), FR(1, 2), FR(1, 2),
                                        FR(0), FR(0)])
        assert seq.averages()[0] == FR(1, 2)


class TestHypothesisCheck:
    def test_constant_half_boundary_holds(self):
        seq = SequenceTriple.symmetric([HALF] * 6)
        chk = lemma_hypothesis_check(seq)
        assert chk.holds and chk.witness_triple is None

    def test_constant_one_first_violation(self):
        seq = SequenceTriple.symmetric([FR(1)] * 6)
        chk = lemma_hypothesis_check(seq)
        assert not chk.holds
        # lexicographically first qualifying triple: (0,1,5), sum 6 >= 6,
        # violating 3 <= 3/2
        assert chk.witness_triple == (0, 1, 5)

    def test_trailing_zero_block_holds(self):
        # zeros cover every qualifying triple: all products vanish
        seq = SequenceTriple.symmetric([FR(1), FR(1)] + [FR(0)] * 6)
        assert lemma_hypothesis_check(seq).holds

    def test_fixed_rhs_variant(self):
        seq = SequenceTriple.symmetric([FR(1)] * 6)
        chk = lemma_hypothesis_check(seq, fixed_rhs=True)
        assert not chk.holds

    def test_transformation_equivalence(self):
        rng = random.Random(0)
        for _ in range(2000):
            vals = [FR(rng.randint(0, 256), 256) for _ in range(3)]
            assert transformed_hypothesis_equivalent(*vals)


class TestRandomSearch:
    @pytest.mark.parametrize("n", [6, 8, 12])
    def test_symmetric_no_violations(self, n):
        rep = random_counterexample_search(n, trials=3000, seed=7,
                                           mode="symmetric")
        assert rep.violations == 0
        assert rep.worst_conclusion_margin <= 1e-12

    @pytest.mark.parametrize("n", [10, 12])
    def test_asymmetric_no_violations(self, n):
        rep = random_counterexample_search(n, trials=3000, seed=7,
                                           mode="asymmetric")
        assert rep.violations == 0

    def test_symmetric_fixed_rhs_no_violations(self):
        rep = random_counterexample_search(6, trials=2000, seed=3,
                                           mode="symmetric", fixed_rhs=True)
        assert rep.violations == 0

    def test_deterministic(self):
        a = random_counterexample_search(6, trials=500, seed=11)
        b = random_counterexample_search(6, trials=500, seed=11)
        assert a == b

    def test_samples_actually_get_repaired(self):
        rep = random_counterexample_search(6, trials=1000, seed=1)
        assert rep.repaired_fraction > 0.5  # uniform samples mostly violate

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            random_counterexample_search(7, 10)
        with pytest.raises(ValueError):
            random_counterexample_search(4, 10, mode="symmetric")
        with pytest.raises(ValueError):
            random_counterexample_search(8, 10, mode="asymmetric")
        with pytest.raises(ValueError):
            random_counterexample_search(10, 10, mode="asymmetric",
                                         fixed_rhs=True)
        with pytest.raises(ValueError):
            random_counterexample_search(10, 10, mode="bogus")

    def test_symmetric_diagonal_of_asymmetric(self):
        # the symmetric statement is the asymmetric one on a = b = c: a
        # hypothesis-satisfying symmetric sample also satisfies the
        # asymmetric conclusion form
        rng = random.Random(5)
        for _ in range(100):
            vals = sorted([FR(rng.randint(0, 64), 128) for _ in range(10)],
                          reverse=True)
            seq = SequenceTriple.symmetric(vals)
            if lemma_hypothesis_check(seq).holds:
                a, b, c = seq.averages()
                assert a * b + b * c + c * a <= (a + b + c) / 2


class TestBoundary:
    def test_constant_half_equalities(self):
        for n in (6, 10):
            out = boundary_equality_case(n)
            assert out["hypothesis_holds"]
            assert out["hypothesis_equality"]
            assert out["conclusion_equality"]
        out = boundary_equality_case(10, mode="asymmetric")
        assert out["conclusion_equality"]
