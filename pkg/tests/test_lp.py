import random
from fractions import Fraction

import pytest

from goldbach_lab.lp import (
    Infeasible,
    NOMINAL_TABLE,
    ProfileNotAdmissible,
    SupportProfile,
    TableMismatch,
    Unbounded,
    admissible_profiles,
    build_lp,
    dual_bound_certificate,
    enumerate_vertices,
    index_triples,
    reproduce_table,
    simplex_max,
    solve_lp_exact,
    t_function,
    t_monotone_on_range,
)

F = Fraction


def _solve_exact(mat, vec):
    """Exact Gaussian elimination; None when the system is singular."""
    n = len(vec)
    aug = [list(row) + [v] for row, v in zip(mat, vec)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        prow = aug[col]
        inv = prow[col]
        aug[col] = prow = [v / inv for v in prow]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [v - f * pv for v, pv in zip(aug[i], prow)]
    return tuple(aug[i][-1] for i in range(n))


class TestProfiles:
    def test_count_and_membership(self):
        profiles = {p.sizes for p in admissible_profiles()}
        assert (4, 4, 1) in profiles  # 24 > 18
        assert (4, 4, 0) not in profiles  # 16 > 16 fails
        assert (2, 2, 2) not in profiles  # 12 > 12 fails (boundary)
        assert len(profiles) == 12

    def test_matches_arithmetic_definition(self):
        expected = set()
        for n1 in range(5):
            for n2 in range(n1 + 1):
                for n3 in range(n2 + 1):
                    if n1 * n2 + n2 * n3 + n3 * n1 > 2 * (n1 + n2 + n3):
                        expected.add((n1, n2, n3))
        assert {p.sizes for p in admissible_profiles()} == expected

    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            SupportProfile(1, 2, 3)
        with pytest.raises(ValueError):
            SupportProfile(5, 1, 1)


class TestBuildLp:
    def test_441_has_six_triples(self):
        inst = build_lp(SupportProfile(4, 4, 1))
        assert inst.triple_rows == 6
        pairs = {(j1, j2) for j1, j2, j3 in index_triples(inst.profile)}
        assert pairs == {(2, 4), (3, 3), (3, 4), (4, 2), (4, 3), (4, 4)}

    def test_triple_set_definition(self):
        for profile in admissible_profiles():
            for (j1, j2, j3) in index_triples(profile):
                assert j1 + j2 + j3 > 6
                assert 1 <= j1 <= profile.n1
                assert 1 <= j2 <= profile.n2
                assert 1 <= j3 <= profile.n3

    def test_not_admissible_rejected(self):
        with pytest.raises(ProfileNotAdmissible):
            build_lp(SupportProfile(2, 2, 2))

    def test_f3_bound_row_present(self):
        inst = build_lp(SupportProfile(4, 4, 2), extra_f3_lower_bound=1)
        assert inst.f3_lower_bound == 1
        assert any(r.label == "F3 >= 1" for r in inst.rows)


class TestSimplex:
    def test_hand_case(self):
        # max 3a + 2b st 2a + b <= 4, a + 3b <= 6: optimum 34/5 at (6/5, 8/5)
        v, x = simplex_max([[F(2), F(1)], [F(1), F(3)]], [F(4), F(6)],
                           [F(3), F(2)])
        assert v == F(34, 5)
        assert x == [F(6, 5), F(8, 5)]

    def test_negative_rhs_phase1(self):
        # max x st x >= 2, x <= 5
        v, x = simplex_max([[F(-1)], [F(1)]], [F(-2), F(5)], [F(1)])
        assert v == 5

    def test_infeasible(self):
        with pytest.raises(Infeasible):
            simplex_max([[F(1)], [F(-1)]], [F(1), F(-2)], [F(1)])

    def test_unbounded(self):
        with pytest.raises(Unbounded):
            simplex_max([[F(-1)]], [F(0)], [F(1)])

    def test_degenerate_terminates(self):
        # redundant constraints meeting at a degenerate vertex
        v, _ = simplex_max([[F(1), F(1)], [F(1), F(1)], [F(1), F(0)]],
                           [F(1), F(1), F(1)], [F(1), F(1)])
        assert v == 1


class TestHeadlineValues:
    def test_441_exact(self):
        cert = solve_lp_exact(build_lp(SupportProfile(4, 4, 1)))
        assert cert.optimum == F(13, 2)
        assert cert.cross_checked

    def test_442_exact_optimum_is_37_6(self):
        # The displayed one-decimal bound is 6.2; the exact optimum of the
        # stated constraint set is 37/6 = 6.1666..., strictly inside it.
        cert = solve_lp_exact(build_lp(SupportProfile(4, 4, 2)))
        assert cert.optimum == F(37, 6)
        assert cert.optimum < NOMINAL_TABLE[(4, 4, 2)]

    def test_442_with_f3_bound_at_most_6(self):
        cert = solve_lp_exact(
            build_lp(SupportProfile(4, 4, 2), extra_f3_lower_bound=1))
        assert cert.optimum <= 6
        assert cert.optimum == F(39, 7)  # frozen from the cross-checked solve

    def test_441_with_f3_bound_at_most_6(self):
        cert = solve_lp_exact(
            build_lp(SupportProfile(4, 4, 1), extra_f3_lower_bound=F(1, 2)))
        assert cert.optimum <= 6
        assert cert.optimum == F(11, 2)  # frozen from the cross-checked solve

    def test_infeasible_f3_bound(self):
        with pytest.raises(Infeasible):
            solve_lp_exact(build_lp(SupportProfile(4, 4, 1),
                                    extra_f3_lower_bound=2))


class TestCrossChecks:
    @pytest.mark.parametrize("sizes", [(4, 4, 1), (4, 4, 2), (3, 2, 2),
                                       (3, 3, 3)])
    def test_simplex_equals_vertex_enumeration(self, sizes):
        inst = build_lp(SupportProfile(*sizes))
        cert = solve_lp_exact(inst, cross_check=True)
        assert cert.cross_checked
        assert cert.vertex_count > 0

    @pytest.mark.parametrize("sizes", [(4, 4, 1), (4, 4, 2), (3, 3, 1)])
    def test_dual_certificate_matches(self, sizes):
        inst = build_lp(SupportProfile(*sizes))
        cert = solve_lp_exact(inst, cross_check=False)
        bound, _ = dual_bound_certificate(inst)
        assert bound == cert.optimum

    def test_extra_constraint_never_increases(self):
        for sizes, bound in (((4, 4, 2), 1), ((4, 4, 1), F(1, 2)),
                             ((4, 4, 2), F(1, 2))):
            base = solve_lp_exact(build_lp(SupportProfile(*sizes)),
                                  cross_check=False)
            tight = solve_lp_exact(
                build_lp(SupportProfile(*sizes), extra_f3_lower_bound=bound),
                cross_check=False)
            assert tight.optimum <= base.optimum

    def test_dropping_monotonicity_never_decreases(self):
        for profile in admissible_profiles():
            mono = solve_lp_exact(build_lp(profile), cross_check=False)
            relaxed = solve_lp_exact(
                build_lp(profile, include_monotonicity=False),
                cross_check=False)
            assert relaxed.optimum >= mono.optimum

    def test_vertices_are_feasible_box_points(self):
        inst = build_lp(SupportProfile(3, 3, 1))
        for v in enumerate_vertices(inst):
            assert inst.is_feasible_point(v)
            assert all(0 <= c <= 1 for c in v)

    def test_vertex_set_matches_basis_enumeration(self):
        # Textbook oracle for the oracle: enumerate all d-subsets of rows,
        # solve each square system (float pre-screen, exact confirmation),
        # and keep the feasible solutions with full-rank active sets.  The
        # resulting vertex set must coincide with the incremental cutter's.
        import itertools
        import numpy as np
        from goldbach_lab.lp import _rank

        inst = build_lp(SupportProfile(3, 2, 2))
        rows = inst.full_rows()
        d = inst.n_vars
        a_np = np.array([[float(c) for c in r.coeffs] for r in rows])
        b_np = np.array([float(r.bound) for r in rows])

        candidates = set()
        for subset in itertools.combinations(range(len(rows)), d):
            sub_a = a_np[list(subset)]
            sub_b = b_np[list(subset)]
            if abs(np.linalg.det(sub_a)) < 1e-9:
                continue
            x = np.linalg.solve(sub_a, sub_b)
            if (a_np @ x <= b_np + 1e-7).all():
                # exact confirmation of the float candidate
                mat = [[rows[i].coeffs[j] for j in range(d)] for i in subset]
                vec = [rows[i].bound for i in subset]
                sol = _solve_exact(mat, vec)
                if sol is None:
                    continue
                if not inst.is_feasible_point(sol):
                    continue
                active = [rows[i].coeffs for i in range(len(rows))
                          if sum(c * v for c, v in zip(rows[i].coeffs, sol))
                          == rows[i].bound]
                if _rank(list(active), d) == d:
                    candidates.add(tuple(sol))
        assert candidates == set(enumerate_vertices(inst))

    def test_certificate_verify(self):
        inst = build_lp(SupportProfile(4, 3, 1))
        cert = solve_lp_exact(inst, cross_check=False)
        assert cert.verify(inst)


class TestTable:
    def test_strict_flags_nominal_mismatch(self):
        # the (4,4,2) row solves to 37/6 != 31/5, so strict mode raises
        with pytest.raises(TableMismatch):
            reproduce_table(cross_check=False, strict=True)

    def test_report_contents(self):
        rep = reproduce_table(cross_check=False, strict=False)
        optima = {p.sizes: v for p, v in rep.optima.items()}
        assert optima[(4, 4, 1)] == F(13, 2)
        assert optima[(4, 4, 2)] == F(37, 6)
        assert rep.mismatches == [((4, 4, 2), F(37, 6), F(31, 5))]
        assert rep.bounds_hold
        for sizes, v in optima.items():
            if sizes not in ((4, 4, 1), (4, 4, 2)):
                assert v <= 6, sizes
        for v in rep.constrained.values():
            assert v <= 6

    def test_displayed_decimals_consistent(self):
        # every solved optimum rounds (one decimal, outward) into its
        # displayed table entry
        rep = reproduce_table(cross_check=False, strict=False)
        optima = {p.sizes: v for p, v in rep.optima.items()}
        assert optima[(4, 4, 1)] == F(65, 10)
        assert optima[(4, 4, 2)] <= F(62, 10)
        assert F(61, 10) < optima[(4, 4, 2)]  # 6.2 is the tightest 1-decimal cap


class TestTFunction:
    def test_negativity_checkpoints(self):
        assert t_function("2.6", "2.6", 1) == F(-11, 25)
        assert t_function(3, 3, F(1, 2)) == -1

    def test_float_inputs_read_as_decimals(self):
        assert t_function(2.6, 2.6, 1) == F(-11, 25)
        assert t_function(3, 3, 0.5) == -1

    def test_boundary_zero(self):
        assert t_function(2, 2, 2) == 0

    def test_monotone_predicate(self):
        assert t_monotone_on_range(F(13, 5), F(13, 5), 1)
        assert not t_monotone_on_range(1, F(1, 2), F(1, 4))
        # monotonicity checked against explicit increments
        base = (F(13, 5), F(13, 5), F(1))
        rng = random.Random(0)
        for _ in range(200):
            lo = tuple(b + F(rng.randint(0, 40), 10) for b in base)
            hi = tuple(v + F(rng.randint(0, 40), 10) for v in lo)
            assert t_function(*hi) >= t_function(*lo)

    def test_cauchy_schwarz_consequence(self):
        # any nonnegative triple with sum <= 6 fails the strict product
        # hypothesis: T <= 0 exactly
        rng = random.Random(1)
        for _ in range(2000):
            a = F(rng.randint(0, 600), 100)
            b = F(rng.randint(0, 600 - int(a * 100)), 100)
            c = F(rng.randint(0, max(0, 600 - int(a * 100) - int(b * 100))), 100)
            assert a + b + c <= 6
            assert t_function(a, b, c) <= 0
