import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from miworlds import (
    BisectionNotConvergedError,
    InvalidInputError,
    SolverOptions,
    find_largest_root_Sn,
    find_largest_root_xn,
    iterate_recursion,
    normal_upper_quantile,
    shooting_residual,
    solve_ground_state,
)

# largest positive roots of the orbit polynomials, frozen from an
# independent symbolic computation (sympy real-root isolation on the
# numerator of x_n(a) resp. S_n(a))
A_ROOTS = {
    2: 1.0,
    3: 1.306562964876377,   # sqrt(1 + sqrt(2)/2)
    4: 1.484198528727304,
    5: 1.607834207189506,
    6: 1.701997400585974,
}
B_ROOTS = {
    2: 0.707106781186548,   # sqrt(2)/2
    3: 1.0,
    4: 1.179147235591132,
    5: 1.306562964876377,
    6: 1.404728276850633,
}


class TestIterateRecursion:
    def test_n3_exact(self):
        traj = iterate_recursion(1, 3)
        assert traj.complete
        assert [float(v) for v in traj.values] == [1.0, 0.0, -1.0]
        assert [float(s) for s in traj.cumsums] == [1.0, 1.0, 0.0]

    def test_guard_stops_at_zero_cumsum(self):
        traj = iterate_recursion(1, 4)
        assert not traj.complete
        assert traj.status == "cumsum_nonpositive"
        assert traj.stop_index == 3
        assert traj.n_reached == 3

    def test_paper_n22_orbit(self):
        # iterating from the 4-decimal x1 stays close to antisymmetric
        traj = iterate_recursion(2.0025, 22)
        assert traj.complete
        assert float(traj.values[21]) == pytest.approx(-2.0025, abs=5e-3)

    def test_invalid_inputs(self):
        with pytest.raises(InvalidInputError):
            iterate_recursion(float("nan"), 3)
        with pytest.raises(InvalidInputError):
            iterate_recursion(float("inf"), 3)
        with pytest.raises(InvalidInputError):
            iterate_recursion(-1.0, 3)
        with pytest.raises(InvalidInputError):
            iterate_recursion(1.0, 0)

    @given(x1=st.floats(min_value=0.2, max_value=5.0), n=st.integers(2, 40))
    @settings(max_examples=40, deadline=None)
    def test_orbit_identities(self, x1, n):
        traj = iterate_recursion(x1, n)
        vals, sums = traj.values, traj.cumsums
        with mp.workdps(30):
            running = mp.mpf(0)
            for k in range(traj.n_reached):
                running += vals[k]
                assert abs(sums[k] - running) < mp.mpf("1e-24")
            for k in range(traj.n_reached - 1):
                assert abs(vals[k + 1] - (vals[k] - 1 / sums[k])) < mp.mpf("1e-24")
        if not traj.complete:
            assert sums[traj.stop_index - 1] <= 0


class TestShootingResidual:
    def test_odd_trivial(self):
        assert float(shooting_residual(1, 3)) == 0.0
        assert float(shooting_residual(2, 3)) == 1.5

    def test_even_quartic_root(self):
        # 2 x2 - 1/S2 = 0 reduces to 4 a^4 - 7 a^2 + 2 = 0
        a = math.sqrt((7 + math.sqrt(17)) / 8)
        assert float(shooting_residual(a, 4)) == pytest.approx(0.0, abs=1e-14)

    def test_infeasible_sentinel(self):
        assert shooting_residual(0.05, 9) == mp.mpf("-inf")

    def test_invalid(self):
        with pytest.raises(InvalidInputError):
            shooting_residual(float("nan"), 5)
        with pytest.raises(InvalidInputError):
            shooting_residual(1.0, 2)


class TestNormalUpperQuantile:
    def test_symmetry_point(self):
        assert float(normal_upper_quantile(0.5)) == 0.0

    def test_paper_q22(self):
        assert float(normal_upper_quantile(1 / 44)) == pytest.approx(2.0004, abs=1e-4)

    def test_against_independent_inversion(self):
        # high-precision oracle: scipy's Cephes-based ppf
        from scipy.stats import norm

        for p in (0.025, 0.1, 0.4, 0.6, 0.9, 1e-4):
            assert float(normal_upper_quantile(p)) == pytest.approx(
                norm.isf(p), abs=1e-10
            )
        assert float(normal_upper_quantile(0.025)) == pytest.approx(
            1.959963985, abs=1e-9
        )

    def test_range_errors(self):
        for bad in (0.0, 1.0, -0.5, 2.0, float("nan")):
            with pytest.raises(InvalidInputError):
                normal_upper_quantile(bad)


class TestSolveGroundState:
    def test_n3_forced(self, solved):
        cfg = solved(3)
        target = [1.0, 0.0, -1.0]
        for v, t in zip(cfg.values, target):
            assert abs(float(v) - t) < 1e-12

    def test_n4_quartic(self, solved):
        cfg = solved(4)
        roots = np.roots([4, 0, -7, 0, 2])
        oracle = max(r.real for r in roots if abs(r.imag) < 1e-12)
        assert abs(float(cfg.x1) - oracle) < 1e-10
        assert abs(float(cfg.x1) - math.sqrt((7 + math.sqrt(17)) / 8)) < 1e-10

    def test_n22_golden(self, solved):
        cfg = solved(22)
        assert abs(float(cfg.x1) - 2.0025) < 5e-4
        assert abs(cfg.residual) < 1e-12

    def test_invalid_n(self):
        with pytest.raises(InvalidInputError):
            solve_ground_state(2)

    def test_residual_positive_beyond_root(self, solved):
        cfg = solved(22)
        for scale in (1.0001, 1.01, 1.5, 2.0, 10.0):
            assert shooting_residual(cfg.x1 * scale, 22) > 0

    def test_x1_lower_bound(self, solved):
        for n in (3, 4, 11, 22, 101):
            cfg = solved(n)
            assert float(cfg.x1) >= math.sqrt(math.log(n)) / 2

    def test_doubled_precision_stability(self, solved):
        coarse = solved(22, precision_digits=30)
        fine = solved(22, precision_digits=60)
        tol = 10.0 ** (-(30 - 10)) * float(coarse.x1)
        assert abs(float(coarse.x1 - fine.x1)) < tol

    def test_bisection_budget_error(self):
        with pytest.raises(BisectionNotConvergedError):
            solve_ground_state(11, SolverOptions(max_bisection_steps=1))

    def test_options_validation(self):
        with pytest.raises(InvalidInputError):
            SolverOptions(residual_tolerance=0.0)
        with pytest.raises(InvalidInputError):
            SolverOptions(max_bisection_steps=0)
        with pytest.raises(InvalidInputError):
            SolverOptions(bracket_seed_scale=(2.0, 1.0))


class TestRootScans:
    def test_a2_exact(self):
        assert float(find_largest_root_xn(2)) == 1.0

    def test_b2_closed_form(self):
        assert abs(float(find_largest_root_Sn(2)) - math.sqrt(2) / 2) < 1e-10

    @pytest.mark.parametrize("n", sorted(A_ROOTS))
    def test_against_symbolic_roots(self, n):
        assert abs(float(find_largest_root_xn(n)) - A_ROOTS[n]) < 1e-10
        assert abs(float(find_largest_root_Sn(n)) - B_ROOTS[n]) < 1e-10

    def test_ordering(self):
        a = {n: float(find_largest_root_xn(n)) for n in range(2, 7)}
        b = {n: float(find_largest_root_Sn(n)) for n in range(2, 7)}
        for n in range(2, 6):
            assert a[n] < a[n + 1]
            assert b[n] < b[n + 1]
        for n in range(2, 7):
            assert a[n] > b[n]

    def test_bN_is_ground_state_x1(self, solved):
        # S_N = 0 is the zero-mean condition, so its largest root is the
        # solved x_1
        cfg = solved(5)
        assert abs(float(find_largest_root_Sn(5)) - float(cfg.x1)) < 1e-10
