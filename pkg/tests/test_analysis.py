import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from miworlds import (
    DegenerateConfigurationError,
    InvalidInputError,
    hamiltonian,
    quantile_deviation,
    verify_properties,
)


class TestVerifyProperties:
    def test_n3_exact(self, solved):
        rep = verify_properties(solved(3))
        assert abs(rep.sum) < 1e-12
        assert abs(rep.sum_of_squares_minus) < 1e-12
        assert rep.max_symmetry_defect < 1e-12
        assert rep.monotone
        assert rep.mesh == pytest.approx(1.0, abs=1e-12)
        assert rep.all_ok

    def test_n22_passes_at_1e8(self, solved):
        rep = verify_properties(solved(22), tol=1e-8)
        assert rep.all_ok
        assert rep.failed() == []

    def test_mesh_below_bound_n22(self, solved):
        rep = verify_properties(solved(22))
        assert rep.mesh_bound == pytest.approx(2 / math.sqrt(math.log(22)), abs=1e-12)
        assert rep.mesh_bound == pytest.approx(1.1376, abs=2e-4)
        assert rep.mesh < rep.mesh_bound

    def test_reports_never_raise_for_finite_inputs(self, solved):
        rep = verify_properties(solved(11), tol=1e-30)  # absurdly strict
        assert not rep.all_ok
        assert "zero_mean" in rep.failed() or "symmetry" in rep.failed()

    def test_defects_scale_with_tolerance_not_N(self, solved):
        # identity defects stay at solver-noise level across sizes
        for n in (11, 101):
            rep = verify_properties(solved(n))
            assert abs(rep.sum) < 1e-12 * n
            assert rep.max_symmetry_defect < 1e-12

    def test_x1_mesh_product_bound(self, solved):
        for n in (3, 11, 22, 101):
            cfg = solved(n)
            assert float(cfg.x1) * 2 / math.sqrt(math.log(n)) >= 1.0


class TestHamiltonian:
    def test_n3_exact_arithmetic(self):
        rep = hamiltonian([1.0, 0.0, -1.0])
        assert rep.V == 2.0
        assert rep.U == 2.0
        assert rep.H == 4.0
        assert rep.ground_state_energy == 4.0
        assert rep.defect == 0.0

    def test_equality_at_ground_state_n22(self, solved):
        rep = hamiltonian(solved(22))
        assert rep.defect < 1e-6
        assert rep.U == pytest.approx(21.0, abs=1e-6)
        assert rep.V == pytest.approx(21.0, abs=1e-6)

    def test_single_value_perturbation_raises_energy(self, solved):
        xs = solved(22).as_floats()
        for idx in (0, 5, 11, 21):
            bumped = xs.copy()
            bumped[idx] += 0.01
            bumped.sort()
            rep = hamiltonian(bumped[::-1])
            assert rep.H > rep.ground_state_energy

    def test_degenerate_values(self):
        with pytest.raises(DegenerateConfigurationError):
            hamiltonian([1.0, 1.0, -1.0])
        with pytest.raises(InvalidInputError):
            hamiltonian([0.0, 1.0, 2.0])
        with pytest.raises(InvalidInputError):
            hamiltonian([1.0])

    @given(
        raw=st.lists(
            st.floats(min_value=-50, max_value=50), min_size=3, max_size=30
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_energy_bound_any_zero_mean_decreasing(self, raw):
        xs = np.sort(np.unique(np.asarray(raw, dtype=float)))[::-1]
        if len(xs) < 3:
            return
        xs = xs - xs.mean()
        if np.any(np.diff(xs) >= 0):  # mean shift cannot create ties, but guard
            return
        rep = hamiltonian(xs)
        assert rep.H >= rep.ground_state_energy - 1e-7 * max(1.0, rep.H)


class TestQuantileDeviation:
    def test_n22_top_entry(self, solved):
        pts = quantile_deviation(solved(22))
        first = pts[0]
        assert first.n == 1
        assert first.q_n == pytest.approx(2.0004, abs=1e-4)
        assert first.x_n == pytest.approx(2.0025, abs=5e-4)
        assert first.deviation == pytest.approx(0.0021, abs=3e-4)

    def test_median_entry_odd(self, solved):
        pts = quantile_deviation(solved(11))
        mid = pts[5]  # n = 6 = (11+1)/2
        assert mid.q_n == 0.0
        assert abs(mid.x_n) < 1e-12
        assert abs(mid.deviation) < 1e-12

    def test_covers_all_indices(self, solved):
        pts = quantile_deviation(solved(11))
        assert [p.n for p in pts] == list(range(1, 12))

    def test_intermediate_band_shrinks(self, solved):
        def band_max(n):
            pts = quantile_deviation(solved(n))
            lo, hi = 0.1 * n, 0.9 * n
            return max(abs(p.deviation) for p in pts if lo <= p.n <= hi)

        assert band_max(500) < band_max(50)
