import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xydiscord import (
    ModelParams,
    StepTooLarge,
    SweepSpec,
    SweepTable,
    WindowTooNarrow,
    derivative_wrt_lambda,
    evaluate_point,
    locate_critical_point,
    quantity_function,
    sweep,
    table_derivatives,
)


class TestSweepSpec:
    def test_range_grid(self):
        spec = SweepSpec(gamma_values=[1.0], lambda_range=(0.0, 2.0, 5))
        np.testing.assert_allclose(spec.lambdas, [0, 0.5, 1.0, 1.5, 2.0])
        assert spec.lambda_spacing == pytest.approx(0.5)

    @pytest.mark.parametrize("rng", [(-0.1, 1.0, 3), (1.0, 0.5, 3), (0.0, 1.0, 1), (0.0, 1.0, 2.5)])
    def test_rejects_bad_range(self, rng):
        with pytest.raises(ValueError):
            SweepSpec(gamma_values=[1.0], lambda_range=rng)

    def test_needs_one_lambda_source(self):
        with pytest.raises(ValueError):
            SweepSpec(gamma_values=[1.0])
        with pytest.raises(ValueError):
            SweepSpec(gamma_values=[1.0], lambda_range=(0, 1, 3), lambda_values=[0.5])

    def test_step_too_large(self):
        with pytest.raises(StepTooLarge):
            SweepSpec(gamma_values=[1.0], lambda_range=(0.0, 1.0, 11), derivative_step=0.1)

    def test_explicit_values_deduplicated(self):
        spec = SweepSpec(gamma_values=[0.5], lambda_values=[1.0, 0.2, 1.0])
        np.testing.assert_array_equal(spec.lambdas, [0.2, 1.0])


class TestSweep:
    def test_single_trivial_point(self):
        table = sweep(SweepSpec(gamma_values=[1.0], lambda_values=[0.0]))
        assert len(table) == 1
        rec = table.records()[0]
        for k in ("mutual_info", "classical", "discord", "concurrence", "eof"):
            assert rec[k] == pytest.approx(0.0, abs=1e-12)

    def test_thermal_washout(self):
        table = sweep(SweepSpec(gamma_values=[0.5], lambda_range=(0.5, 1.5, 3), kT_values=[100.0], distances=[1, 2]))
        assert len(table) == 6
        for k in ("mutual_info", "classical", "discord", "concurrence", "eof"):
            assert np.all(np.abs(table.column(k)) < 1e-3)

    def test_rows_sorted_by_key(self):
        spec = SweepSpec(gamma_values=[1.0, 0.0], lambda_values=[1.5, 0.5], kT_values=[0.5, 0.0], distances=[2, 1])
        keys = [r.key for r in sweep(spec)]
        assert keys == sorted(keys)
        assert len(set(keys)) == len(keys) == 16

    def test_duplicates_rejected(self):
        row = evaluate_point(ModelParams(1.0, 0.5, 0.0), 1)
        with pytest.raises(ValueError):
            SweepTable((row, row))

    def test_deterministic(self):
        spec = SweepSpec(gamma_values=[0.3], lambda_range=(0.2, 1.8, 5), kT_values=[0.0, 0.4], distances=[1, 3])
        evaluate_point.cache_clear()
        first = sweep(spec).records()
        evaluate_point.cache_clear()
        second = sweep(spec).records()
        assert first == second

    @pytest.mark.parametrize("gamma,n", [(1.0, 2), (1.0, 3), (1.0, 4), (0.5, 1), (0.5, 2), (0.5, 4)])
    def test_discord_rate_maximal_at_critical_line(self, gamma, n):
        spec = SweepSpec(gamma_values=[gamma], lambda_range=(0.1, 1.9, 19), distances=[n])
        lams, deriv = table_derivatives(sweep(spec))[(gamma, 0.0, n)]
        assert lams[int(np.argmax(deriv))] == pytest.approx(1.0, abs=1e-9)

    def test_ising_nearest_neighbour_rate_is_global_elsewhere(self):
        # finding: for gamma=1, n=1 the steepest rise is near lambda=0.4; at
        # lambda=1 the curve only has a local kink
        lams = np.linspace(0.1, 1.9, 19)
        deriv = derivative_wrt_lambda(quantity_function(1.0, 0.0, 1), lams)
        assert lams[int(np.argmax(deriv))] == pytest.approx(0.4)
        window = np.abs(deriv[(lams > 0.75) & (lams < 1.25)])
        assert np.argmax(window) == 2  # lambda = 1.0

    def test_distance_decay_disordered_phase(self):
        for gamma in (0.0, 0.25, 0.5, 0.75, 1.0):
            for lam in (0.1, 0.3, 0.5, 0.8, 1.0):
                d = [evaluate_point(ModelParams(gamma, lam, 0.0), n).report.discord for n in (1, 2, 3, 4)]
                assert all(a >= b - 1e-9 for a, b in zip(d, d[1:])), (gamma, lam, d)
        for lam in (1.2, 1.5, 2.0):
            d = [evaluate_point(ModelParams(0.25, lam, 0.0), n).report.discord for n in (1, 2, 3, 4)]
            assert all(a >= b - 1e-9 for a, b in zip(d, d[1:])), (lam, d)

    @pytest.mark.parametrize("gamma,lam", [(0.5, 1.1), (0.75, 1.4), (1.0, 1.9)])
    def test_distance_decay_broken_in_ordered_phase(self, gamma, lam):
        # finding: second neighbours carry more discord than first neighbours
        d1, d2 = (evaluate_point(ModelParams(gamma, lam, 0.0), n).report.discord for n in (1, 2))
        assert d2 > d1 + 1e-4

    def test_far_neighbours_unentangled(self):
        for lam in np.linspace(0.0, 2.0, 11):
            for n in (3, 4):
                r = evaluate_point(ModelParams(1.0, float(lam), 0.0), n).report
                assert r.eof == 0.0
                if lam > 1.0:
                    assert r.discord > 1e-4


class TestDerivative:
    def test_square(self):
        lams = np.array([0.3, 1.0, 1.7])
        np.testing.assert_allclose(derivative_wrt_lambda(lambda x: x * x, lams), 2 * lams, atol=1e-8)

    def test_second_order(self):
        lams = np.array([0.5, 1.2])
        d2 = derivative_wrt_lambda(lambda x: x**3, lams, order=2, step=1e-2)
        np.testing.assert_allclose(d2, 6 * lams, atol=1e-8)

    @settings(max_examples=25)
    @given(st.floats(0.1, 3.0), st.floats(-2, 2), st.floats(-2, 2))
    def test_quadratic_exact(self, x, a, b):
        d = derivative_wrt_lambda(lambda t: a * t * t + b * t, [x])[0]
        assert d == pytest.approx(2 * a * x + b, abs=1e-8)

    def test_washout_is_flat(self):
        f = quantity_function(0.5, 100.0, 2, "discord")
        assert np.all(np.abs(derivative_wrt_lambda(f, [0.5, 1.0, 1.5])) < 1e-6)

    def test_guards(self):
        with pytest.raises(StepTooLarge):
            derivative_wrt_lambda(math.sin, [1.0], step=0.1, grid_spacing=0.05)
        with pytest.raises(ValueError):
            derivative_wrt_lambda(math.sin, [0.0005], step=1e-3)
        with pytest.raises(ValueError):
            derivative_wrt_lambda(math.sin, [1.0], order=3)

    def test_table_derivative_matches_callable(self):
        spec = SweepSpec(gamma_values=[0.5], lambda_range=(0.5, 1.5, 3), kT_values=[0.2])
        lams, d = table_derivatives(sweep(spec), "classical")[(0.5, 0.2, 1)]
        direct = derivative_wrt_lambda(quantity_function(0.5, 0.2, 1, "classical"), lams)
        np.testing.assert_array_equal(d, direct)


class TestLocate:
    @pytest.mark.parametrize("window", [(0.8, 0.99), (1.0, 1.2), (0.9995, 1.0005)])
    def test_window_errors(self, window):
        with pytest.raises(WindowTooNarrow):
            locate_critical_point(1.0, 0.0, 1, window=window)

    def test_ising_nearest_neighbour(self):
        cp = locate_critical_point(1.0, 0.0, 1, num_points=21)
        assert abs(cp.discord.lambda_star - 1.0) < 0.02
        assert abs(cp.classical.lambda_star - 1.0) < 0.02

    def test_thermal_broadening_flagged(self):
        cp = locate_critical_point(1.0, 1.0, 1, num_points=21)
        assert cp.discord.low_contrast
        assert cp.classical.low_contrast
        assert 0.8 <= cp.discord.lambda_star <= 1.2


@pytest.mark.parametrize("n", [1, 4])
def test_second_derivative_sharpens_under_refinement(n):
    f = quantity_function(1.0, 0.0, n)
    steps = (4e-2, 1e-2, 2.5e-3, 6.25e-4)
    at_critical = [abs(derivative_wrt_lambda(f, [1.0], order=2, step=h)[0]) for h in steps]
    off_critical = [abs(derivative_wrt_lambda(f, [0.9], order=2, step=h)[0]) for h in steps]
    assert all(a < b for a, b in zip(at_critical, at_critical[1:]))
    assert at_critical[-1] > 5 * at_critical[0]
    assert max(off_critical) - min(off_critical) < 1e-3 * max(off_critical) + 1e-3
