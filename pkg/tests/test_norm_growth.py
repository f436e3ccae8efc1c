import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beurling_helson.circle_maps import make_harmonic, make_linear, make_smooth, make_tent
from beurling_helson.config import Caps
from beurling_helson.norm_growth import (
    circle_a_norm,
    fit_growth,
    grid_norm,
    growth_table,
    initial_grid,
)
from oracles import bessel_circle_norm, tent_circle_norm

# frozen from the closed-form tent coefficients and the Jacobi-Anger expansion
TENT_NORMS = {16: 4.015197652838967, 64: 4.897642983383391, 1024: 6.662721333880348}
BESSEL_NORMS = {8: 3.083207091282498, 16: 4.248672284292117}


def test_frozen_oracles_still_agree():
    assert tent_circle_norm(16) == pytest.approx(TENT_NORMS[16], rel=1e-12)
    assert bessel_circle_norm(0.5, 8) == pytest.approx(BESSEL_NORMS[8], rel=1e-12)


@pytest.mark.parametrize("nu, c", [(1, 0.0), (3, 0.4), (-2, 1.0), (0, 2.0)])
@pytest.mark.parametrize("n", [1, 7, 128, 1024])
def test_linear_is_exactly_one(nu, c, n):
    r = circle_a_norm(make_linear(nu, c), n)
    assert r.value == 1.0 and r.converged


def test_n_zero():
    assert circle_a_norm(make_tent(), 0).value == 1.0


@pytest.mark.parametrize("n", [16, 64, 1024])
def test_tent_against_closed_form(n):
    r = circle_a_norm(make_tent(), n, tolerance=1e-4)
    assert r.converged
    # grid values are lower bounds
    assert r.value <= TENT_NORMS[n] + 1e-9
    assert r.value == pytest.approx(TENT_NORMS[n], rel=2e-3)


@pytest.mark.parametrize("n", [8, 16])
def test_smooth_against_bessel(n):
    r = circle_a_norm(make_smooth(1, 0.5), n)
    assert r.value == pytest.approx(BESSEL_NORMS[n], rel=1e-10)


def test_grid_values_increase_with_refinement():
    # Z_{2M} folds onto Z_M, so the coarser value is never larger
    m = make_tent()
    vals = [grid_norm(m, 20, M) for M in (64, 128, 256, 512)]
    assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))


@given(st.integers(1, 50), st.floats(-1.5, 1.5), st.integers(5, 9))
@settings(max_examples=40, deadline=None)
def test_refinement_is_monotone(n, amp, k):
    m = make_smooth(1, amp)
    assert grid_norm(m, n, 2**k) <= grid_norm(m, n, 2 ** (k + 1)) * (1 + 1e-12) + 1e-12


def test_non_convergence_is_flagged():
    r = circle_a_norm(make_tent(), 200, tolerance=1e-12, caps=Caps(growth_grid=2**15))
    assert not r.converged and r.grid == 2**15
    assert r.tail_estimate > 0


def test_initial_grid_is_power_of_two():
    M = initial_grid(make_tent(), 10)
    assert M & (M - 1) == 0 and M >= 16 * (1 + 10 * 2)


def test_growth_table_validation():
    with pytest.raises(ValueError):
        growth_table(make_tent(), [4, 2])


class TestFits:
    def test_constant_fit_on_constant(self):
        f = fit_growth(([1, 2, 4, 8], [3.0] * 4), "constant")
        assert f.coefficient == 3.0 and f.residual == 0.0

    def test_power_recovers_exponent(self):
        ns = np.array([16, 32, 64, 128, 256])
        f = fit_growth((ns, 2.5 * ns**0.5), "power")
        assert f.exponent == pytest.approx(0.5) and f.coefficient == pytest.approx(2.5)
        assert f.residual < 1e-12

    def test_log_recovers_slope(self):
        ns = np.array([16, 32, 64, 128, 256])
        f = fit_growth((ns, 0.7 * np.log(ns) + 1.2), "log")
        assert f.coefficient == pytest.approx(0.7) and f.intercept == pytest.approx(1.2)
        np.testing.assert_allclose(f.predict(ns), 0.7 * np.log(ns) + 1.2)

    def test_needs_four_points(self):
        with pytest.raises(ValueError):
            fit_growth(([1, 2, 3], [1, 1, 1]), "log")

    def test_unknown_model(self):
        with pytest.raises(ValueError):
            fit_growth(([1, 2, 3, 4], [1, 1, 1, 1]), "cubic")

    def test_smooth_trend(self):
        series = growth_table(make_smooth(1, 0.5), [16, 32, 64, 128, 256])
        fit = fit_growth(series, "power")
        assert 0.35 < fit.exponent < 0.65

    def test_trig_polynomial_stays_bounded_in_small_range(self):
        series = growth_table(make_harmonic(1, [(1, 0.01, 0.0)]), [1, 2, 4, 8])
        assert series.norms.max() < 1.2
