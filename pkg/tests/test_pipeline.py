import cmath
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beurling_helson.circle_maps import make_linear, make_smooth, make_tent, sample_lift
from beurling_helson.config import Caps
from beurling_helson.cyclic_fourier import CyclicFunction
from beurling_helson.pipeline import (
    BudgetExhausted,
    autocorr_lower_bound,
    build_E_N,
    build_phi_N,
    closing_estimate,
    final_integral,
    four_term,
    indicator_identity_check,
    interpolation_check,
    lemma1_certificate,
    lemma2_certificate,
    phi_N_norms,
    rational_sampling_from_fixture,
    run_pipeline,
    section_bound_survey,
    structural_checks,
    theta_table,
)
from oracles import naive_dft, triple_average

SMOOTH = make_smooth(1, 0.5)


@pytest.mark.parametrize(
    "cmap, N, D, Q",
    [
        (make_linear(1, 0), 4, 4, 4),
        (SMOOTH, 6, 3, 8),
        (SMOOTH, 5, 2, 1),
        (SMOOTH, 8, 8, 88),
        (make_tent(), 6, 6, 3),
        (make_tent(), 6, 2, 1),
    ],
)
def test_frozen_denominators(cmap, N, D, Q):
    phiN = build_phi_N(cmap, N, D, D**N)
    assert phiN.Q == Q
    assert phiN.exact
    assert phiN.sup_error <= phiN.sup_bound * (1 + 1e-9)


def test_smooth_numerators_frozen():
    phiN = build_phi_N(SMOOTH, 6, 3, 3**6)
    assert phiN.numerators.tolist() == [0, 2, 3, 4, 5, 6]
    assert phiN.sup_error == pytest.approx(0.17121331409307006, rel=1e-12)


def test_budget_exhausted():
    with pytest.raises(BudgetExhausted) as err:
        build_phi_N(SMOOTH, 8, 8, 10)
    assert err.value.partial.Q <= 10


def test_phases_reduce_mod_Q():
    phiN = build_phi_N(SMOOTH, 6, 3, 3**6)
    np.testing.assert_allclose(phiN.phases([phiN.Q])[0], 0.0, atol=1e-15)
    np.testing.assert_allclose(np.exp(1j * phiN.phases([3])[0]), np.exp(3j * phiN.values()), atol=1e-12)


def test_phi_N_norms_match_naive():
    phiN = build_phi_N(SMOOTH, 6, 3, 3**6)
    norms = phi_N_norms(phiN)
    for n in range(phiN.Q):
        naive = np.abs(naive_dft(np.exp(1j * n * phiN.values()))).sum()
        assert norms[n] == pytest.approx(naive, rel=1e-10)
    assert norms[0] == pytest.approx(1.0)


def test_theta_is_running_max():
    th = theta_table(make_tent(), 8, 20)
    assert np.all(np.diff(th.values) >= 0)
    assert np.all(th.values >= th.norms)
    assert th.at(0) == pytest.approx(1.0)
    assert th.at(10**6) == th.values[-1]


class TestLemma1:
    @pytest.mark.parametrize("cmap, N, D", [(SMOOTH, 6, 3), (SMOOTH, 8, 8), (make_tent(), 6, 6), (make_linear(2, 0.4), 5, 5)])
    def test_chain_holds(self, cmap, N, D):
        phiN = build_phi_N(cmap, N, D, D**N)
        rep = lemma1_certificate(cmap, phiN, N, D)
        assert rep.passed
        assert ("a_phiN_vs_8_theta" in rep.steps) == (D == N)

    def test_step_names(self):
        phiN = build_phi_N(SMOOTH, 6, 3, 3**6)
        rep = lemma1_certificate(SMOOTH, phiN, 6, 3)
        assert set(rep.steps) == {
            "sup_vs_n_sup_error",
            "n_sup_error_vs_dirichlet",
            "a_diff_vs_N_sup",
            "a_diff_vs_2piN_over_D",
            "a_phiN_vs_a_phi_plus_budget",
        }
        assert rep.n_checked == phiN.Q
        assert rep.to_dict()["passed"] is True


class TestEN:
    def test_four_term_formula(self):
        v = np.array([0.3, 1.1, -0.7, 2.0, 0.05])
        F = four_term(v)
        N = v.size
        for x, y, z in itertools.product(range(N), repeat=3):
            assert F[x, y, z] == pytest.approx(v[x] + v[(z - x) % N] - v[y] - v[(z - y) % N])

    def test_four_term_vanishes_for_linear(self):
        # integer arithmetic, so exactly zero mod N * winding
        k = np.arange(7) * 3
        F = four_term(k)
        assert np.all(F % 21 == 0)

    @pytest.mark.parametrize("cmap, N, D", [(SMOOTH, 6, 3), (SMOOTH, 7, 3), (make_tent(), 6, 6), (SMOOTH, 8, 8)])
    def test_integer_membership_matches_float_oracle(self, cmap, N, D):
        phiN = build_phi_N(cmap, N, D, D**N)
        E = build_E_N(phiN)
        v = phiN.values()
        for x, y, z in itertools.product(range(N), repeat=3):
            F = v[x] + v[(z - x) % N] - v[y] - v[(z - y) % N]
            assert E.membership[x, y, z] == (abs(cmath.exp(1j * F) - 1) < 1e-9)

    def test_linear_map_gives_full_set(self):
        phiN = build_phi_N(make_linear(1, 0), 4, 4, 256)
        E = build_E_N(phiN)
        assert E.measure == 1.0 and E.delta == 0.0

    def test_structure(self):
        E = build_E_N(build_phi_N(SMOOTH, 7, 3, 3**7))
        assert structural_checks(E) == {"diagonal_contained": True, "xy_symmetric": True}
        assert E.complement().measure == pytest.approx(1 - E.measure)


class TestIdentity:
    def test_exact_on_smooth(self):
        phiN = build_phi_N(SMOOTH, 6, 3, 3**6)
        E = build_E_N(phiN)
        check = indicator_identity_check(phiN, E)
        assert check.passed and check.max_deviation < 1e-12
        assert E.measure == pytest.approx(29 / 54)

    def test_loop_oracle_on_small_case(self):
        phiN = build_phi_N(make_tent(), 4, 4, 256)
        E = build_E_N(phiN)
        v, Q, N = phiN.values(), phiN.Q, 4
        for x, y, z in itertools.product(range(N), repeat=3):
            F = v[x] + v[(z - x) % N] - v[y] - v[(z - y) % N]
            avg = sum(cmath.exp(1j * n * F) for n in range(Q)) / Q
            assert abs(avg - E.membership[x, y, z]) < 1e-9

    def test_corrupted_fixture_fails(self):
        bad = rational_sampling_from_fixture({"N": 6, "Q": 8, "D": 3, "numerators": [0, 1.5, 2, 4, 6, 6.5]})
        assert not bad.exact
        check = indicator_identity_check(bad, build_E_N(bad))
        assert not check.passed
        assert check.max_deviation > 0.5

    def test_cap_skips(self):
        phiN = build_phi_N(SMOOTH, 8, 8, 8**8)
        check = indicator_identity_check(phiN, build_E_N(phiN), Caps(max_qn3=100))
        assert check.skipped and check.passed and check.max_deviation is None


class TestAutocorrelation:
    def test_matches_loop_oracle(self):
        f = CyclicFunction(np.random.default_rng(0).normal(size=5))
        r = autocorr_lower_bound(f, 3)
        t = triple_average(f.values.real, 3)
        assert r.rhs == pytest.approx(t.real, abs=1e-12)
        assert r.a4_fourth == pytest.approx(t.real, rel=1e-8)
        assert r.holds

    def test_rejects_complex(self):
        with pytest.raises(ValueError):
            autocorr_lower_bound(CyclicFunction([1j, 0]), 1)

    def test_n_zero_is_equality(self):
        r = autocorr_lower_bound(CyclicFunction([0.1, 0.2, 0.3]), 0)
        assert r.lhs == pytest.approx(1.0) and r.rhs == pytest.approx(1.0)

    @given(st.integers(2, 12), st.integers(0, 8), st.integers(0, 2**32 - 1))
    @settings(max_examples=120, deadline=None)
    def test_inequality_and_interpolation(self, N, n, seed):
        f = CyclicFunction(np.random.default_rng(seed).uniform(-np.pi, np.pi, N))
        r = autocorr_lower_bound(f, n)
        assert r.holds
        assert abs(r.a4_fourth - r.rhs) <= 1e-8 * max(1.0, abs(r.rhs))
        assert interpolation_check(f, n).holds


class TestLemma2AndSections:
    @pytest.mark.parametrize("cmap, N, D", [(SMOOTH, 6, 3), (SMOOTH, 8, 8), (make_tent(), 6, 6), (make_linear(1, 0), 4, 4)])
    def test_bounds(self, cmap, N, D):
        phiN = build_phi_N(cmap, N, D, D**N)
        E = build_E_N(phiN)
        rep = lemma2_certificate(phiN, E, theta_table(cmap, N, phiN.Q - 1))
        assert rep.sharp_holds and rep.averaged_holds and rep.constant64_holds
        assert rep.averaged_bound >= rep.sharp_bound - 1e-15
        survey = section_bound_survey(E, rep.M)
        assert survey.passed

    def test_frozen_smooth_measure(self):
        phiN = build_phi_N(SMOOTH, 6, 3, 3**6)
        rep = lemma2_certificate(phiN, build_E_N(phiN))
        assert rep.measure == pytest.approx(0.5370370370370371)
        assert rep.measure - rep.sharp_bound == pytest.approx(0.353, abs=1e-3)
        assert rep.constant64_bound is None


class TestClosing:
    @pytest.mark.parametrize("N", [4, 16, 64])
    def test_linear_integral_is_zero(self, N):
        for cmap in (make_linear(1, 0), make_linear(3, 0.7), make_linear(-2, 1.3)):
            assert final_integral(cmap, N) == 0.0

    def test_smooth_integral_against_direct_sum(self):
        N = 6
        phi = sample_lift(SMOOTH, N)
        direct = np.mean([
            abs(cmath.exp(1j * (phi[x] + phi[(z - x) % N] - phi[y] - phi[(z - y) % N])) - 1)
            for x, y, z in itertools.product(range(N), repeat=3)
        ])
        assert final_integral(SMOOTH, N) == pytest.approx(direct, abs=1e-12)

    def test_smooth_integral_stabilizes(self):
        a, b = final_integral(SMOOTH, 64), final_integral(SMOOTH, 128)
        assert abs(a - b) < 0.01 and b > 0.4

    def test_estimate(self):
        phiN = build_phi_N(SMOOTH, 7, 3, 3**7)
        c = closing_estimate(SMOOTH, phiN, build_E_N(phiN))
        assert c.passed and c.sup_on_E <= 4 * phiN.sup_error + 1e-12


class TestRun:
    def test_report_shape(self):
        r = run_pipeline(SMOOTH, 6, 3, 3**6)
        assert r["ok"] and r["status"] == "complete"
        assert set(r["certificates"]) == {"lemma1", "indicator_identity", "lemma2", "sections", "closing"}
        assert r["phi_N"]["Q"] == 8

    def test_budget_exhaustion_is_reported(self):
        r = run_pipeline(SMOOTH, 8, 8, 10)
        assert r["status"] == "budget_exhausted" and "certificates" not in r

    def test_fixture_run_fails(self):
        bad = rational_sampling_from_fixture({"N": 6, "Q": 8, "D": 3, "numerators": [0, 1.5, 2, 4, 6, 6.5]}, SMOOTH)
        r = run_pipeline(SMOOTH, 6, 3, 3**6, phiN=bad)
        assert not r["ok"]
        assert not r["certificates"]["indicator_identity"]["passed"]

    def test_N_cube_cap(self):
        r = run_pipeline(SMOOTH, 6, 3, 3**6, caps=Caps(max_n3=100))
        assert r["ok"] and "E_N" not in r and r["skipped"]

    def test_linear_winding_gives_trivial_phi(self):
        r = run_pipeline(make_linear(2, 0.0), 5, 5, 5**5)
        assert r["ok"] and r["E_N"]["measure"] == 1.0
        assert math.isclose(r["certificates"]["lemma2"]["M"], 1.0, rel_tol=1e-12)
        assert r["final_integral"] == 0.0
