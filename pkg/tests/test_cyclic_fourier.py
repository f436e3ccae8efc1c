import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beurling_helson.cyclic_fourier import (
    CyclicFunction,
    Spectrum,
    a_norm,
    convolve,
    dft,
    fold_circle_series,
    idft,
    l2_norm,
)
from oracles import naive_cyclic_convolution, naive_dft, naive_idft


def random_function(rng, N):
    return CyclicFunction(rng.normal(size=N) + 1j * rng.normal(size=N))


def rel_err(a, b):
    return np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(b)))


class TestTransform:
    def test_constant_maps_to_delta(self):
        s = dft(CyclicFunction(np.ones(8)))
        np.testing.assert_allclose(s.coeffs, [1, 0, 0, 0, 0, 0, 0, 0], atol=1e-15)

    def test_first_character_on_T4(self):
        s = dft(CyclicFunction([1, 1j, -1, -1j]))
        np.testing.assert_allclose(s.coeffs, [0, 1, 0, 0], atol=1e-15)

    def test_matches_quadratic_oracle(self):
        f = random_function(np.random.default_rng(1), 16)
        assert rel_err(dft(f).coeffs, naive_dft(f.values)) < 1e-10

    def test_inverse_of_delta(self):
        np.testing.assert_allclose(idft(Spectrum([1, 0, 0, 0, 0])).values, np.ones(5), atol=1e-15)
        for k in range(6):
            delta = np.zeros(6)
            delta[k] = 1
            np.testing.assert_allclose(idft(Spectrum(delta)).values, CyclicFunction.character(k, 6).values, atol=1e-14)

    def test_inverse_matches_oracle_and_roundtrips(self):
        rng = np.random.default_rng(2)
        s = Spectrum(rng.normal(size=16) + 1j * rng.normal(size=16))
        assert rel_err(idft(s).values, naive_idft(s.coeffs)) < 1e-10
        assert rel_err(dft(idft(s)).coeffs, s.coeffs) < 1e-10

    @pytest.mark.parametrize("N", [1, 2, 3, 7, 64, 97, 1000, 4096])
    def test_roundtrip_sizes(self, N):
        f = random_function(np.random.default_rng(N), N)
        assert rel_err(idft(dft(f)).values, f.values) < 1e-10

    def test_values_are_immutable(self):
        f = CyclicFunction([1, 2, 3])
        with pytest.raises(ValueError):
            f.values[0] = 5

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            CyclicFunction([])

    def test_spectrum_csv(self):
        text = dft(CyclicFunction([1, 1j, -1, -1j])).to_csv()
        lines = text.splitlines()
        assert lines[0] == "k,re,im"
        assert len(lines) == 5
        assert float(lines[2].split(",")[1]) == pytest.approx(1.0)


class TestNorms:
    @pytest.mark.parametrize("p", [1, 1.5, 2, 4, np.inf])
    def test_character_has_unit_norm(self, p):
        assert a_norm(CyclicFunction.character(3, 10), p) == pytest.approx(1.0, abs=1e-12)

    def test_two_unit_coefficients(self):
        t = 2 * np.pi * np.arange(4) / 4
        f = CyclicFunction(1 + np.exp(1j * t))
        assert a_norm(f, 1) == pytest.approx(2.0)
        assert a_norm(f, 2) == pytest.approx(np.sqrt(2))

    def test_parseval(self):
        f = random_function(np.random.default_rng(3), 32)
        rms = np.sqrt(np.mean(np.abs(f.values) ** 2))
        assert abs(a_norm(f, 2) - rms) < 1e-10
        assert abs(l2_norm(f) - rms) < 1e-15

    def test_rejects_p_below_one(self):
        with pytest.raises(ValueError):
            a_norm(CyclicFunction([1, 2]), 0.5)

    @given(st.integers(1, 64), st.integers(0, 2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_monotone_in_p(self, N, seed):
        f = random_function(np.random.default_rng(seed), N)
        a1, a2, a4 = (a_norm(f, p) for p in (1, 2, 4))
        assert a1 >= a2 * (1 - 1e-12) and a2 >= a4 * (1 - 1e-12)

    @given(st.integers(1, 64), st.integers(0, 2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_submultiplicative(self, N, seed):
        rng = np.random.default_rng(seed)
        f1, f2 = random_function(rng, N), random_function(rng, N)
        assert a_norm(f1 * f2) <= a_norm(f1) * a_norm(f2) * (1 + 1e-12)

    @given(st.integers(1, 64), st.integers(0, 2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_bounded_by_N_times_sup(self, N, seed):
        f = random_function(np.random.default_rng(seed), N)
        assert a_norm(f) <= N * np.abs(f.values).max() * (1 + 1e-12)


class TestConvolution:
    def test_character_idempotent(self):
        e = CyclicFunction.character(2, 8)
        np.testing.assert_allclose(convolve(e, e).values, e.values, atol=1e-14)

    def test_distinct_characters_orthogonal(self):
        out = convolve(CyclicFunction.character(1, 8), CyclicFunction.character(3, 8))
        np.testing.assert_allclose(out.values, 0, atol=1e-14)

    def test_matches_double_sum(self):
        rng = np.random.default_rng(4)
        f1, f2 = random_function(rng, 16), random_function(rng, 16)
        assert rel_err(convolve(f1, f2).values, naive_cyclic_convolution(f1.values, f2.values)) < 1e-10

    def test_spectrum_is_product(self):
        rng = np.random.default_rng(5)
        f1, f2 = random_function(rng, 12), random_function(rng, 12)
        lhs = dft(convolve(f1, f2)).coeffs
        assert rel_err(lhs, dft(f1).coeffs * dft(f2).coeffs) < 1e-12

    def test_order_mismatch(self):
        with pytest.raises(ValueError):
            convolve(CyclicFunction([1, 2]), CyclicFunction([1, 2, 3]))


class TestFolding:
    def test_frequency_N_folds_to_constant(self):
        np.testing.assert_allclose(fold_circle_series([(5, 1)], 5).coeffs, [1, 0, 0, 0, 0])

    def test_aligned_phases_keep_norm(self):
        s = fold_circle_series([(1, 1), (1 + 6, 1)], 6)
        assert s.coeffs[1] == 2 and s.l1() == 2

    def test_cancellation_is_strict_contraction(self):
        s = fold_circle_series([(1, 1), (1 + 6, -1)], 6)
        assert s.coeffs[1] == 0 and s.l1() < 2

    def test_negative_frequencies(self):
        s = fold_circle_series([(-1, 1)], 4)
        assert s.coeffs[3] == 1

    def test_fold_equals_restriction(self):
        # restricting the circle series to T_N and transforming gives the folded coefficients
        rng = np.random.default_rng(6)
        pairs = [(int(k), complex(c)) for k, c in zip(rng.integers(-40, 40, 12), rng.normal(size=12))]
        N = 7
        t = 2 * np.pi * np.arange(N) / N
        values = sum(c * np.exp(1j * k * t) for k, c in pairs)
        assert rel_err(fold_circle_series(pairs, N).coeffs, naive_dft(values)) < 1e-10

    @given(
        st.lists(st.tuples(st.integers(-200, 200), st.complex_numbers(max_magnitude=10)), min_size=1, max_size=30),
        st.integers(1, 40),
    )
    @settings(max_examples=100, deadline=None)
    def test_contraction(self, pairs, N):
        assert fold_circle_series(pairs, N).l1() <= sum(abs(c) for _, c in pairs) * (1 + 1e-12) + 1e-12
