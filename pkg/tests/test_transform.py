import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from oracles import coupling_by_quadrature, sinlet_logistic_closed
from sinlets import (AliasingError, CoefficientVector, DegenerateInputError, DomainError,
                     OrderOverflowError, ParameterError, SampledSignal, SinletBasis,
                     coupling_matrix, cos_to_sin, decompose, estimate_center,
                     estimate_nmax, estimate_width, reconstruct, sin_to_cos)
from sinlets.experiments import (BANDPASS_C, BANDPASS_NU_MAX, BANDPASS_T_MAX,
                                 bandpass_signal, random_coefficients)
from sinlets.transform import Kind, estimate_basis, max_safe_order

DENSE = np.arange(-30.0, 30.0, 0.005)


def synth(basis, a, grid=DENSE, kind="sin"):
    return reconstruct(CoefficientVector(kind, basis, a), grid)


class TestSampledSignal:
    def test_rejects_unsorted(self):
        with pytest.raises(DomainError):
            SampledSignal([0.0, 2.0, 1.0], [1.0, 2.0, 3.0])

    def test_rejects_short_and_nonfinite(self):
        with pytest.raises(DomainError):
            SampledSignal([0.0], [1.0])
        with pytest.raises(DomainError):
            SampledSignal([0.0, 1.0], [1.0, math.nan])

    def test_arrays_are_read_only(self):
        s = SampledSignal([0.0, 1.0], [1.0, 2.0])
        with pytest.raises(ValueError):
            s.values[0] = 3.0

    def test_uniform_flag(self):
        assert SampledSignal(np.linspace(0, 1, 11), np.zeros(11)).uniform
        assert not SampledSignal([0.0, 0.1, 0.3], [0, 0, 0]).uniform


class TestEstimateCenter:
    def test_even_signal(self):
        t = np.linspace(-5, 5, 1001)
        assert abs(estimate_center(SampledSignal(t, np.exp(-t ** 2) * np.cos(3 * t)))) < 1e-15

    def test_logistic_ground_sinlet(self):
        b = SinletBasis.create("logistic", 3.0, 1.0)
        t = np.linspace(-7, 13, 20001)
        got = estimate_center(SampledSignal(t, b.sinlet(0, t)))

        def density(x):
            return sinlet_logistic_closed(0, x, 3.0, 1.0) ** 2

        want = quad(lambda x: x * density(x), -7, 13)[0] / quad(density, -7, 13)[0]
        assert want == pytest.approx(3.0, abs=1e-3)
        assert got == pytest.approx(3.0, abs=1e-3)

    @given(delta=st.floats(-50, 50))
    def test_translation_equivariant(self, delta):
        t = np.linspace(-4, 6, 501)
        u = np.exp(-(t - 1) ** 2) * (2 + np.sin(t))
        base = estimate_center(SampledSignal(t, u))
        moved = estimate_center(SampledSignal(t + delta, u))
        assert moved - base == pytest.approx(delta, abs=1e-9 * (1 + abs(delta)))

    def test_zero_signal(self):
        with pytest.raises(DegenerateInputError):
            estimate_center(SampledSignal([0.0, 1.0, 2.0], [0.0, 0.0, 0.0]))


class TestEstimateWidth:
    def test_gaussian_envelope(self):
        # u = exp(-(t-1)^2 / (4 s^2)) has energy density with RMS spread s
        s = 0.8
        t = np.linspace(-9, 11, 40001)
        u = np.exp(-(t - 1) ** 2 / (4 * s * s))
        assert estimate_width(SampledSignal(t, u), 1.5) == pytest.approx(1.5 * s, abs=1e-3)

    def test_amplitude_invariant(self):
        t = np.linspace(-5, 5, 801)
        u = np.exp(-t ** 2) * np.cos(4 * t) + 0.2 * np.exp(-(t - 1) ** 2)
        assert estimate_width(SampledSignal(t, 5 * u)) == pytest.approx(
            estimate_width(SampledSignal(t, u)), rel=1e-14)

    def test_dilation_doubles(self):
        t = np.linspace(-5, 5, 801)
        u = np.exp(-t ** 2) * (1 + t)
        assert estimate_width(SampledSignal(2 * t, u)) == pytest.approx(
            2 * estimate_width(SampledSignal(t, u)), rel=1e-12)

    @pytest.mark.parametrize("c", [0.99, 2.01, math.nan])
    def test_rejects_multiplier(self, c):
        with pytest.raises(ParameterError):
            estimate_width(SampledSignal([0.0, 1.0], [1.0, 1.0]), c)

    def test_zero_signal(self):
        with pytest.raises(DegenerateInputError):
            estimate_width(SampledSignal([0.0, 1.0], [0.0, 0.0]))


class TestEstimateNmax:
    def test_logistic_center(self):
        assert estimate_nmax(SinletBasis.create("logistic", 0.0, 1.0), 1.0, 0.0) == 7

    def test_erf_center(self):
        assert estimate_nmax(SinletBasis.create("erf", 0.0, 1.0), 1.0, 0.0) == 5

    @pytest.mark.parametrize("t_max", [0.7, 2.5, -1.0])
    def test_matches_closed_forms(self, t_max):
        t0, s, nu = 0.3, 1.4, 2.1
        erf_want = math.ceil(2 * math.sqrt(2 * math.pi) * s * nu * math.exp((t_max - t0) ** 2 / (2 * s * s))) - 1
        log_want = math.ceil(8 * s * nu * math.cosh((t_max - t0) / (2 * s)) ** 2) - 1
        assert estimate_nmax(SinletBasis.create("erf", t0, s), nu, t_max) == erf_want
        assert estimate_nmax(SinletBasis.create("logistic", t0, s), nu, t_max) == log_want

    def test_exact_integer_is_not_rounded_up(self):
        # 8 sigma nu cosh^2(0) = 8 exactly -> ceil leaves it, n_max = 7
        assert estimate_nmax(SinletBasis.create("logistic", 0.0, 0.5), 2.0, 0.0) == 7

    def test_bandpass_heuristic_regression(self):
        # heuristics run on the synthetic bandpass analog; value captured on first run
        t = np.arange(-12.0, 12.0, 0.005)
        b = estimate_basis(SampledSignal(t, bandpass_signal(t)), "logistic", BANDPASS_C)
        assert b.center == pytest.approx(-0.0993388, abs=1e-6)
        assert b.width == pytest.approx(1.1811849, abs=1e-6)
        assert estimate_nmax(b, BANDPASS_NU_MAX, BANDPASS_T_MAX) == 255

    def test_tail_overflow(self):
        with pytest.raises(OrderOverflowError, match="reduce t_max"):
            estimate_nmax(SinletBasis.create("erf", 0.0, 1.0), 1.0, 40.0)

    def test_rejects_non_positive_frequency(self):
        with pytest.raises(ParameterError):
            estimate_nmax(SinletBasis.create("erf", 0.0, 1.0), 0.0, 0.0)


class TestDecompose:
    def test_single_sinlet(self, basis):
        c = decompose(synth(basis, np.eye(8)[3]), basis, 8).coeffs
        np.testing.assert_allclose(c, np.eye(8)[3], atol=1e-4)

    def test_linear_combination(self, basis):
        a = np.array([2.0, 0, 0, 0, 0, -1.0])
        np.testing.assert_allclose(decompose(synth(basis, a), basis, 6).coeffs, a, atol=1e-4)

    @pytest.mark.parametrize("seed", range(5))
    def test_random_round_trip(self, basis, seed):
        a = np.random.default_rng(seed).standard_normal(16)
        got = decompose(synth(basis, a), basis, 16)
        assert np.abs(got.coeffs - a).max() < 1e-4
        assert got.kind is Kind.SIN and got.basis == basis

    @pytest.mark.parametrize("seed", range(3))
    def test_parseval(self, basis, seed):
        a = np.random.default_rng(seed).standard_normal(16)
        u = synth(basis, a)
        assert decompose(u, basis, 16).energy == pytest.approx(u.energy, rel=1e-6)
        assert float(a @ a) == pytest.approx(u.energy, rel=1e-6)

    def test_coslet_round_trip(self):
        b = SinletBasis.create("erf", 0.5, 1.5)
        a = np.random.default_rng(7).standard_normal(10)
        got = decompose(synth(b, a, kind="cos"), b, 10, "cos")
        assert got.kind is Kind.COS
        np.testing.assert_allclose(got.coeffs, a, atol=1e-4)

    @given(delta=st.floats(-20, 20))
    @settings(max_examples=20, deadline=None)
    def test_translation_equivariance(self, delta):
        b = SinletBasis.create("logistic", 0.4, 1.2)
        a = np.random.default_rng(3).standard_normal(8)
        u = synth(b, a)
        shifted = SampledSignal(u.times + delta, u.values)
        np.testing.assert_allclose(decompose(shifted, b.shift(delta), 8).coeffs,
                                   decompose(u, b, 8).coeffs, atol=1e-9)

    def test_aliasing_guard_names_safe_order(self):
        b = SinletBasis.create("logistic", 0.0, 1.0)
        t = np.arange(-10, 10, 0.1)
        safe = max_safe_order(b, 0.1)
        assert safe == 20  # 1/(2 * 0.1 * 1/4)
        decompose(SampledSignal(t, b.sinlet(0, t)), b, safe)
        with pytest.raises(AliasingError) as err:
            decompose(SampledSignal(t, b.sinlet(0, t)), b, safe + 1)
        assert err.value.max_safe == safe
        assert "at most 20" in str(err.value)

    def test_window_must_overlap(self, basis):
        t = np.linspace(100, 110, 50)
        with pytest.raises(DomainError):
            decompose(SampledSignal(t, np.ones(50)), basis, 2)

    @pytest.mark.parametrize("count", [0, -1, 2.5])
    def test_rejects_bad_count(self, basis, count):
        with pytest.raises(ParameterError):
            decompose(synth(basis, [1.0]), basis, count)

    def test_samples_outside_window_ignored(self):
        b = SinletBasis.create("erf", 0.0, 1.0)
        u = synth(b, [1.0, 0.5])
        spiked = u.with_values(np.where(np.abs(u.times) > 10.5, 1e6, u.values))
        np.testing.assert_allclose(decompose(spiked, b, 2).coeffs, [1.0, 0.5], atol=1e-6)


class TestReconstruct:
    def test_unit_coefficient(self, basis):
        grid = np.linspace(-5, 5, 11)
        np.testing.assert_array_equal(synth(basis, [1.0, 0.0], grid).values,
                                      basis.sinlet(0, grid))

    def test_zero(self, basis):
        assert not np.any(synth(basis, np.zeros(5)).values)

    def test_rms_round_trip(self, basis):
        a = np.random.default_rng(11).standard_normal(16)
        u = synth(basis, a)
        back = reconstruct(decompose(u, basis, 16), u.times)
        assert np.sqrt(np.mean((back.values - u.values) ** 2)) < 1e-5


class TestCouplingMatrix:
    def test_entries(self):
        d = coupling_matrix(16)
        assert d[0, 0] == 0.0
        assert d[0, 1] == pytest.approx(-4 / (3 * math.pi), rel=1e-15)
        assert d[2, 0] == 0.0
        assert np.all(np.diag(d) == 0.0)

    def test_checkerboard(self):
        d = coupling_matrix(20)
        k, m = np.indices(d.shape)
        assert np.all((d == 0.0) == ((k + m) % 2 == 0))

    @pytest.mark.parametrize("family,t0,sigma", [("erf", 1.0, 0.5), ("logistic", -2.0, 3.0)])
    def test_against_quadrature(self, family, t0, sigma):
        got = coupling_by_quadrature(family, t0, sigma, 16)
        assert np.abs(got - coupling_matrix(16)).max() < 1e-6

    def test_singular_for_odd_sizes(self):
        for n in (3, 7, 15):
            assert abs(np.linalg.det(coupling_matrix(n))) < 1e-12

    def test_determinant_shrinks(self):
        dets = [abs(np.linalg.det(coupling_matrix(n))) for n in (2, 8, 16, 32)]
        assert all(a > b for a, b in zip(dets, dets[1:]))


class TestMappings:
    def test_zero(self, basis):
        z = CoefficientVector("sin", basis, np.zeros(6))
        assert not np.any(sin_to_cos(z).coeffs)
        assert not np.any(cos_to_sin(CoefficientVector("cos", basis, np.zeros(6))).coeffs)

    def test_kind_checked(self, basis):
        with pytest.raises(DomainError):
            sin_to_cos(CoefficientVector("cos", basis, [1.0]))
        with pytest.raises(DomainError):
            cos_to_sin(CoefficientVector("sin", basis, [1.0]))

    def test_provenance_kept(self, basis):
        b = sin_to_cos(CoefficientVector("sin", basis, [1.0, 2.0]))
        assert b.kind is Kind.COS and b.basis == basis

    @pytest.mark.parametrize("seed", range(4))
    def test_within_representation_error(self, basis, seed):
        a0 = random_coefficients(16, np.random.default_rng(seed), decay=0.1)
        u = synth(basis, a0)
        a = decompose(u, basis, 16)
        b = decompose(u, basis, 16, "cos")
        diff = synth(basis, a.coeffs).values - synth(basis, b.coeffs, kind="cos").values
        rep = math.sqrt(np.trapezoid(diff ** 2, DENSE))
        assert np.linalg.norm(sin_to_cos(a).coeffs - b.coeffs) <= 2 * rep
        assert np.linalg.norm(cos_to_sin(b).coeffs - a.coeffs) <= 2 * rep

    def test_odd_size_never_inverts(self, basis, monkeypatch):
        import scipy.linalg

        def boom(*_, **__):
            raise AssertionError("matrix inversion attempted")

        for mod, name in [(np.linalg, "inv"), (np.linalg, "solve"), (np.linalg, "pinv"),
                          (scipy.linalg, "inv"), (scipy.linalg, "solve"), (scipy.linalg, "pinv")]:
            monkeypatch.setattr(mod, name, boom)
        a = CoefficientVector("sin", basis, np.arange(15.0))
        b = sin_to_cos(a)
        assert np.all(np.isfinite(cos_to_sin(b).coeffs))

    def test_round_trip_loses_the_phase_mean(self):
        # the coslets have no order -1 member (constant in the phase coordinate),
        # so D D^T drops exactly the component of a along that mode
        d = coupling_matrix(16)
        n = np.arange(16)
        mode = np.where(n % 2 == 0, 2 * math.sqrt(2) / (math.pi * (n + 1)), 0.0)
        a = np.random.default_rng(1).standard_normal(16) * np.exp(-0.3 * n)
        defect = np.linalg.norm(d @ d.T @ a - a)
        assert defect == pytest.approx(abs(mode @ a), rel=0.05)

    def test_round_trip_mean_free_content(self, basis):
        # regression bound: odd orders below 4 only, N = 16
        rng = np.random.default_rng(0)
        for _ in range(50):
            a = np.zeros(16)
            a[[1, 3]] = rng.standard_normal(2)
            back = cos_to_sin(sin_to_cos(CoefficientVector("sin", basis, a))).coeffs
            assert np.linalg.norm(back - a) <= 0.025 * np.linalg.norm(a)
