import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from idnls import asymptotics as asy
from idnls.errors import ConsistencyError, DegenerateError, DomainError, RegionError
from idnls.lattice import LatticeState
from idnls.scattering import ScatteringData
from idnls.specfun import branched_power, minor_arc, path_continuous_log_ratio

T_REF = cmath.exp(-0.25j * math.pi)

# frozen via -log(0.75)/(2 pi) in 30-digit arithmetic
NU_HALF = 0.045786023869621704
# frozen via sqrt of the same
SQRT_NU_HALF = 0.21397669001464086


def const_modulus_reflection(q):
    return lambda z: q * z


@pytest.fixture(scope="module")
def two_site_data():
    return ScatteringData.from_state(LatticeState(0, np.array([0.3, 0.4j])))


class TestPhase:
    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            asy.phase(0.0, 1, 1.0)

    def test_derivative_zeros_at_unit_points(self):
        # n = 0, t = 1: phi' = i t (z - 1/z)(1 + 1/z^2) vanishes at +-1, +-i
        for z in (1.0, -1.0, 1j, -1j):
            _, d1, _ = asy.phase(z, 0, 1.0)
            assert abs(d1) <= 1e-14

    def test_real_part_vanishes_on_circle(self):
        for theta in np.linspace(-3.0, 3.0, 17):
            val, _, _ = asy.phase(cmath.exp(1j * theta), 5, 3.7)
            assert abs(val.real) <= 1e-12

    def test_second_derivative_at_first_saddle(self):
        for v, t in ((0.0, 1.0), (0.7, 3.0), (-1.2, 10.0)):
            n = v * t
            a, saddles = asy.saddle_points(v)
            _, _, d2 = asy.phase(saddles[0], n, t)
            expected = 2.0 * a.conjugate() ** 2 * math.sqrt(4 * t * t - n * n)
            assert d2 == pytest.approx(expected, rel=1e-12)


class TestSaddles:
    def test_v_zero(self):
        a, s = asy.saddle_points(0.0)
        assert a == pytest.approx((math.sqrt(2) - 1j * math.sqrt(2)) / 2)
        assert s[0] == pytest.approx(-1j, abs=1e-14)
        assert s[1] == pytest.approx(1.0, abs=1e-14)
        assert s[2] == pytest.approx(1j, abs=1e-14)
        assert s[3] == pytest.approx(-1.0, abs=1e-14)

    @given(st.floats(-1.9, 1.9))
    @settings(max_examples=50, deadline=None)
    def test_unit_modulus(self, v):
        a, s = asy.saddle_points(v)
        assert abs(abs(a) - 1.0) <= 1e-14
        for sj in s:
            assert abs(abs(sj) - 1.0) <= 1e-14

    def test_region_guard(self):
        asy.saddle_points(1.9)  # accepted at the boundary
        with pytest.raises(RegionError):
            asy.saddle_points(1.95)
        with pytest.raises(RegionError):
            asy.saddle_points(-1.95)

    def test_residual_grid(self):
        for v in np.linspace(-1.9, 1.9, 39):
            _, saddles = asy.saddle_points(float(v))
            for t in (1.0, 10.0, 100.0):
                for s in saddles:
                    _, d1, _ = asy.phase(s, v * t, t)
                    assert abs(d1) <= 1e-12 * t


class TestNu:
    def test_zero(self):
        assert asy.nu(0.0) == 0.0

    def test_frozen_value(self):
        assert asy.nu(0.5) == pytest.approx(NU_HALF, rel=1e-14)

    def test_monotone(self):
        assert asy.nu(0.9) > asy.nu(0.5)

    def test_domain(self):
        with pytest.raises(DomainError):
            asy.nu(1.0)


class TestChi:
    def test_zero_reflection(self):
        _, s = asy.saddle_points(0.4)
        assert asy.chi_at_saddle(1, lambda z: 0.0, s) == 0.0

    @pytest.mark.parametrize("j", [1, 2])
    def test_constant_modulus_vanishes(self, j):
        _, s = asy.saddle_points(0.8)
        val = asy.chi_at_saddle(j, const_modulus_reflection(0.55), s)
        assert abs(val) <= 1e-12

    @pytest.mark.parametrize("j", [1, 2])
    def test_tolerance_stability(self, j, two_site_data):
        _, s = asy.saddle_points(-0.6)
        loose = asy.chi_at_saddle(j, two_site_data.r, s, quad_tol=1e-8)
        tight = asy.chi_at_saddle(j, two_site_data.r, s, quad_tol=1e-11)
        assert abs(loose - tight) <= 1e-8


class TestDelta0:
    def test_zero_reflection(self):
        _, s = asy.saddle_points(0.0)
        assert asy.delta0(lambda z: 0.0, s) == pytest.approx(1.0)

    @pytest.mark.parametrize("q", [0.2, 0.5, 0.8])
    @pytest.mark.parametrize("v", [0.0, 1.0, -1.0])
    def test_constant_modulus_closed_form(self, q, v):
        _, s = asy.saddle_points(v)
        sweep = cmath.phase(s[1]) - cmath.phase(s[0])
        closed = (1.0 - q * q) ** (-sweep / math.pi)
        assert asy.delta0(const_modulus_reflection(q), s) == pytest.approx(
            closed, abs=1e-8
        )

    def test_v_zero_special_value(self):
        _, s = asy.saddle_points(0.0)
        got = asy.delta0(const_modulus_reflection(0.5), s)
        assert got == pytest.approx(1.1547005383792515, abs=1e-10)  # (3/4)^(-1/2)

    def test_at_least_one(self, two_site_data):
        for v in (-1.5, -0.3, 0.0, 0.9, 1.7):
            _, s = asy.saddle_points(v)
            assert asy.delta0(two_site_data.r, s) >= 1.0 - 1e-10


class TestDeltaHat:
    def test_zero_reflection(self):
        _, s = asy.saddle_points(0.3)
        assert asy.delta_hat(1, lambda z: 0.0, s) == pytest.approx(1.0)

    @pytest.mark.parametrize("j", [1, 2])
    @pytest.mark.parametrize("v", [0.0, 0.9, -1.4])
    def test_constant_modulus_elementary_form(self, j, v):
        # for |r| = q the integrand is log(1-q^2)/(tau - S_j): the arc
        # integrals reduce to branch-tracked log differences
        q = 0.45
        _, s = asy.saddle_points(v)
        arc_a = minor_arc(T_REF, s[2 - j])
        arc_b = minor_arc(s[2], s[3])
        ell_a = path_continuous_log_ratio(s[j - 1], arc_a.start_angle, arc_a.end_angle)
        ell_b = path_continuous_log_ratio(s[j - 1], arc_b.start_angle, arc_b.end_angle)
        sign = -1.0 if j == 1 else 1.0
        closed = cmath.exp(
            math.log(1 - q * q) / (2 * math.pi * 1j) * (sign * ell_a - ell_b)
        )
        got = asy.delta_hat(j, const_modulus_reflection(q), s)
        assert got == pytest.approx(closed, abs=1e-10)

    @pytest.mark.parametrize("j", [1, 2])
    @pytest.mark.parametrize("v", [0.0, 0.6, -1.1])
    def test_matches_component_product(self, j, v, two_site_data):
        _, s = asy.saddle_points(v)
        bracket = asy.delta_hat(j, two_site_data.r, s)
        product = asy.delta_hat_product(j, two_site_data.r, s)
        assert bracket == pytest.approx(product, abs=1e-10)


class TestDeltaFactorization:
    def test_product_and_symmetry_off_circle(self, two_site_data):
        _, s = asy.saddle_points(0.6)
        rng = np.random.default_rng(21)
        for _ in range(20):
            mag = 0.5 if rng.random() < 0.5 else 2.0
            z = mag * cmath.exp(2j * math.pi * rng.random())
            direct = asy.delta_at(z, two_site_data.r, s)
            product = 1.0 + 0.0j
            for k in (1, 2, 3, 4):
                product *= asy.delta_component(k, z, two_site_data.r, s)
            assert abs(direct - product) <= 1e-8 * abs(direct)
            assert abs(asy.delta_at(-z, two_site_data.r, s) - direct) <= 1e-10


class TestBetaD:
    def test_modulus_at_origin_ratio(self):
        for j in (1, 2):
            beta, _ = asy.beta_D(j, 0, 1.0)
            assert abs(beta) == pytest.approx(1.0 / (2.0 * math.sqrt(2.0)), rel=1e-14)

    def test_positive_real_part_of_base(self):
        for v in np.linspace(-1.9, 1.9, 21):
            for j in (1, 2):
                _, d = asy.beta_D(j, v * 8.0, 8.0)
                assert d.real > 0.0

    def test_alternative_beta_form(self):
        for v, t in ((0.3, 5.0), (-1.2, 9.0), (1.8, 2.0)):
            n = v * t
            _, s = asy.saddle_points(v)
            for j in (1, 2):
                beta, _ = asy.beta_D(j, n, t)
                alt = (-1) ** j * 0.5j * (4 * t * t - n * n) ** -0.25 * s[j - 1]
                assert abs(beta - alt) <= 1e-14

    def test_degenerate_boundary(self):
        with pytest.raises(DegenerateError):
            asy.beta_D(1, 2.0, 1.0)


class TestDeltaJ0:
    def test_unit_modulus_for_zero_reflection(self):
        frame = asy.build_saddle_frame(0.7, lambda z: 0.0)
        for j in (1, 2):
            val = asy.delta_j0(j, 3, 5.0, frame)
            assert abs(val) == pytest.approx(1.0, abs=1e-15)

    def test_alternative_power_base_form(self, two_site_data):
        # D_j equals beta_j/(S_j - T) with T the arc reference point
        for n, t in ((3, 7.0), (-4, 9.0)):
            frame = asy.build_saddle_frame(n / t, two_site_data.r)
            for j in (1, 2):
                beta, d = asy.beta_D(j, n, t)
                assert abs(d - beta / (frame.S[j - 1] - T_REF)) <= 1e-14

    def test_antipodal_sign_rule(self, two_site_data):
        # the factor built from saddle j+2 equals (-1)^n times the j one
        r = two_site_data.r
        for n, t in ((3, 7.0), (-4, 9.0), (6, 11.0)):
            frame = asy.build_saddle_frame(n / t, r)
            for j in (1, 2):
                jj = j + 2
                s_jj = frame.S[jj - 1]
                sign = 1.0 if jj % 2 == 1 else -1.0
                osc = cmath.exp(1j * (n * cmath.phase(s_jj) + 2 * t * s_jj.imag**2))
                beta_g = (-1) ** jj * 0.5j * s_jj * (4 * t * t - n * n) ** -0.25
                d_g = beta_g / (s_jj - (-T_REF))
                val = (
                    osc
                    * branched_power(d_g, sign * 1j * asy.nu(r(s_jj)))
                    * cmath.exp(sign * asy.chi_at_saddle(jj, r, frame.S))
                    * asy.delta_hat_product(jj, r, frame.S)
                )
                base = asy.delta_j0(j, n, t, frame)
                assert abs(val - (-1) ** n * base) <= 1e-12


class TestMFactor:
    def test_zero_reflection(self):
        assert asy.m_factor(1, 0.0, 0.0) == 0.0

    def test_frozen_modulus(self):
        r_s = 0.5 * cmath.exp(0.3j)
        nu_j = asy.nu(r_s)
        assert abs(asy.m_factor(2, r_s, nu_j)) == pytest.approx(
            SQRT_NU_HALF, abs=1e-10
        )

    @given(st.floats(1e-6, 0.95), st.floats(0.0, 2 * math.pi))
    @settings(max_examples=100, deadline=None)
    def test_amplitude_law(self, mag, ph):
        r_s = mag * cmath.exp(1j * ph)
        nu_j = asy.nu(r_s)
        for j in (1, 2):
            assert abs(abs(asy.m_factor(j, r_s, nu_j)) - math.sqrt(nu_j)) <= 1e-10

    def test_domain(self):
        with pytest.raises(DomainError):
            asy.m_factor(1, 1.0, 0.1)


class TestLeadingTerm:
    def test_zero_data_gives_zero(self):
        data = ScatteringData.from_state(LatticeState(0, np.zeros(3)))
        assert asy.leading_term(0, 10.0, data) == 0.0

    def test_region_error(self, two_site_data):
        with pytest.raises(RegionError):
            asy.leading_term(300, 100.0, two_site_data)

    def test_time_positive(self, two_site_data):
        with pytest.raises(DomainError):
            asy.leading_term(0, 0.0, two_site_data)

    def test_per_term_modulus_scaling(self, two_site_data):
        # all t-dependence of each term's modulus sits in |beta_j| ~ t^{-1/2}
        for v in (0.0, 0.8):
            frame = asy.build_saddle_frame(v, two_site_data.r)
            for j in (1, 2):
                values = [
                    abs(asy.saddle_summand(j, v * t, t, frame)) * math.sqrt(t)
                    for t in (10.0, 100.0, 1000.0)
                ]
                assert max(values) - min(values) <= 1e-10 * max(values)

    def test_gauge_rotation(self, two_site_data):
        alpha = 0.9
        rotated = ScatteringData.from_state(
            LatticeState(0, np.array([0.3, 0.4j]) * cmath.exp(1j * alpha))
        )
        base = asy.leading_term(2, 25.0, two_site_data)
        rot = asy.leading_term(2, 25.0, rotated)
        assert rot == pytest.approx(cmath.exp(1j * alpha) * base, rel=1e-9)


class TestPhaseDecomposition:
    def test_zero_reflection_amplitude(self):
        frame = asy.build_saddle_frame(0.5, lambda z: 0.0)
        for j in (1, 2):
            assert asy.phase_decomposition(j, frame).C == 0.0

    def test_v_zero_frequencies(self, two_site_data):
        frame = asy.build_saddle_frame(0.0, two_site_data.r)
        term1 = asy.phase_decomposition(1, frame)
        term2 = asy.phase_decomposition(2, frame)
        assert term1.p == pytest.approx(4.0, abs=1e-13)  # S_1 = -i
        assert term2.p == pytest.approx(0.0, abs=1e-13)  # S_2 = 1
        assert term1.q == pytest.approx(-frame.nu[0], abs=1e-15)
        assert term2.q == pytest.approx(frame.nu[1], abs=1e-15)

    @pytest.mark.parametrize("v", [0.0, 0.85, -1.3])
    def test_reconstruction(self, v, two_site_data):
        frame = asy.build_saddle_frame(v, two_site_data.r)
        for j in (1, 2):
            term = asy.phase_decomposition(j, frame)
            for t in (10.0, 100.0, 1000.0):
                direct = asy.saddle_summand(j, v * t, t, frame)
                model = term.evaluate(t)
                assert abs(model - direct) <= 1e-12 * abs(term.C) * t**-0.5
