"""Special functions against independent oracles.

Expected values were frozen from 40-digit mpmath evaluations; the quadrature
and series oracles below re-derive a subset from the defining integrals so no
value is trusted to a single code path.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from nctails import specfun

# Frozen from mpmath (dps=40).
PHI_M1 = 0.15865525393145705
LOG_PHI_M1 = -1.8410216450092635
E1_1 = 0.21938393439552027
E1_HALF = 0.5597735947761608
K0_1 = 0.4210244382407083
K1_1 = 0.6019072301972346
GAMMA_HALF_1 = 0.2788055852806620
GAMMA_MHALF_1 = 0.17814771178156069
GAMMA_M2P5_0P8 = 0.21980906888012836
GAMMA_M5_3P2 = 1.4129564631301400e-05
GAMMA_M1P7_0P3 = 2.6144595100533483
LOG_PHI_M50 = -1254.8313611394199


class TestStdNormalCdf:
    def test_symmetry_point(self):
        assert specfun.std_normal_cdf(0.0) == 0.5

    def test_saturation(self):
        assert specfun.std_normal_cdf(40.0) == 1.0
        assert specfun.std_normal_cdf(-40.0) < 1e-300

    def test_frozen_value(self):
        assert specfun.std_normal_cdf(-1.0) == pytest.approx(PHI_M1, abs=1e-15)

    @pytest.mark.parametrize("x", np.linspace(-8, 8, 33))
    def test_complement_identity(self, x):
        assert specfun.std_normal_cdf(x) + specfun.std_normal_cdf(-x) == pytest.approx(
            1.0, abs=1e-14
        )

    def test_erf_series_oracle(self):
        # erf(z) = 2/sqrt(pi) sum (-1)^k z^(2k+1) / (k! (2k+1)), summed far
        # past convergence at these arguments.
        for x in [-2.0, -1.0, -0.3, 0.4, 1.7]:
            z = x / math.sqrt(2.0)
            total = sum(
                (-1) ** k * z ** (2 * k + 1) / (math.factorial(k) * (2 * k + 1))
                for k in range(60)
            )
            erf = 2.0 / math.sqrt(math.pi) * total
            assert specfun.std_normal_cdf(x) == pytest.approx(0.5 * (1 + erf), abs=1e-14)


class TestLogStdNormalCdf:
    def test_center(self):
        assert specfun.log_std_normal_cdf(0.0) == pytest.approx(math.log(0.5), rel=1e-15)

    def test_moderate(self):
        assert specfun.log_std_normal_cdf(-1.0) == pytest.approx(LOG_PHI_M1, rel=1e-13)

    def test_deep_tail_mills_oracle(self):
        # Mills-ratio asymptotics: ln Phi(-x) ~ -x^2/2 - ln(x sqrt(2 pi)) + ln(1 - 1/x^2 + 3/x^4)
        x = 50.0
        mills = -x * x / 2 - math.log(x * math.sqrt(2 * math.pi)) + math.log1p(
            -1 / x**2 + 3 / x**4 - 15 / x**6
        )
        got = specfun.log_std_normal_cdf(-x)
        assert got == pytest.approx(mills, rel=1e-12)
        assert got == pytest.approx(LOG_PHI_M50, rel=1e-13)

    def test_no_underflow_at_minus_300(self):
        assert math.isfinite(specfun.log_std_normal_cdf(-300.0))

    @pytest.mark.parametrize("x", np.linspace(-37, 0, 16))
    def test_consistency_with_cdf(self, x):
        direct = specfun.std_normal_cdf(x)
        assert math.exp(specfun.log_std_normal_cdf(x)) == pytest.approx(direct, rel=1e-12)


class TestExpIntegral:
    def test_frozen_values(self):
        assert specfun.exp_integral_e1(1.0) == pytest.approx(E1_1, rel=1e-12)
        assert specfun.exp_integral_e1(0.5) == pytest.approx(E1_HALF, rel=1e-12)

    def test_defining_integral_oracle(self):
        for x in [0.2, 1.0, 3.0]:
            ref = quad(lambda t: math.exp(-t) / t, x, np.inf, epsrel=1e-13)[0]
            assert specfun.exp_integral_e1(x) == pytest.approx(ref, rel=1e-11)

    def test_leading_asymptotic(self):
        x = 50.0
        assert specfun.exp_integral_e1(x) == pytest.approx(math.exp(-x) / x, rel=0.02)

    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 5.0])
    def test_derivative_identity(self, x):
        # d/dx E1(x) = -exp(-x)/x, by central differences.
        h = 1e-5 * x
        fd = (specfun.exp_integral_e1(x + h) - specfun.exp_integral_e1(x - h)) / (2 * h)
        assert fd == pytest.approx(-math.exp(-x) / x, rel=1e-6)

    def test_strictly_decreasing(self):
        xs = np.linspace(0.05, 10, 50)
        vals = [specfun.exp_integral_e1(float(x)) for x in xs]
        assert all(a > b > 0 for a, b in zip(vals, vals[1:]))

    def test_domain(self):
        with pytest.raises(ValueError):
            specfun.exp_integral_e1(0.0)
        with pytest.raises(ValueError):
            specfun.exp_integral_e1(-1.0)


class TestBesselK:
    def test_frozen_values(self):
        assert specfun.bessel_k(0, 1.0) == pytest.approx(K0_1, rel=1e-12)
        assert specfun.bessel_k(1, 1.0) == pytest.approx(K1_1, rel=1e-12)

    @pytest.mark.parametrize("x", [0.3, 0.8, 1.0, 2.5, 6.0])
    def test_integral_representation_oracle(self, x):
        # K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt
        k0 = quad(lambda t: math.exp(-x * math.cosh(t)), 0, 30, epsrel=1e-12)[0]
        k1 = quad(lambda t: math.exp(-x * math.cosh(t)) * math.cosh(t), 0, 30, epsrel=1e-12)[0]
        assert specfun.bessel_k(0, x) == pytest.approx(k0, rel=1e-10)
        assert specfun.bessel_k(1, x) == pytest.approx(k1, rel=1e-10)

    def test_asymptotic(self):
        x = 30.0
        assert specfun.bessel_k(0, x) == pytest.approx(
            math.sqrt(math.pi / (2 * x)) * math.exp(-x), rel=0.01
        )

    def test_domain(self):
        with pytest.raises(ValueError):
            specfun.bessel_k(0, 0.0)
        with pytest.raises(ValueError):
            specfun.bessel_k(2, 1.0)


class TestUpperIncompleteGamma:
    def test_exponential_case(self):
        assert specfun.upper_incomplete_gamma(1.0, 0.7) == pytest.approx(
            math.exp(-0.7), rel=1e-13
        )

    def test_complete_gamma(self):
        assert specfun.upper_incomplete_gamma(0.5, 0.0) == pytest.approx(
            math.sqrt(math.pi), rel=1e-14
        )

    def test_erfc_identity(self):
        assert specfun.upper_incomplete_gamma(0.5, 1.0) == pytest.approx(
            GAMMA_HALF_1, rel=1e-12
        )

    @pytest.mark.parametrize(
        "a,x,expected",
        [
            (-0.5, 1.0, GAMMA_MHALF_1),
            (-2.5, 0.8, GAMMA_M2P5_0P8),
            (-5.0, 3.2, GAMMA_M5_3P2),
            (-1.7, 0.3, GAMMA_M1P7_0P3),
        ],
    )
    def test_negative_shape_frozen(self, a, x, expected):
        assert specfun.upper_incomplete_gamma(a, x) == pytest.approx(expected, rel=1e-10)

    @pytest.mark.parametrize("a", [-4.3, -2.0, -0.5, 0.5, 2.0, 7.0, 20.0])
    @pytest.mark.parametrize("x", [0.1, 0.9, 2.0, 8.0])
    def test_quadrature_oracle(self, a, x):
        ref = quad(
            lambda t: t ** (a - 1) * math.exp(-t), x, np.inf, epsrel=1e-13, limit=200
        )[0]
        assert specfun.upper_incomplete_gamma(a, x) == pytest.approx(ref, rel=1e-10)

    @pytest.mark.parametrize("a", [0.5, 1.0, 1.5, 2.0])
    @pytest.mark.parametrize("x", [0.1, 1.0, 5.0])
    def test_recurrence(self, a, x):
        lhs = specfun.upper_incomplete_gamma(a + 1.0, x)
        rhs = a * specfun.upper_incomplete_gamma(a, x) + x**a * math.exp(-x)
        assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_divergent_at_zero(self):
        with pytest.raises(ValueError):
            specfun.upper_incomplete_gamma(-1.0, 0.0)
        with pytest.raises(ValueError):
            specfun.upper_incomplete_gamma(0.0, 0.0)
