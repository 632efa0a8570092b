import math

import numpy as np
import pytest

from oracles import (
    mp_capacity_direct,
    mp_capacity_meijerg,
    mp_gammainc_upper_regularized,
    sample_gamma_log_capacity,
)
from riscap.capacity import (
    CapacityReport,
    GammaFit,
    capacity_report,
    deterministic_capacity,
    ec_lower_bound,
    ec_upper_bound,
    ergodic_capacity,
    gamma_fit,
    snr_cdf,
    snr_mean,
    snr_variance,
)
from riscap.errors import DegenerateDistribution
from riscap.moments import MomentSummary

# frozen from oracles.mp_capacity_direct(2, 1, 10) (30-digit quadrature);
# the G-function form gives the same digits
EC_2_1_10 = 4.735755676577181


def summary(mean, var):
    return MomentSummary(mean=mean, second_moment=var + mean * mean, variance=var)


class TestGammaFit:
    def test_exponential_case(self):
        fit = gamma_fit(summary(1.0, 1.0))
        assert (fit.a, fit.b) == (1.0, 1.0)

    def test_mean_two_var_one(self):
        fit = gamma_fit(summary(2.0, 1.0))
        assert (fit.a, fit.b) == (4.0, 2.0)

    def test_recovers_parameters_from_samples(self):
        rng = np.random.default_rng(99)
        n = 1_000_000
        z = rng.gamma(shape=3.0, scale=1.0 / 5.0, size=n)
        fit = gamma_fit(summary(z.mean(), z.var(ddof=1)))
        assert fit.a == pytest.approx(3.0, rel=5e-3)
        assert fit.b == pytest.approx(5.0, rel=5e-3)

    def test_degenerate_variance_raises(self):
        with pytest.raises(DegenerateDistribution):
            gamma_fit(summary(1.0, 1e-14))


class TestSnrCdf:
    def test_boundary_values(self):
        fit = GammaFit(2.0, 1.0)
        assert snr_cdf(0.0, fit, 1.0) == 0.0
        assert snr_cdf(1e12, fit, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_integer_shape_closed_form(self):
        # shape 2: survival = (1 + x) e^-x at x = b*sqrt(gamma/gamma_teff)
        fit = GammaFit(2.0, 1.0)
        assert snr_cdf(1.0, fit, 1.0) == pytest.approx(1.0 - 2.0 * math.exp(-1.0), rel=1e-12)

    def test_matches_mpmath_incomplete_gamma(self):
        fit = GammaFit(3.7, 2.2)
        for g in (0.01, 0.5, 1.0, 7.0, 40.0):
            x = fit.b * math.sqrt(g / 5.0)
            assert snr_cdf(g, fit, 5.0) == pytest.approx(
                1.0 - mp_gammainc_upper_regularized(fit.a, x), rel=1e-12
            )

    def test_nondecreasing_on_grid(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            fit = GammaFit(float(rng.uniform(0.3, 60.0)), float(rng.uniform(0.1, 30.0)))
            gt = float(rng.uniform(0.01, 1e6))
            grid = np.linspace(0.0, 50.0 * gt * (fit.a / fit.b) ** 2 + 1.0, 1000)
            vals = [snr_cdf(g, fit, gt) for g in grid]
            assert all(b >= a for a, b in zip(vals, vals[1:]))
            assert vals[0] == 0.0
            assert vals[-1] <= 1.0


class TestErgodicCapacity:
    def test_reference_point_against_quadrature_oracle(self):
        assert ergodic_capacity(GammaFit(2.0, 1.0), 10.0) == pytest.approx(
            EC_2_1_10, abs=1e-8
        )

    def test_reference_point_against_sampling_oracle(self):
        mean, se = sample_gamma_log_capacity(2.0, 1.0, 10.0, n=10_000_000, seed=31)
        assert abs(ergodic_capacity(GammaFit(2.0, 1.0), 10.0) - mean) < 3.0 * se

    def test_matches_meijer_g_closed_form(self):
        for a, b, gt in ((0.7, 0.3, 2.0), (2.0, 1.0, 10.0), (8.5, 3.1, 125.0), (40.0, 11.0, 9.0)):
            got = ergodic_capacity(GammaFit(a, b), gt)
            want = mp_capacity_meijerg(a, b, gt)
            assert got == pytest.approx(want, abs=1e-6)
            assert want == pytest.approx(mp_capacity_direct(a, b, gt), abs=1e-10)

    def test_vanishes_with_transmit_snr(self):
        fit = GammaFit(3.0, 2.0)
        assert ergodic_capacity(fit, 1e-15) < 1e-8

    def test_concentrated_envelope_limit(self):
        # shape -> inf at fixed mean approaches the deterministic channel
        zbar, gt = 2.0, 50.0
        a = 1e8
        got = ergodic_capacity(GammaFit(a, a / zbar), gt)
        assert got == pytest.approx(deterministic_capacity(zbar, gt), rel=1e-6)

    def test_monotone_in_gamma_teff(self):
        fit = GammaFit(4.0, 2.0)
        vals = [ergodic_capacity(fit, g) for g in (0.1, 1.0, 10.0, 100.0)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_monotone_in_shape_at_fixed_scaled_rate(self):
        # larger shape with b*sqrt(gt) proportional keeps the mean envelope
        # growing with a, so capacity must not decrease
        c = 2.0
        vals = [ergodic_capacity(GammaFit(a, c * math.sqrt(a) / 10), 1.0 / 100) for a in (1.0, 2.0, 4.0, 8.0)]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_extreme_transmit_snr_uses_logscale_retry(self):
        # values frozen from 30-digit mpmath quadrature of the defining
        # expectation; the compact substitution alone flags roundoff here
        assert ergodic_capacity(GammaFit(4.0, 2.0), 1e20) == pytest.approx(
            68.06295136, abs=1e-6
        )
        assert ergodic_capacity(GammaFit(0.4, 0.1), 1e18) == pytest.approx(
            59.0488374, abs=1e-6
        )

    def test_near_zero_capacity_regime(self):
        # EC ~ 1e-11: anything below the absolute tolerance counts as zero
        assert ergodic_capacity(GammaFit(300.0, 100.0), 1e-12) < 1e-8

    def test_infinite_gamma_teff_rejected(self):
        with pytest.raises(ValueError):
            ergodic_capacity(GammaFit(2.0, 1.0), math.inf)

    def test_agrees_with_sampling_across_fuzz_grid(self):
        rng = np.random.default_rng(8)
        for _ in range(6):
            a = float(rng.uniform(0.5, 50.0))
            b = float(rng.uniform(0.2, 10.0))
            gt = float(10 ** rng.uniform(-2, 4))
            mean, se = sample_gamma_log_capacity(a, b, gt, n=400_000, seed=int(rng.integers(1 << 31)))
            assert abs(ergodic_capacity(GammaFit(a, b), gt) - mean) < 3.0 * se + 1e-9


class TestSnrMoments:
    def test_exponential_factorials(self):
        fit = GammaFit(1.0, 1.0)
        assert snr_mean(fit, 1.0) == pytest.approx(2.0, rel=1e-15)
        assert snr_variance(fit, 1.0) == pytest.approx(20.0, rel=1e-15)

    def test_scaling_in_gamma_teff(self):
        fit = GammaFit(3.3, 1.7)
        assert snr_mean(fit, 8.0) == pytest.approx(2.0 * snr_mean(fit, 4.0), rel=1e-15)
        assert snr_variance(fit, 8.0) == pytest.approx(4.0 * snr_variance(fit, 4.0), rel=1e-15)

    def test_second_moment_preserved_by_fit(self):
        # a(a+1)/b^2 == mean^2 + var for the matched fit, so the SNR mean
        # can be computed from either the fit or the raw moments
        for mean, var in ((1e-4, 3e-10), (2.3, 0.31), (7.0, 0.5)):
            fit = gamma_fit(summary(mean, var))
            assert fit.a * (fit.a + 1.0) / fit.b**2 == pytest.approx(
                mean * mean + var, rel=1e-10
            )
            gt = 3.7e11
            assert snr_mean(fit, gt) == pytest.approx(gt * (mean * mean + var), rel=1e-10)

    def test_full_scenario_cross_formula_consistency(self):
        # fit-based E[SNR] equals gamma_teff times the raw envelope second
        # moment on the reference 576-element scenario
        from riscap.presets import preset
        from riscap.workbench import resolve

        scenario, _ = preset("fig2")
        res = resolve(scenario)
        fit = gamma_fit(res.moments)
        gt = res.effective.gamma_teff
        assert snr_mean(fit, gt) == pytest.approx(
            gt * res.moments.second_moment, rel=1e-10
        )


class TestBounds:
    def test_zero_mean_snr(self):
        assert ec_upper_bound(0.0) == 0.0
        assert ec_lower_bound(0.0, 0.0) == 0.0

    def test_zero_variance_collapses(self):
        assert ec_lower_bound(7.0, 0.0) == pytest.approx(ec_upper_bound(7.0), rel=1e-15)

    def test_bracket_sampling_estimate(self):
        a, b, gt = 6.0, 2.0, 30.0
        fit = GammaFit(a, b)
        mean, se = sample_gamma_log_capacity(a, b, gt, n=2_000_000, seed=17)
        ub = ec_upper_bound(snr_mean(fit, gt))
        lb = ec_lower_bound(snr_mean(fit, gt), snr_variance(fit, gt))
        assert mean <= ub + 3 * se
        assert lb <= mean + 0.05


class TestCapacityReport:
    def test_degenerate_falls_back_to_deterministic(self):
        report = capacity_report(summary(2.0, 1e-15), 10.0)
        assert isinstance(report, CapacityReport)
        assert report.ec_approx == pytest.approx(math.log2(1.0 + 10.0 * 4.0), rel=1e-12)
        assert report.snr_variance == 0.0
        assert report.ec_upper == report.ec_lower

    def test_ordering_of_fields(self):
        report = capacity_report(summary(1.5, 0.2), 25.0)
        assert report.ec_lower <= report.ec_approx + 0.05
        assert report.ec_approx <= report.ec_upper + 1e-9
