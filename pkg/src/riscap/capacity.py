"""Gamma moment matching, SNR distribution, ergodic capacity and bounds.

The envelope variable (Z or H) is approximated by a Gamma(a, b)
distribution matched to its first two moments.  With gamma = gamma_teff *
Z^2 the SNR CDF is

    F(gamma) = 1 - Q(a, b * sqrt(gamma / gamma_teff))

with Q the regularized upper incomplete gamma function, and the ergodic
capacity is the integrated-by-parts expectation

    EC = (1/ln 2) * integral_0^inf  (1 - F(gamma)) / (1 + gamma)  d gamma.

That integral is evaluated by adaptive quadrature after the compactifying
substitution gamma = (t/(1-t))^2, which maps the half line onto (0, 1) and
makes the integrand vanish at both ends.  The same quantity has a
closed form in terms of a Meijer G-function; the quadrature is the
normative evaluation here and the identity is exercised in tests.

The "lower bound" is a second-order delta-method approximation of the
Jensen harmonic-mean bound, not a true bound; reports label it
approximate, and orderings against Monte Carlo allow a small slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate, special

from .errors import DegenerateDistribution, QuadratureFailure
from .moments import MomentSummary

DEGENERATE_EPS = 1e-12
QUAD_ABS_TOL = 1e-8
QUAD_LIMIT = 200


@dataclass(frozen=True)
class GammaFit:
    """Shape/rate pair of the moment-matched envelope distribution."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("Gamma shape and rate must be positive")


@dataclass(frozen=True)
class CapacityReport:
    """Analytic capacity figures for one scenario, bits/s/Hz."""

    ec_approx: float
    ec_upper: float
    ec_lower: float
    snr_mean: float
    snr_variance: float


def gamma_fit(moments: MomentSummary) -> GammaFit:
    """Match Gamma(a, b) to the envelope mean and variance."""
    mean, var = moments.mean, moments.variance
    if mean <= 0:
        raise ValueError("envelope mean must be positive to fit")
    if var <= DEGENERATE_EPS * mean * mean:
        raise DegenerateDistribution(
            f"variance {var:.3g} too small relative to mean {mean:.3g}; "
            "treat the envelope as deterministic"
        )
    return GammaFit(a=mean * mean / var, b=mean / var)


def snr_cdf(gamma: float, fit: GammaFit, gamma_teff: float) -> float:
    """CDF of the received SNR gamma_teff * Z^2 under the fitted envelope."""
    if gamma < 0:
        raise ValueError("SNR must be >= 0")
    if gamma == 0:
        return 0.0
    return 1.0 - float(special.gammaincc(fit.a, fit.b * math.sqrt(gamma / gamma_teff)))


def _survival_integral_compact(a: float, c: float):
    """integral of Q(a, c*sqrt(gamma)) / (1+gamma) via gamma = (t/(1-t))^2.

    Returns (value, error_message_or_None).
    """

    def integrand(t: float) -> float:
        if t <= 0.0 or t >= 1.0:
            return 0.0
        onemt = 1.0 - t
        q = special.gammaincc(a, c * t / onemt)
        return 2.0 * t * q / (onemt * (onemt * onemt + t * t))

    # The survival function transitions near c*sqrt(gamma) ~ a, i.e.
    # t ~ a/(a+c); seed the subdivision there and at gamma = 1.
    knee = a / (a + c)
    pts = sorted({min(max(knee, 1e-12), 1.0 - 1e-12), 0.5})
    result = integrate.quad(
        integrand,
        0.0,
        1.0,
        epsabs=QUAD_ABS_TOL,
        epsrel=0.0,
        limit=QUAD_LIMIT,
        points=pts,
        full_output=True,
    )
    return result[0], (result[3] if len(result) > 3 else None)


def _survival_integral_logscale(a: float, c: float):
    """Same integral in x = c*sqrt(gamma), then y = ln x.

    The integrand Q(a, e^y) * 2e^{2y}/(c^2 + e^{2y}) is a bounded plateau
    between ln c and ln a with no cancellation near the endpoints, which
    keeps very large gamma_teff (plateaus spanning many decades) well
    conditioned where the compact substitution runs into roundoff.
    """

    def integrand(y: float) -> float:
        x = math.exp(y)
        return special.gammaincc(a, x) * 2.0 * x * x / (c * c + x * x)

    log_c = math.log(c)
    lo = min(log_c, 0.0) - 45.0
    hi = max(math.log(a + 40.0 * math.sqrt(a) + 50.0), lo + 10.0)
    pts = [log_c] if lo < log_c < hi else None
    result = integrate.quad(
        integrand,
        lo,
        hi,
        epsabs=QUAD_ABS_TOL,
        epsrel=1e-12,
        limit=2 * QUAD_LIMIT,
        points=pts,
        full_output=True,
    )
    return result[0], (result[3] if len(result) > 3 else None)


def ergodic_capacity(fit: GammaFit, gamma_teff: float) -> float:
    """E[log2(1 + SNR)] by adaptive quadrature on the compactified survival
    integral, absolute tolerance QUAD_ABS_TOL.

    If the compact substitution reports roundoff trouble (it can when the
    capacity runs to many tens of bits), the same integral is retried on a
    log scale before giving up.
    """
    if gamma_teff <= 0 or not math.isfinite(gamma_teff):
        raise ValueError("effective transmit SNR must be positive and finite")
    a = fit.a
    c = fit.b / math.sqrt(gamma_teff)

    value, problem = _survival_integral_compact(a, c)
    if problem is None:
        return value / math.log(2.0)
    value, fallback_problem = _survival_integral_logscale(a, c)
    if fallback_problem is None:
        return value / math.log(2.0)
    raise QuadratureFailure(
        f"capacity integral did not converge: {problem}; "
        f"log-scale retry: {fallback_problem}"
    )


def snr_mean(fit: GammaFit, gamma_teff: float) -> float:
    """E[SNR] = gamma_teff * a * (a + 1) / b^2 (preserves the raw second
    moment of the envelope exactly)."""
    return gamma_teff * fit.a * (fit.a + 1.0) / (fit.b * fit.b)


def snr_variance(fit: GammaFit, gamma_teff: float) -> float:
    """Var[SNR] from the Gamma fourth moment.

    The gamma-ratio difference a(a+1)(a+2)(a+3) - (a(a+1))^2 factors as
    a(a+1)(4a+6), which avoids catastrophic cancellation for large shapes.
    """
    a = fit.a
    return gamma_teff * gamma_teff * a * (a + 1.0) * (4.0 * a + 6.0) / fit.b**4


def ec_upper_bound(mean_snr: float) -> float:
    """Jensen upper bound log2(1 + E[SNR])."""
    if mean_snr < 0:
        raise ValueError("mean SNR must be >= 0")
    return math.log2(1.0 + mean_snr)


def ec_lower_bound(mean_snr: float, var_snr: float) -> float:
    """Approximate harmonic-mean lower bound (second-order expansion of
    E[1/SNR]); collapses to the upper bound when the variance vanishes."""
    if mean_snr <= 0:
        return 0.0
    inv = 1.0 / mean_snr + var_snr / mean_snr**3
    return math.log2(1.0 + 1.0 / inv)


def deterministic_capacity(mean_envelope: float, gamma_teff: float) -> float:
    """Capacity when the envelope has (numerically) no spread."""
    return math.log2(1.0 + gamma_teff * mean_envelope * mean_envelope)


def capacity_report(moments: MomentSummary, gamma_teff: float) -> CapacityReport:
    """Full analytic report; falls back to the deterministic-envelope value
    when the distribution is too concentrated to fit."""
    try:
        fit = gamma_fit(moments)
    except DegenerateDistribution:
        ec = deterministic_capacity(moments.mean, gamma_teff)
        mean_g = gamma_teff * moments.second_moment
        return CapacityReport(
            ec_approx=ec,
            ec_upper=ec_upper_bound(mean_g),
            ec_lower=ec_upper_bound(mean_g),
            snr_mean=mean_g,
            snr_variance=0.0,
        )
    mean_g = snr_mean(fit, gamma_teff)
    var_g = snr_variance(fit, gamma_teff)
    return CapacityReport(
        ec_approx=ergodic_capacity(fit, gamma_teff),
        ec_upper=ec_upper_bound(mean_g),
        ec_lower=ec_lower_bound(mean_g, var_g),
        snr_mean=mean_g,
        snr_variance=var_g,
    )
