"""Relay channel statistics: exact relayed-path CDF/PDF, the series CDF of
the combined power, its coefficients, the exact convolution audit and the
min-of-hops baseline.

Monte Carlo cross-checks in this file use 1e7 samples and finish in a few
seconds each; the heavyweight figure-scale comparisons live in the
acceptance suite.
"""

import math
import warnings

import numpy as np
import pytest

from afrelay.bessel_series import series_coeffs
from afrelay.channel import (
    ChannelParams,
    DegenerateParameterError,
    SeriesCdfCoeffs,
    combined_cdf,
    combined_cdf_coeffs,
    combined_cdf_exact,
    combined_pdf,
    minbound_cdf,
    minbound_pdf,
    srd_cdf,
    srd_pdf,
)
from afrelay.montecarlo import SimConfig, sample_srd_power, simulate
from afrelay.reference import QuadratureSpec, adaptive_quad

UNIT = ChannelParams(gamma=1000.0, lambda_sd=1.0, lambda_sr=1.0, lambda_rd=1.0)
TABLE10 = series_coeffs(1.0, 10)


def unit_coeffs(k: int = 10) -> SeriesCdfCoeffs:
    return combined_cdf_coeffs(UNIT, series_coeffs(1.0, k))


class TestChannelParams:
    def test_rejects_nonpositive(self):
        for field in ("gamma", "lambda_sd", "lambda_sr", "lambda_rd"):
            kw = dict(gamma=1.0, lambda_sd=1.0, lambda_sr=1.0, lambda_rd=1.0)
            kw[field] = 0.0
            with pytest.raises(ValueError):
                ChannelParams(**kw)

    def test_derived_combinations(self):
        p = ChannelParams(gamma=10.0, lambda_sd=1.0, lambda_sr=2.0, lambda_rd=0.5)
        d = p.derived()
        assert d.lambda_p == pytest.approx(1.0)
        assert d.lambda_s == pytest.approx(2.5)
        assert d.lambda_srd == pytest.approx((math.sqrt(2.0) + math.sqrt(0.5)) ** 2)
        assert d.lambda_srd > d.lambda_s


class TestSrdCdf:
    def test_zero_at_origin(self):
        assert srd_cdf(UNIT, 0.0) == 0.0

    def test_saturates(self):
        x = 50.0 / UNIT.derived().lambda_s
        assert srd_cdf(UNIT, x) >= 1.0 - 1e-6

    def test_monotone(self):
        xs = np.linspace(0.0, 20.0, 1000)
        vals = [srd_cdf(UNIT, float(x)) for x in xs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_matches_empirical_cdf(self):
        # 1e7 draws of the exact product form; the empirical CDF carries a
        # standard error of about 1.3e-4 at this point
        rng = np.random.default_rng(42)
        s = sample_srd_power(UNIT, rng, size=10**7)
        emp = float(np.mean(s <= 0.5))
        assert abs(emp - srd_cdf(UNIT, 0.5)) < 3e-3

    def test_series_backend_agrees(self):
        # depth-10 truncation against the quadrature Bessel; measured worst
        # relative gap 3.3e-4 at x = 0.25 over this range
        for x in (0.25, 0.5, 1.0, 2.0):
            a = srd_cdf(UNIT, x)
            b = srd_cdf(UNIT, x, backend="series", depth=10)
            assert a == pytest.approx(b, rel=1e-3), x

    def test_domain(self):
        with pytest.raises(ValueError):
            srd_cdf(UNIT, -0.1)
        with pytest.raises(ValueError):
            srd_cdf(UNIT, 0.5, backend="nope")


class TestSrdPdf:
    def test_matches_cdf_derivative(self):
        h = 1e-6
        fd = (srd_cdf(UNIT, 0.5 + h) - srd_cdf(UNIT, 0.5 - h)) / (2 * h)
        pdf = srd_pdf(UNIT, 0.5)
        assert abs(pdf - fd) / pdf < 1e-5

    def test_normalizes(self):
        total = adaptive_quad(
            lambda x: srd_pdf(UNIT, x) if x > 0 else 0.0,
            0.0,
            40.0,
            QuadratureSpec(1e-10, 1e-9, 300),
        )
        assert abs(total - 1.0) < 1e-6

    def test_matches_histogram_density(self):
        cfg = SimConfig(seed=7, samples=10**7)
        rng = np.random.default_rng(7)
        s = sample_srd_power(UNIT, rng, size=cfg.samples)
        count = float(np.count_nonzero((s >= 1.0) & (s < 1.1)))
        density = count / (cfg.samples * 0.1)
        mid = srd_pdf(UNIT, 1.05)
        assert abs(density - mid) / mid < 0.02

    def test_origin_is_out_of_domain(self):
        # the density has an integrable log divergence at 0
        with pytest.raises(ValueError):
            srd_pdf(UNIT, 0.0)


class TestSeriesCdfCoeffs:
    def test_reference_scenario_leading_coefficient(self):
        # k = 2, unit fading: lambda_srd = 4 and the closed form gives
        # A = 1 + sum_q (2)**q q! a_q / 3**(q+1) = 1.47160...
        co = combined_cdf_coeffs(UNIT, series_coeffs(1.0, 2))
        assert co.A == pytest.approx(1.471604938271605, rel=1e-12)

    def test_zero_power_identity(self):
        # A - 1 equals the x**0 column sum; this is what pins F(0) = 0
        rng = np.random.default_rng(3)
        for _ in range(10):
            lsd, lsr, lrd = np.exp(rng.uniform(np.log(0.2), np.log(5.0), 3))
            p = ChannelParams(gamma=100.0, lambda_sd=lsd, lambda_sr=lsr, lambda_rd=lrd)
            if abs(p.derived().lambda_srd - lsd) < 0.05:
                continue
            co = combined_cdf_coeffs(p, TABLE10)
            lhs = co.A - 1.0
            rhs = float(co.B[:, 0].sum())
            assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), 1.0)

    def test_top_row_scaling(self):
        # at c = q the c! denominator and the d-power collapse: the entry
        # equals lambda_sd (2 sqrt(lambda_p))**q a_q / d
        table = series_coeffs(1.0, 5)
        co = combined_cdf_coeffs(UNIT, table)
        d = UNIT.derived().lambda_srd - UNIT.lambda_sd
        two_root_p = 2.0 * math.sqrt(UNIT.derived().lambda_p)
        for q in range(6):
            expected = UNIT.lambda_sd * two_root_p**q * float(table.a[q]) / d
            assert co.B[q, q] == pytest.approx(expected, rel=1e-13), q

    def test_degenerate_rates_rejected_with_hint(self):
        # lambda_srd = 4 collides with lambda_sd = 4
        p = ChannelParams(gamma=100.0, lambda_sd=4.0, lambda_sr=1.0, lambda_rd=1.0)
        with pytest.raises(DegenerateParameterError, match="Perturb lambda_sd"):
            combined_cdf_coeffs(p, TABLE10)

    def test_wrong_order_table_rejected(self):
        with pytest.raises(ValueError):
            combined_cdf_coeffs(UNIT, series_coeffs(2.0, 5))

    def test_immutable(self):
        co = unit_coeffs(4)
        with pytest.raises(ValueError):
            co.B[0, 0] = 99.0


class TestCombinedCdf:
    def test_zero_at_origin(self):
        assert combined_cdf(UNIT, unit_coeffs(), 0.0) == 0.0

    def test_approaches_one(self):
        assert combined_cdf(UNIT, unit_coeffs(), 60.0) == pytest.approx(1.0, abs=1e-12)

    def test_monotone(self):
        xs = np.linspace(0.0, 20.0, 1000)
        vals = combined_cdf(UNIT, unit_coeffs(), xs)
        assert np.all(np.diff(vals) >= 0.0)

    def test_matches_monte_carlo(self):
        # exact-model simulation; tolerance covers both the sampling noise
        # and the high-SNR truncation bias at 30 dB
        closed = combined_cdf(UNIT, unit_coeffs(), 1.0)
        est = simulate(UNIT, SimConfig(seed=42, samples=10**7), "cdf", x=1.0, workers=2)
        assert abs(closed - est.value) < 5e-3

    def test_vectorized_matches_scalar(self):
        co = unit_coeffs()
        xs = np.array([0.0, 0.3, 1.7, 4.2])
        vec = combined_cdf(UNIT, co, xs)
        for i, x in enumerate(xs):
            assert vec[i] == combined_cdf(UNIT, co, float(x))

    def test_excursion_warning_near_degeneracy(self):
        # one part in 1e3 from the removable singularity: the coefficients
        # are huge and cancellation rips the CDF out of [0, 1]
        p = ChannelParams(gamma=1000.0, lambda_sd=4.004, lambda_sr=1.0, lambda_rd=1.0)
        co = combined_cdf_coeffs(p, TABLE10)
        with pytest.warns(RuntimeWarning, match="series CDF leaves"):
            combined_cdf(p, co, np.linspace(0.0, 6.0, 50))

    def test_clamp_off_returns_raw(self):
        p = ChannelParams(gamma=1000.0, lambda_sd=4.004, lambda_sr=1.0, lambda_rd=1.0)
        co = combined_cdf_coeffs(p, TABLE10)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            raw = combined_cdf(p, co, np.linspace(0.0, 6.0, 50), clamp=False)
            assert float(np.max(raw)) > 1.0 or float(np.min(raw)) < 0.0


class TestCombinedPdf:
    def test_normalizes_to_one(self):
        for k in (2, 5, 10):
            co = unit_coeffs(k)
            total = adaptive_quad(
                lambda v: combined_pdf(UNIT, co, v),
                0.0,
                200.0,
                QuadratureSpec(1e-13, 1e-12, 300),
            )
            assert abs(total - 1.0) < 1e-9, k

    def test_matches_cdf_derivative(self):
        co = unit_coeffs()
        worst = 0.0
        for x in np.linspace(0.1, 10.0, 34):
            h = 1e-6 * max(float(x), 1.0)
            fd = (
                combined_cdf(UNIT, co, float(x) + h, clamp=False)
                - combined_cdf(UNIT, co, float(x) - h, clamp=False)
            ) / (2 * h)
            pdf = combined_pdf(UNIT, co, float(x))
            worst = max(worst, abs(pdf - fd) / max(abs(pdf), 1e-12))
        assert worst < 1e-6

    def test_finite_at_origin(self):
        v = combined_pdf(UNIT, unit_coeffs(), 0.0)
        assert math.isfinite(v)
        assert abs(v) < 1e-12  # direct path density cancels the c=1 terms here


class TestCombinedCdfExact:
    def test_zero_at_origin(self):
        assert combined_cdf_exact(UNIT, 0.0) == 0.0

    def test_series_tight_at_extreme_snr(self):
        p = ChannelParams(gamma=1e6, lambda_sd=1.0, lambda_sr=1.0, lambda_rd=1.0)
        co = combined_cdf_coeffs(p, TABLE10)
        sup = max(
            abs(combined_cdf(p, co, float(x)) - combined_cdf_exact(p, float(x)))
            for x in np.linspace(0.0, 5.0, 26)
        )
        assert sup < 1e-3

    def test_series_tight_at_30db(self):
        # measured sup distance 1.05e-4 on [0, 10]
        co = unit_coeffs()
        sup = max(
            abs(combined_cdf(UNIT, co, float(x)) - combined_cdf_exact(UNIT, float(x)))
            for x in np.linspace(0.0, 10.0, 41)
        )
        assert sup < 1e-2

    def test_low_snr_deviation_is_bounded(self):
        # at 0 dB the high-SNR form is visibly biased; the measured sup
        # deviation is 5.75e-2, reported here as a sanity envelope rather
        # than a accuracy claim
        p = ChannelParams(gamma=1.0, lambda_sd=1.0, lambda_sr=1.0, lambda_rd=1.0)
        co = combined_cdf_coeffs(p, TABLE10)
        sup = max(
            abs(combined_cdf(p, co, float(x)) - combined_cdf_exact(p, float(x)))
            for x in np.linspace(0.0, 10.0, 21)
        )
        assert 0.0 < sup < 0.1


class TestMinboundBaseline:
    def test_hypoexponential_value(self):
        # rates 1 and 2: F(1) = 1 - 2 e**-1 + e**-2
        exact = 1.0 - 2.0 * math.exp(-1.0) + math.exp(-2.0)
        assert minbound_cdf(UNIT, 1.0) == pytest.approx(exact, rel=1e-14)
        assert minbound_cdf(UNIT, 1.0) == pytest.approx(0.39957640089372803, rel=1e-14)

    def test_equal_rate_erlang_branch(self):
        # lambda_sd = 2 meets lambda_s = 2: the hypoexponential formula
        # degenerates and the Erlang(2) form takes over
        p = ChannelParams(gamma=10.0, lambda_sd=2.0, lambda_sr=1.0, lambda_rd=1.0)
        for x in (0.3, 1.0, 2.5):
            expected = 1.0 - math.exp(-2.0 * x) * (1.0 + 2.0 * x)
            assert minbound_cdf(p, x) == pytest.approx(expected, rel=1e-12), x

    def test_pdf_normalizes(self):
        total = adaptive_quad(lambda x: minbound_pdf(UNIT, x), 0.0, 60.0)
        assert abs(total - 1.0) < 1e-9

    def test_pdf_matches_cdf_derivative(self):
        h = 1e-6
        for x in (0.4, 1.0, 3.0):
            fd = (minbound_cdf(UNIT, x + h) - minbound_cdf(UNIT, x - h)) / (2 * h)
            assert minbound_pdf(UNIT, x) == pytest.approx(fd, rel=1e-7), x

    def test_bound_underestimates_outage(self):
        # min(X, Y) >= XY/(X + Y + 1/gamma) pointwise, so the bound's CDF
        # sits below the exact relayed-path CDF everywhere: the baseline
        # is optimistic about outage, not pessimistic
        lam_s = UNIT.derived().lambda_s
        for x in np.linspace(0.05, 5.0, 25):
            bound_cdf = 1.0 - math.exp(-lam_s * float(x))
            assert bound_cdf <= srd_cdf(UNIT, float(x)) + 1e-12

    def test_combined_bound_direction(self):
        # same ordering after adding the shared direct-path power
        for x in (0.5, 1.0, 2.0, 4.0):
            assert minbound_cdf(UNIT, x) <= combined_cdf_exact(UNIT, x) + 1e-9
