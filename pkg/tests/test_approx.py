import warnings

import numpy as np
import pytest
from scipy.integrate import quad

from ringdist import (
    BetaParams,
    ConfigurationError,
    Dim,
    KLCurve,
    RegionPair,
    Scenario,
    beta_pdf,
    build_pdf,
    fit_beta,
    kl_divergence,
    kl_sweep,
    threshold_crossing,
)


FIG_FITS = [
    (Scenario.S1, 2.0, 3.419, 2.832),
    (Scenario.S1, 3.5, 3.537, 2.735),
    (Scenario.S2, 2.0, 4.589, 3.951),
    (Scenario.S2, 3.5, 3.993, 3.140),
]


@pytest.mark.parametrize("scenario,ratio,alpha,beta", FIG_FITS,
                         ids=["s1-r2", "s1-r3.5", "s2-r2", "s2-r3.5"])
def test_fit_beta_reproduces_published_2d_fits(scenario, ratio, alpha, beta):
    pdf = build_pdf(RegionPair(dim=Dim.TWO_D, r1=1.0, r2=ratio), scenario)
    p = fit_beta(pdf)
    assert p.alpha == pytest.approx(alpha, abs=0.01)
    assert p.beta == pytest.approx(beta, abs=0.01)
    assert p.scale == 1.0 + ratio


def test_fit_matches_moments_exactly():
    from ringdist import moments

    pdf = build_pdf(RegionPair(dim=Dim.THREE_D, r1=1.0, r2=2.2), Scenario.S2)
    p = fit_beta(pdf)
    m = moments(pdf, 1) / p.scale
    v = moments(pdf, 2) / p.scale**2 - m**2
    assert p.mean == pytest.approx(m, abs=1e-9)
    assert p.variance == pytest.approx(v, abs=1e-9)


def test_beta_params_validation():
    with pytest.raises(ConfigurationError):
        BetaParams(alpha=-1.0, beta=2.0, scale=1.0)
    with pytest.raises(ConfigurationError):
        BetaParams(alpha=1.0, beta=np.inf, scale=1.0)


def test_beta_pdf_uniform_case():
    p = BetaParams(alpha=1.0, beta=1.0, scale=4.0)
    r = np.array([0.0, 1.0, 3.9999, 4.0])
    np.testing.assert_allclose(beta_pdf(p, r), 0.25)
    assert beta_pdf(p, 4.0001) == 0.0


def test_beta_pdf_zero_at_origin_for_alpha_above_one():
    p = BetaParams(alpha=3.4, beta=2.8, scale=3.0)
    assert beta_pdf(p, 0.0) == 0.0
    assert beta_pdf(p, 3.0) == 0.0


def test_beta_pdf_normalizes():
    p = BetaParams(alpha=3.419, beta=2.832, scale=3.0)
    total, _ = quad(lambda r: beta_pdf(p, r), 0.0, p.scale, epsabs=1e-12, epsrel=1e-12)
    assert total == pytest.approx(1.0, abs=1e-10)


def test_kl_of_beta_against_itself_is_zero():
    from ringdist import PiecewisePdf

    p = BetaParams(alpha=3.0, beta=2.0, scale=3.0)
    pair = RegionPair(dim=Dim.TWO_D, r1=1.0, r2=2.0)
    as_piecewise = PiecewisePdf(
        pair=pair,
        scenario=Scenario.S1,
        breakpoints=(0.0, 3.0),
        branches=(lambda r: beta_pdf(p, r),),
    )
    assert kl_divergence(as_piecewise, p) == pytest.approx(0.0, abs=1e-10)


def test_kl_nonnegative_across_configurations():
    for dim in (Dim.TWO_D, Dim.THREE_D):
        for scenario in (Scenario.S1, Scenario.S2):
            for ratio in (1.5, 2.0, 3.5, 7.0):
                pdf = build_pdf(RegionPair(dim=dim, r1=1.0, r2=ratio), scenario)
                assert kl_divergence(pdf, fit_beta(pdf)) >= 0.0


def test_kl_is_scale_invariant_in_the_inner_radius():
    for r1 in (1.0, 3.0):
        pdf = build_pdf(RegionPair(dim=Dim.THREE_D, r1=r1, r2=2.5 * r1), Scenario.S2)
        kl = kl_divergence(pdf, fit_beta(pdf))
        if r1 == 1.0:
            reference = kl
    assert kl == pytest.approx(reference, abs=1e-9)


def test_kl_curve_validation():
    with pytest.raises(ConfigurationError):
        KLCurve(ratios=(2.0, 2.0), kl=(0.1, 0.2))
    with pytest.raises(ConfigurationError):
        KLCurve(ratios=(2.0, 3.0), kl=(0.1, -0.2))


def test_sweep_monotone_and_ordered_between_scenarios():
    ratios = [1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0]
    s1 = kl_sweep(Dim.TWO_D, Scenario.S1, ratios)
    s2 = kl_sweep(Dim.TWO_D, Scenario.S2, ratios)
    # RWP concentration makes the beta fit worse in 2-D wherever the curves
    # are distinguishable at plot resolution; below ratio ~3.3 both
    # divergences are under 3e-3 and the exact ordering genuinely flips.
    for ratio, a, b in zip(ratios, s1.kl, s2.kl):
        assert b >= a - 3e-3
        if ratio >= 3.5:
            assert b >= a
    # growth with the ratio is expected but is a plot-derived observation,
    # so a violation is logged rather than failed
    for curve in (s1, s2):
        if any(b < a for a, b in zip(curve.kl, curve.kl[1:])):
            warnings.warn(f"KL sweep not monotone: {curve}", stacklevel=1)


def test_threshold_crossing_bracketing():
    curve = KLCurve(ratios=(2.0, 3.0, 4.0), kl=(0.001, 0.009, 0.02))
    x = threshold_crossing(curve, 0.01)
    assert 3.0 < x < 4.0
    assert x == pytest.approx(3.0 + (0.01 - 0.009) / (0.02 - 0.009), abs=1e-12)


def test_threshold_crossing_none_when_below():
    curve = KLCurve(ratios=(2.0, 3.0, 4.0), kl=(1e-4, 2e-4, 3e-4))
    assert threshold_crossing(curve, 1e-2) is None
