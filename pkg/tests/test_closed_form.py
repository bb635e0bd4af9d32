import numpy as np
import pytest
from scipy.special import betaincinv

from ringdist import (
    CoeffKind,
    CorollaryKind,
    Dim,
    DomainError,
    PiecewisePdf,
    RegionPair,
    Scenario,
    build_pdf,
    coefficient_set,
    corollary_pdf,
    eval_cdf,
    eval_pdf,
    fit_beta,
    moments,
)
from tests.conftest import ALL_COMBOS, COMBO_IDS, pair_of

RATIOS = (1.2, 1.5, 2.0, 2.5, 3.0, 3.2, 4.0, 5.0, 7.0, 10.0)
R1S = (0.5, 1.0, 3.0)


# ------------------------------------------------------------- construction

def test_breakpoints_unified_ordering():
    pdf = build_pdf(RegionPair(dim=Dim.TWO_D, r1=1.0, r2=2.0), Scenario.S1)
    assert pdf.breakpoints == (0.0, 1.0, 2.0, 3.0)


def test_breakpoints_sparse_ordering():
    pdf = build_pdf(RegionPair(dim=Dim.TWO_D, r1=1.0, r2=3.5), Scenario.S1)
    assert pdf.breakpoints == (0.0, 2.0, 2.5, 4.5)


def test_breakpoints_collapse_at_regime_boundary():
    # r2 = 3 r1 makes the middle interval empty; it must be dropped, not kept
    # as a zero-width interval.
    pdf = build_pdf(RegionPair(dim=Dim.THREE_D, r1=1.0, r2=3.0), Scenario.S2)
    assert pdf.breakpoints == (0.0, 2.0, 4.0)
    assert len(pdf.branches) == 2


def test_piecewise_pdf_rejects_unsorted_breakpoints():
    pair = RegionPair(dim=Dim.TWO_D, r1=1.0, r2=2.0)
    with pytest.raises(DomainError):
        PiecewisePdf(pair=pair, scenario=Scenario.S1,
                     breakpoints=(0.0, 2.0, 1.0), branches=(abs, abs))


# ------------------------------------------------------------- coefficients

def test_2d_coefficient_table_s1():
    cs = coefficient_set(CoeffKind.UNIFIED_2D, Scenario.S1, 1.0, 2.5)
    r = 0.7
    assert cs.entries[0](r) == r                      # sine factor, low branch
    assert cs.entries[1](r) == -2.0                   # -2 r1
    assert cs.entries[3](r) == -2.0                   # -2 r1^2
    assert cs.entries[5](r) == 6.25                   # r2^2
    assert cs.entries[7](r) == 0.0                    # no chord term for s1
    sparse = coefficient_set(CoeffKind.SPARSE_2D, Scenario.S1, 1.0, 4.0)
    assert sparse.entries[3](r) == 16.0               # r2^2 exactly


def test_2d_coefficient_table_s2():
    cs = coefficient_set(CoeffKind.UNIFIED_2D, Scenario.S2, 1.0, 2.5)
    r = 0.7
    assert cs.entries[4](r) == 0.0 and cs.entries[8](r) == 0.0
    assert cs.entries[6](r) == 1.0                    # r1^2 shared with s1
    assert cs.entries[7](r) == pytest.approx((r**2 - 3.0 + 5.0 * 6.25) / 4.0)
    # low-branch entries agree between the unified and sparse families
    sp = coefficient_set(CoeffKind.SPARSE_2D, Scenario.S2, 1.0, 2.5)
    for i in (0, 1):
        assert sp.entries[i](r) == cs.entries[i](r)


def test_3d_coefficient_table_structure():
    for scenario in (Scenario.S1, Scenario.S2):
        low = coefficient_set(CoeffKind.LOW_3D, scenario, 1.0, 2.0)
        high = coefficient_set(CoeffKind.HIGH_3D, scenario, 1.0, 2.0)
        assert low.entries[8] == 0.0 and high.entries[8] == 0.0
    low_s1 = coefficient_set(CoeffKind.LOW_3D, Scenario.S1, 1.0, 2.0)
    assert all(low_s1.entries[n] == 0.0 for n in (4, 6, 7, 9))
    low_s2 = coefficient_set(CoeffKind.LOW_3D, Scenario.S2, 1.0, 2.0)
    assert low_s2.entries[3] == 0.0
    # the innermost/outermost families do not depend on the regime
    for kind in (CoeffKind.LOW_3D, CoeffKind.HIGH_3D):
        near = coefficient_set(kind, Scenario.S2, 1.0, 2.9)
        far = coefficient_set(kind, Scenario.S2, 1.0, 3.1)
        assert type(near.entries) is type(far.entries)


def test_3d_low_branch_active_powers_for_s2():
    pdf = build_pdf(RegionPair(dim=Dim.THREE_D, r1=1.0, r2=2.0), Scenario.S2)
    cs = coefficient_set(CoeffKind.LOW_3D, Scenario.S2, 1.0, 2.0)
    active = [n for n, c in enumerate(cs.entries) if c != 0.0]
    assert active == [4, 5, 6, 7, 9]
    # and the branch itself reproduces the monomial sum away from cancellation
    r = np.array([0.3, 0.6, 0.9])
    direct = sum(cs.entries[n] * r**n for n in active)
    assert np.allclose(pdf.branches[0](r), direct, rtol=1e-12)


# ------------------------------------------------------------- evaluation

def test_eval_pdf_support_edges():
    pdf = build_pdf(RegionPair(dim=Dim.TWO_D, r1=1.0, r2=2.0), Scenario.S1)
    assert eval_pdf(pdf, 0.0) == 0.0
    assert eval_pdf(pdf, 3.0) == pytest.approx(0.0, abs=1e-15)
    assert eval_pdf(pdf, 3.2) == 0.0
    with pytest.raises(DomainError):
        eval_pdf(pdf, -0.5)
    with pytest.raises(DomainError):
        eval_pdf(pdf, np.nan)


def test_eval_pdf_matches_frozen_conditioning_integral():
    # Frozen from an independent scipy quadrature of the conditional density
    # against the uniform radial law.
    pdf = build_pdf(RegionPair(dim=Dim.TWO_D, r1=1.0, r2=2.0), Scenario.S1)
    assert eval_pdf(pdf, 1.5) == pytest.approx(0.6172786634359839, abs=1e-8)
    assert eval_pdf(pdf, 0.5) == pytest.approx(0.10498745250856914, abs=1e-8)


def test_eval_cdf_edges_and_monotonicity():
    pdf = build_pdf(RegionPair(dim=Dim.THREE_D, r1=1.0, r2=2.5), Scenario.S2)
    assert eval_cdf(pdf, 0.0) == 0.0
    assert eval_cdf(pdf, pdf.support) == pytest.approx(1.0, abs=1e-8)
    grid = np.linspace(0.0, pdf.support + 0.3, 200)
    vals = eval_cdf(pdf, grid)
    assert np.all(np.diff(vals) >= -1e-12)
    # scalar and array paths agree
    for r in (0.3, 1.7, 2.9):
        assert eval_cdf(pdf, r) == pytest.approx(float(eval_cdf(pdf, np.array([r]))[0]), abs=1e-10)


def test_eval_cdf_at_beta_median():
    pdf = build_pdf(RegionPair(dim=Dim.TWO_D, r1=1.0, r2=2.0), Scenario.S1)
    p = fit_beta(pdf)
    median = p.scale * betaincinv(p.alpha, p.beta, 0.5)
    assert eval_cdf(pdf, float(median)) == pytest.approx(0.5, abs=2e-3)


def test_moments_normalization_and_mean():
    pdf = build_pdf(RegionPair(dim=Dim.TWO_D, r1=1.0, r2=2.0), Scenario.S1)
    assert moments(pdf, 0) == pytest.approx(1.0, abs=1e-9)
    # normalized mean equals the fitted beta mean identity
    assert moments(pdf, 1) / 3.0 == pytest.approx(3.419 / (3.419 + 2.832), abs=2e-3)


def _second_moment_exact(dim, scenario, r1, r2):
    """E[r^2] = E[rho1^2] + E[rho2^2]: the included angle averages out."""
    if dim is Dim.TWO_D:
        inner = r1**2 / 2.0 if scenario is Scenario.S1 else r1**2 / 3.0
        outer = (r1**2 + r2**2) / 2.0
    else:
        inner = 3.0 * r1**2 / 5.0 if scenario is Scenario.S1 else 31.0 * r1**2 / 81.0
        outer = 0.6 * (r2**5 - r1**5) / (r2**3 - r1**3)
    return inner + outer


@pytest.mark.parametrize("dim,scenario", ALL_COMBOS, ids=COMBO_IDS)
@pytest.mark.parametrize("ratio", (1.5, 2.0, 3.5))
def test_second_moment_matches_analytic_identity(dim, scenario, ratio):
    pair = pair_of(dim, 1.3, ratio)
    pdf = build_pdf(pair, scenario)
    exact = _second_moment_exact(dim, scenario, pair.r1, pair.r2)
    assert moments(pdf, 2) == pytest.approx(exact, rel=1e-9)


# ------------------------------------------------------------- corollaries

def test_corollary_values():
    assert corollary_pdf(CorollaryKind.DISK2D_S1_BOUNDARY, 1.0, 1.0) == pytest.approx(2.0 / 3.0)
    assert corollary_pdf(CorollaryKind.SPHERE3D_S1_BOUNDARY, 1.0, 1.0) == pytest.approx(0.75)
    assert corollary_pdf(CorollaryKind.FULL_DISK_2D, 1.0, 0.5) == pytest.approx(1.0)
    assert corollary_pdf(CorollaryKind.FULL_SPHERE_3D, 2.0, 1.0) == pytest.approx(3.0 / 8.0)


def test_corollary_outside_support_is_zero():
    assert corollary_pdf(CorollaryKind.DISK2D_S2_BOUNDARY, 1.0, 2.5) == 0.0
    assert corollary_pdf(CorollaryKind.FULL_SPHERE_3D, 1.0, 1.5) == 0.0


def test_corollary_full_disk_mean():
    # mean of 2 r / R^2 on [0, R] is 2R/3
    from ringdist import adaptive_quadrature

    mean = adaptive_quadrature(
        lambda r: r * corollary_pdf(CorollaryKind.FULL_DISK_2D, 2.0, r), 0.0, 2.0, 1e-12
    )
    assert mean == pytest.approx(4.0 / 3.0, abs=1e-10)


# ------------------------------------------------------------- grid invariants

@pytest.mark.parametrize("dim,scenario", ALL_COMBOS, ids=COMBO_IDS)
def test_normalization_nonnegativity_continuity_grid(dim, scenario):
    for ratio in RATIOS:
        for r1 in R1S:
            pdf = build_pdf(pair_of(dim, r1, ratio), scenario)
            total = eval_cdf(pdf, pdf.support)
            assert abs(total - 1.0) < 1e-8, (ratio, r1, total)
            values = eval_pdf(pdf, np.linspace(0.0, pdf.support, 10_000))
            assert values.min() >= -1e-12, (ratio, r1, values.min())
            for i, bp in enumerate(pdf.breakpoints[1:-1]):
                left = float(pdf.branches[i](np.asarray([bp]))[0])
                right = float(pdf.branches[i + 1](np.asarray([bp]))[0])
                assert abs(left - right) <= 1e-9 * max(1.0, abs(left)), (ratio, r1, bp)


@pytest.mark.parametrize("dim", (Dim.TWO_D, Dim.THREE_D), ids=["2d", "3d"])
def test_sparse_middle_branch_is_exactly_the_outer_region_law(dim):
    r1, r2 = 1.0, 4.2
    mids = np.linspace(2.0 * r1 + 1e-6, r2 - r1 - 1e-6, 64)
    expected = (
        2.0 * mids / (r2**2 - r1**2) if dim is Dim.TWO_D else 3.0 * mids**2 / (r2**3 - r1**3)
    )
    for scenario in (Scenario.S1, Scenario.S2):
        pdf = build_pdf(RegionPair(dim=dim, r1=r1, r2=r2), scenario)
        np.testing.assert_array_equal(eval_pdf(pdf, mids), expected)
