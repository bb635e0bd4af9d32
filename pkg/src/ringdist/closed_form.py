"""Exact piecewise densities of the internodal distance, plus CDF/moments.

For each (dimension, scenario, regime) the distance density is piecewise
over three radial intervals. In 2-D the branches combine arccos terms,
their sines and the chord factor :func:`~ringdist.geometry.kappa` with
radius-dependent coefficients; in 3-D every branch is a plain polynomial in
``r``. The sparse regime (r2 > 3 r1) has a middle branch where the inner
region is invisible to the distance law and the density collapses to the
pure annulus/shell form, identical for both scenarios.

Degenerate limits (coincident radii, vanishing inner radius) are served by
:func:`corollary_pdf`; the general construction requires 0 < r1 < r2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from ._quadrature import adaptive_quadrature, integrate_many
from .errors import DomainError
from .geometry import (
    Dim,
    RegionPair,
    Scenario,
    UnifiedRegime,
    classify_regime,
    kappa,
)

__all__ = [
    "CoeffKind",
    "CoefficientSet",
    "coefficient_set",
    "PiecewisePdf",
    "build_pdf",
    "eval_pdf",
    "eval_cdf",
    "moments",
    "CorollaryKind",
    "corollary_pdf",
]


class CoeffKind(enum.Enum):
    """Which coefficient family a :class:`CoefficientSet` holds.

    The 2-D families hold radius-dependent entries (callables of ``r``); the
    3-D families hold constant polynomial coefficients, stored by ascending
    power of ``r``.
    """

    UNIFIED_2D = "unified-2d"  # 12 entries: low/mid/high trig branches, r2 <= 3 r1
    SPARSE_2D = "sparse-2d"    # 6 entries: low/high trig branches, r2 > 3 r1
    LOW_3D = "low-3d"          # powers r^3..r^9, innermost branch, both regimes
    MID_3D = "mid-3d"          # powers r^1..r^7, bridging branch, r2 <= 3 r1 only
    HIGH_3D = "high-3d"        # powers r^1..r^9, outermost branch, both regimes


@dataclass(frozen=True)
class CoefficientSet:
    """Scenario- and radii-specific branch coefficients.

    ``entries`` is a tuple of callables of ``r`` for the 2-D kinds and a
    10-tuple of floats (coefficient of r^n at index n) for the 3-D kinds.
    """

    kind: CoeffKind
    scenario: Scenario
    r1: float
    r2: float
    entries: tuple


def _entries_2d_unified(scenario, r1, r2):
    if scenario is Scenario.S1:
        return (
            lambda r: r,                      # sin term, low branch
            lambda r: -2.0 * r1,              # angle term, low branch
            lambda r: r * r1,                 # mid branch, inner-angle sine
            lambda r: -2.0 * r1**2,           # mid branch, inner angle
            lambda r: -r * r2,                # mid branch, outer-angle sine
            lambda r: r2**2,                  # mid branch, outer angle
            lambda r: r1**2,                  # mid branch, far angle
            lambda r: 0.0,                    # mid branch, chord factor
            lambda r: -r * r2,                # high branch, outer-angle sine
            lambda r: r2**2,                  # high branch, outer angle
            lambda r: r1**2,                  # high branch, far angle
            lambda r: 0.0,                    # high branch, chord factor
        )
    return (
        lambda r: -r * (2.0 * r1**2 + r**2) / (2.0 * r1**2),
        lambda r: -2.0 * (r1**2 - r**2) / r1,
        lambda r: -r * (2.0 * r1**2 + r**2) / (2.0 * r1),
        lambda r: -2.0 * (r1**2 - r**2),
        lambda r: 0.0,
        lambda r: -(r2**2) * (2.0 * r**2 - 2.0 * r1**2 + r2**2) / r1**2,
        lambda r: r1**2,
        lambda r: (r**2 - 3.0 * r1**2 + 5.0 * r2**2) / (4.0 * r1**2),
        lambda r: 0.0,
        lambda r: -(r2**2) * (2.0 * r**2 - 2.0 * r1**2 + r2**2) / r1**2,
        lambda r: r1**2,
        lambda r: (r**2 - 3.0 * r1**2 + 5.0 * r2**2) / (4.0 * r1**2),
    )


def _entries_2d_sparse(scenario, r1, r2):
    unified = _entries_2d_unified(scenario, r1, r2)
    # Low and high branches carry over unchanged from the unified family.
    return unified[0:2] + unified[8:12]


# The 3-D entry factories use integer literals and true division throughout,
# so the same code yields floats for float radii and exact rationals for
# Fraction radii (the exact path feeds the re-centered branch evaluators).


def _entries_3d_low(scenario, r1, r2):
    d = r1**3 - r2**3  # negative
    a = [0 * r1] * 10
    if scenario is Scenario.S1:
        a[3] = -9 / (4 * r1 * d)
        a[5] = 3 / (16 * r1**3 * d)
    else:
        a[4] = -35 / (18 * r1**2 * d)
        a[5] = -35 / (16 * r1**3 * d)
        a[6] = 455 / (144 * r1**4 * d)
        a[7] = -287 / (288 * r1**5 * d)
        a[9] = 65 / (2304 * r1**7 * d)
    return tuple(a)


def _entries_3d_mid(scenario, r1, r2):
    q = r1**2 + r1 * r2 + r2**2  # (r1^3 - r2^3) = (r1 - r2) q
    b = [0 * r1] * 10
    if scenario is Scenario.S1:
        b[1] = 9 * (r1 - r2) * (r1 + r2) ** 2 / (16 * r1**3 * q)
        b[2] = 3 / (2 * r1**3)
        b[3] = -9 * (r1 + r2) / (8 * r1**3 * q)
    else:
        b[1] = (
            35 * (r1 - r2) ** 2 * (r1 + r2) ** 3 * (29 * r1**2 - 13 * r2**2)
            / (2304 * r1**7 * q)
        )
        b[2] = (
            (r1 - r2)
            * (
                72 * r1**5
                + 144 * r1**4 * r2
                + 216 * r1**3 * r2**2
                + 43 * r1**2 * r2**3
                - 130 * r1 * r2**4
                - 65 * r2**5
            )
            / (48 * r1**7 * q)
        )
        b[3] = (
            35 * (r1 + r2) * (25 * r1**4 + 88 * r1**2 * r2**2 - 65 * r2**4)
            / (576 * r1**7 * q)
        )
        b[4] = (
            -35
            * (4 * r1**4 + 4 * r1**3 * r2 + 4 * r1**2 * r2**2
               - 13 * r1 * r2**3 - 13 * r2**4)
            / (72 * r1**7 * q)
        )
        b[5] = -35 * (r1 + r2) * (31 * r1**2 + 65 * r2**2) / (384 * r1**7 * q)
        b[6] = 455 / (144 * r1**7)
        b[7] = -455 * (r1 + r2) / (576 * r1**7 * q)
    return tuple(b)


def _entries_3d_high(scenario, r1, r2):
    d = r1**3 - r2**3
    q = r1**2 + r1 * r2 + r2**2
    c = [0 * r1] * 10
    if scenario is Scenario.S1:
        c[1] = 9 * (r1 - r2) * (r1 + r2) ** 2 / (16 * r1**3 * q)
        c[2] = -3 * (r1**3 + r2**3) / (2 * r1**3 * d)
        c[3] = 9 * (r1**2 + r2**2) / (8 * r1**3 * d)
        c[5] = -3 / (16 * r1**3 * d)
    else:
        c[1] = (
            35 * (r1 - r2) ** 2 * (r1 + r2) ** 3 * (29 * r1**2 - 13 * r2**2)
            / (2304 * r1**7 * q)
        )
        c[2] = (
            -(72 * r1**7 + 245 * r1**4 * r2**3 - 238 * r1**2 * r2**5 + 65 * r2**7)
            / (48 * r1**7 * d)
        )
        c[3] = (
            35 * (r1 + r2) * (25 * r1**4 + 88 * r1**2 * r2**2 - 65 * r2**4)
            / (576 * r1**7 * q)
        )
        c[4] = 35 * (17 * r1**2 * r2**3 - 13 * r2**5) / (72 * r1**7 * d)
        c[5] = -35 * (7 * r1**4 + 34 * r1**2 * r2**2 - 65 * r2**4) / (384 * r1**7 * d)
        c[6] = -455 * r2**3 / (144 * r1**7 * d)
        c[7] = 7 * (17 * r1**2 + 65 * r2**2) / (576 * r1**7 * d)
        c[9] = -65 / (2304 * r1**7 * d)
    return tuple(c)


_FACTORIES = {
    CoeffKind.UNIFIED_2D: _entries_2d_unified,
    CoeffKind.SPARSE_2D: _entries_2d_sparse,
    CoeffKind.LOW_3D: _entries_3d_low,
    CoeffKind.MID_3D: _entries_3d_mid,
    CoeffKind.HIGH_3D: _entries_3d_high,
}


def coefficient_set(kind: CoeffKind, scenario: Scenario, r1: float, r2: float) -> CoefficientSet:
    """Materialize the coefficient family ``kind`` for the given radii."""
    entries = _FACTORIES[kind](scenario, float(r1), float(r2))
    return CoefficientSet(kind=kind, scenario=scenario, r1=float(r1), r2=float(r2), entries=entries)


@dataclass(frozen=True, eq=False)
class PiecewisePdf:
    """Immutable piecewise density: ordered breakpoints and branch evaluators.

    ``branches[i]`` covers ``[breakpoints[i], breakpoints[i+1])``; the last
    interval is closed on the right. Evaluators are vectorized over ``r``.
    """

    pair: RegionPair
    scenario: Scenario
    breakpoints: tuple
    branches: tuple

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "branches", tuple(self.branches))
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise DomainError(f"breakpoints must be strictly increasing, got {bps}")
        if len(self.branches) != len(bps) - 1:
            raise DomainError("need exactly one branch per breakpoint interval")

    @property
    def support(self) -> float:
        return self.breakpoints[-1]


# The three branch angles all have arccos arguments that reach +/-1 exactly
# at branch breakpoints, where plain arccos loses half the working digits.
# Each helper therefore forms 1 -/+ cos(phi) in factored form (exact zeros at
# the stored breakpoints) and recovers the angle and its sine from atan2.


def _angle_and_sine(cos_phi, one_minus, one_plus):
    sin_phi = np.sqrt(np.clip(one_minus * one_plus, 0.0, None))
    return np.arctan2(sin_phi, np.clip(cos_phi, -1.0, 1.0)), sin_phi


def _phi_low(r, r1):
    # Inner-rim angle: cos(phi) = r / (2 r1).
    denom = 2.0 * r1
    return _angle_and_sine(r / denom, (2.0 * r1 - r) / denom, (2.0 * r1 + r) / denom)


def _phi_outer(r, r1, r2):
    # cos(phi) = (r2^2 + r^2 - r1^2) / (2 r r2); zero at r2 - r1 and r1 + r2.
    denom = 2.0 * r * r2
    return _angle_and_sine(
        (r2**2 + r**2 - r1**2) / denom,
        ((r1 + r2) - r) * (r - (r2 - r1)) / denom,
        ((r + r2) - r1) * ((r + r2) + r1) / denom,
    )


def _phi_far(r, r1, r2):
    # cos(phi) = (r1^2 + r^2 - r2^2) / (2 r r1); pi at r2 - r1, zero at r1 + r2.
    denom = 2.0 * r * r1
    return _angle_and_sine(
        (r1**2 + r**2 - r2**2) / denom,
        ((r1 + r2) - r) * ((r - r1) + r2) / denom,
        (r - (r2 - r1)) * ((r + r1) + r2) / denom,
    )


def _branch_2d_low(pair, e):
    r1, s = pair.r1, pair.s
    q_sin, q_ang = e[0], e[1]

    def branch(r):
        r = np.asarray(r, dtype=float)
        phi, sin_phi = _phi_low(r, r1)
        return (2.0 * r / (s * r1)) * (np.pi * r1 + q_sin(r) * sin_phi + q_ang(r) * phi)

    return branch


def _branch_2d_mid(pair, e):
    r1, r2, s = pair.r1, pair.r2, pair.s

    def branch(r):
        r = np.asarray(r, dtype=float)
        phi0, sin0 = _phi_low(r, r1)
        phi1, sin1 = _phi_outer(r, r1, r2)
        phi2, _ = _phi_far(r, r1, r2)
        k = kappa(r, r1, r2)
        return (2.0 * r / (s * r1**2)) * (
            e[2](r) * sin0
            + e[3](r) * phi0
            + e[4](r) * sin1
            + e[5](r) * phi1
            + e[6](r) * phi2
            + e[7](r) * k
        )

    return branch


def _branch_2d_high(pair, e_sin, e_ang, e_far, e_chord):
    r1, r2, s = pair.r1, pair.r2, pair.s

    def branch(r):
        r = np.asarray(r, dtype=float)
        phi1, sin1 = _phi_outer(r, r1, r2)
        phi2, _ = _phi_far(r, r1, r2)
        k = kappa(r, r1, r2)
        return (2.0 * r / (s * r1**2)) * (
            e_sin(r) * sin1 + e_ang(r) * phi1 + e_far(r) * phi2 + e_chord(r) * k
        )

    return branch


def _branch_annulus(pair):
    denom = pair.r2**2 - pair.r1**2

    def branch(r):
        return 2.0 * np.asarray(r, dtype=float) / denom

    return branch


def _branch_shell(pair):
    denom = pair.r2**3 - pair.r1**3

    def branch(r):
        return 3.0 * np.asarray(r, dtype=float) ** 2 / denom

    return branch


def _branch_poly(scenario, r1, r2, factory, lo, hi):
    """Polynomial branch, re-centered on its interval in exact arithmetic.

    The tabulated monomial coefficients cancel catastrophically at large
    radius ratios (individual terms dwarf the value by many orders). The
    polynomial is therefore rebuilt from exact rationals of the float radii
    and Taylor-shifted to the interval midpoint, where the coefficients are
    the size of the function itself; only the shifted coefficients are
    rounded. Dense-grid evaluation error drops to a few ulps of the value.
    """
    exact = factory(scenario, Fraction(r1), Fraction(r2))
    center = (Fraction(lo) + Fraction(hi)) / 2
    degree = len(exact) - 1
    shifted = []
    for k in range(degree + 1):
        acc = Fraction(0)
        for n in range(k, degree + 1):
            if exact[n]:
                acc += exact[n] * comb(n, k) * center ** (n - k)
        shifted.append(float(acc))
    coeffs = np.asarray(shifted)
    center_f = float(center)

    def branch(r):
        return np.polynomial.polynomial.polyval(
            np.asarray(r, dtype=float) - center_f, coeffs
        )

    return branch


def build_pdf(pair: RegionPair, scenario: Scenario) -> PiecewisePdf:
    """Construct the piecewise distance density for ``pair`` and ``scenario``."""
    regime = classify_regime(pair).unified3
    r1, r2 = pair.r1, pair.r2

    if pair.dim is Dim.TWO_D:
        if regime is UnifiedRegime.UNIFIED:
            e = coefficient_set(CoeffKind.UNIFIED_2D, scenario, r1, r2).entries
            pieces = [
                (0.0, r2 - r1, _branch_2d_low(pair, e)),
                (r2 - r1, 2.0 * r1, _branch_2d_mid(pair, e)),
                (2.0 * r1, r1 + r2, _branch_2d_high(pair, e[8], e[9], e[10], e[11])),
            ]
        else:
            e = coefficient_set(CoeffKind.SPARSE_2D, scenario, r1, r2).entries
            pieces = [
                (0.0, 2.0 * r1, _branch_2d_low(pair, e)),
                (2.0 * r1, r2 - r1, _branch_annulus(pair)),
                (r2 - r1, r1 + r2, _branch_2d_high(pair, e[2], e[3], e[4], e[5])),
            ]
    else:
        if regime is UnifiedRegime.UNIFIED:
            spans = [
                (0.0, r2 - r1, _entries_3d_low),
                (r2 - r1, 2.0 * r1, _entries_3d_mid),
                (2.0 * r1, r1 + r2, _entries_3d_high),
            ]
            pieces = [
                (lo, hi, _branch_poly(scenario, r1, r2, factory, lo, hi))
                for lo, hi, factory in spans
            ]
        else:
            pieces = [
                (0.0, 2.0 * r1,
                 _branch_poly(scenario, r1, r2, _entries_3d_low, 0.0, 2.0 * r1)),
                (2.0 * r1, r2 - r1, _branch_shell(pair)),
                (r2 - r1, r1 + r2,
                 _branch_poly(scenario, r1, r2, _entries_3d_high, r2 - r1, r1 + r2)),
            ]

    # At the regime boundary r2 = 3 r1 the middle interval collapses; drop it
    # so the breakpoint sequence stays strictly increasing.
    pieces = [(lo, hi, fn) for lo, hi, fn in pieces if hi > lo]
    breakpoints = tuple([pieces[0][0]] + [hi for _, hi, _ in pieces])
    branches = tuple(fn for _, _, fn in pieces)
    return PiecewisePdf(pair=pair, scenario=scenario, breakpoints=breakpoints, branches=branches)


def eval_pdf(pdf: PiecewisePdf, r):
    """Evaluate the density at ``r`` (scalar or array); 0 outside the support."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(np.isnan(r_arr)) or np.any(r_arr < 0):
        raise DomainError("r must be non-negative and not NaN")
    scalar = r_arr.ndim == 0
    r_flat = np.atleast_1d(r_arr)
    bps = np.asarray(pdf.breakpoints)
    out = np.zeros_like(r_flat)
    idx = np.searchsorted(bps, r_flat, side="right") - 1
    idx[r_flat == pdf.support] = len(pdf.branches) - 1
    inside = (r_flat >= 0.0) & (r_flat <= pdf.support)
    for b, branch in enumerate(pdf.branches):
        mask = inside & (idx == b)
        if np.any(mask):
            out[mask] = branch(r_flat[mask])
    if scalar:
        return float(out[0])
    return out.reshape(r_arr.shape)


@lru_cache(maxsize=None)
def _branch_cdf_table(pdf: PiecewisePdf):
    """Cumulative probability at each breakpoint, by per-branch quadrature."""
    lows = np.asarray(pdf.breakpoints[:-1])
    highs = np.asarray(pdf.breakpoints[1:])
    masses = integrate_many(lambda x: eval_pdf(pdf, x), lows, highs, 1e-10)
    return np.concatenate([[0.0], np.cumsum(masses)])


def eval_cdf(pdf: PiecewisePdf, r):
    """Cumulative distribution at ``r``; integrates the density to 1e-10.

    Scalar input takes the per-branch adaptive path; array input sorts the
    points once and integrates the gaps between them.
    """
    r_arr = np.asarray(r, dtype=float)
    if r_arr.ndim == 0:
        x = float(r_arr)
        if np.isnan(x):
            raise DomainError("r must not be NaN")
        if x <= 0.0:
            return 0.0
        table = _branch_cdf_table(pdf)
        if x >= pdf.support:
            return float(table[-1])
        bps = np.asarray(pdf.breakpoints)
        b = int(np.searchsorted(bps, x, side="right") - 1)
        partial = adaptive_quadrature(pdf.branches[b], bps[b], x, 1e-10)
        return float(max(table[b] + partial, 0.0))

    if np.any(np.isnan(r_arr)):
        raise DomainError("r must not be NaN")
    flat = r_arr.ravel()
    clipped = np.clip(flat, 0.0, pdf.support)
    order = np.argsort(clipped, kind="stable")
    edges = np.unique(np.concatenate([[0.0], clipped, np.asarray(pdf.breakpoints)]))
    widths = np.diff(edges)
    tol = np.maximum(1e-10 * widths / pdf.support, 1e-16)
    gaps = integrate_many(lambda x: eval_pdf(pdf, x), edges[:-1], edges[1:], tol)
    cdf_at_edges = np.concatenate([[0.0], np.cumsum(gaps)])
    out = np.empty_like(flat)
    out[order] = cdf_at_edges[np.searchsorted(edges, clipped[order])]
    return np.maximum(out, 0.0).reshape(r_arr.shape)


def moments(pdf: PiecewisePdf, n: int):
    """n-th raw moment of the distance, by per-branch adaptive quadrature."""
    n = int(n)
    if n < 0:
        raise DomainError("moment order must be non-negative")
    lows = np.asarray(pdf.breakpoints[:-1])
    highs = np.asarray(pdf.breakpoints[1:])
    # r^n * pdf is bounded by support^n, so this keeps ~1e-10 relative accuracy.
    tol = 1e-10 * max(1.0, pdf.support**n) / len(pdf.branches)
    vals = integrate_many(lambda x: eval_pdf(pdf, x) * x**n, lows, highs, tol)
    return float(np.sum(vals))


class CorollaryKind(enum.Enum):
    """Degenerate limits with their own closed forms."""

    DISK2D_S1_BOUNDARY = "disk-2d-s1-boundary"      # uniform disk node vs rim node
    DISK2D_S2_BOUNDARY = "disk-2d-s2-boundary"      # RWP disk node vs rim node
    SPHERE3D_S1_BOUNDARY = "sphere-3d-s1-boundary"  # uniform ball node vs surface node
    SPHERE3D_S2_BOUNDARY = "sphere-3d-s2-boundary"  # RWP ball node vs surface node
    FULL_DISK_2D = "full-disk-2d"                   # both nodes degenerate to one disk
    FULL_SPHERE_3D = "full-sphere-3d"


def corollary_pdf(kind: CorollaryKind, radius: float, r):
    """Evaluate the limit-case density ``kind`` at ``r``; 0 outside support."""
    radius = float(radius)
    if radius <= 0:
        raise DomainError("radius must be positive")
    r_arr = np.asarray(r, dtype=float)
    hi = radius if kind in (CorollaryKind.FULL_DISK_2D, CorollaryKind.FULL_SPHERE_3D) else 2.0 * radius
    inside = (r_arr >= 0.0) & (r_arr <= hi)
    x = np.where(inside, r_arr, 0.0)

    if kind is CorollaryKind.DISK2D_S1_BOUNDARY:
        val = (2.0 * x / (np.pi * radius**2)) * np.arccos(np.clip(x / (2.0 * radius), -1.0, 1.0))
    elif kind is CorollaryKind.DISK2D_S2_BOUNDARY:
        val = (
            4.0
            * x**2
            * (
                np.sqrt(np.clip(4.0 * radius**2 - x**2, 0.0, None))
                - x * np.arccos(np.clip(x / (2.0 * radius), -1.0, 1.0))
            )
            / (np.pi * radius**4)
        )
    elif kind is CorollaryKind.SPHERE3D_S1_BOUNDARY:
        val = 3.0 * x**2 * (2.0 * radius - x) / (4.0 * radius**4)
    elif kind is CorollaryKind.SPHERE3D_S2_BOUNDARY:
        val = (
            35.0
            * x**3
            * (2.0 * radius - x) ** 2
            * (25.0 * radius**2 - 13.0 * (x - radius) ** 2)
            / (864.0 * radius**8)
        )
    elif kind is CorollaryKind.FULL_DISK_2D:
        val = 2.0 * x / radius**2
    elif kind is CorollaryKind.FULL_SPHERE_3D:
        val = 3.0 * x**2 / radius**3
    else:  # pragma: no cover - exhaustive enum
        raise DomainError(f"unknown corollary kind {kind!r}")

    val = np.where(inside, val, 0.0)
    if r_arr.ndim == 0:
        return float(val)
    return val
