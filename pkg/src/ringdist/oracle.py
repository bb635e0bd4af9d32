"""Reference evaluation of the distance density by direct integration.

The density at ``r`` is the conditional density given the inner node's
center distance ``rho``, integrated against the inner radial law. For each
radius-ratio regime the ``(r, rho)`` plane splits into a fixed table of
``r``-intervals, each carrying an ordered list of ``rho``-segments with the
intersection case that applies there; :func:`build_plan` materializes that
table and :func:`numeric_pdf` integrates it segment by segment.

This module is the package's independent check on the closed forms in
:mod:`ringdist.closed_form`: it shares the conditional densities with
:mod:`ringdist.geometry` but never touches the piecewise coefficients.
Plans are immutable and evaluation is pure, so concurrent calls on a shared
plan are safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from ._quadrature import adaptive_quadrature
from .errors import DomainError, QuadratureError
from .geometry import (
    IntersectionCase,
    OracleRegime,
    RegionPair,
    Scenario,
    classify_regime,
    conditional_pdf,
    inner_radial_pdf,
)

__all__ = [
    "RhoSegment",
    "RInterval",
    "IntervalPlan",
    "build_plan",
    "numeric_pdf",
    "adaptive_quadrature",
]

_G0 = IntersectionCase.G0_OUTSIDE
_G1 = IntersectionCase.G1_INNER_ONLY
_G2 = IntersectionCase.G2_BOTH_BOUNDARIES
_G3 = IntersectionCase.G3_CONTAINED
_G4 = IntersectionCase.G4_OUTER_ONLY


@dataclass(frozen=True)
class RhoSegment:
    """One rho-segment of an r-interval: limits as functions of r, plus its case."""

    rho_lo: Callable[[float], float]
    rho_hi: Callable[[float], float]
    case: IntersectionCase


@dataclass(frozen=True)
class RInterval:
    """An r-interval whose rho-segments tile [0, r1]."""

    r_lo: float
    r_hi: float
    segments: tuple


@dataclass(frozen=True, eq=False)
class IntervalPlan:
    """The full interval decomposition for one region pair."""

    pair: RegionPair
    regime: OracleRegime
    r_intervals: tuple


def _interval(r_lo, r_hi, *segments):
    return RInterval(r_lo=float(r_lo), r_hi=float(r_hi), segments=tuple(segments))


@lru_cache(maxsize=None)
def build_plan(pair: RegionPair) -> IntervalPlan:
    """Build the regime's interval table for ``pair``.

    Intervals that collapse at regime boundaries (e.g. the second interval
    of the narrow regime when r2 = 2 r1) are kept as explicit zero-width
    rows so plans stay table-shaped; they contribute nothing.
    """
    r1, r2 = pair.r1, pair.r2
    regime = classify_regime(pair).oracle3way
    half = 0.5 * (r1 + r2)
    zero = lambda r: 0.0
    top = lambda r: r1

    if regime is OracleRegime.R2_LE_2R1:
        rows = (
            _interval(
                0.0, r2 - r1,
                RhoSegment(zero, lambda r: r1 - r, _G0),
                RhoSegment(lambda r: r1 - r, top, _G1),
            ),
            _interval(
                r2 - r1, r1,
                RhoSegment(zero, lambda r: r1 - r, _G0),
                RhoSegment(lambda r: r1 - r, lambda r: r2 - r, _G1),
                RhoSegment(lambda r: r2 - r, top, _G2),
            ),
            _interval(
                r1, half,
                RhoSegment(zero, lambda r: r - r1, _G3),
                RhoSegment(lambda r: r - r1, lambda r: r2 - r, _G1),
                RhoSegment(lambda r: r2 - r, top, _G2),
            ),
            _interval(
                half, r2,
                RhoSegment(zero, lambda r: r2 - r, _G3),
                RhoSegment(lambda r: r2 - r, lambda r: r - r1, _G4),
                RhoSegment(lambda r: r - r1, top, _G2),
            ),
            _interval(
                r2, 2.0 * r1,
                RhoSegment(zero, lambda r: r - r2, _G0),
                RhoSegment(lambda r: r - r2, lambda r: r - r1, _G4),
                RhoSegment(lambda r: r - r1, top, _G2),
            ),
            _interval(
                2.0 * r1, r1 + r2,
                RhoSegment(zero, lambda r: r - r2, _G0),
                RhoSegment(lambda r: r - r2, top, _G4),
            ),
        )
    elif regime is OracleRegime.R2_BETWEEN_2R1_3R1:
        rows = (
            _interval(
                0.0, r1,
                RhoSegment(zero, lambda r: r1 - r, _G0),
                RhoSegment(lambda r: r1 - r, top, _G1),
            ),
            _interval(
                r1, r2 - r1,
                RhoSegment(zero, lambda r: r - r1, _G3),
                RhoSegment(lambda r: r - r1, top, _G1),
            ),
            _interval(
                r2 - r1, half,
                RhoSegment(zero, lambda r: r - r1, _G3),
                RhoSegment(lambda r: r - r1, lambda r: r2 - r, _G1),
                RhoSegment(lambda r: r2 - r, top, _G2),
            ),
            _interval(
                half, 2.0 * r1,
                RhoSegment(zero, lambda r: r2 - r, _G3),
                RhoSegment(lambda r: r2 - r, lambda r: r - r1, _G4),
                RhoSegment(lambda r: r - r1, top, _G2),
            ),
            _interval(
                2.0 * r1, r2,
                RhoSegment(zero, lambda r: r2 - r, _G3),
                RhoSegment(lambda r: r2 - r, top, _G4),
            ),
            _interval(
                r2, r1 + r2,
                RhoSegment(zero, lambda r: r - r2, _G0),
                RhoSegment(lambda r: r - r2, top, _G4),
            ),
        )
    else:
        rows = (
            _interval(
                0.0, r1,
                RhoSegment(zero, lambda r: r1 - r, _G0),
                RhoSegment(lambda r: r1 - r, top, _G1),
            ),
            _interval(
                r1, 2.0 * r1,
                RhoSegment(zero, lambda r: r - r1, _G3),
                RhoSegment(lambda r: r - r1, top, _G1),
            ),
            _interval(2.0 * r1, r2 - r1, RhoSegment(zero, top, _G3)),
            _interval(
                r2 - r1, r2,
                RhoSegment(zero, lambda r: r2 - r, _G3),
                RhoSegment(lambda r: r2 - r, top, _G4),
            ),
            _interval(
                r2, r1 + r2,
                RhoSegment(zero, lambda r: r - r2, _G0),
                RhoSegment(lambda r: r - r2, top, _G4),
            ),
        )
    return IntervalPlan(pair=pair, regime=regime, r_intervals=rows)


def _locate(plan: IntervalPlan, r: float):
    for row in plan.r_intervals:
        if (row.r_lo < r <= row.r_hi) or (r == 0.0 == row.r_lo):
            return row
    return None


def numeric_pdf(pair: RegionPair, scenario: Scenario, r: float, tol: float = 1e-11) -> float:
    """Distance density at ``r`` by adaptive quadrature over the plan's segments.

    ``tol`` is the absolute tolerance granted to each rho-segment. Returns 0
    outside [0, r1 + r2]. Raises :class:`~ringdist.errors.QuadratureError`
    (tagged with the offending segment) if any segment fails to converge.
    """
    r = float(r)
    if np.isnan(r) or r < 0.0:
        raise DomainError("r must be non-negative")
    if r == 0.0 or r > pair.support:
        return 0.0
    plan = build_plan(pair)
    row = _locate(plan, r)
    if row is None:  # pragma: no cover - tiling is gapless
        return 0.0
    total = 0.0
    for seg in row.segments:
        if seg.case is _G0:
            continue
        lo = min(max(seg.rho_lo(r), 0.0), pair.r1)
        hi = min(max(seg.rho_hi(r), 0.0), pair.r1)
        if hi <= lo:
            continue

        def integrand(rho, _case=seg.case):
            return conditional_pdf(pair, _case, rho, r) * inner_radial_pdf(
                pair, scenario, rho
            )

        try:
            total += adaptive_quadrature(integrand, lo, hi, tol)
        except QuadratureError as exc:
            raise QuadratureError(
                f"segment rho in [{lo}, {hi}] ({seg.case.name}) at r={r}: {exc}"
            ) from exc
    return total
