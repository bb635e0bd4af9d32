"""Concentric-region geometry and the conditional distance densities.

The setting: node 1 sits inside a disk (2-D) or ball (3-D) of radius ``r1``
at distance ``rho`` from the common center; node 2 is uniform over the
annulus (2-D) or spherical shell (3-D) between ``r1`` and ``r2``. Given
``rho``, the density of the internodal distance ``r`` is proportional to the
arc length (2-D) or spherical-cap area (3-D) of the radius-``r`` locus
around node 1 that falls inside the outer region. Which expression applies
depends on how that locus intersects the two boundary circles/spheres; the
five possibilities are enumerated by :class:`IntersectionCase`.

All operations are pure functions and may be called concurrently. Lengths
are in meters, angles in radians, densities per meter.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ConsistencyError, DomainError

__all__ = [
    "Dim",
    "Scenario",
    "UnifiedRegime",
    "OracleRegime",
    "Regime",
    "IntersectionCase",
    "RegionPair",
    "classify_regime",
    "inner_radial_pdf",
    "inner_radial_cdf",
    "inner_radial_ppf",
    "theta1",
    "theta2",
    "kappa",
    "intersection_case",
    "conditional_pdf",
]


class Dim(enum.IntEnum):
    """Spatial dimension of the region pair."""

    TWO_D = 2
    THREE_D = 3


class Scenario(enum.Enum):
    """Placement law of the inner node.

    ``S1``: static node, uniform over the inner disk/ball.
    ``S2``: mobile node following the random-waypoint stationary spatial
    distribution with zero pause time (trajectory dynamics ignored).
    """

    S1 = "s1"
    S2 = "s2"


class UnifiedRegime(enum.Enum):
    """Two-way regime split used by the closed forms (boundary r2 = 3 r1 inclusive)."""

    UNIFIED = "r2 <= 3 r1"
    SPARSE = "r2 > 3 r1"


class OracleRegime(enum.Enum):
    """Three-way regime split used by the reference integrator (r2 = 2 r1 inclusive)."""

    R2_LE_2R1 = "r2 <= 2 r1"
    R2_BETWEEN_2R1_3R1 = "2 r1 < r2 <= 3 r1"
    R2_GT_3R1 = "r2 > 3 r1"


@dataclass(frozen=True)
class Regime:
    unified3: UnifiedRegime
    oracle3way: OracleRegime


class IntersectionCase(enum.Enum):
    """How the radius-``r`` locus around the inner node meets the outer region."""

    G0_OUTSIDE = 0          # entirely inside the hole or beyond the shell
    G1_INNER_ONLY = 1       # crosses the inner boundary only
    G2_BOTH_BOUNDARIES = 2  # crosses both boundaries
    G3_CONTAINED = 3        # entirely inside the annulus/shell
    G4_OUTER_ONLY = 4       # crosses the outer boundary only


@dataclass(frozen=True)
class RegionPair:
    """An inner disk/ball of radius ``r1`` with the annulus/shell out to ``r2``.

    Radii must satisfy 0 < r1 < r2 strictly; the degenerate limits
    (r1 = r2, r1 = 0) are served by the dedicated corollary evaluators in
    :mod:`ringdist.closed_form`.
    """

    dim: Dim
    r1: float
    r2: float

    def __post_init__(self):
        object.__setattr__(self, "dim", Dim(self.dim))
        object.__setattr__(self, "r1", float(self.r1))
        object.__setattr__(self, "r2", float(self.r2))
        if not (np.isfinite(self.r1) and np.isfinite(self.r2)):
            raise ConfigurationError("radii must be finite")
        if not 0.0 < self.r1 < self.r2:
            raise ConfigurationError(
                f"radii must satisfy 0 < r1 < r2, got r1={self.r1}, r2={self.r2}"
            )

    @property
    def s(self) -> float:
        """Annulus area (2-D only)."""
        if self.dim is not Dim.TWO_D:
            raise ConfigurationError("area is defined for 2-D region pairs only")
        return np.pi * (self.r2**2 - self.r1**2)

    @property
    def v(self) -> float:
        """Shell volume (3-D only)."""
        if self.dim is not Dim.THREE_D:
            raise ConfigurationError("volume is defined for 3-D region pairs only")
        return (4.0 / 3.0) * np.pi * (self.r2**3 - self.r1**3)

    @property
    def support(self) -> float:
        """Largest attainable internodal distance, r1 + r2."""
        return self.r1 + self.r2


def classify_regime(pair: RegionPair) -> Regime:
    """Classify ``pair`` into the two-way and three-way radius-ratio regimes."""
    if pair.r2 <= 2.0 * pair.r1:
        three = OracleRegime.R2_LE_2R1
    elif pair.r2 <= 3.0 * pair.r1:
        three = OracleRegime.R2_BETWEEN_2R1_3R1
    else:
        three = OracleRegime.R2_GT_3R1
    two = (
        UnifiedRegime.SPARSE
        if three is OracleRegime.R2_GT_3R1
        else UnifiedRegime.UNIFIED
    )
    return Regime(unified3=two, oracle3way=three)


def _give_back(value, template):
    """Return a float for scalar input, the array otherwise."""
    if np.ndim(template) == 0:
        return float(value)
    return value


def inner_radial_pdf(pair: RegionPair, scenario: Scenario, rho):
    """Density of the inner node's center distance; 0 outside [0, r1]."""
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(rho_arr < 0):
        raise DomainError("rho must be non-negative")
    r1 = pair.r1
    t = rho_arr / r1
    if pair.dim is Dim.TWO_D:
        if scenario is Scenario.S1:
            val = 2.0 * rho_arr / r1**2
        else:
            val = (4.0 * rho_arr / r1**2) * (1.0 - t**2)
    else:
        if scenario is Scenario.S1:
            val = 3.0 * rho_arr**2 / r1**3
        else:
            val = (35.0 / 72.0) * (
                21.0 * rho_arr**2 / r1**3
                - 34.0 * rho_arr**4 / r1**5
                + 13.0 * rho_arr**6 / r1**7
            )
    val = np.where(rho_arr <= r1, val, 0.0)
    return _give_back(val, rho)


def inner_radial_cdf(pair: RegionPair, scenario: Scenario, rho):
    """Cumulative distribution of the inner node's center distance."""
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(rho_arr < 0):
        raise DomainError("rho must be non-negative")
    t = np.clip(rho_arr / pair.r1, 0.0, 1.0)
    if pair.dim is Dim.TWO_D:
        if scenario is Scenario.S1:
            val = t**2
        else:
            val = 2.0 * t**2 - t**4
    else:
        if scenario is Scenario.S1:
            val = t**3
        else:
            val = (35.0 / 72.0) * (7.0 * t**3 - (34.0 / 5.0) * t**5 + (13.0 / 7.0) * t**7)
    # Pin the boundary: the degree-7 polynomial rounds to 1 - O(eps) at t = 1,
    # which the sqrt-sensitive inverse would amplify to ~1e-8 in rho.
    val = np.where(t >= 1.0, 1.0, np.clip(val, 0.0, 1.0))
    return _give_back(val, rho)


def inner_radial_ppf(pair: RegionPair, scenario: Scenario, u):
    """Quantile of the inner radial law: the rho with CDF(rho) = u.

    Closed-form inversions everywhere except the 3-D random-waypoint law,
    whose degree-7 CDF is inverted by bisection to |CDF(rho) - u| <= 1e-12
    (chosen over rejection sampling for deterministic reproducibility).
    """
    u_arr = np.asarray(u, dtype=float)
    if np.any((u_arr < 0) | (u_arr > 1)):
        raise DomainError("u must lie in [0, 1]")
    r1 = pair.r1
    if pair.dim is Dim.TWO_D:
        if scenario is Scenario.S1:
            val = r1 * np.sqrt(u_arr)
        else:
            val = r1 * np.sqrt(1.0 - np.sqrt(1.0 - u_arr))
    elif scenario is Scenario.S1:
        val = r1 * np.cbrt(u_arr)
    else:
        # 64 bisection steps shrink the bracket to ~r1 * 5e-20, far below
        # the 1e-12 CDF tolerance given the bounded density. The <= keeps
        # the inverse on the right edge of rounding plateaus, so u = 1 maps
        # to r1 exactly even though the density vanishes there.
        lo = np.zeros_like(u_arr)
        hi = np.full_like(u_arr, r1)
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            below = inner_radial_cdf(pair, scenario, mid) <= u_arr
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        val = 0.5 * (lo + hi)
    return _give_back(val, u)


def _boundary_angle(rho, r, radius, name):
    """arccos((rho^2 + r^2 - radius^2) / (2 r rho)) with the argument clamped.

    Evaluated through atan2 with the complements 1 -/+ cos formed in factored
    form, so the angle hits 0 and pi exactly at the stored tangency radii
    |radius - rho| and radius + rho instead of wobbling by sqrt(eps) there.
    Out-of-range arguments clamp, as the plain arccos contract requires.
    """
    rho_arr = np.asarray(rho, dtype=float)
    r_arr = np.asarray(r, dtype=float)
    if np.any(rho_arr <= 0) or np.any(r_arr <= 0):
        raise DomainError(f"{name} requires rho > 0 and r > 0")
    denom = 2.0 * r_arr * rho_arr
    cos_val = np.clip((rho_arr**2 + r_arr**2 - radius**2) / denom, -1.0, 1.0)
    one_minus = ((radius + rho_arr) - r_arr) * ((r_arr + radius) - rho_arr) / denom
    one_plus = (r_arr - (radius - rho_arr)) * ((r_arr + rho_arr) + radius) / denom
    sin_val = np.sqrt(np.clip(one_minus * one_plus, 0.0, None))
    val = np.arctan2(sin_val, cos_val)
    return _give_back(val, rho if np.ndim(rho) else r)


def theta1(rho, r, r1: float):
    """Half-angle of the radius-``r`` locus cut off by the inner boundary."""
    return _boundary_angle(rho, r, r1, "theta1")


def theta2(rho, r, r2: float):
    """Half-angle of the radius-``r`` locus cut off by the outer boundary."""
    return _boundary_angle(rho, r, r2, "theta2")


def kappa(r, r1: float, r2: float):
    """sqrt((r^2 - (r2-r1)^2) ((r1+r2)^2 - r^2)), radicand clamped at 0.

    The squared differences are evaluated in factored form so the result
    vanishes exactly at the stored endpoints and keeps full relative
    precision next to them.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < r2 - r1) or np.any(r_arr > r1 + r2):
        raise DomainError(f"kappa is defined on [{r2 - r1}, {r1 + r2}]")
    radicand = (
        (r_arr - (r2 - r1))
        * (r_arr + (r2 - r1))
        * ((r1 + r2) - r_arr)
        * ((r1 + r2) + r_arr)
    )
    return _give_back(np.sqrt(np.clip(radicand, 0.0, None)), r)


def intersection_case(pair: RegionPair, rho: float, r: float) -> IntersectionCase:
    """Classify how the radius-``r`` locus around the inner node meets the region.

    Boundary equalities are assigned to the lower-numbered case; the
    conditional densities agree across every boundary (for rho > 0), so the
    tie-break is value-neutral.
    """
    rho = float(rho)
    r = float(r)
    if not 0.0 <= rho <= pair.r1:
        raise DomainError(f"rho must lie in [0, r1], got {rho}")
    if r < 0.0:
        raise DomainError(f"r must be non-negative, got {r}")
    r1, r2 = pair.r1, pair.r2
    if r <= r1 - rho or r >= r2 + rho:
        return IntersectionCase.G0_OUTSIDE
    crosses_inner = r <= r1 + rho  # already > r1 - rho here
    crosses_outer = r > r2 - rho  # already < r2 + rho here
    if crosses_inner and crosses_outer:
        return IntersectionCase.G2_BOTH_BOUNDARIES
    if crosses_inner:
        return IntersectionCase.G1_INNER_ONLY
    if crosses_outer:
        return IntersectionCase.G4_OUTER_ONLY
    return IntersectionCase.G3_CONTAINED


def conditional_pdf(pair: RegionPair, case: IntersectionCase, rho, r):
    """Density of the distance ``r`` given the inner node at radius ``rho``.

    The caller is responsible for ``case`` matching
    ``intersection_case(pair, rho, r)``; the only runtime cross-check is the
    angle ordering required by the both-boundaries case.
    """
    rho_arr = np.asarray(rho, dtype=float)
    r_arr = np.asarray(r, dtype=float)
    template = rho if np.ndim(rho) else r
    shape = np.broadcast_shapes(rho_arr.shape, r_arr.shape)

    if case is IntersectionCase.G0_OUTSIDE:
        return _give_back(np.zeros(shape), template)

    if pair.dim is Dim.TWO_D:
        norm = 2.0 * r_arr / pair.s
        if case is IntersectionCase.G3_CONTAINED:
            return _give_back(np.broadcast_to(np.pi * norm, shape).copy(), template)
        if case is IntersectionCase.G1_INNER_ONLY:
            return _give_back(norm * (np.pi - theta1(rho_arr, r_arr, pair.r1)), template)
        if case is IntersectionCase.G4_OUTER_ONLY:
            return _give_back(norm * theta2(rho_arr, r_arr, pair.r2), template)
        t1 = theta1(rho_arr, r_arr, pair.r1)
        t2 = theta2(rho_arr, r_arr, pair.r2)
        if np.any(t2 < t1 - 1e-12):
            raise ConsistencyError("both-boundaries case with theta2 < theta1")
        return _give_back(norm * (t2 - t1), template)

    norm = 2.0 * np.pi * r_arr**2 / pair.v
    if case is IntersectionCase.G3_CONTAINED:
        return _give_back(np.broadcast_to(2.0 * norm, shape).copy(), template)
    if case is IntersectionCase.G1_INNER_ONLY:
        return _give_back(norm * (1.0 + np.cos(theta1(rho_arr, r_arr, pair.r1))), template)
    if case is IntersectionCase.G4_OUTER_ONLY:
        return _give_back(norm * (1.0 - np.cos(theta2(rho_arr, r_arr, pair.r2))), template)
    c1 = np.cos(theta1(rho_arr, r_arr, pair.r1))
    c2 = np.cos(theta2(rho_arr, r_arr, pair.r2))
    if np.any(c1 < c2 - 1e-12):
        raise ConsistencyError("both-boundaries case with cos(theta1) < cos(theta2)")
    return _give_back(norm * (c1 - c2), template)
