"""Beta approximation of the distance density and its KL divergence.

The exact density lives on [0, r1 + r2]; mapping x = r / (r1 + r2) puts it
on the unit interval, where a beta density is fitted by matching the first
two moments. The divergence integral runs in nats (natural log) and is
restricted to the region where the target density exceeds a small floor.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import lgamma, log

import numpy as np

from ._parallel import worker_count
from ._quadrature import integrate_many
from .closed_form import PiecewisePdf, build_pdf, eval_pdf, moments
from .errors import ConfigurationError, DomainError, FitError, InfiniteDivergenceError
from .geometry import Dim, RegionPair, Scenario

__all__ = [
    "BetaParams",
    "KLCurve",
    "KL_LOG_BASE",
    "fit_beta",
    "beta_pdf",
    "kl_divergence",
    "kl_sweep",
    "threshold_crossing",
]

#: KL divergences are reported in nats.
KL_LOG_BASE = "e"

_DENSITY_FLOOR = 1e-15


@dataclass(frozen=True)
class BetaParams:
    """Fitted beta parameters with the support scale mapping r to [0, 1]."""

    alpha: float
    beta: float
    scale: float

    def __post_init__(self):
        ok = (
            np.isfinite(self.alpha)
            and np.isfinite(self.beta)
            and self.alpha > 0
            and self.beta > 0
            and self.scale > 0
        )
        if not ok:
            raise ConfigurationError(
                f"beta parameters must be finite and positive, got {self}"
            )

    @property
    def mean(self) -> float:
        """Mean of the fitted beta on the normalized support."""
        return self.alpha / (self.alpha + self.beta)

    @property
    def variance(self) -> float:
        """Variance of the fitted beta on the normalized support."""
        ab = self.alpha + self.beta
        return self.alpha * self.beta / (ab**2 * (ab + 1.0))


@dataclass(frozen=True)
class KLCurve:
    """KL divergence (nats) sampled over increasing radius ratios r2/r1."""

    ratios: tuple
    kl: tuple

    def __post_init__(self):
        ratios = tuple(float(x) for x in self.ratios)
        kl = tuple(float(x) for x in self.kl)
        object.__setattr__(self, "ratios", ratios)
        object.__setattr__(self, "kl", kl)
        if len(ratios) != len(kl):
            raise ConfigurationError("ratios and kl must have equal length")
        if any(b <= a for a, b in zip(ratios, ratios[1:])):
            raise ConfigurationError("ratios must be strictly increasing")
        if any(v < -1e-12 for v in kl):
            raise ConfigurationError("KL entries must be >= -1e-12")


def fit_beta(pdf: PiecewisePdf) -> BetaParams:
    """Fit a beta density to ``pdf`` by matching its first two moments."""
    scale = pdf.support
    m = moments(pdf, 1) / scale
    v = moments(pdf, 2) / scale**2 - m**2
    if not 0.0 < v < m * (1.0 - m):
        raise FitError(
            f"moment matching infeasible: normalized mean {m}, variance {v}"
        )
    common = m * (1.0 - m) / v - 1.0
    return BetaParams(alpha=m * common, beta=(1.0 - m) * common, scale=scale)


def _log_beta_pdf(p: BetaParams, x: np.ndarray) -> np.ndarray:
    """log of the scaled beta density for x strictly inside (0, 1)."""
    ln_b = lgamma(p.alpha) + lgamma(p.beta) - lgamma(p.alpha + p.beta)
    return (
        (p.alpha - 1.0) * np.log(x)
        + (p.beta - 1.0) * np.log1p(-x)
        - ln_b
        - log(p.scale)
    )


def beta_pdf(p: BetaParams, r):
    """Scaled beta density at ``r``; 0 outside [0, scale].

    Evaluated in the log domain for stability at large shape parameters.
    """
    r_arr = np.asarray(r, dtype=float)
    x = np.atleast_1d(r_arr) / p.scale
    out = np.zeros_like(x)
    interior = (x > 0.0) & (x < 1.0)
    if np.any(interior):
        out[interior] = np.exp(_log_beta_pdf(p, x[interior]))
    # Support endpoints have a finite nonzero limit only for unit exponents.
    edge = 1.0 / (p.scale * np.exp(lgamma(p.alpha) + lgamma(p.beta) - lgamma(p.alpha + p.beta)))
    if p.alpha == 1.0:
        out[x == 0.0] = edge
    if p.beta == 1.0:
        out[x == 1.0] = edge
    if r_arr.ndim == 0:
        return float(out[0])
    return out.reshape(r_arr.shape)


def kl_divergence(pdf: PiecewisePdf, p: BetaParams) -> float:
    """KL divergence (nats) from ``pdf`` to its beta approximation.

    Integrates f ln(f/g) over the region where f exceeds a 1e-15 floor;
    tiny negative results within -1e-12 are clamped to 0.
    """
    if abs(p.scale - pdf.support) > 1e-12 * max(1.0, pdf.support):
        raise DomainError("approximation support does not match the density support")

    def integrand(r):
        f = eval_pdf(pdf, r)
        mask = f > _DENSITY_FLOOR
        out = np.zeros_like(f)
        if np.any(mask):
            x = r[mask] / p.scale
            if np.any((x <= 0.0) | (x >= 1.0)):
                raise InfiniteDivergenceError(
                    "beta approximation vanishes where the target density does not"
                )
            out[mask] = f[mask] * (np.log(f[mask]) - _log_beta_pdf(p, x))
        return out

    lows = np.asarray(pdf.breakpoints[:-1])
    highs = np.asarray(pdf.breakpoints[1:])
    val = float(np.sum(integrate_many(integrand, lows, highs, 1e-10 / len(pdf.branches))))
    if -1e-12 <= val < 0.0:
        return 0.0
    return val


def kl_sweep(dim: Dim, scenario: Scenario, ratios) -> KLCurve:
    """KL divergence of the beta fit across radius ratios (r1 fixed at 1).

    The divergence is scale-invariant in r1, so sweeping the ratio alone
    covers every geometry.
    """
    ratios = [float(x) for x in ratios]
    if any(x <= 1.0 for x in ratios):
        raise DomainError("radius ratios must exceed 1")

    def one(ratio: float) -> float:
        pdf = build_pdf(RegionPair(dim=dim, r1=1.0, r2=ratio), scenario)
        return kl_divergence(pdf, fit_beta(pdf))

    workers = min(worker_count(), len(ratios)) or 1
    if workers == 1:
        kls = [one(x) for x in ratios]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            kls = list(pool.map(one, ratios))
    return KLCurve(ratios=tuple(ratios), kl=tuple(kls))


def threshold_crossing(curve: KLCurve, level: float):
    """Ratio at which the curve first rises through ``level``, or None.

    Located by bracketing adjacent sweep entries and interpolating linearly
    between them. A curve that never brackets the level yields None.
    """
    level = float(level)
    if level <= 0:
        raise DomainError("threshold level must be positive")
    for i in range(len(curve.ratios) - 1):
        lo, hi = curve.kl[i], curve.kl[i + 1]
        if lo < level <= hi:
            t = (level - lo) / (hi - lo)
            return curve.ratios[i] + t * (curve.ratios[i + 1] - curve.ratios[i])
    return None
