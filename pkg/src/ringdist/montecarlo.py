"""Seeded Monte Carlo sampling of internodal distances, and fit statistics.

By rotational symmetry the distance depends only on the two center
distances and the included angle, so each realization consumes exactly
three uniforms: one inverted through the inner radial quantile, one through
the annulus/shell radial quantile, and one for the angle (2-D) or its
cosine (3-D). No rejection is involved.

Determinism contract: sample ``i`` of a run is a fixed function of
``(pair, scenario, seed, i)``. Realizations are generated in fixed blocks
of :data:`BLOCK_SIZE`, each block drawing from its own Philox counter-based
stream keyed by ``(seed, block_index)``. Blocks may be filled by any number
of worker threads in any order and the output is byte-identical, run to
run and thread count to thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._parallel import worker_count
from .errors import ConfigurationError, DataError
from .geometry import Dim, RegionPair, Scenario, inner_radial_ppf

__all__ = [
    "BLOCK_SIZE",
    "GENERATOR_NAME",
    "SampleConfig",
    "EmpiricalDistribution",
    "sample_distance",
    "sample_distances",
    "empirical_pdf",
    "ks_statistic",
]

#: Fixed block length of the index-partitioned sampler. Changing it changes
#: every stream, so it is part of the generator identity below.
BLOCK_SIZE = 1 << 16

#: Generator identity recorded in output metadata.
GENERATOR_NAME = f"philox4x64 keyed (seed, block), block={BLOCK_SIZE}, 3 uniforms/draw"


@dataclass(frozen=True)
class SampleConfig:
    """Realization count, seed, and histogram bin count for one run."""

    seed: int
    n: int
    bins: int = 256

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError("seed must fit in an unsigned 64-bit integer")
        if int(self.n) < 1:
            raise ConfigurationError("need at least one realization")
        if int(self.bins) < 8:
            raise ConfigurationError("need at least 8 histogram bins")


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """Equal-width histogram normalized to unit mass."""

    bin_edges: np.ndarray
    densities: np.ndarray
    n: int


def _distances_from_uniforms(pair: RegionPair, scenario: Scenario, u: np.ndarray) -> np.ndarray:
    """Map an (m, 3) block of uniforms to m internodal distances."""
    rho1 = inner_radial_ppf(pair, scenario, u[:, 0])
    if pair.dim is Dim.TWO_D:
        rho2 = np.sqrt(pair.r1**2 + u[:, 1] * (pair.r2**2 - pair.r1**2))
        cos_t = np.cos(2.0 * np.pi * u[:, 2])
    else:
        rho2 = np.cbrt(pair.r1**3 + u[:, 1] * (pair.r2**3 - pair.r1**3))
        cos_t = 2.0 * u[:, 2] - 1.0
    sq = rho1**2 + rho2**2 - 2.0 * rho1 * rho2 * cos_t
    return np.sqrt(np.clip(sq, 0.0, None))


def sample_distance(pair: RegionPair, scenario: Scenario, rng: np.random.Generator) -> float:
    """Draw one internodal distance from ``rng`` (consumes three uniforms)."""
    u = rng.random(3).reshape(1, 3)
    return float(_distances_from_uniforms(pair, scenario, u)[0])


def _block_rng(seed: int, block: int) -> np.random.Generator:
    key = np.array([seed, block], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_distances(
    pair: RegionPair,
    scenario: Scenario,
    n: int,
    seed: int,
    threads: int | None = None,
) -> np.ndarray:
    """Draw ``n`` distances; deterministic in ``(pair, scenario, seed, n)``.

    ``threads`` defaults to the :func:`~ringdist._parallel.worker_count`
    policy; the value never affects the returned samples.
    """
    cfg = SampleConfig(seed=seed, n=n)  # validates
    out = np.empty(int(n), dtype=float)
    blocks = range((int(n) + BLOCK_SIZE - 1) // BLOCK_SIZE)

    def fill(block: int) -> None:
        lo = block * BLOCK_SIZE
        hi = min(int(n), lo + BLOCK_SIZE)
        u = _block_rng(cfg.seed, block).random((hi - lo) * 3).reshape(-1, 3)
        out[lo:hi] = _distances_from_uniforms(pair, scenario, u)

    workers = worker_count() if threads is None else max(1, int(threads))
    if workers == 1 or len(blocks) == 1:
        for block in blocks:
            fill(block)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, blocks))
    return out


def empirical_pdf(samples, cfg: SampleConfig, support: float) -> EmpiricalDistribution:
    """Bin ``samples`` into ``cfg.bins`` equal-width density bins on [0, support]."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise DataError("no samples")
    if np.any((samples < 0.0) | (samples > float(support))):
        raise DataError("sample outside [0, support]")
    counts, edges = np.histogram(samples, bins=int(cfg.bins), range=(0.0, float(support)))
    width = edges[1] - edges[0]
    densities = counts / (samples.size * width)
    return EmpiricalDistribution(bin_edges=edges, densities=densities, n=int(samples.size))


def ks_statistic(samples, cdf) -> float:
    """Kolmogorov-Smirnov statistic of sorted ``samples`` against ``cdf``.

    ``cdf`` must be a vectorized cumulative evaluator on the sample support.
    """
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise DataError("no samples")
    if np.any(np.diff(x) < 0):
        raise DataError("samples must be sorted ascending")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, x.size + 1, dtype=float)
    upper = np.abs(i / x.size - f)
    lower = np.abs((i - 1.0) / x.size - f)
    return float(np.max(np.maximum(upper, lower)))
