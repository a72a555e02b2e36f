"""Monte Carlo error estimation: binning analysis and bin-level jackknife.

Metropolis series are autocorrelated, so the naive standard error
underestimates.  The binning scheme averages pairs recursively (a log2 bin
hierarchy); once the bin size exceeds the autocorrelation time the per-level
error estimate plateaus.  The reported stderr is the estimate at the largest
level that still has at least MIN_BINS bins, pooled over all chains.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

MIN_BINS = 32


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo mean with a binning standard error.

    autocorr_bins holds the stderr estimate at every binning level (level i
    has bin size 2^i); it should rise toward a plateau, and the reported
    stderr is read off at the largest usable level.  `bins` keeps the pooled
    bin means at that level so derived quantities can propagate errors by
    jackknife over the same bins."""

    mean: float
    stderr: float
    n_samples: int
    autocorr_bins: np.ndarray
    bins: np.ndarray = field(default=None, repr=False)


def _bin_means(series: np.ndarray, size: int) -> np.ndarray:
    n = (series.shape[0] // size) * size
    return series[:n].reshape(-1, size).mean(axis=1)


def binning_estimate(chains: np.ndarray) -> McEstimate:
    """Estimate mean and stderr from one or more equal-length sample series.

    chains: array of shape (n_chains, n_samples) or (n_samples,).  Chains are
    treated as independent; bins never straddle a chain boundary."""
    chains = np.atleast_2d(np.asarray(chains, dtype=np.float64))
    n_chains, n = chains.shape
    if n == 0:
        raise ConfigurationError("empty sample series")
    mean = float(chains.mean())
    total = n_chains * n

    levels = []
    pooled_at_level = []
    size = 1
    while (n // size) * n_chains >= 2:
        pooled = np.concatenate([_bin_means(c, size) for c in chains])
        stderr = float(np.sqrt(np.var(pooled, ddof=1) / pooled.shape[0]))
        levels.append(stderr)
        pooled_at_level.append(pooled)
        size *= 2

    # Largest level with at least MIN_BINS pooled bins.
    chosen = 0
    for i, pooled in enumerate(pooled_at_level):
        if pooled.shape[0] >= MIN_BINS:
            chosen = i
    return McEstimate(
        mean=mean,
        stderr=levels[chosen] if levels else 0.0,
        n_samples=total,
        autocorr_bins=np.array(levels),
        bins=pooled_at_level[chosen] if pooled_at_level else chains.ravel(),
    )


def jackknife(bins: np.ndarray, statistic) -> tuple[float, float]:
    """Delete-one jackknife of `statistic` over bins.

    bins: shape (n_bins,) or (n_bins, k) for statistics of k jointly binned
    series (columns stay paired, preserving their covariance).  `statistic`
    maps a mean row (or scalar) to a float.  Returns (value, stderr), where
    value is the statistic of the full-sample mean."""
    bins = np.asarray(bins, dtype=np.float64)
    if bins.ndim == 1:
        bins = bins[:, None]
    n = bins.shape[0]
    if n < 2:
        raise ConfigurationError("jackknife needs at least two bins")
    total = bins.sum(axis=0)
    full = float(statistic(*(total / n)))
    loo = np.array([statistic(*((total - bins[i]) / (n - 1))) for i in range(n)])
    stderr = float(np.sqrt((n - 1) / n * np.sum((loo - loo.mean()) ** 2)))
    return full, stderr
