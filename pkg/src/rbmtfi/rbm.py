"""Translationally symmetric real-coupling RBM wave function.

The ansatz has L visible spins identified with the chain, L hidden spins, no
bias fields, and couplings that depend only on the separation d = (i - j) mod L:

    ln Psi(s) = sum_j ln 2cosh(theta_j),   theta_j = sum_i w[(i - j) mod L] * s_i.

Psi is strictly positive, so everything lives in the log domain; raw
amplitudes are never materialized.  ln 2cosh is evaluated as
|x| + log1p(exp(-2|x|)), which stays finite for couplings far beyond the
overflow point of cosh.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .spins import SPIN_DTYPE

# Full theta recomputation cadence: bounds floating-point drift accumulated by
# incremental updates during long Monte Carlo runs.
RECOMPUTE_EVERY = 10_000


def lncosh2(x):
    """ln(2 cosh x), overflow-safe for any float64 argument."""
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax))


@dataclass(frozen=True)
class RbmParams:
    """Coupling vector w of length L; entry d holds the coupling at separation
    d = (i - j) mod L.  The hidden-layer size equals L."""

    w: np.ndarray

    def __post_init__(self):
        w = np.ascontiguousarray(np.asarray(self.w, dtype=np.float64))
        if w.ndim != 1 or w.shape[0] < 2:
            raise ConfigurationError(f"coupling vector must be 1-D with L >= 2, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ConfigurationError("coupling vector contains non-finite entries")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def L(self) -> int:
        return self.w.shape[0]

    @property
    def n_hidden(self) -> int:
        return self.w.shape[0]


def zero_params(L: int) -> RbmParams:
    return RbmParams(np.zeros(L))


@dataclass
class ThetaCache:
    """Effective hidden fields theta_j = sum_i w[(i-j) mod L] s_i for one
    tracked configuration, maintained incrementally across single-spin flips.

    A full recomputation is forced every RECOMPUTE_EVERY incremental updates,
    which keeps accumulated rounding drift below ~1e-10 over arbitrarily long
    runs."""

    theta: np.ndarray
    updates_since_recompute: int = 0

    def copy(self) -> "ThetaCache":
        return ThetaCache(self.theta.copy(), self.updates_since_recompute)


def compute_theta(params: RbmParams, spins: np.ndarray) -> np.ndarray:
    """theta_j = sum_i w[(i - j) mod L] s_i, from scratch."""
    w = params.w
    L = w.shape[0]
    if spins.shape[0] != L:
        raise ConfigurationError(f"config length {spins.shape[0]} != parameter length {L}")
    s = spins.astype(np.float64)
    # Row j of the kernel matrix is w rolled by j: M[j, i] = w[(i - j) mod L].
    mat = np.empty((L, L))
    for j in range(L):
        mat[j] = np.roll(w, j)
    return mat @ s


def make_cache(params: RbmParams, spins: np.ndarray) -> ThetaCache:
    return ThetaCache(compute_theta(params, spins))


def log_psi(params: RbmParams, spins: np.ndarray) -> float:
    """ln Psi(s) = sum_j ln 2cosh(theta_j).  Always real and finite."""
    theta = compute_theta(params, spins)
    return float(np.sum(lncosh2(theta)))


def _flip_kernel(params: RbmParams, site: int) -> np.ndarray:
    """w[(site - j) mod L] as a vector over j."""
    L = params.L
    if not 0 <= site < L:
        raise ConfigurationError(f"site {site} out of range for L={L}")
    return params.w[(site - np.arange(L)) % L]


def psi_ratio(params: RbmParams, cache: ThetaCache, spins: np.ndarray, site: int) -> float:
    """Psi(s with spin `site` flipped) / Psi(s), in O(L).

    Computed as exp(sum_j [ln 2cosh(theta_j - 2 w_{site-j} s_site) - ln 2cosh(theta_j)]),
    so the result is strictly positive and never overflows.
    """
    wv = _flip_kernel(params, site)
    theta = cache.theta
    delta = lncosh2(theta - 2.0 * wv * spins[site]) - lncosh2(theta)
    return float(np.exp(np.sum(delta)))


def update_cache(cache: ThetaCache, params: RbmParams, spins: np.ndarray, site: int) -> ThetaCache:
    """Advance the cache across flipping spin `site` of `spins` (pre-flip view).

    Mutates and returns `cache`; afterwards it is consistent with the flipped
    configuration."""
    wv = _flip_kernel(params, site)
    cache.theta -= 2.0 * wv * spins[site]
    cache.updates_since_recompute += 1
    if cache.updates_since_recompute >= RECOMPUTE_EVERY:
        flipped = np.array(spins, dtype=SPIN_DTYPE)
        flipped[site] = -flipped[site]
        cache.theta = compute_theta(params, flipped)
        cache.updates_since_recompute = 0
    return cache


def log_derivatives(params: RbmParams, cache: ThetaCache, spins: np.ndarray) -> np.ndarray:
    """O_d = d ln Psi / d w_d = sum_j tanh(theta_j) s_{(j+d) mod L}, d = 0..L-1."""
    L = params.L
    t = np.tanh(cache.theta)
    s = spins.astype(np.float64)
    return np.array([np.dot(t, np.roll(s, -d)) for d in range(L)])


def save_params(path: str | os.PathLike, params: RbmParams) -> None:
    """Write the snapshot format: line 1 `L <int>`, then L lines `d W_d`.

    Couplings are printed with 17 significant digits, which round-trips
    float64 bit-exactly."""
    lines = [f"L {params.L}"]
    lines += [f"{d} {params.w[d]:.17g}" for d in range(params.L)]
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_params(path: str | os.PathLike) -> RbmParams:
    """Read a snapshot written by :func:`save_params`."""
    with open(path, encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or not lines[0].startswith("L "):
        raise ConfigurationError(f"{path}: first line must be 'L <int>'")
    L = int(lines[0].split()[1])
    if len(lines) != L + 1:
        raise ConfigurationError(f"{path}: expected {L} coupling lines, found {len(lines) - 1}")
    w = np.empty(L)
    seen = np.zeros(L, dtype=bool)
    for ln in lines[1:]:
        d_str, w_str = ln.split()
        d = int(d_str)
        if not 0 <= d < L or seen[d]:
            raise ConfigurationError(f"{path}: bad or repeated separation index {d}")
        w[d] = float(w_str)
        seen[d] = True
    return RbmParams(w)
