"""Metropolis sampling of |Psi|^2 and estimation of the variational energy
and the moments that feed stochastic reconfiguration.

Chains are fully independent: each owns its spins, theta cache and RNG
stream (derived from (seed, chain index) via SeedSequence), so results are
bit-identical for a given config no matter how chains are scheduled.  The
merge is an ordered reduction over chain index.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels, rbm
from .errors import ConfigurationError, NumericalFault
from .rbm import RbmParams, ThetaCache
from .runtime import worker_count
from .spins import TfiParams, random_spins
from .stats import McEstimate, binning_estimate


@dataclass(frozen=True)
class SamplerConfig:
    """Sampling budget for one estimate: measured sweeps, burn-in sweeps and
    chain count, plus the master seed every stream is derived from.

    The seed is mandatory: reruns with the same config must be bit-identical,
    so nothing in the package ever seeds from the clock."""

    seed: int
    n_sweeps: int = 2000
    n_burnin: int = 500
    n_chains: int | None = None

    def __post_init__(self):
        if self.n_sweeps < 1 or self.n_burnin < 0:
            raise ConfigurationError("n_sweeps must be >= 1 and n_burnin >= 0")
        if self.n_chains is not None and self.n_chains < 1:
            raise ConfigurationError("n_chains must be >= 1")

    def resolved_chains(self) -> int:
        if self.n_chains is not None:
            return self.n_chains
        return max(4, os.cpu_count() or 1)


@dataclass
class ChainState:
    """One chain's working copy: mutable spins plus the tracked theta cache,
    with cumulative proposal counters for acceptance-rate diagnostics."""

    spins: np.ndarray
    cache: ThetaCache
    n_proposed: int = 0
    n_accepted: int = 0

    @property
    def acceptance_rate(self) -> float:
        return self.n_accepted / self.n_proposed if self.n_proposed else 1.0


def make_chain_state(params: RbmParams, spins: np.ndarray) -> ChainState:
    return ChainState(np.array(spins, copy=True), rbm.make_cache(params, spins))


def local_energy(params: RbmParams, cache: ThetaCache, spins: np.ndarray,
                 tfi: TfiParams) -> float:
    """E_loc(s) = -sum_i s_i s_{i+1} - Gamma sum_i Psi(s^flip_i)/Psi(s).

    Reference implementation in O(L^2); the sampling loop uses the compiled
    twin in kernels.py."""
    L = params.L
    s = spins.astype(np.float64)
    e_diag = -float(np.dot(s, np.roll(s, -1)))
    ratios = sum(rbm.psi_ratio(params, cache, spins, i) for i in range(L))
    return e_diag - tfi.gamma * ratios


def metropolis_sweep(state: ChainState, params: RbmParams,
                     rng: np.random.Generator) -> ChainState:
    """L single-spin-flip proposals at uniform random sites, accepted with
    min(1, ratio^2), cache updated incrementally; then the global Z2 flip
    (ratio exactly 1).  Detailed balance with respect to Psi(s)^2 holds."""
    L = params.L
    for _ in range(L):
        site = int(rng.integers(L))
        ratio = rbm.psi_ratio(params, state.cache, state.spins, site)
        state.n_proposed += 1
        if ratio >= 1.0 or rng.random() < ratio * ratio:
            rbm.update_cache(state.cache, params, state.spins, site)
            state.spins[site] = -state.spins[site]
            state.n_accepted += 1
    np.negative(state.spins, out=state.spins)
    np.negative(state.cache.theta, out=state.cache.theta)
    return state


@dataclass(frozen=True)
class VmcMoments:
    """Merged sampling result: the energy estimate plus the first and second
    moments of the log-derivatives needed by stochastic reconfiguration.
    e_series keeps the raw per-chain local-energy samples (n_chains, n_sweeps)
    for diagnostics."""

    energy: McEstimate
    o_mean: np.ndarray
    oo_mean: np.ndarray
    eo_mean: np.ndarray
    eloc_var: float
    acceptance: float
    e_series: np.ndarray = field(repr=False, default=None)


def _chain_rng_states(seed: int, n_chains: int, stream: int) -> list[np.ndarray]:
    return [kernels.make_rng_state(seed, k, stream) for k in range(n_chains)]


def _initial_spins(seed: int, n_chains: int, L: int) -> list[np.ndarray]:
    return [
        random_spins(L, np.random.default_rng(np.random.SeedSequence([seed, k, 0])))
        for k in range(n_chains)
    ]


def _run_chains(jobs, threads: int | None):
    """Execute chain closures, possibly on a thread pool; results keep chain
    order so the reduction is deterministic."""
    n_workers = min(worker_count(threads), len(jobs))
    if n_workers <= 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        futures = [pool.submit(job) for job in jobs]
        return [f.result() for f in futures]


def sample_moments(params: RbmParams, tfi: TfiParams, cfg: SamplerConfig,
                   threads: int | None = None,
                   chains: list[np.ndarray] | None = None,
                   rng_states: list[np.ndarray] | None = None,
                   n_burnin: int | None = None) -> VmcMoments:
    """One sampling pass over n_chains independent chains.

    `chains` / `rng_states` allow a caller (the optimizer) to keep warm chain
    state across successive passes; by default fresh chains and streams are
    derived from cfg.seed.  Raises NumericalFault if any chain produced a
    non-finite local energy."""
    L = params.L
    n_chains = cfg.resolved_chains()
    burn = cfg.n_burnin if n_burnin is None else n_burnin
    if chains is None:
        chains = _initial_spins(cfg.seed, n_chains, L)
    if rng_states is None:
        rng_states = _chain_rng_states(cfg.seed, n_chains, 1)
    if len(chains) != n_chains or len(rng_states) != n_chains:
        raise ConfigurationError("chain state count does not match n_chains")

    w = params.w
    n_meas = cfg.n_sweeps
    e_series = np.empty((n_chains, n_meas))
    sum_o = np.zeros((n_chains, L))
    sum_oo = np.zeros((n_chains, L, L))
    sum_eo = np.zeros((n_chains, L))
    thetas = [np.empty(L) for _ in range(n_chains)]
    lcs = [np.empty(L) for _ in range(n_chains)]

    def job(k):
        def run():
            return kernels.nb_run_vmc_chain(
                w, tfi.gamma, chains[k], thetas[k], lcs[k], burn, n_meas,
                rng_states[k], e_series[k], sum_o[k], sum_oo[k], sum_eo[k])
        return run

    accepted = _run_chains([job(k) for k in range(n_chains)], threads)

    if not np.all(np.isfinite(e_series)):
        bad_chain, bad_idx = np.argwhere(~np.isfinite(e_series))[0]
        raise NumericalFault(
            f"non-finite local energy in chain {bad_chain} at measurement {bad_idx} "
            f"(gamma={tfi.gamma}, L={L}, max|w|={np.max(np.abs(w)):.3g})")

    n_total = n_chains * n_meas
    energy = binning_estimate(e_series)
    moments = VmcMoments(
        energy=energy,
        o_mean=sum_o.sum(axis=0) / n_total,
        oo_mean=sum_oo.sum(axis=0) / n_total,
        eo_mean=sum_eo.sum(axis=0) / n_total,
        eloc_var=float(np.var(e_series)),
        acceptance=float(sum(accepted) / (n_total + n_chains * burn) / L),
        e_series=e_series,
    )
    return moments


def estimate(params: RbmParams, tfi: TfiParams, cfg: SamplerConfig,
             threads: int | None = None) -> VmcMoments:
    """Fresh-chain estimate of the variational energy and SR moments.

    Runs cfg.n_chains independent chains from random starts, discards
    cfg.n_burnin sweeps per chain, then measures every sweep.  The energy
    stderr comes from pooled binning over chains."""
    return sample_moments(params, tfi, cfg, threads=threads)


def sample_visit_counts(params: RbmParams, seed: int, n_sweeps: int,
                        n_burnin: int = 1000, thin: int = 10) -> np.ndarray:
    """Histogram of visited configurations (single chain), for distribution
    tests against the exact |Psi|^2 law.  Index encoding matches
    spins.enumerate_spins."""
    L = params.L
    if L > 16:
        raise ConfigurationError("visit histogram limited to L <= 16")
    counts = np.zeros(2**L, dtype=np.int64)
    spins0 = random_spins(L, np.random.default_rng(np.random.SeedSequence([seed, 0, 0])))
    kernels.nb_run_vmc_visits(params.w, spins0, np.empty(L), np.empty(L),
                              n_burnin, n_sweeps, thin,
                              kernels.make_rng_state(seed, 0, 1), counts)
    return counts
