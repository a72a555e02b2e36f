"""Finite-temperature Monte Carlo of the 2L-spin classical system whose
energy is E(s, h) = -sum_{i,j} w[(i-j) mod L] s_i h_j.

Tracing out the hidden layer of this system at T = 1 gives back the wave
function amplitudes, so its thermodynamics characterize the learned couplings
as a classical spin model: specific heat and energy variance versus
temperature, per classical spin (2L of them).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .csvio import write_csv
from .errors import ConfigurationError, RbmTfiError, StatisticalFault
from .rbm import RbmParams
from .runtime import worker_count
from .spins import random_spins
from .stats import McEstimate, binning_estimate, jackknife
from .vmc import SamplerConfig


@dataclass(frozen=True)
class Temperature:
    """Positive temperature with derived inverse beta = 1/T."""

    t: float

    def __post_init__(self):
        if not np.isfinite(self.t) or self.t <= 0:
            raise ConfigurationError(f"temperature must be positive, got {self.t}")

    @property
    def beta(self) -> float:
        return 1.0 / self.t


@dataclass
class JointConfig:
    """One state of the joint system: L visible and L hidden spins, all +-1."""

    visible: np.ndarray
    hidden: np.ndarray

    def __post_init__(self):
        if self.visible.shape != self.hidden.shape or self.visible.ndim != 1:
            raise ConfigurationError("visible and hidden layers must be 1-D of equal length")


def rbm_energy(params: RbmParams, joint: JointConfig) -> float:
    """-sum_j h_j theta_j with theta_j = sum_i w[(i-j) mod L] s_i."""
    w = params.w
    L = w.shape[0]
    if joint.visible.shape[0] != L:
        raise ConfigurationError(f"joint config length {joint.visible.shape[0]} != L={L}")
    s = joint.visible.astype(np.float64)
    h = joint.hidden.astype(np.float64)
    mat = np.empty((L, L))
    for j in range(L):
        mat[j] = np.roll(w, j)
    return float(-h @ (mat @ s))


@dataclass(frozen=True)
class ThermalSample:
    """Energy moments of one temperature point, with magnetization checks."""

    e_mean: McEstimate
    e2_mean: McEstimate
    mag_visible: McEstimate
    mag_hidden: McEstimate
    acceptance: float


def thermal_sample(params: RbmParams, temp: Temperature, cfg: SamplerConfig,
                   threads: int | None = None) -> ThermalSample:
    """Metropolis sampling of the joint system at temperature temp.

    Single-spin flips over all 2L spins (uniformly random layer and site),
    acceptance min(1, exp(-dE/T)); one sweep is 2L proposals followed by the
    always-accepted joint global flip.  Returns binning estimates of <E> and
    <E^2> over pooled independent chains."""
    w = params.w
    L = w.shape[0]
    n_chains = cfg.resolved_chains()
    e_series = np.empty((n_chains, cfg.n_sweeps))
    m_series = np.empty((n_chains, cfg.n_sweeps, 2))
    visible = [random_spins(L, np.random.default_rng(np.random.SeedSequence([cfg.seed, k, 2])))
               for k in range(n_chains)]
    hidden = [random_spins(L, np.random.default_rng(np.random.SeedSequence([cfg.seed, k, 3])))
              for k in range(n_chains)]
    rngs = [kernels.make_rng_state(cfg.seed, k, 4) for k in range(n_chains)]

    def job(k):
        def run():
            return kernels.nb_run_thermal_chain(
                w, temp.beta, visible[k], hidden[k], cfg.n_burnin, cfg.n_sweeps,
                rngs[k], e_series[k], m_series[k])
        return run

    jobs = [job(k) for k in range(n_chains)]
    n_workers = min(worker_count(threads), n_chains)
    if n_workers <= 1:
        accepted = [j() for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            accepted = [f.result() for f in [pool.submit(j) for j in jobs]]

    total_props = n_chains * (cfg.n_sweeps + cfg.n_burnin) * 2 * L
    return ThermalSample(
        e_mean=binning_estimate(e_series),
        e2_mean=binning_estimate(e_series**2),
        mag_visible=binning_estimate(m_series[:, :, 0]),
        mag_hidden=binning_estimate(m_series[:, :, 1]),
        acceptance=float(sum(accepted) / total_props),
    )


def specific_heat(e_mean: McEstimate, e2_mean: McEstimate, temp: Temperature,
                  n_sites: int) -> McEstimate:
    """C per site = (<E^2> - <E>^2) / T^2 / n_sites, with the error propagated
    by jackknife over the aligned bins of the two estimates.

    n_sites is the number of classical spins, i.e. 2L for the joint system."""
    var = e2_mean.mean - e_mean.mean**2

    def stat(e, e2):
        return (e2 - e * e) / temp.t**2 / n_sites

    if e_mean.bins is not None and e2_mean.bins is not None \
            and len(e_mean.bins) == len(e2_mean.bins) and len(e_mean.bins) >= 2:
        paired = np.column_stack([e_mean.bins, e2_mean.bins])
        value, stderr = jackknife(paired, stat)
    else:
        # No joint bins available: combine the two stderrs ignoring covariance.
        value = stat(e_mean.mean, e2_mean.mean)
        stderr = float(np.sqrt(e2_mean.stderr**2 + (2 * e_mean.mean * e_mean.stderr) ** 2)
                       / temp.t**2 / n_sites)
    noise_floor = 3.0 * stderr * temp.t**2 * n_sites + 1e-12 * max(1.0, abs(e2_mean.mean))
    if var < -noise_floor:
        raise StatisticalFault(
            f"variance estimate {var:.3g} negative beyond noise floor {noise_floor:.3g}")
    return McEstimate(mean=value, stderr=stderr, n_samples=e_mean.n_samples,
                      autocorr_bins=np.array([]))


@dataclass(frozen=True)
class ThermoPoint:
    """One row of a temperature scan; energies and variances are per site
    (divisor 2L, the classical spin count)."""

    temperature: float
    e_per_site: float
    e_err: float
    var_per_site: float
    var_err: float
    c_per_site: float
    c_err: float
    n_sweeps: int
    seed: int


@dataclass
class ThermoScan:
    points: list
    failures: list


def temperature_scan(params: RbmParams, t_grid, cfg: SamplerConfig,
                     threads: int | None = None) -> ThermoScan:
    """thermal_sample at every grid temperature, with independent derived
    seeds per point.  T = 1 (the wave-function temperature) is inserted if
    the grid does not already contain it.  Per-point failures are recorded
    and the scan continues."""
    ts = [float(t) for t in t_grid]
    if not ts:
        raise ConfigurationError("temperature grid is empty")
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise ConfigurationError("temperature grid must be strictly ascending")
    if not any(abs(t - 1.0) < 1e-12 for t in ts):
        ts.append(1.0)
        ts.sort()

    n_sites = 2 * params.L
    points, failures = [], []
    for idx, t in enumerate(ts):
        seed = int(np.random.SeedSequence([cfg.seed, idx, 5]).generate_state(1)[0])
        point_cfg = replace(cfg, seed=seed)
        temp = Temperature(t)
        try:
            res = thermal_sample(params, temp, point_cfg, threads=threads)
            c = specific_heat(res.e_mean, res.e2_mean, temp, n_sites)
            var = c.mean * temp.t**2
            var_err = c.stderr * temp.t**2
            points.append(ThermoPoint(
                temperature=t,
                e_per_site=res.e_mean.mean / n_sites,
                e_err=res.e_mean.stderr / n_sites,
                var_per_site=var,
                var_err=var_err,
                c_per_site=c.mean,
                c_err=c.stderr,
                n_sweeps=cfg.n_sweeps,
                seed=seed,
            ))
        except RbmTfiError as err:
            failures.append((t, err))
    return ThermoScan(points=points, failures=failures)


def scan_to_csv(path: str | os.PathLike, scan: ThermoScan, gamma: float, L: int) -> None:
    """Emit the scan table: gamma,L,T,e_per_site,e_err,var_per_site,var_err,
    c_per_site,c_err,n_sweeps,seed."""
    header = ["gamma", "L", "T", "e_per_site", "e_err", "var_per_site",
              "var_err", "c_per_site", "c_err", "n_sweeps", "seed"]
    rows = [
        (gamma, L, p.temperature, p.e_per_site, p.e_err, p.var_per_site,
         p.var_err, p.c_per_site, p.c_err, p.n_sweeps, p.seed)
        for p in scan.points
    ]
    write_csv(path, header, rows)
