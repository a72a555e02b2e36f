"""Post-hoc analysis of learned couplings: gauge-fixed origin alignment, the
long-separation tail average, and scans of the tail across the transverse
field.

Two exact invariances of the wave function make raw couplings incomparable
across runs: cyclic relabeling of the hidden layer (rotates w) and the global
sign flip (negates w).  Alignment quotients both out: rotate the largest
|w_d| to d = 0, then flip the sign so w_0 > 0.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

import numpy as np

from . import exact, sr, vmc
from .csvio import write_csv
from .errors import CapabilityError, DegenerateInputError, RbmTfiError
from .rbm import RbmParams
from .spins import TfiParams
from .sr import SrConfig
from .vmc import SamplerConfig


@dataclass(frozen=True)
class TailReport:
    """Aligned coupling profile and its long-separation average for one run."""

    gamma: float
    L: int
    w_profile: np.ndarray
    w_tail: float
    w_tail_times_l: float
    origin_index: int


def align_origin(params: RbmParams) -> tuple[RbmParams, int]:
    """Rotate the couplings so the maximum-|w| entry sits at separation 0
    (ties broken by smallest original index), then apply the global sign
    gauge so w_0 > 0.  Both moves leave the wave function unchanged."""
    w = params.w
    if np.all(w == 0.0):
        raise DegenerateInputError("cannot align an all-zero coupling vector")
    origin = int(np.argmax(np.abs(w)))
    aligned = np.roll(w, -origin)
    if aligned[0] < 0:
        aligned = -aligned
    return RbmParams(aligned), origin


def tail_window(L: int) -> tuple[int, int]:
    """Inclusive separation bounds [ceil(L/2 - L/16), floor(L/2 + L/16)]."""
    lo = math.ceil(L / 2 - L / 16)
    hi = math.floor(L / 2 + L / 16)
    return lo, hi


def w_tail(aligned: RbmParams) -> float:
    """Mean coupling over the window centered at separation L/2.

    In the ordered phase this tail stays finite (scaling like 1/L); in the
    disordered phase it vanishes.  Expects aligned parameters."""
    L = aligned.L
    lo, hi = tail_window(L)
    if hi < lo:
        raise DegenerateInputError(f"tail window empty for L={L}")
    return float(np.mean(aligned.w[lo:hi + 1]))


def tail_report(params: RbmParams, gamma: float) -> TailReport:
    aligned, origin = align_origin(params)
    tail = w_tail(aligned)
    return TailReport(gamma=gamma, L=params.L, w_profile=aligned.w,
                      w_tail=tail, w_tail_times_l=tail * params.L,
                      origin_index=origin)


def reference_energy(L: int, tfi: TfiParams) -> float:
    """Best available exact ground-state energy for the given size."""
    if L % 2 == 0:
        return exact.free_fermion_energy(L, tfi)
    if L <= exact.ED_MAX_L:
        return exact.ed_ground_state(L, tfi).ground_energy
    raise CapabilityError(f"no exact reference for odd L={L} beyond {exact.ED_MAX_L}")


@dataclass(frozen=True)
class GammaScanPoint:
    """One optimized field value: the tail report plus the energy record."""

    report: TailReport
    params: RbmParams
    energy: float
    energy_err: float
    exact_energy: float
    rel_error: float
    seed: int


@dataclass
class GammaScan:
    points: list
    failures: list


def gamma_scan(gammas, L: int, sr_cfg: SrConfig, sampler_cfg: SamplerConfig,
               threads: int | None = None,
               polish_cfg: SrConfig | None = None,
               estimate_cfg: SamplerConfig | None = None,
               n_starts: int = 1) -> GammaScan:
    """Optimize at every field value, estimate the final energy against the
    exact oracle, and compute the aligned tail.

    With n_starts > 1 each point is optimized from that many independent
    random starts and the lowest sampled energy wins: occasionally a start
    wanders into the nearly flat uniform-offset direction of the couplings
    (almost invisible to the energy, but polluting the tail average), and a
    fresh start beats it by dozens of error bars.  The optional polish stage
    (typically a smaller learning rate) then continues from the winning
    couplings.  The energy readout uses estimate_cfg (fresh chains) when
    given, the scan sampler config otherwise.  Per-point seeds are derived
    deterministically from the config seeds and the grid index, so a scan is
    reproducible point by point.  Failures are recorded and the scan
    continues."""
    points, failures = [], []
    for idx, gamma in enumerate(float(g) for g in gammas):
        tfi = TfiParams(gamma)
        try:
            e_exact = reference_energy(L, tfi)
            best = None
            for start in range(n_starts):
                seed = int(np.random.SeedSequence(
                    [sr_cfg.seed, idx, start, 6]).generate_state(1)[0])
                params, _ = sr.optimize(L, tfi, replace(sr_cfg, seed=seed),
                                        replace(sampler_cfg, seed=seed),
                                        threads=threads)
                readout = replace(estimate_cfg or sampler_cfg, seed=seed + 2)
                moments = vmc.estimate(params, tfi, readout, threads=threads)
                if best is None or moments.energy.mean < best[1].energy.mean:
                    best = (params, moments, seed)
            params, moments, seed = best
            if polish_cfg is not None:
                params, _ = sr.optimize(L, tfi, replace(polish_cfg, seed=seed + 1),
                                        replace(sampler_cfg, seed=seed + 1),
                                        threads=threads, w_init=params.w)
                readout = replace(estimate_cfg or sampler_cfg, seed=seed + 3)
                moments = vmc.estimate(params, tfi, readout, threads=threads)
            points.append(GammaScanPoint(
                report=tail_report(params, gamma),
                params=params,
                energy=moments.energy.mean,
                energy_err=moments.energy.stderr,
                exact_energy=e_exact,
                rel_error=abs((moments.energy.mean - e_exact) / e_exact),
                seed=seed,
            ))
        except RbmTfiError as err:
            failures.append((gamma, err))
    return GammaScan(points=points, failures=failures)


def tail_to_csv(path: str | os.PathLike, scan: GammaScan) -> None:
    """gamma,L,w_tail,w_tail_L,origin_index,energy,energy_err,exact_energy,
    rel_error,seed — one row per scan point."""
    header = ["gamma", "L", "w_tail", "w_tail_L", "origin_index", "energy",
              "energy_err", "exact_energy", "rel_error", "seed"]
    rows = [
        (p.report.gamma, p.report.L, p.report.w_tail, p.report.w_tail_times_l,
         p.report.origin_index, p.energy, p.energy_err, p.exact_energy,
         p.rel_error, p.seed)
        for p in scan.points
    ]
    write_csv(path, header, rows)


def profile_to_csv(path: str | os.PathLike, report: TailReport) -> None:
    """d,W_d for the aligned profile."""
    write_csv(path, ["d", "W_d"], list(enumerate(report.w_profile)))
