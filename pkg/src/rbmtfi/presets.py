"""Run recipes shared by the CLI drivers and the acceptance suite.

Two scales: `desk` targets a laptop-class single machine (chains of 16 to 64
spins, minutes to a couple of hours for the full result set); `paper` targets
the full 256-spin chain and is guarded behind an explicit confirmation in the
CLI because single figures can take hours.
"""

from __future__ import annotations

import numpy as np

from .sr import SrConfig
from .vmc import SamplerConfig

DESK_L_LIST = [16, 32, 64]
PAPER_L_LIST = [32, 64, 128, 256]

# Independent random starts per scan point; the lowest sampled energy wins.
SCAN_STARTS = 2

GAMMA_GRID = [round(0.5 + 0.1 * k, 10) for k in range(11)]  # 0.5 .. 1.5
PROFILE_GAMMAS = [0.9, 1.0, 1.1]
HEAT_GAMMAS = [0.9, 1.1]


def default_t_grid() -> list:
    """0.2 .. 4.0 in steps of 0.1; contains T = 1 exactly."""
    return [round(0.2 + 0.1 * k, 10) for k in range(39)]


def optimize_iters(L: int) -> int:
    if L <= 16:
        return 400
    if L <= 32:
        return 500
    return 600


def optimize_sweeps(L: int) -> int:
    return 500


def sr_preset(L: int, seed: int) -> SrConfig:
    return SrConfig(seed=seed, n_iters=optimize_iters(L))


def sampler_preset(L: int, seed: int) -> SamplerConfig:
    return SamplerConfig(seed=seed, n_sweeps=optimize_sweeps(L), n_burnin=500, n_chains=4)


def polish_preset(L: int, seed: int) -> SrConfig:
    """Short small-step stage run from the main stage's couplings; shrinks
    the stochastic stationary jitter of the final iterate."""
    return SrConfig(seed=seed, eta=0.012, n_iters=max(100, optimize_iters(L) // 4))


def estimate_preset(L: int, seed: int) -> SamplerConfig:
    """Final fresh-chain energy readout, independent of the optimizer seeds."""
    return SamplerConfig(seed=seed, n_sweeps=4000, n_burnin=500, n_chains=4)


def thermo_preset(L: int, seed: int) -> SamplerConfig:
    return SamplerConfig(seed=seed, n_sweeps=10_000, n_burnin=1000, n_chains=4)


def point_seed(master: int, *key: int) -> int:
    """Stable derived seed for one grid point of a scan."""
    return int(np.random.SeedSequence([master, *key]).generate_state(1)[0])
