import numpy as np
import pytest

import rbmtfi
from rbmtfi import SamplerConfig, SrConfig, TfiParams, gamma_scan, optimize, presets
from rbmtfi.presets import point_seed

ACCEPTANCE_SEED = 20240901


def _scan(L):
    seed = point_seed(ACCEPTANCE_SEED, L)
    return gamma_scan(
        presets.GAMMA_GRID, L,
        presets.sr_preset(L, seed), presets.sampler_preset(L, seed),
        polish_cfg=presets.polish_preset(L, seed),
        estimate_cfg=presets.estimate_preset(L, seed),
        n_starts=presets.SCAN_STARTS)


@pytest.fixture(scope="session")
def scan_l32():
    return _scan(32)


@pytest.fixture(scope="session")
def scan_l64():
    return _scan(64)


def optimize_desk(L, gamma, seed):
    """Main stage + small-step polish, the desk-scale recipe."""
    tfi = TfiParams(gamma)
    params, _ = optimize(L, tfi, presets.sr_preset(L, seed),
                         presets.sampler_preset(L, seed))
    params, _ = optimize(L, tfi, presets.polish_preset(L, seed + 1),
                         presets.sampler_preset(L, seed + 1), w_init=params.w)
    return params


@pytest.fixture(scope="session")
def heat_params(scan_l32, scan_l64):
    """Optimized couplings at gamma in {0.9, 1.1} for L in {16, 32, 64}; the
    32- and 64-spin ones come from the grid scans."""
    out = {}
    for scan, L in ((scan_l32, 32), (scan_l64, 64)):
        for p in scan.points:
            if p.report.gamma in (0.9, 1.1):
                out[(L, p.report.gamma)] = p.params
    for gamma in (0.9, 1.1):
        out[(16, gamma)] = optimize_desk(16, gamma,
                                         point_seed(ACCEPTANCE_SEED, 16, int(gamma * 10)))
    return out
