import numpy as np
import pytest

from rbmtfi import (DegenerateInputError, RbmParams, SamplerConfig, SrConfig,
                    TfiParams, align_origin, gamma_scan, log_psi, random_spins,
                    tail_report, tail_window, w_tail)
from rbmtfi.analysis import profile_to_csv, tail_to_csv


def test_align_origin_rotation_example():
    aligned, origin = align_origin(RbmParams(np.array([0.1, 0.9, 0.2])))
    assert origin == 1
    np.testing.assert_allclose(aligned.w, [0.9, 0.2, 0.1])


def test_align_origin_gauge_flip_example():
    aligned, origin = align_origin(RbmParams(np.array([-0.9, 0.1, 0.2])))
    assert origin == 0
    np.testing.assert_allclose(aligned.w, [0.9, -0.1, -0.2])


def test_align_origin_tie_breaks_smallest_index():
    aligned, origin = align_origin(RbmParams(np.array([0.5, -0.5, 0.1, 0.1])))
    assert origin == 0
    np.testing.assert_allclose(aligned.w, [0.5, -0.5, 0.1, 0.1])


def test_align_origin_idempotent():
    rng = np.random.default_rng(0)
    for _ in range(10):
        params = RbmParams(rng.standard_normal(12))
        once, _ = align_origin(params)
        twice, origin2 = align_origin(once)
        np.testing.assert_array_equal(once.w, twice.w)
        assert origin2 == 0


def test_align_origin_preserves_wave_function():
    rng = np.random.default_rng(1)
    L = 8
    params = RbmParams(rng.standard_normal(L))
    aligned, _ = align_origin(params)
    for _ in range(100):
        spins = random_spins(L, rng)
        assert log_psi(aligned, spins) == pytest.approx(log_psi(params, spins), abs=1e-10)


def test_align_origin_rejects_zero():
    with pytest.raises(DegenerateInputError):
        align_origin(RbmParams(np.zeros(6)))


def test_tail_window_bounds():
    assert tail_window(64) == (28, 36)
    assert tail_window(32) == (14, 18)
    assert tail_window(16) == (7, 9)
    # L divisible by 16: exactly L/8 + 1 entries
    for L in (16, 32, 64, 128):
        lo, hi = tail_window(L)
        assert hi - lo + 1 == L // 8 + 1
    # non-divisible sizes follow the ceil/floor rule
    assert tail_window(8) == (4, 4)
    assert tail_window(20) == (9, 11)


def test_w_tail_constant_profile():
    params = RbmParams(np.full(32, 0.37))
    assert w_tail(params) == pytest.approx(0.37, abs=1e-15)


def test_w_tail_delta_profile():
    w = np.zeros(32)
    w[0] = 1.0
    assert w_tail(RbmParams(w)) == 0.0


def test_w_tail_empty_window():
    with pytest.raises(DegenerateInputError):
        w_tail(RbmParams(np.array([1.0, 0.5, 0.2])))  # L=3: no integer in window


def test_w_tail_invariant_under_hidden_relabeling():
    rng = np.random.default_rng(2)
    w = rng.standard_normal(32)
    reference = w_tail(align_origin(RbmParams(w))[0])
    for s in (1, 5, 17, 31):
        rotated = np.roll(w, s)
        assert w_tail(align_origin(RbmParams(rotated))[0]) == pytest.approx(reference, abs=1e-15)


def test_tail_report_fields():
    rng = np.random.default_rng(3)
    w = rng.standard_normal(32)
    report = tail_report(RbmParams(w), gamma=0.9)
    assert report.L == 32
    assert abs(report.w_profile[0]) == np.max(np.abs(report.w_profile))
    assert report.w_profile[0] > 0
    assert report.w_tail_times_l == report.w_tail * 32


def test_gamma_scan_smoke(tmp_path):
    sr_cfg = SrConfig(seed=5, n_iters=60)
    sm_cfg = SamplerConfig(seed=5, n_sweeps=200, n_burnin=200, n_chains=2)
    scan = gamma_scan([0.6, 1.4], L=8, sr_cfg=sr_cfg, sampler_cfg=sm_cfg)
    assert not scan.failures
    assert [p.report.gamma for p in scan.points] == [0.6, 1.4]
    for p in scan.points:
        assert p.rel_error < 0.05  # loose: tiny budget, structural check only
        assert p.exact_energy < 0
        assert p.report.w_profile.shape == (8,)

    tail_path = tmp_path / "tail.csv"
    tail_to_csv(tail_path, scan)
    lines = tail_path.read_text().splitlines()
    assert lines[0] == ("gamma,L,w_tail,w_tail_L,origin_index,energy,"
                        "energy_err,exact_energy,rel_error,seed")
    assert len(lines) == 3

    profile_path = tmp_path / "profile.csv"
    profile_to_csv(profile_path, scan.points[0].report)
    lines = profile_path.read_text().splitlines()
    assert lines[0] == "d,W_d"
    assert len(lines) == 9


def test_gamma_scan_records_failures():
    # odd L beyond the dense-diagonalization limit has no exact reference
    sr_cfg = SrConfig(seed=6, n_iters=2)
    sm_cfg = SamplerConfig(seed=6, n_sweeps=20, n_burnin=10, n_chains=1)
    scan = gamma_scan([1.0], L=15, sr_cfg=sr_cfg, sampler_cfg=sm_cfg)
    assert len(scan.failures) == 1
    assert scan.points == []
