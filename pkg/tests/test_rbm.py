import itertools
import math

import numpy as np
import pytest

from rbmtfi import (ConfigurationError, RbmParams, load_params, log_derivatives,
                    log_psi, make_cache, psi_ratio, random_spins, save_params,
                    shift, update_cache)
from rbmtfi.rbm import compute_theta, lncosh2


def brute_force_psi(w, spins):
    """Explicit trace over all hidden configurations: the defining sum
    Psi = sum_h exp(sum_{i,j} w[(i-j)%L] s_i h_j)."""
    L = len(spins)
    total = 0.0
    for hidden in itertools.product((1, -1), repeat=L):
        e = 0.0
        for i in range(L):
            for j in range(L):
                e += w[(i - j) % L] * spins[i] * hidden[j]
        total += math.exp(e)
    return total


def random_params(L, rng, scale=0.4):
    return RbmParams(rng.uniform(-scale, scale, L))


def test_log_psi_zero_couplings():
    L = 8
    params = RbmParams(np.zeros(L))
    rng = np.random.default_rng(0)
    for _ in range(5):
        assert log_psi(params, random_spins(L, rng)) == pytest.approx(L * math.log(2), abs=1e-14)


def test_log_psi_onsite_coupling_only():
    L = 6
    w = np.zeros(L)
    w[0] = 0.37
    params = RbmParams(w)
    expected = L * math.log(2 * math.cosh(0.37))
    rng = np.random.default_rng(1)
    for _ in range(5):
        assert log_psi(params, random_spins(L, rng)) == pytest.approx(expected, abs=1e-12)


def test_log_psi_matches_hidden_trace():
    rng = np.random.default_rng(7)
    L = 8
    for _ in range(3):
        params = random_params(L, rng)
        spins = random_spins(L, rng)
        brute = brute_force_psi(params.w, spins)
        assert math.exp(log_psi(params, spins)) == pytest.approx(brute, rel=1e-8)


def test_log_psi_symmetries():
    rng = np.random.default_rng(8)
    L = 8
    params = random_params(L, rng)
    spins = random_spins(L, rng)
    ref = log_psi(params, spins)
    for s in range(L):
        assert log_psi(params, shift(spins, s)) == pytest.approx(ref, abs=1e-10)
    assert log_psi(params, -spins) == pytest.approx(ref, abs=1e-12)
    assert log_psi(RbmParams(-params.w), spins) == pytest.approx(ref, abs=1e-12)


def test_log_psi_no_overflow():
    L = 8
    w = np.zeros(L)
    w[0] = 500.0
    rng = np.random.default_rng(9)
    value = log_psi(RbmParams(w), random_spins(L, rng))
    assert math.isfinite(value)
    # ln 2cosh(500) = 500 up to an exponentially small term; stay within the
    # per-site ln 2 slack of the nominal L*(500 + ln 2) figure.
    assert abs(value - L * 500.0) <= L * math.log(2)


def test_log_psi_dimension_mismatch():
    with pytest.raises(ConfigurationError):
        log_psi(RbmParams(np.zeros(6)), np.ones(8, dtype=np.int8))


def test_psi_ratio_trivial_and_involution():
    rng = np.random.default_rng(10)
    L = 10
    zero = RbmParams(np.zeros(L))
    spins = random_spins(L, rng)
    cache = make_cache(zero, spins)
    for site in range(L):
        assert psi_ratio(zero, cache, spins, site) == pytest.approx(1.0, abs=1e-15)

    params = random_params(L, rng)
    spins = random_spins(L, rng)
    cache = make_cache(params, spins)
    for site in (0, 3, 9):
        r = psi_ratio(params, cache, spins, site)
        flipped = spins.copy()
        flipped[site] = -flipped[site]
        r_back = psi_ratio(params, make_cache(params, flipped), flipped, site)
        assert r * r_back == pytest.approx(1.0, rel=1e-12)
        assert r > 0


def test_psi_ratio_matches_recomputation():
    rng = np.random.default_rng(11)
    L = 10
    for _ in range(3):
        params = random_params(L, rng)
        spins = random_spins(L, rng)
        cache = make_cache(params, spins)
        base = log_psi(params, spins)
        for site in range(L):
            flipped = spins.copy()
            flipped[site] = -flipped[site]
            expected = math.exp(log_psi(params, flipped) - base)
            assert psi_ratio(params, cache, spins, site) == pytest.approx(expected, rel=1e-10)


def test_psi_ratio_site_out_of_range():
    params = RbmParams(np.zeros(4))
    spins = np.ones(4, dtype=np.int8)
    cache = make_cache(params, spins)
    with pytest.raises(ConfigurationError):
        psi_ratio(params, cache, spins, 4)


def test_update_cache_flip_twice_restores():
    rng = np.random.default_rng(12)
    L = 9
    params = random_params(L, rng)
    spins = random_spins(L, rng)
    cache = make_cache(params, spins)
    original = cache.theta.copy()
    update_cache(cache, params, spins, 4)
    flipped = spins.copy()
    flipped[4] = -flipped[4]
    update_cache(cache, params, flipped, 4)
    np.testing.assert_allclose(cache.theta, original, atol=1e-12)


def test_update_cache_zero_couplings_noop():
    params = RbmParams(np.zeros(5))
    spins = np.ones(5, dtype=np.int8)
    cache = make_cache(params, spins)
    update_cache(cache, params, spins, 2)
    np.testing.assert_array_equal(cache.theta, np.zeros(5))


def test_update_cache_long_run_consistency():
    rng = np.random.default_rng(13)
    L = 8
    params = random_params(L, rng)
    spins = random_spins(L, rng)
    cache = make_cache(params, spins)
    for _ in range(10_000):
        site = int(rng.integers(L))
        update_cache(cache, params, spins, site)
        spins[site] = -spins[site]
    np.testing.assert_allclose(cache.theta, compute_theta(params, spins), atol=1e-8)


def test_log_derivatives_zero_couplings():
    L = 7
    params = RbmParams(np.zeros(L))
    rng = np.random.default_rng(14)
    spins = random_spins(L, rng)
    np.testing.assert_array_equal(log_derivatives(params, make_cache(params, spins), spins),
                                  np.zeros(L))


def test_log_derivatives_match_finite_differences():
    rng = np.random.default_rng(15)
    L = 8
    eps = 1e-5
    for _ in range(3):
        params = random_params(L, rng)
        spins = random_spins(L, rng)
        derivs = log_derivatives(params, make_cache(params, spins), spins)
        for d in range(L):
            wp = params.w.copy()
            wm = params.w.copy()
            wp[d] += eps
            wm[d] -= eps
            fd = (log_psi(RbmParams(wp), spins) - log_psi(RbmParams(wm), spins)) / (2 * eps)
            assert derivs[d] == pytest.approx(fd, abs=1e-6)


def test_log_derivatives_translation_covariance():
    rng = np.random.default_rng(16)
    L = 8
    params = random_params(L, rng)
    spins = random_spins(L, rng)
    ref = log_derivatives(params, make_cache(params, spins), spins)
    for s in range(1, L):
        moved = shift(spins, s)
        np.testing.assert_allclose(
            log_derivatives(params, make_cache(params, moved), moved), ref, atol=1e-10)


def test_lncosh2_values():
    assert lncosh2(0.0) == pytest.approx(math.log(2), abs=1e-15)
    for x in (-3.0, -0.5, 0.2, 2.7):
        assert lncosh2(x) == pytest.approx(math.log(2 * math.cosh(x)), rel=1e-14)
    assert math.isfinite(lncosh2(1e6))


def test_params_validation():
    with pytest.raises(ConfigurationError):
        RbmParams(np.array([1.0, np.inf]))
    with pytest.raises(ConfigurationError):
        RbmParams(np.array([0.5]))
    params = RbmParams(np.arange(4.0))
    assert params.L == 4 and params.n_hidden == 4
    with pytest.raises(ValueError):
        params.w[0] = 3.0  # frozen view


def test_snapshot_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(17)
    # adversarial values: denormal-ish, huge, negative zero-ish
    w = np.concatenate([rng.standard_normal(5) * 1e-13,
                        rng.standard_normal(5) * 37.0,
                        np.array([1 / 3, math.pi, -2 / 7, 1e-300, 0.1, 123456.789])])
    params = RbmParams(w)
    path = tmp_path / "snapshot.txt"
    save_params(path, params)
    loaded = load_params(path)
    assert loaded.L == params.L
    assert np.array_equal(loaded.w, params.w)  # bit exact
    first = path.read_text().splitlines()[0]
    assert first == f"L {params.L}"


def test_snapshot_rejects_malformed(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("L 3\n0 0.5\n1 0.25\n")
    with pytest.raises(ConfigurationError):
        load_params(path)
    path.write_text("nonsense\n")
    with pytest.raises(ConfigurationError):
        load_params(path)
