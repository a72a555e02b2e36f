"""Numba-compiled Monte Carlo inner loops.

These kernels are the hot path behind vmc.estimate, sr.optimize and
thermo.thermal_sample.  Each call runs one chain to completion: it receives
the chain's own state arrays (mutated in place, enabling warm restarts), the
chain's own RNG state, and preallocated output buffers.  Because a call
touches nothing shared, chains can run on a thread pool (the kernels release
the GIL) and the merged result is bit-identical regardless of scheduling.

Randomness comes from an explicit-state xoshiro256++ stream rather than
numba's np.random shim: the latter keeps process-global state, which would
make concurrently running chains non-reproducible.  States are derived from
numpy SeedSequence, one stream per (seed, chain) pair.

The slow-path reference implementations live in rbm.py / vmc.py / thermo.py;
unit tests pin the kernels against them through distribution and enumeration
checks.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .rbm import RECOMPUTE_EVERY

_U64 = np.uint64
_INV_2_53 = 1.0 / 9007199254740992.0  # 2^-53


def make_rng_state(*entropy) -> np.ndarray:
    """Fresh xoshiro256++ state (uint64[4]) keyed on the given integers."""
    ss = np.random.SeedSequence([int(e) for e in entropy])
    return ss.generate_state(4, np.uint64)


@njit(cache=True, nogil=True, inline="always")
def _rng_next(state):
    s0 = state[0]
    s1 = state[1]
    s2 = state[2]
    s3 = state[3]
    tmp = s0 + s3
    out = ((tmp << _U64(23)) | (tmp >> _U64(41))) + s0
    t = s1 << _U64(17)
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = (s3 << _U64(45)) | (s3 >> _U64(19))
    state[0] = s0
    state[1] = s1
    state[2] = s2
    state[3] = s3
    return out


@njit(cache=True, nogil=True, inline="always")
def rng_uniform(state):
    """Uniform double in [0, 1) with 53 random bits."""
    return (_rng_next(state) >> _U64(11)) * _INV_2_53


@njit(cache=True, nogil=True, inline="always")
def rng_site(state, n):
    """Uniform site index in [0, n); bias O(n/2^53) is irrelevant here."""
    k = int(rng_uniform(state) * n)
    if k == n:  # guard the measure-zero edge of float rounding
        k = n - 1
    return k


@njit(cache=True, nogil=True)
def nb_lncosh2(x):
    ax = abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax))


@njit(cache=True, nogil=True)
def nb_refresh_vmc(w, spins, theta, lc):
    """Recompute theta_j = sum_i w[(i-j)%L] s_i and its log-cosh table."""
    L = w.shape[0]
    for j in range(L):
        acc = 0.0
        for i in range(L):
            d = i - j
            if d < 0:
                d += L
            acc += w[d] * spins[i]
        theta[j] = acc
        lc[j] = nb_lncosh2(acc)


@njit(cache=True, nogil=True)
def nb_vmc_sweep(w, spins, theta, lc, new_theta, new_lc, drift, rng):
    """L single-site Metropolis proposals on |Psi|^2, then the global Z2 flip.

    The global flip (always accepted, Psi(-s) = Psi(s)) keeps the chain
    ergodic across the two magnetization sectors deep in the ordered phase.
    Returns the number of accepted single-site flips; `drift` carries the
    incremental-update count that triggers a full refresh every
    RECOMPUTE_EVERY updates."""
    L = w.shape[0]
    n_acc = 0
    count = drift[0]
    for _ in range(L):
        site = rng_site(rng, L)
        s = spins[site]
        acc = 0.0
        for j in range(L):
            d = site - j
            if d < 0:
                d += L
            nt = theta[j] - 2.0 * w[d] * s
            nl = nb_lncosh2(nt)
            new_theta[j] = nt
            new_lc[j] = nl
            acc += nl - lc[j]
        # acceptance min(1, ratio^2) with ratio = exp(acc)
        if acc >= 0.0 or rng_uniform(rng) < np.exp(2.0 * acc):
            spins[site] = -s
            for j in range(L):
                theta[j] = new_theta[j]
                lc[j] = new_lc[j]
            n_acc += 1
            count += 1
            if count >= RECOMPUTE_EVERY:
                nb_refresh_vmc(w, spins, theta, lc)
                count = 0
    for i in range(L):
        spins[i] = -spins[i]
        theta[i] = -theta[i]
    drift[0] = count
    return n_acc


@njit(cache=True, nogil=True)
def nb_local_energy(w, gamma, spins, theta, lc):
    """E_loc(s) = -sum_i s_i s_{i+1} - gamma * sum_i Psi(s^flip_i)/Psi(s)."""
    L = w.shape[0]
    e_diag = 0.0
    for i in range(L):
        inext = i + 1
        if inext == L:
            inext = 0
        e_diag -= spins[i] * spins[inext]
    ratio_sum = 0.0
    for i in range(L):
        s = spins[i]
        acc = 0.0
        for j in range(L):
            d = i - j
            if d < 0:
                d += L
            acc += nb_lncosh2(theta[j] - 2.0 * w[d] * s) - lc[j]
        ratio_sum += np.exp(acc)
    return e_diag - gamma * ratio_sum


@njit(cache=True, nogil=True)
def nb_run_vmc_chain(w, gamma, spins, theta, lc, n_burnin, n_meas, rng,
                     e_out, sum_o, sum_oo, sum_eo):
    """Burn in, then measure E_loc and the log-derivative moments each sweep.

    Accumulates sum O_d, sum O_d O_d' and sum E O_d into the provided buffers
    and stores the E_loc series in e_out.  Returns accepted-flip count."""
    L = w.shape[0]
    nb_refresh_vmc(w, spins, theta, lc)
    new_theta = np.empty(L)
    new_lc = np.empty(L)
    tbuf = np.empty(L)
    obuf = np.empty(L)
    drift = np.zeros(1, dtype=np.int64)
    n_acc = 0
    for _ in range(n_burnin):
        n_acc += nb_vmc_sweep(w, spins, theta, lc, new_theta, new_lc, drift, rng)
    for m in range(n_meas):
        n_acc += nb_vmc_sweep(w, spins, theta, lc, new_theta, new_lc, drift, rng)
        e = nb_local_energy(w, gamma, spins, theta, lc)
        e_out[m] = e
        for j in range(L):
            tbuf[j] = np.tanh(theta[j])
        for d in range(L):
            acc = 0.0
            for j in range(L):
                jd = j + d
                if jd >= L:
                    jd -= L
                acc += tbuf[j] * spins[jd]
            obuf[d] = acc
        for a in range(L):
            oa = obuf[a]
            sum_o[a] += oa
            sum_eo[a] += e * oa
            for b in range(L):
                sum_oo[a, b] += oa * obuf[b]
    return n_acc


@njit(cache=True, nogil=True)
def nb_run_vmc_visits(w, spins, theta, lc, n_burnin, n_sweeps, thin, rng, counts):
    """Sample |Psi|^2 and histogram the visited configurations.

    Records the bit-encoded state (bit i set when spin i is -1) every `thin`
    sweeps; counts must have length 2^L."""
    L = w.shape[0]
    nb_refresh_vmc(w, spins, theta, lc)
    new_theta = np.empty(L)
    new_lc = np.empty(L)
    drift = np.zeros(1, dtype=np.int64)
    for _ in range(n_burnin):
        nb_vmc_sweep(w, spins, theta, lc, new_theta, new_lc, drift, rng)
    for t in range(n_sweeps):
        nb_vmc_sweep(w, spins, theta, lc, new_theta, new_lc, drift, rng)
        if (t + 1) % thin == 0:
            idx = 0
            for i in range(L):
                if spins[i] < 0:
                    idx |= 1 << i
            counts[idx] += 1


@njit(cache=True, nogil=True)
def nb_refresh_thermal(w, sv, sh, theta, phi):
    """Recompute both effective-field caches of the joint (visible, hidden)
    system and return the current energy -sum_j h_j theta_j."""
    L = w.shape[0]
    e = 0.0
    for j in range(L):
        acc = 0.0
        for i in range(L):
            d = i - j
            if d < 0:
                d += L
            acc += w[d] * sv[i]
        theta[j] = acc
        e -= sh[j] * acc
    for i in range(L):
        acc = 0.0
        for j in range(L):
            d = i - j
            if d < 0:
                d += L
            acc += w[d] * sh[j]
        phi[i] = acc
    return e


@njit(cache=True, nogil=True)
def nb_thermal_sweep(w, beta, sv, sh, theta, phi, energy, drift, rng):
    """2L single-spin Metropolis proposals over both layers at inverse
    temperature beta, then the joint global flip of both layers (exactly
    energy-invariant, so always accepted).

    energy and drift are length-1 carriers so the running values survive the
    call.  Returns accepted count."""
    L = w.shape[0]
    e = energy[0]
    count = drift[0]
    n_acc = 0
    for _ in range(2 * L):
        idx = rng_site(rng, 2 * L)
        if idx < L:
            i = idx
            s = sv[i]
            de = 2.0 * s * phi[i]
            if de <= 0.0 or rng_uniform(rng) < np.exp(-beta * de):
                sv[i] = -s
                for j in range(L):
                    d = i - j
                    if d < 0:
                        d += L
                    theta[j] -= 2.0 * w[d] * s
                e += de
                n_acc += 1
                count += 1
        else:
            j = idx - L
            h = sh[j]
            de = 2.0 * h * theta[j]
            if de <= 0.0 or rng_uniform(rng) < np.exp(-beta * de):
                sh[j] = -h
                for i in range(L):
                    d = i - j
                    if d < 0:
                        d += L
                    phi[i] -= 2.0 * w[d] * h
                e += de
                n_acc += 1
                count += 1
        if count >= RECOMPUTE_EVERY:
            e = nb_refresh_thermal(w, sv, sh, theta, phi)
            count = 0
    for i in range(L):
        sv[i] = -sv[i]
        sh[i] = -sh[i]
        theta[i] = -theta[i]
        phi[i] = -phi[i]
    energy[0] = e
    drift[0] = count
    return n_acc


@njit(cache=True, nogil=True)
def nb_run_thermal_chain(w, beta, sv, sh, n_burnin, n_meas, rng, e_out, m_out):
    """Burn in, then record the joint energy and both layer magnetizations
    after every sweep.  m_out has shape (n_meas, 2)."""
    L = w.shape[0]
    theta = np.empty(L)
    phi = np.empty(L)
    energy = np.empty(1)
    energy[0] = nb_refresh_thermal(w, sv, sh, theta, phi)
    drift = np.zeros(1, dtype=np.int64)
    n_acc = 0
    for _ in range(n_burnin):
        n_acc += nb_thermal_sweep(w, beta, sv, sh, theta, phi, energy, drift, rng)
    for m in range(n_meas):
        n_acc += nb_thermal_sweep(w, beta, sv, sh, theta, phi, energy, drift, rng)
        e_out[m] = energy[0]
        mv = 0.0
        mh = 0.0
        for i in range(L):
            mv += sv[i]
            mh += sh[i]
        m_out[m, 0] = mv
        m_out[m, 1] = mh
    return n_acc


@njit(cache=True, nogil=True)
def nb_run_thermal_visits(w, beta, sv, sh, n_burnin, n_sweeps, thin, rng, counts):
    """Histogram visited joint states; counts must have length 2^(2L).

    Bit i encodes visible spin i, bit L+j hidden spin j (set when -1)."""
    L = w.shape[0]
    theta = np.empty(L)
    phi = np.empty(L)
    energy = np.empty(1)
    energy[0] = nb_refresh_thermal(w, sv, sh, theta, phi)
    drift = np.zeros(1, dtype=np.int64)
    for _ in range(n_burnin):
        nb_thermal_sweep(w, beta, sv, sh, theta, phi, energy, drift, rng)
    for t in range(n_sweeps):
        nb_thermal_sweep(w, beta, sv, sh, theta, phi, energy, drift, rng)
        if (t + 1) % thin == 0:
            idx = 0
            for i in range(L):
                if sv[i] < 0:
                    idx |= 1 << i
                if sh[i] < 0:
                    idx |= 1 << (L + i)
            counts[idx] += 1
