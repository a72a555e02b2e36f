"""Ground-truth references for the periodic TFI chain.

Two independent sources: dense exact diagonalization (any L up to 14) and the
closed-form free-fermion spectrum (any even L), plus noise-free RBM
expectation values by exhaustive enumeration for small chains.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import CapabilityError
from .rbm import RbmParams, lncosh2
from .spins import TfiParams, enumerate_spins

ED_MAX_L = 14
ENUM_MAX_L = 12


@dataclass(frozen=True)
class EdResult:
    """Lowest eigenpair of the TFI chain.

    `ground_vector` is unit-norm and sign-fixed so its largest-magnitude entry
    is positive; for gamma > 0 the flip graph is connected and the vector is
    then entrywise nonnegative (Perron-Frobenius).  At gamma = 0 the ground
    space is two-fold degenerate and only the energy is meaningful."""

    ground_energy: float
    ground_vector: np.ndarray


def build_hamiltonian(L: int, tfi: TfiParams) -> np.ndarray:
    """Dense 2^L x 2^L TFI Hamiltonian in the bit basis of enumerate_spins."""
    if not 2 <= L <= ED_MAX_L:
        raise CapabilityError(f"dense diagonalization supports 2 <= L <= {ED_MAX_L}, got L={L}")
    spins = enumerate_spins(L).astype(np.float64)
    diag = -np.einsum("si,si->s", spins, np.roll(spins, -1, axis=1))
    dim = 2**L
    h = np.zeros((dim, dim))
    np.fill_diagonal(h, diag)
    states = np.arange(dim)
    for i in range(L):
        h[states, states ^ (1 << i)] = -tfi.gamma
    return h


def ed_ground_state(L: int, tfi: TfiParams) -> EdResult:
    """Lowest eigenpair by dense symmetric diagonalization."""
    h = build_hamiltonian(L, tfi)
    vals, vecs = scipy.linalg.eigh(h, subset_by_index=(0, 0), overwrite_a=True)
    v = vecs[:, 0]
    v = v / np.linalg.norm(v)
    if v[np.argmax(np.abs(v))] < 0:
        v = -v
    return EdResult(float(vals[0]), v)


def free_fermion_energy(L: int, tfi: TfiParams) -> float:
    """Exact ground-state energy for even L:

        E0 = -sum_{n=0}^{L-1} sqrt(1 + G^2 - 2 G cos k_n),  k_n = (2n+1) pi / L.

    The antiperiodic momenta are the even-fermion-parity sector, where the
    ground state of the periodic chain lives; correctness is pinned by the
    cross-check against dense diagonalization rather than by re-deriving the
    boundary analysis."""
    if L < 2 or L % 2 != 0:
        raise CapabilityError(f"free-fermion energy requires even L >= 2, got L={L}")
    g = tfi.gamma
    k = (2.0 * np.arange(L) + 1.0) * np.pi / L
    return float(-np.sum(np.sqrt(1.0 + g * g - 2.0 * g * np.cos(k))))


@dataclass(frozen=True)
class ExactMoments:
    """Noise-free variational quantities under weights Psi(s)^2 over all 2^L
    configurations: the energy, mean log-derivatives, their covariance S, the
    force F, and the local-energy variance (zero for an exact eigenstate)."""

    energy: float
    o_mean: np.ndarray
    s_matrix: np.ndarray
    f_vector: np.ndarray
    eloc_var: float


def _all_log_psi_theta(params: RbmParams, spins: np.ndarray):
    """theta matrix (n_states, L) and ln Psi for every enumerated config."""
    w = params.w
    L = w.shape[0]
    mat = np.empty((L, L))
    for j in range(L):
        mat[j] = np.roll(w, j)
    theta = spins @ mat.T  # theta[s, j] = sum_i w[(i-j)%L] spins[s, i]
    return theta, np.sum(lncosh2(theta), axis=1)


def psi_vector(params: RbmParams, L: int) -> np.ndarray:
    """Unit-norm amplitude vector over the enumerate_spins basis."""
    spins = enumerate_spins(L).astype(np.float64)
    _, logpsi = _all_log_psi_theta(params, spins)
    amp = np.exp(logpsi - np.max(logpsi))
    return amp / np.linalg.norm(amp)


def exact_expectations(params: RbmParams, tfi: TfiParams, L: int | None = None) -> ExactMoments:
    """<E_loc>, <O>, S and F by full enumeration of the 2^L configurations."""
    if L is None:
        L = params.L
    if L != params.L:
        raise CapabilityError(f"parameter length {params.L} != requested L={L}")
    if L > ENUM_MAX_L:
        raise CapabilityError(f"full enumeration supports L <= {ENUM_MAX_L}, got L={L}")
    w = params.w
    spins = enumerate_spins(L).astype(np.float64)
    theta, logpsi = _all_log_psi_theta(params, spins)
    lc = lncosh2(theta)

    weight = np.exp(2.0 * (logpsi - np.max(logpsi)))
    weight /= weight.sum()

    e_diag = -np.einsum("si,si->s", spins, np.roll(spins, -1, axis=1))
    ratio_sum = np.zeros(spins.shape[0])
    for i in range(L):
        wv = w[(i - np.arange(L)) % L]
        theta_flip = theta - 2.0 * spins[:, i:i + 1] * wv[None, :]
        ratio_sum += np.exp(np.sum(lncosh2(theta_flip) - lc, axis=1))
    e_loc = e_diag - tfi.gamma * ratio_sum

    t = np.tanh(theta)
    o = np.empty((spins.shape[0], L))
    for d in range(L):
        o[:, d] = np.einsum("sj,sj->s", t, np.roll(spins, -d, axis=1))

    energy = float(np.dot(weight, e_loc))
    o_mean = weight @ o
    s_matrix = (o * weight[:, None]).T @ o - np.outer(o_mean, o_mean)
    f_vector = (weight * e_loc) @ o - energy * o_mean
    eloc_var = float(np.dot(weight, (e_loc - energy) ** 2))
    return ExactMoments(energy, o_mean, s_matrix, f_vector, eloc_var)
