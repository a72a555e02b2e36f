"""Periodic 1D Ising spin chains and the transverse-field Ising model definition.

A spin configuration is a 1-D integer array of length L whose entries are
exactly -1 or +1.  All index arithmetic is modulo L (site L is site 0).
Configurations handed across module boundaries are treated as immutable;
samplers mutate only their own working copies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

SPIN_DTYPE = np.int8


@dataclass(frozen=True)
class TfiParams:
    """Transverse-field Ising chain couplings, -J sum_z z z - Gamma sum_x,
    with J = 1 fixed as the energy unit.

    gamma >= 0; gamma = 0 is the classical Ising limit, kept for tests.
    """

    gamma: float

    def __post_init__(self):
        if not np.isfinite(self.gamma) or self.gamma < 0.0:
            raise ConfigurationError(f"gamma must be finite and >= 0, got {self.gamma}")

    @property
    def j(self) -> float:
        return 1.0


def as_spins(values) -> np.ndarray:
    """Validate and return a spin configuration as an int8 array of +-1."""
    spins = np.asarray(values)
    if spins.ndim != 1 or spins.shape[0] < 2:
        raise ConfigurationError(f"spin configuration must be 1-D with L >= 2, got shape {spins.shape}")
    if not np.all(np.abs(spins) == 1):
        raise ConfigurationError("spin entries must be exactly -1 or +1")
    return spins.astype(SPIN_DTYPE)


def random_spins(L: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random +-1 configuration of length L."""
    if L < 2:
        raise ConfigurationError(f"chain length must be >= 2, got {L}")
    return np.where(rng.random(L) < 0.5, 1, -1).astype(SPIN_DTYPE)


def enumerate_spins(L: int) -> np.ndarray:
    """All 2^L configurations as a (2^L, L) array.

    Row s encodes the basis state with spin_i = 1 - 2*((s >> i) & 1), i.e. an
    unset bit is spin +1.  The same encoding is used by the exact
    diagonalization, so amplitude vectors index directly into these rows.
    """
    if L > 24:
        raise ConfigurationError(f"refusing to enumerate 2^{L} configurations")
    states = np.arange(2**L, dtype=np.int64)
    bits = (states[:, None] >> np.arange(L)[None, :]) & 1
    return (1 - 2 * bits).astype(SPIN_DTYPE)


def diagonal_energy(spins: np.ndarray) -> float:
    """Nearest-neighbour Ising energy -sum_i s_i s_{i+1} with periodic wrap.

    This is the field-independent diagonal part of the TFI Hamiltonian.
    """
    s = np.asarray(spins, dtype=np.float64)
    return float(-np.dot(s, np.roll(s, -1)))


def shift(spins: np.ndarray, s: int) -> np.ndarray:
    """Translate the chain: entry i of the result is spins[(i + s) mod L]."""
    return np.roll(spins, -s)
