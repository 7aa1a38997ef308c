"""Seeded random channel instances with i.i.d. CSCG(0, 1) coefficients."""
import numpy as np

from .channel import MisoChannel, SimoChannel, SisoChannel

__all__ = ["cscg", "random_siso", "random_simo", "random_miso", "random_channel"]


def cscg(rng, size):
    """Circularly symmetric complex Gaussian samples with unit variance."""
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2.0)


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_siso(K, seed=0, noise=1.0, pmax=3.0, weights=1.0):
    """Power gains ``|h|^2`` of unit-variance CSCG coefficients."""
    rng = _rng(seed)
    gain = np.abs(cscg(rng, (K, K))) ** 2
    return SisoChannel(gain, noise, pmax, weights)


def random_simo(K, M=2, seed=0, noise=1.0, pmax=3.0, weights=1.0):
    rng = _rng(seed)
    M = np.broadcast_to(np.asarray(M, dtype=int), (K,))
    h = [[cscg(rng, M[k]) for _ in range(K)] for k in range(K)]
    return SimoChannel(h, noise, pmax, weights)


def random_miso(K, N=2, seed=0, noise=1.0, pmax=3.0, weights=1.0):
    rng = _rng(seed)
    N = np.broadcast_to(np.asarray(N, dtype=int), (K,))
    h = [[cscg(rng, N[j]) for j in range(K)] for _ in range(K)]
    return MisoChannel(h, noise, pmax, weights)


def random_channel(topology, K, seed=0, antennas=2, **kw):
    if topology == "siso":
        return random_siso(K, seed, **kw)
    if topology == "simo":
        return random_simo(K, antennas, seed, **kw)
    if topology == "miso":
        return random_miso(K, antennas, seed, **kw)
    raise ValueError(f"unknown topology {topology!r}")
