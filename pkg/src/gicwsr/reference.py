"""Brute-force reference oracles.

These are slow, one-sided checks used to validate the exact solvers:
exhaustive power grids for SISO, seeded random search over powers and
beamformers for SIMO/MISO, central finite differences, and a fixed-point
SISO feasibility test that never forms a spectral radius.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .channel import rate_of, sinr_miso, sinr_siso, sinr_simo_mmse
from .errors import ConfigError

__all__ = [
    "grid_wsr_siso",
    "SearchResult",
    "random_search_simo",
    "random_search_miso",
    "finite_diff",
    "siso_fixed_point_feasible",
    "GRID_POINT_CAP",
]

GRID_POINT_CAP = 200_000_000


def _rmin_vec(rmin, K):
    if rmin is None:
        return np.zeros(K)
    r = getattr(rmin, "rmin", rmin)
    return np.broadcast_to(np.asarray(r, dtype=float), (K,)).copy()


def grid_wsr_siso(ch, grid_points_per_dim=21, rmin=None, cap=GRID_POINT_CAP,
                  corner_first=True):
    """Exhaustive WSR search over a uniform power grid.

    Parameters
    ----------
    ch : SisoChannel
    grid_points_per_dim : int
        Points per user on ``[0, pmax_k]``, endpoints included.
    rmin : array or MinRateConstraint, optional
        Grid points violating a minimum rate are skipped.
    cap : int
        Refuse grids larger than this many points.
    corner_first : bool
        For two users, score the on/off corners first; the two-user optimum
        is known to be binary, so this is a fast lower bound.

    Returns
    -------
    (float, ndarray)
        Best weighted sum-rate and the maximizing powers. The value is
        ``-inf`` with zero powers when no grid point meets ``rmin``.
    """
    K = ch.K
    n = int(grid_points_per_dim)
    if n < 2:
        raise ConfigError("grid needs at least 2 points per dimension")
    if float(n) ** K > cap:
        raise ConfigError(f"grid of {n}^{K} points exceeds the cap of {cap}")
    r = _rmin_vec(rmin, K)
    gain = np.ascontiguousarray(ch.gain)
    best, best_p = -np.inf, np.zeros(K)
    if corner_first and K == 2:
        best, idx = kernels.grid_wsr(gain, ch.noise, ch.weights, ch.pmax, 2, r)
        if np.isfinite(best):
            best_p = ch.pmax * idx
    val, idx = kernels.grid_wsr(gain, ch.noise, ch.weights, ch.pmax, n, r)
    if val > best:
        best, best_p = float(val), ch.pmax * idx / (n - 1)
    if np.isfinite(best):
        # re-verify through the channel model
        rates = rate_of(sinr_siso(ch, best_p))
        best = float(np.dot(ch.weights, rates))
    return best, best_p


@dataclass(frozen=True)
class SearchResult:
    """Best sample of a random search.

    In target mode ``found`` tells whether some sample met every SINR
    target and ``value`` is the best ``min_k sinr_k / target_k``. In WSR mode
    ``value`` is the best weighted sum-rate.
    """

    value: float
    witness: Optional[dict]
    found: bool
    samples: int


def _score(gam, gbar, weights):
    if gbar is None:
        return rate_of(gam) @ weights
    act = gbar > 0
    if not act.any():
        return np.full(gam.shape[0], np.inf)
    return np.min(gam[:, act] / gbar[act], axis=1)


def random_search_simo(ch, gbar=None, samples=10_000, seed=0, batch=2048):
    """Random powers in the budget box with MMSE receivers.

    MMSE reception is SINR-optimal for given powers, so sampling receivers
    as well would only weaken the search.
    """
    rng = np.random.default_rng(seed)
    K = ch.K
    gbar = None if gbar is None else np.asarray(gbar, dtype=float)
    best, best_p = -np.inf, None
    done = 0
    while done < samples:
        m = min(batch, samples - done)
        P = rng.uniform(0.0, 1.0, size=(m, K)) * ch.pmax
        gam = np.empty((m, K))
        for k in range(K):
            Hk = np.asarray(ch.H[k])
            others = P.copy()
            others[:, k] = 0.0
            R = np.einsum("mj,aj,bj->mab", others, Hk, Hk.conj())
            R += ch.noise[k] * np.eye(Hk.shape[0])
            x = np.linalg.solve(R, np.broadcast_to(ch.h[k][k], (m, Hk.shape[0]))[..., None])
            gam[:, k] = P[:, k] * np.einsum("a,ma->m", ch.h[k][k].conj(), x[..., 0]).real
        s = _score(gam, gbar, ch.weights)
        i = int(np.argmax(s))
        if s[i] > best:
            best, best_p = float(s[i]), P[i].copy()
        done += m
    # re-verify the winner through the channel model
    gam, W = sinr_simo_mmse(ch, best_p, return_receivers=True)
    value = float(_score(gam[None, :], gbar, ch.weights)[0])
    found = gbar is not None and bool(np.all(gam >= gbar))
    return SearchResult(value, {"p": best_p, "W": W}, found, samples)


def _unit_complex(rng, shape):
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def random_search_miso(ch, gbar=None, samples=10_000, seed=0, batch=4096):
    """Uniform-sphere beam directions with powers uniform in the budget."""
    rng = np.random.default_rng(seed)
    K = ch.K
    N = ch.antennas
    gbar = None if gbar is None else np.asarray(gbar, dtype=float)
    best, best_V = -np.inf, None
    done = 0
    while done < samples:
        m = min(batch, samples - done)
        V = [np.sqrt(rng.uniform(0.0, 1.0, size=(m, 1)) * ch.pmax[j])
             * _unit_complex(rng, (m, N[j])) for j in range(K)]
        A = np.empty((m, K, K))
        for k in range(K):
            for j in range(K):
                A[:, k, j] = np.abs(V[j] @ ch.h[k][j].conj()) ** 2
        d = np.einsum("mkk->mk", A)
        gam = d / (A.sum(axis=2) - d + ch.noise)
        s = _score(gam, gbar, ch.weights)
        i = int(np.argmax(s))
        if s[i] > best:
            best, best_V = float(s[i]), [V[j][i].copy() for j in range(K)]
        done += m
    gam = sinr_miso(ch, best_V)
    value = float(_score(gam[None, :], gbar, ch.weights)[0])
    found = gbar is not None and bool(np.all(gam >= gbar))
    return SearchResult(value, {"V": best_V}, found, samples)


def finite_diff(f, x, h=1e-6):
    """Central-difference gradient of scalar ``f`` at ``x``."""
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e.flat[i] = h
        g.flat[i] = (f(x + e) - f(x - e)) / (2.0 * h)
    return g


def siso_fixed_point_feasible(ch, gbar, max_iter=1_000_000, rtol=1e-13):
    """Decide SISO feasibility by iterating ``p <- G p + eta`` from ``p = eta``.

    The iterates increase monotonically to the minimal power when it exists
    and diverge otherwise, so crossing a budget proves infeasibility and a
    converged point inside the budgets proves feasibility.

    Returns
    -------
    (bool or None, ndarray)
        Decision (None if undecided within ``max_iter``) and the last iterate.
    """
    gbar = np.asarray(gbar, dtype=float)
    d = np.diag(ch.gain)
    G = (gbar / d)[:, None] * ch.gain
    np.fill_diagonal(G, 0.0)
    eta = gbar * ch.noise / d
    p = eta.copy()
    for _ in range(max_iter):
        if np.any(p > ch.pmax * (1 + 1e-9)):
            return False, p
        q = G @ p + eta
        if np.all(np.abs(q - p) <= rtol * np.maximum(q, 1e-300)):
            return bool(np.all(q <= ch.pmax * (1 + 1e-9))), q
        p = q
    return None, p
