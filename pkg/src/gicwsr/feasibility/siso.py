"""SINR-target feasibility for SISO interference channels.

A target ``gbar`` is achievable under per-user budgets iff the normalized
gain matrix ``G`` has spectral radius below one and the component-wise
minimal power ``(I - G)^{-1} eta`` fits in the budgets.
"""
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..errors import SpectralRadiusAtLeastOne
from .outcome import FeasibilityOutcome

__all__ = [
    "NormalizedGainSystem",
    "normalized_system",
    "spectral_radius",
    "min_power",
    "check_feasible",
    "RHO_GUARD",
]

# rho within this margin of 1 counts as infeasible
RHO_GUARD = 1e-12
# relative budget slack accepted as feasible (power is clipped to the budget)
POWER_SLACK = 1e-9


@dataclass(frozen=True)
class NormalizedGainSystem:
    """``G`` and ``eta`` restricted to the users with a positive target.

    ``active`` holds the original user indices of the rows of ``G``.
    """

    G: np.ndarray
    eta: np.ndarray
    active: np.ndarray
    K: int


def normalized_system(gain, noise, gbar):
    """Build ``G[k, j] = gbar_k gain[k, j] / gain[k, k]`` and ``eta``.

    ``gain`` is a K x K matrix of power gains (row = receiver). Users with a
    zero target are dropped: they transmit nothing and cause no interference.
    """
    gain = np.asarray(gain, dtype=float)
    noise = np.asarray(noise, dtype=float)
    gbar = np.asarray(gbar, dtype=float)
    K = gain.shape[0]
    active = np.flatnonzero(gbar > 0)
    sub = gain[np.ix_(active, active)]
    d = np.diag(sub)
    g = gbar[active]
    G = (g / d)[:, None] * sub
    np.fill_diagonal(G, 0.0)
    eta = g * noise[active] / d
    return NormalizedGainSystem(G=G, eta=eta, active=active, K=K)


def spectral_radius(G):
    """Largest eigenvalue magnitude of a nonnegative square matrix."""
    G = np.ascontiguousarray(G, dtype=float)
    if G.size == 0:
        return 0.0
    rho, _, ok = kernels.perron_root(G, 1e-13, 500)
    if not ok:
        rho = float(np.max(np.abs(np.linalg.eigvals(G))))
    return float(rho)


def min_power(system):
    """Component-wise minimal power meeting every target with equality.

    Returns the full length-K power vector (zero for inactive users).
    """
    p = np.zeros(system.K)
    if system.active.size == 0:
        return p
    rho = spectral_radius(system.G)
    if rho >= 1.0 - RHO_GUARD:
        raise SpectralRadiusAtLeastOne(f"spectral radius {rho:.12g} >= 1")
    return _solve(system)


def _solve(system):
    p = np.zeros(system.K)
    n = system.active.size
    p[system.active] = np.linalg.solve(np.eye(n) - system.G, system.eta)
    return p


def _decide(gain, noise, pmax, gbar):
    system = normalized_system(gain, noise, gbar)
    if system.active.size == 0:
        return FeasibilityOutcome(True, {"p": np.zeros(system.K)}, {"rho": 0.0})
    rho = spectral_radius(system.G)
    if rho >= 1.0 - RHO_GUARD:
        return FeasibilityOutcome(False, None, {"rho": rho})
    p = _solve(system)
    if np.any(p < 0) or np.any(p > pmax * (1 + POWER_SLACK)):
        return FeasibilityOutcome(False, None, {"rho": rho, "p_min": p})
    return FeasibilityOutcome(True, {"p": np.minimum(p, pmax)}, {"rho": rho})


def check_feasible(ch, gbar):
    """Feasibility of the SINR target ``gbar`` on a :class:`SisoChannel`."""
    gbar = np.asarray(gbar, dtype=float)
    return _decide(ch.gain, ch.noise, ch.pmax, gbar)
