"""SINR-target feasibility for SIMO interference channels.

Feasibility is decided through max-min SINR balancing under per-user power
budgets. The balancing problem splits into K sub-problems, each keeping one
budget; sub-problem ``i`` is solved by alternating MMSE receive beamforming
with a dominant-eigenvector power update of the extended coupling matrix
``A_i(W)``. Exactly one sub-problem solution respects every budget and it
solves the full balancing problem.
"""
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .. import kernels
from ..channel import SimoChannel, sinr_simo, sinr_simo_mmse
from ..errors import NoAdmissibleSubproblem, NonPositiveEigenvector
from . import siso
from .outcome import FeasibilityOutcome

__all__ = [
    "BalancingResult",
    "mmse_receivers",
    "extended_matrix",
    "dominant_eigenpair",
    "solve_subproblem",
    "solve_balancing",
    "check_feasible",
    "decide",
    "witness_from_powers",
]

BUDGET_SLACK = 1e-9
C_SLACK = 1e-8
WITNESS_SLACK = 2 * C_SLACK


@dataclass(frozen=True)
class BalancingResult:
    C: float
    powers: np.ndarray
    beamformers: list
    iterations: int
    index: int
    rho_trace: tuple = ()
    converged: bool = True
    diagnostics: list = field(default_factory=list)


def mmse_receivers(ch, p):
    """``w_k = (sum_{j != k} p_j h_kj h_kj^H + sigma_k^2 I)^{-1} h_kk``."""
    return sinr_simo_mmse(ch, np.asarray(p, dtype=float), return_receivers=True)[1]


def _coupling(ch, W):
    """Return ``(S, Psi, nw)``: direct gains, cross gains, noise after w."""
    K = ch.K
    Psi = np.empty((K, K))
    nw = np.empty(K)
    for k in range(K):
        w = W[k]
        Psi[k] = np.abs(w.conj() @ ch.H[k]) ** 2
        nw[k] = ch.noise[k] * np.vdot(w, w).real
    S = np.diag(Psi).copy()
    np.fill_diagonal(Psi, 0.0)
    return S, Psi, nw


def extended_matrix(ch, gbar, W, i):
    """The (K+1) x (K+1) nonnegative matrix ``A_i(W)``."""
    gbar = np.asarray(gbar, dtype=float)
    S, Psi, nw = _coupling(ch, W)
    d = gbar / S
    K = ch.K
    A = np.empty((K + 1, K + 1))
    A[:K, :K] = d[:, None] * Psi
    A[:K, K] = d * nw
    A[K, :] = A[i, :] / ch.pmax[i]
    return A


def dominant_eigenpair(A):
    """Perron root of ``A`` and its eigenvector scaled to last entry 1."""
    rho, x, ok = kernels.perron_root(np.ascontiguousarray(A), 1e-13, 1000)
    if not ok:
        vals, vecs = np.linalg.eig(A)
        j = int(np.argmax(vals.real))
        rho = float(vals[j].real)
        x = vecs[:, j].real
        x = x * np.sign(x[np.argmax(np.abs(x))])
    scale = np.max(np.abs(x))
    if not x[-1] > 1e-10 * scale or np.any(x <= 0):
        raise NonPositiveEigenvector(
            "dominant eigenvector of A_i is not strictly positive "
            f"(entries {np.array2string(x / scale, precision=3)})")
    return float(rho), x / x[-1]


def solve_subproblem(ch, gbar, i, tol=1e-8, max_iter=1000):
    """Max-min balancing keeping only the budget of user ``i``.

    Returns the balancing level ``C = 1 / rho``, the powers (``p_i`` equals
    its budget) and the receive beamformers that produced them.
    """
    gbar = np.asarray(gbar, dtype=float)
    if np.any(gbar <= 0):
        raise ValueError("solve_subproblem needs strictly positive targets")
    K = ch.K
    p = np.zeros(K)
    rho_prev = np.inf
    trace = []
    converged = False
    W = None
    for n in range(1, max_iter + 1):
        W = mmse_receivers(ch, p)
        rho, pext = dominant_eigenpair(extended_matrix(ch, gbar, W, i))
        p = pext[:K]
        trace.append(rho)
        if rho_prev - rho < tol:
            converged = True
            break
        rho_prev = rho
    return BalancingResult(C=1.0 / rho, powers=p, beamformers=W, iterations=n,
                           index=i, rho_trace=tuple(trace), converged=converged)


def solve_balancing(ch, gbar, tol=1e-8):
    """Run the sub-problems in user order, return the first admissible one."""
    gbar = np.asarray(gbar, dtype=float)
    diagnostics = []
    results = []
    for i in range(ch.K):
        try:
            res = solve_subproblem(ch, gbar, i, tol=tol)
        except NonPositiveEigenvector as exc:
            diagnostics.append({"index": i, "error": str(exc)})
            continue
        ratio = float(np.max(res.powers / ch.pmax))
        diagnostics.append({"index": i, "C": res.C, "max_budget_ratio": ratio})
        if ratio <= 1 + BUDGET_SLACK:
            return BalancingResult(res.C, res.powers, res.beamformers, res.iterations, i,
                                   res.rho_trace, res.converged, diagnostics)
        results.append((ratio, res))
    raise NoAdmissibleSubproblem("no sub-problem satisfies every power budget",
                                 diagnostics=diagnostics + [{"results": results}])


def _restrict(ch, active):
    if active.size == ch.K:
        return ch
    h = [[ch.h[k][j] for j in active] for k in active]
    return SimoChannel(h, ch.noise[active], ch.pmax[active], np.ones(active.size))


def _fallback(sub, gbar, exc):
    # numerical near-tie between budgets: scale the least-violating solution
    # back into the budgets and measure what it actually achieves
    results = exc.diagnostics[-1]["results"] if exc.diagnostics else []
    if not results:
        raise exc
    ratio, res = min(results, key=lambda t: t[0])
    p = res.powers / ratio
    gam = sinr_simo_mmse(sub, p)
    C = float(np.min(gam / gbar))
    return BalancingResult(C, p, mmse_receivers(sub, p), res.iterations, res.index,
                           res.rho_trace, False, exc.diagnostics[:-1])


@lru_cache(maxsize=16)
def _padded(ch):
    """``Hs[k, :, j] = h_{k,j}`` zero-padded to the largest receiver size."""
    K, M = ch.K, int(ch.antennas.max())
    Hs = np.zeros((K, M, K), dtype=complex)
    for k in range(K):
        Hs[k, :ch.H[k].shape[0], :] = ch.H[k]
    return Hs


def decide(ch, gbar, tol=1e-8, return_powers=False):
    """Feasibility decision only, through the compiled balancing kernel.

    Falls back to :func:`check_feasible` whenever the kernel reports anything
    but a clean admissible sub-problem. With ``return_powers`` the result is
    ``(feasible, p)`` where ``p`` is the balanced power vector (zero for
    users without a target) or None when unavailable.
    """
    gbar = np.asarray(gbar, dtype=float)
    act = np.flatnonzero(gbar > 0)
    if act.size == 0:
        return (True, np.zeros(ch.K)) if return_powers else True
    Hs = _padded(ch)
    if act.size < ch.K:
        Hs = np.ascontiguousarray(Hs[np.ix_(act, np.arange(Hs.shape[1]), act)])
    C, psub, _, status = kernels.simo_balance(Hs, np.ascontiguousarray(ch.noise[act]),
                                              np.ascontiguousarray(ch.pmax[act]),
                                              np.ascontiguousarray(gbar[act]), tol, 1000,
                                              BUDGET_SLACK)
    if status != 0:
        out = check_feasible(ch, gbar, tol)
        if return_powers:
            return out.feasible, (out.witness["p"] if out.feasible else None)
        return out.feasible
    ok = bool(C >= 1 - C_SLACK)
    if not return_powers:
        return ok
    p = np.zeros(ch.K)
    p[act] = np.minimum(psub, ch.pmax[act])
    return ok, (p if ok else None)


def _tighten(ch, gbar, p, W):
    """Lower ``p`` to the minimal powers meeting ``gbar`` at fixed receivers ``W``.

    Keeps ``p`` when the minimal-power system is singular or its solution is
    not below ``p``.
    """
    active = np.flatnonzero(gbar > 0)
    sub = _restrict(ch, active)
    S, Psi, nw = _coupling(sub, [W[k] for k in active])
    system = siso.normalized_system(Psi + np.diag(S), nw, gbar[active])
    if siso.spectral_radius(system.G) < 1 - siso.RHO_GUARD:
        pmin = siso._solve(system)
        if np.all(pmin >= 0) and np.all(pmin <= p[active] * (1 + 1e-9)):
            q = np.zeros(ch.K)
            q[active] = np.minimum(pmin, ch.pmax[active])
            if np.all(sinr_simo(ch, q, W) >= gbar * (1 - WITNESS_SLACK)):
                return {"p": q, "W": W}
    return {"p": p, "W": W}


def witness_from_powers(ch, gbar, p, tol=1e-8):
    """Witness ``{p, W}`` from balanced powers, or a full solve if ``p`` falls short.

    Receivers are MMSE at ``p``; powers are then tightened at those receivers.
    """
    gbar = np.asarray(gbar, dtype=float)
    if p is not None:
        p = np.asarray(p, dtype=float)
        gam, W = sinr_simo_mmse(ch, p, return_receivers=True)
        if np.all(gam >= gbar * (1 - WITNESS_SLACK)):
            return FeasibilityOutcome(True, _tighten(ch, gbar, p, W), {})
    return check_feasible(ch, gbar, tol)


def check_feasible(ch, gbar, tol=1e-8):
    """Feasibility of the SINR target ``gbar`` on a :class:`SimoChannel`."""
    gbar = np.asarray(gbar, dtype=float)
    K = ch.K
    active = np.flatnonzero(gbar > 0)
    if active.size == 0:
        p = np.zeros(K)
        return FeasibilityOutcome(True, {"p": p, "W": mmse_receivers(ch, p)}, {"C": np.inf})
    sub = _restrict(ch, active)
    g = gbar[active]
    try:
        bal = solve_balancing(sub, g, tol=tol)
    except NoAdmissibleSubproblem as exc:
        bal = _fallback(sub, g, exc)
    info = {"C": bal.C, "index": int(active[bal.index]), "iterations": bal.iterations}
    if bal.C < 1 - C_SLACK:
        return FeasibilityOutcome(False, None, info)

    p = np.zeros(K)
    p[active] = np.minimum(bal.powers, sub.pmax)
    W = mmse_receivers(ch, p)
    for i, k in enumerate(active):
        W[k] = bal.beamformers[i]
    return FeasibilityOutcome(True, _tighten(ch, gbar, p, W), info)
