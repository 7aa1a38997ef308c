"""Interference-pricing baselines for SISO, SIMO and MISO channels.

Each user announces a price measuring how fast its own rate drops with the
interference it receives. Every other user then maximizes its own weighted
rate minus the priced interference it causes. Updates run in round-robin
sweeps: all prices are computed from the allocation at the start of a sweep,
then users update one after another in index order, each seeing the latest
allocation of the others.

Neither scheme is guaranteed to converge. A run stops when the largest
per-user change in a sweep falls below ``tol`` (converged), when the WSR has
not improved for ``window`` sweeps (not converged), or at ``max_iters``.
"""
import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .channel import miso_gains, rate_of, siso_as_simo, sinr_miso, sinr_simo_mmse, _covariance
from .errors import SolverFailure

__all__ = [
    "simo_price",
    "simo_power_update",
    "run_simo_pricing",
    "run_siso_pricing",
    "miso_price",
    "miso_beam_update",
    "run_miso_pricing",
    "PricingResult",
    "write_trajectory_csv",
    "TRAJECTORY_COLUMNS",
]

LN2 = np.log(2.0)
TRAJECTORY_COLUMNS = ("sweep", "wsr", "max_power_change")


@dataclass(frozen=True)
class PricingResult:
    """Outcome of a pricing run.

    ``status`` is ``converged``, ``stalled`` (no WSR improvement within the
    window) or ``iteration_cap``. ``witness`` holds the final allocation and
    ``best_witness`` the allocation with the best WSR seen.
    """

    wsr: float
    rates: np.ndarray
    witness: dict
    best_wsr: float
    best_witness: dict
    converged: bool
    status: str
    sweeps: int
    trajectory: tuple = ()
    info: dict = field(default_factory=dict)


def write_trajectory_csv(result, fh=None):
    out = io.StringIO() if fh is None else fh
    w = csv.writer(out, lineterminator="\n")
    w.writerow(TRAJECTORY_COLUMNS)
    for s, wsr, dp in result.trajectory:
        w.writerow([s, repr(float(wsr)), repr(float(dp))])
    return out.getvalue() if fh is None else None


# ---------------------------------------------------------------------------
# SIMO
# ---------------------------------------------------------------------------


def _simo_q(ch, p, k):
    """``h_kk^H C_k^{-1} h_kk`` and ``C_k^{-1} h_kk`` at powers ``p``."""
    hk = ch.h[k][k]
    x = np.linalg.solve(_covariance(ch, k, p), hk)
    return float(np.vdot(hk, x).real), x


def simo_price(ch, p):
    """Matrix ``pi[j, k] = -dR_j / dp_k`` under MMSE reception (zero diagonal)."""
    p = np.asarray(p, dtype=float)
    K = ch.K
    pi = np.zeros((K, K))
    for j in range(K):
        if p[j] <= 0:
            continue
        q, x = _simo_q(ch, p, j)
        # x^H h_jk = h_jj^H C_j^{-1} h_jk since C_j is Hermitian
        cross = np.abs(x.conj() @ ch.H[j]) ** 2
        pi[j] = p[j] * cross / (LN2 * (1.0 + p[j] * q))
        pi[j, j] = 0.0
    return pi


def simo_power_update(ch, p, pi, k):
    """Best response of user ``k`` to the announced prices."""
    p = np.asarray(p, dtype=float)
    cost = float(np.dot(np.delete(ch.weights, k), np.delete(pi[:, k], k)))
    if cost <= 0:
        return float(ch.pmax[k])
    q, _ = _simo_q(ch, p, k)
    val = ch.weights[k] / (LN2 * cost) - 1.0 / q
    return float(min(max(val, 0.0), ch.pmax[k]))


def _simo_wsr(ch, p):
    r = rate_of(sinr_simo_mmse(ch, p))
    return float(np.dot(ch.weights, r)), r


def run_simo_pricing(ch, max_iters=1000, tol=1e-6, window=50, p0=None):
    """Round-robin price/power iteration from full power (or ``p0``)."""
    p = np.array(ch.pmax if p0 is None else p0, dtype=float)
    wsr, rates = _simo_wsr(ch, p)
    best, best_p, since = wsr, p.copy(), 0
    traj = [(0, wsr, 0.0)]
    status = "iteration_cap"
    sweep = 0
    for sweep in range(1, max_iters + 1):
        pi = simo_price(ch, p)
        old = p.copy()
        for k in range(ch.K):
            p[k] = simo_power_update(ch, p, pi, k)
        change = float(np.max(np.abs(p - old)))
        wsr, rates = _simo_wsr(ch, p)
        traj.append((sweep, wsr, change))
        if wsr > best + 1e-12:
            best, best_p, since = wsr, p.copy(), 0
        else:
            since += 1
        if change < tol:
            status = "converged"
            break
        if since >= window:
            status = "stalled"
            break
    W = sinr_simo_mmse(ch, p, return_receivers=True)[1]
    Wb = sinr_simo_mmse(ch, best_p, return_receivers=True)[1]
    return PricingResult(wsr, rates, {"p": p, "W": W}, best, {"p": best_p, "W": Wb},
                         status == "converged", status, sweep, tuple(traj))


def run_siso_pricing(ch, max_iters=1000, tol=1e-6, window=50, p0=None):
    """SIMO pricing on the single-antenna equivalent; witnesses hold ``p`` only."""
    res = run_simo_pricing(siso_as_simo(ch), max_iters, tol, window, p0)
    return PricingResult(res.wsr, res.rates, {"p": res.witness["p"]}, res.best_wsr,
                         {"p": res.best_witness["p"]}, res.converged, res.status,
                         res.sweeps, res.trajectory, res.info)


# ---------------------------------------------------------------------------
# MISO
# ---------------------------------------------------------------------------


def miso_price(ch, V):
    """Per-user prices ``-dR_k / dGamma_k`` and interference levels ``Gamma_k``."""
    A = miso_gains(ch, V)
    S = np.diag(A).copy()
    Gam = A.sum(axis=1) - S
    c = Gam + ch.noise
    return S / (LN2 * (S + c) * c), Gam


def _penalty_matrix(ch, pi, k):
    """``B_k = sum_{j != k} mu_j pi_j h_{j,k} h_{j,k}^H`` (interference v_k causes)."""
    n = ch.h[k][k].size
    B = np.zeros((n, n), dtype=complex)
    for j in range(ch.K):
        if j != k and pi[j] > 0:
            g = ch.h[j][k]
            B += ch.weights[j] * pi[j] * np.outer(g, g.conj())
    return B


def _beam_for_nu(B, h, mu, c, nu):
    Q = B + nu * np.eye(B.shape[0])
    x = np.linalg.solve(Q, h)
    a = float(np.vdot(h, x).real)
    s = max(mu / LN2 - c / a, 0.0) if a > 0 else 0.0
    return np.sqrt(s / a) * x if s > 0 else np.zeros_like(h)


def miso_beam_update(ch, V, pi, k, rtol=1e-12, max_bisect=200):
    """Best response of user ``k``: maximize its priced rate over ``||v||^2 <= P``.

    For a trace multiplier ``nu`` the maximizer of the Lagrangian is rank-one,
    ``v = sqrt(s / a) Q^{-1} h`` with ``Q = B_k + nu I``, ``a = h^H Q^{-1} h``
    and ``s = [mu / ln2 - c / a]^+``. Transmit power falls monotonically in
    ``nu`` and vanishes once ``nu >= mu ||h||^2 / (c ln2)``, so ``nu`` is found
    by bisection.
    """
    A = miso_gains(ch, V)
    c = float(A[k].sum() - A[k, k] + ch.noise[k])
    h = ch.h[k][k]
    mu = float(ch.weights[k])
    P = float(ch.pmax[k])
    if mu <= 0:
        return np.zeros_like(h)
    B = _penalty_matrix(ch, np.asarray(pi, dtype=float), k)

    def power(nu):
        v = _beam_for_nu(B, h, mu, c, nu)
        return float(np.vdot(v, v).real), v

    lam_min = float(np.linalg.eigvalsh(B)[0])
    if lam_min > 1e-12 * max(1.0, np.abs(B).max()):
        pw, v = power(0.0)
        if pw <= P:
            return v
    lo = 0.0
    hi = mu * float(np.vdot(h, h).real) / (c * LN2)
    v_hi = np.zeros_like(h)
    for _ in range(max_bisect):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        pw, v = power(mid)
        if pw > P:
            lo = mid
        else:
            hi, v_hi = mid, v
            if pw >= P * (1 - rtol):
                break
    pw = float(np.vdot(v_hi, v_hi).real)
    if hi > 0 and pw < P * (1 - 1e-6) and np.any(v_hi):
        # the multiplier is positive so the budget must be active
        raise SolverFailure(f"beam update for user {k} missed the power budget")
    if pw > P:
        v_hi = v_hi * np.sqrt(P / pw)
    return v_hi


def _miso_wsr(ch, V):
    r = rate_of(sinr_miso(ch, V))
    return float(np.dot(ch.weights, r)), r


def _mrt(ch):
    return [np.sqrt(ch.pmax[k]) * ch.h[k][k] / np.linalg.norm(ch.h[k][k]) for k in range(ch.K)]


def run_miso_pricing(ch, max_iters=1000, tol=1e-6, window=50, V0=None):
    """Round-robin price/beam iteration from full-power MRT (or ``V0``).

    ``max_power_change`` in the trajectory is the largest Frobenius-norm
    change of a transmit covariance ``v_k v_k^H`` over the sweep, which
    ignores the irrelevant common phase of ``v_k``.
    """
    V = [np.array(v, dtype=complex) for v in (_mrt(ch) if V0 is None else V0)]
    wsr, rates = _miso_wsr(ch, V)
    best, best_V, since = wsr, [v.copy() for v in V], 0
    traj = [(0, wsr, 0.0)]
    status = "iteration_cap"
    sweep = 0
    for sweep in range(1, max_iters + 1):
        pi, _ = miso_price(ch, V)
        change = 0.0
        for k in range(ch.K):
            old = V[k]
            V[k] = miso_beam_update(ch, V, pi, k)
            d = np.linalg.norm(np.outer(V[k], V[k].conj()) - np.outer(old, old.conj()))
            change = max(change, float(d))
        wsr, rates = _miso_wsr(ch, V)
        traj.append((sweep, wsr, change))
        if wsr > best + 1e-12:
            best, best_V, since = wsr, [v.copy() for v in V], 0
        else:
            since += 1
        if change < tol:
            status = "converged"
            break
        if since >= window:
            status = "stalled"
            break
    return PricingResult(wsr, rates, {"V": V}, best, {"V": best_V},
                         status == "converged", status, sweep, tuple(traj))
