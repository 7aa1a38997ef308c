"""SINR-target feasibility for MISO interference channels.

With ``x = [v_1; ...; v_K; 0]`` the SINR constraints become second-order
cones ``||E_k x + n_k|| <= sqrt(1 + 1/gbar_k) Re(h_kk^H L_k x)`` with
``Im(h_kk^H L_k x) = 0`` (a common phase rotation of ``v_k`` is free), and
the budgets become ``||L_k x|| <= sqrt(P_k)``.

Real embedding, used bit-for-bit by :func:`embed`: a complex vector ``x`` of
length ``n`` maps to ``[Re x; Im x]`` of length ``2n``. A complex row ``r``
acting as ``r @ x`` maps to the two real rows ``[Re r, -Im r]`` (real part)
and ``[Im r, Re r]`` (imaginary part). A complex cone row block is embedded
row by row, real part rows first, then imaginary part rows. The trailing slack
coordinate of ``x`` has all-zero columns and is dropped before solving.
"""
import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..channel import sinr_miso
from ..errors import ChannelError, SolverFailure
from . import socp
from .outcome import FeasibilityOutcome

__all__ = [
    "ConeProgram",
    "build_cone_program",
    "embed",
    "check_feasible",
    "decide",
    "witness_from_powers",
    "WITNESS_SLACK",
]

WITNESS_SLACK = 1e-8


@dataclass(frozen=True)
class ConeProgram:
    """Complex data of the cone feasibility problem.

    ``E[i]``, ``nvec[i]``, ``coef[i]`` and ``direct[i]`` describe the SINR cone
    of user ``users[i]``; ``direct[i]`` is the row ``h_kk^H L_k``.
    """

    n: int
    offsets: np.ndarray
    sizes: np.ndarray
    users: np.ndarray
    E: tuple
    nvec: tuple
    coef: np.ndarray
    direct: tuple
    power: np.ndarray

    def selector(self, k):
        """``L_k`` as an explicit ``N_k x n`` matrix."""
        L = np.zeros((self.sizes[k], self.n))
        o = self.offsets[k]
        L[:, o:o + self.sizes[k]] = np.eye(self.sizes[k])
        return L

    def extract(self, x):
        return [np.asarray(x[o:o + m]) for o, m in zip(self.offsets, self.sizes)]

    def to_dict(self):
        def cplx(a):
            a = np.asarray(a)
            return np.stack([a.real, a.imag], axis=-1).tolist()

        return {
            "n": int(self.n),
            "offsets": self.offsets.tolist(),
            "sizes": self.sizes.tolist(),
            "sinr_cones": [
                {"user": int(k), "E": cplx(E), "n": np.asarray(nv).tolist(),
                 "coef": float(c), "direct": cplx(r)}
                for k, E, nv, c, r in zip(self.users, self.E, self.nvec, self.coef, self.direct)
            ],
            "power_cones": [
                {"user": k, "radius": float(r)} for k, r in enumerate(self.power)
            ],
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def build_cone_program(ch, gbar):
    """Cone data for target ``gbar``; zero-target users get no SINR cone."""
    gbar = np.asarray(gbar, dtype=float)
    K = ch.K
    if gbar.shape != (K,):
        raise ChannelError(f"target must have length {K}")
    if np.any(gbar < 0):
        raise ChannelError("SINR targets must be nonnegative")
    sizes = ch.antennas
    offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    n = int(sizes.sum()) + 1
    users = np.flatnonzero(gbar > 0)
    E, nvec, direct = [], [], []
    for k in users:
        Ek = np.zeros((K + 1, n), dtype=complex)
        for j in range(K):
            o = offsets[j]
            Ek[j, o:o + sizes[j]] = ch.h[k][j].conj()
        nk = np.zeros(K + 1)
        nk[-1] = np.sqrt(ch.noise[k])
        r = np.zeros(n, dtype=complex)
        r[offsets[k]:offsets[k] + sizes[k]] = ch.h[k][k].conj()
        E.append(Ek)
        nvec.append(nk)
        direct.append(r)
    coef = np.sqrt(1.0 + 1.0 / gbar[users])
    return ConeProgram(n=n, offsets=offsets, sizes=sizes, users=users, E=tuple(E),
                       nvec=tuple(nvec), coef=coef, direct=tuple(direct),
                       power=np.sqrt(np.asarray(ch.pmax, dtype=float)))


def _real_rows(R):
    """Embed complex rows ``R`` (acting on x) into real rows acting on [Re x; Im x]."""
    R = np.atleast_2d(R)
    return np.hstack([R.real, -R.imag]), np.hstack([R.imag, R.real])


def embed(prog):
    """Real phase-I data: ``(ConeSystem, Aeq)`` with phase equalities ``Aeq z = 0``.

    SINR cones are scaled by ``1/sigma_k`` so the slack is measured in units
    of the noise amplitude.
    """
    nc = prog.n - 1
    keep = np.r_[0:nc, prog.n:prog.n + nc]  # drop the slack coordinate
    d = 2 * nc
    m_sinr = len(prog.users)
    K = len(prog.sizes)
    r = max([2 * (K + 1)] + [2 * int(s) for s in prog.sizes])
    m = m_sinr + K
    a = np.zeros((m, d))
    a0 = np.zeros(m)
    B = np.zeros((m, r, d))
    b0 = np.zeros((m, r))
    w = np.zeros(m)
    eq = []
    for i in range(m_sinr):
        sig = prog.nvec[i][-1]
        re, im = _real_rows(prog.E[i])
        rows = np.vstack([re, im])[:, keep] / sig
        B[i, :rows.shape[0]] = rows
        b0[i, :K + 1] = prog.nvec[i] / sig
        dre, dim = _real_rows(prog.direct[i])
        a[i] = prog.coef[i] * dre[0, keep] / sig
        w[i] = 1.0
        eq.append(dim[0, keep])
    for k in range(K):
        i = m_sinr + k
        o, s = prog.offsets[k], prog.sizes[k]
        a0[i] = prog.power[k]
        for t in range(s):
            B[i, t, o + t] = 1.0
            B[i, s + t, nc + o + t] = 1.0
    Aeq = np.array(eq) if eq else np.zeros((0, d))
    return socp.ConeSystem(a, a0, B, b0, w), Aeq


def _nullspace(Aeq, d):
    if Aeq.shape[0] == 0:
        return np.eye(d)
    _, sv, vt = np.linalg.svd(Aeq)
    rank = int(np.sum(sv > 1e-12 * sv.max()))
    return vt[rank:].T


def _decode(prog, xi):
    nc = prog.n - 1
    x = np.zeros(prog.n, dtype=complex)
    x[:nc] = xi[:nc] + 1j * xi[nc:]
    V = prog.extract(x)
    # guard against last-ulp budget overshoot
    for k, v in enumerate(V):
        pw = np.vdot(v, v).real
        cap = prog.power[k] ** 2
        if pw > cap:
            V[k] = v * np.sqrt(cap / pw)
    return V


@lru_cache(maxsize=128)
def _geometry(ch, users):
    """Reduced phase-I data for the active user set ``users`` (a tuple).

    Only the SINR-cone coefficients depend on the target, so the reduced
    system is stored with unit coefficients and rescaled per probe.
    """
    gbar = np.zeros(ch.K)
    gbar[list(users)] = 1.0
    prog = build_cone_program(ch, gbar)
    cs, Aeq = embed(prog)
    Z = _nullspace(Aeq, cs.a.shape[1])
    m = len(users)
    a = cs.a @ Z
    a[:m] /= prog.coef[:, None]
    B = np.ascontiguousarray(np.einsum("mrd,de->mre", cs.B, Z))
    return prog, Z, a, np.ascontiguousarray(cs.a0), B, np.ascontiguousarray(cs.b0), cs.w


def _solve(ch, gbar):
    """Phase-I solve on the cached geometry: (status, V, info) or trivial."""
    users = tuple(int(k) for k in np.flatnonzero(gbar > 0))
    if not users:
        return 0, [np.zeros(m, dtype=complex) for m in ch.antennas], {"s": -np.inf}
    prog, Z, a_unit, a0, B, b0, w = _geometry(ch, users)
    a = a_unit.copy()
    a[:len(users)] *= np.sqrt(1.0 + 1.0 / gbar[list(users)])[:, None]
    res = socp.solve_phase1(socp.ConeSystem(a, a0, B, b0, w), np.zeros(Z.shape[1]), 2.0)
    V = _decode(prog, Z @ res.z)
    info = {"s": res.s, "status": res.status, "newton_steps": res.newton_steps}
    return {"feasible": 0, "infeasible": 1, "boundary": 2}[res.status], V, info


def _outcome(ch, gbar):
    status, V, info = _solve(ch, gbar)
    ok = bool(np.all(sinr_miso(ch, V) >= gbar * (1 - WITNESS_SLACK)))
    if status == 0:
        if not ok:
            raise SolverFailure("strictly feasible iterate failed SINR revalidation")
        return FeasibilityOutcome(True, {"V": V}, info)
    if status == 2 and ok:
        return FeasibilityOutcome(True, {"V": V}, info)
    return FeasibilityOutcome(False, None, info)


def decide(ch, gbar, return_powers=False):
    """Decision-only interface matching the SIMO fast path.

    With ``return_powers`` returns ``(feasible, V)`` with the beamformers
    that certify feasibility (None when infeasible).
    """
    out = _outcome(ch, np.asarray(gbar, dtype=float))
    if return_powers:
        return out.feasible, (out.witness["V"] if out.feasible else None)
    return out.feasible


def witness_from_powers(ch, gbar, V):
    """Witness ``{V}`` from stored beamformers, re-solving if they fall short."""
    gbar = np.asarray(gbar, dtype=float)
    if V is not None and np.all(sinr_miso(ch, V) >= gbar * (1 - WITNESS_SLACK)):
        return FeasibilityOutcome(True, {"V": V}, {})
    return check_feasible(ch, gbar)


def check_feasible(ch, gbar):
    """Feasibility of the SINR target ``gbar`` on a :class:`MisoChannel`.

    Returns a :class:`FeasibilityOutcome` whose witness ``{"V": [...]}`` meets
    every target up to a relative ``WITNESS_SLACK``.
    """
    gbar = np.asarray(gbar, dtype=float)
    build_cone_program(ch, gbar)  # validates the target
    return _outcome(ch, gbar)
