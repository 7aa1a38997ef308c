"""Channel instances and pointwise SINR / rate evaluation.

Three topologies are supported:

* ``SisoChannel``: single-antenna links, described by real power gains.
* ``SimoChannel``: single-antenna transmitters, ``M_k``-antenna receivers.
* ``MisoChannel``: ``N_k``-antenna transmitters, single-antenna receivers.

For SIMO, ``h[k][j]`` is the length-``M_k`` channel from transmitter ``j`` to
receiver ``k``. For MISO, ``h[k][j]`` is the length-``N_j`` channel from
transmitter ``j`` to receiver ``k`` and enters the SINR as ``h^H v``.
All rates are in bits per channel use.
"""
from dataclasses import dataclass

import numpy as np

from .errors import ChannelError

__all__ = [
    "SisoChannel",
    "SimoChannel",
    "MisoChannel",
    "MinRateConstraint",
    "sinr_siso",
    "sinr_simo",
    "sinr_simo_mmse",
    "sinr_miso",
    "rate_of",
    "weighted_sum",
    "initial_vertex",
    "rates_of_witness",
    "subchannel",
    "lift_witness",
    "siso_as_simo",
]


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


def _per_user(x, K, name):
    a = np.asarray(x, dtype=float)
    if a.ndim == 0:
        a = np.full(K, float(a))
    if a.shape != (K,):
        raise ChannelError(f"{name} must have length {K}, got shape {a.shape}")
    return a


def _check_common(K, noise, pmax, weights):
    if K < 1:
        raise ChannelError("need at least one user")
    if not np.all(noise > 0):
        raise ChannelError("noise variances must be strictly positive")
    if not np.all(pmax > 0):
        raise ChannelError("power budgets must be strictly positive")
    if np.any(weights < 0) or not np.any(weights > 0):
        raise ChannelError("weights must be nonnegative with at least one positive")
    for name, a in (("noise", noise), ("pmax", pmax), ("weights", weights)):
        if not np.all(np.isfinite(a)):
            raise ChannelError(f"{name} must be finite")


@dataclass(frozen=True, init=False, eq=False)
class SisoChannel:
    gain: np.ndarray
    noise: np.ndarray
    pmax: np.ndarray
    weights: np.ndarray
    topology: str = "siso"

    def __init__(self, gain, noise=1.0, pmax=1.0, weights=1.0):
        gain = np.asarray(gain, dtype=float)
        if gain.ndim != 2 or gain.shape[0] != gain.shape[1]:
            raise ChannelError("gain must be a square K x K matrix")
        K = gain.shape[0]
        noise = _per_user(noise, K, "noise")
        pmax = _per_user(pmax, K, "pmax")
        weights = _per_user(weights, K, "weights")
        _check_common(K, noise, pmax, weights)
        if np.any(gain < 0) or not np.all(np.isfinite(gain)):
            raise ChannelError("power gains must be finite and nonnegative")
        if np.any(np.diag(gain) <= 0):
            raise ChannelError("direct gains must be strictly positive")
        object.__setattr__(self, "gain", _frozen(gain))
        object.__setattr__(self, "noise", _frozen(noise))
        object.__setattr__(self, "pmax", _frozen(pmax))
        object.__setattr__(self, "weights", _frozen(weights))
        object.__setattr__(self, "topology", "siso")

    @property
    def K(self):
        return self.gain.shape[0]

    def direct_gain(self):
        return np.diag(self.gain).copy()

    def replace(self, **kw):
        d = dict(gain=self.gain, noise=self.noise, pmax=self.pmax, weights=self.weights)
        d.update(kw)
        return SisoChannel(**d)


def _complex_nested(h, K):
    if len(h) != K or any(len(row) != K for row in h):
        raise ChannelError(f"h must be a {K} x {K} nested collection of vectors")
    out = []
    for row in h:
        out.append(tuple(_frozen(np.atleast_1d(np.asarray(v, dtype=complex)).ravel(), complex)
                         for v in row))
    return tuple(out)


class _VectorChannel:
    """Shared plumbing for SIMO/MISO channels."""

    def _init_common(self, h, noise, pmax, weights):
        K = len(h)
        h = _complex_nested(h, K)
        noise = _per_user(noise, K, "noise")
        pmax = _per_user(pmax, K, "pmax")
        weights = _per_user(weights, K, "weights")
        _check_common(K, noise, pmax, weights)
        for row in h:
            for v in row:
                if not np.all(np.isfinite(v)):
                    raise ChannelError("channel coefficients must be finite")
        for k in range(K):
            if np.linalg.norm(h[k][k]) <= 0:
                raise ChannelError(f"direct channel of user {k} is zero")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "noise", _frozen(noise))
        object.__setattr__(self, "pmax", _frozen(pmax))
        object.__setattr__(self, "weights", _frozen(weights))
        return K

    @property
    def K(self):
        return len(self.h)

    def direct_gain(self):
        return np.array([np.vdot(self.h[k][k], self.h[k][k]).real for k in range(self.K)])


@dataclass(frozen=True, init=False, eq=False)
class SimoChannel(_VectorChannel):
    h: tuple
    noise: np.ndarray
    pmax: np.ndarray
    weights: np.ndarray
    topology: str = "simo"

    def __init__(self, h, noise=1.0, pmax=1.0, weights=1.0):
        K = self._init_common(h, noise, pmax, weights)
        for k in range(K):
            m = self.h[k][k].size
            if any(v.size != m for v in self.h[k]):
                raise ChannelError(f"receiver {k}: all h[{k}][j] must have length M_{k}")
        # column j of H[k] is h_{k,j}
        object.__setattr__(self, "H", tuple(_frozen(np.column_stack(self.h[k]), complex)
                                            for k in range(K)))
        object.__setattr__(self, "topology", "simo")

    @property
    def antennas(self):
        return np.array([self.h[k][k].size for k in range(self.K)])

    def replace(self, **kw):
        d = dict(h=self.h, noise=self.noise, pmax=self.pmax, weights=self.weights)
        d.update(kw)
        return SimoChannel(**d)


@dataclass(frozen=True, init=False, eq=False)
class MisoChannel(_VectorChannel):
    h: tuple
    noise: np.ndarray
    pmax: np.ndarray
    weights: np.ndarray
    topology: str = "miso"

    def __init__(self, h, noise=1.0, pmax=1.0, weights=1.0):
        K = self._init_common(h, noise, pmax, weights)
        for j in range(K):
            n = self.h[j][j].size
            if any(self.h[k][j].size != n for k in range(K)):
                raise ChannelError(f"transmitter {j}: all h[k][{j}] must have length N_{j}")
        object.__setattr__(self, "topology", "miso")

    @property
    def antennas(self):
        return np.array([self.h[j][j].size for j in range(self.K)])

    def replace(self, **kw):
        d = dict(h=self.h, noise=self.noise, pmax=self.pmax, weights=self.weights)
        d.update(kw)
        return MisoChannel(**d)


@dataclass(frozen=True, init=False, eq=False)
class MinRateConstraint:
    """Per-user minimum rates, each strictly below the single-user capacity."""

    rmin: np.ndarray

    def __init__(self, rmin, channel=None):
        r = np.asarray(rmin, dtype=float)
        if channel is not None:
            r = _per_user(r, channel.K, "rmin")
        if np.any(r < 0) or not np.all(np.isfinite(r)):
            raise ChannelError("minimum rates must be finite and nonnegative")
        if channel is not None:
            z1 = initial_vertex(channel)
            if np.any(r >= z1):
                bad = np.flatnonzero(r >= z1).tolist()
                raise ChannelError(f"minimum rate of users {bad} reaches the single-user capacity")
        object.__setattr__(self, "rmin", _frozen(r))


def _powers(ch, p):
    p = np.asarray(p, dtype=float)
    if p.shape != (ch.K,):
        raise ChannelError(f"power vector must have length {ch.K}, got shape {p.shape}")
    return p


def sinr_siso(ch, p):
    """Per-user SINR of a SISO channel at power vector ``p``."""
    p = _powers(ch, p)
    d = np.diag(ch.gain)
    interference = ch.gain @ p - d * p
    return d * p / (interference + ch.noise)


def _covariance(ch, k, p):
    """Interference-plus-noise covariance at SIMO receiver ``k``."""
    Hk = ch.H[k]
    pk = p.copy()
    pk[k] = 0.0
    R = (Hk * pk) @ Hk.conj().T
    R[np.diag_indices_from(R)] += ch.noise[k]
    return R


def sinr_simo(ch, p, W):
    """SINR with explicit receive beamformers ``W`` (list of K vectors)."""
    p = _powers(ch, p)
    if len(W) != ch.K:
        raise ChannelError("need one receive beamformer per user")
    out = np.empty(ch.K)
    for k in range(ch.K):
        w = np.asarray(W[k], dtype=complex)
        if w.shape != ch.h[k][k].shape:
            raise ChannelError(f"receiver {k}: beamformer length mismatch")
        num = p[k] * abs(np.vdot(w, ch.h[k][k])) ** 2
        den = np.vdot(w, _covariance(ch, k, p) @ w).real
        out[k] = num / den if den > 0 else 0.0
    return out


def sinr_simo_mmse(ch, p, return_receivers=False):
    """SINR under MMSE reception; optionally also the (unnormalized) receivers."""
    p = _powers(ch, p)
    if np.any(p < 0):
        raise ChannelError("powers must be nonnegative")
    gam = np.empty(ch.K)
    W = []
    for k in range(ch.K):
        hk = ch.h[k][k]
        w = np.linalg.solve(_covariance(ch, k, p), hk)
        gam[k] = p[k] * np.vdot(hk, w).real
        W.append(w)
    if return_receivers:
        return gam, W
    return gam


def _beams(ch, V, check_power=True):
    if len(V) != ch.K:
        raise ChannelError("need one transmit beamformer per user")
    out = []
    for k in range(ch.K):
        v = np.asarray(V[k], dtype=complex).ravel()
        if v.size != ch.h[k][k].size:
            raise ChannelError(f"transmitter {k}: beamformer length mismatch")
        if check_power:
            pw = np.vdot(v, v).real
            if pw > ch.pmax[k] * (1 + 1e-9) + 1e-12:
                raise ChannelError(f"transmitter {k}: power {pw} exceeds budget {ch.pmax[k]}")
        out.append(v)
    return out


def miso_gains(ch, V):
    """Matrix of received powers ``|h_{k,j}^H v_j|^2`` (row k = receiver)."""
    K = ch.K
    A = np.empty((K, K))
    for k in range(K):
        for j in range(K):
            A[k, j] = abs(np.vdot(ch.h[k][j], V[j])) ** 2
    return A


def sinr_miso(ch, V):
    """Per-user SINR of a MISO channel with transmit beamformers ``V``."""
    V = _beams(ch, V)
    A = miso_gains(ch, V)
    d = np.diag(A)
    return d / (A.sum(axis=1) - d + ch.noise)


def rate_of(gamma):
    """Achievable rate ``log2(1 + sinr)`` in bits."""
    return np.log2(1.0 + np.asarray(gamma, dtype=float))


def weighted_sum(ch, r):
    return float(np.dot(ch.weights, r))


def initial_vertex(ch):
    """Single-user capacities: the box ``[0, z]`` contains the rate region."""
    return np.log2(1.0 + ch.pmax * ch.direct_gain() / ch.noise)


def rates_of_witness(ch, witness):
    """Push a feasibility witness back through the SINR model."""
    if ch.topology == "siso":
        return rate_of(sinr_siso(ch, witness["p"]))
    if ch.topology == "simo":
        p = np.asarray(witness["p"], dtype=float)
        if "W" in witness and witness["W"] is not None:
            return rate_of(sinr_simo(ch, p, witness["W"]))
        return rate_of(sinr_simo_mmse(ch, p))
    return rate_of(sinr_miso(ch, witness["V"]))


def siso_as_simo(ch):
    """The equivalent single-antenna SIMO channel, ``h_kj = sqrt(gain_kj)``."""
    h = [[np.array([np.sqrt(g)], dtype=complex) for g in row] for row in ch.gain]
    return SimoChannel(h, ch.noise, ch.pmax, ch.weights)


def subchannel(ch, users):
    """Channel seen by ``users`` alone (all other users silent)."""
    u = [int(k) for k in users]
    if not u or len(set(u)) != len(u) or min(u) < 0 or max(u) >= ch.K:
        raise ChannelError("users must be distinct indices of the channel")
    kw = dict(noise=ch.noise[u], pmax=ch.pmax[u], weights=ch.weights[u])
    if ch.topology == "siso":
        return SisoChannel(ch.gain[np.ix_(u, u)], **kw)
    h = [[ch.h[k][j] for j in u] for k in u]
    return (SimoChannel if ch.topology == "simo" else MisoChannel)(h, **kw)


def lift_witness(ch, users, witness):
    """Embed a witness of ``subchannel(ch, users)`` into ``ch`` with silent users."""
    u = [int(k) for k in users]
    if ch.topology == "miso":
        V = [np.zeros(ch.h[j][j].size, dtype=complex) for j in range(ch.K)]
        for i, k in enumerate(u):
            V[k] = np.asarray(witness["V"][i], dtype=complex)
        return {"V": V}
    p = np.zeros(ch.K)
    p[u] = np.asarray(witness["p"], dtype=float)
    if ch.topology == "siso":
        return {"p": p}
    # MMSE receivers of active users are unchanged by silent users
    return {"p": p, "W": sinr_simo_mmse(ch, p, return_receivers=True)[1]}
