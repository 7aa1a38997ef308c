"""Rate-profile boundary oracle.

A rate profile ``alpha`` (nonnegative, summing to one) fixes a ray
``origin + alpha * t`` in rate space. The oracle finds the largest sum-rate on
that ray whose SINR target is achievable, by bisection over feasibility
probes. Normality of the rate region makes feasibility monotone along the ray.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .channel import initial_vertex
from .errors import ChannelError, OriginInfeasible, SolverFailure
from .feasibility import check_feasible, miso, simo, siso

__all__ = [
    "RateProfile",
    "target_from_profile",
    "rates_on_ray",
    "Intersection",
    "intersect",
    "BoundaryOracle",
    "DEFAULT_TOL_BITS",
]

DEFAULT_TOL_BITS = 1e-4


@dataclass(frozen=True)
class RateProfile:
    alpha: np.ndarray

    def __post_init__(self):
        a = np.array(self.alpha, dtype=float)
        if a.ndim != 1 or np.any(a < 0) or not np.all(np.isfinite(a)):
            raise ChannelError("rate profile must be a finite nonnegative vector")
        s = a.sum()
        if s <= 0:
            raise ChannelError("rate profile must have positive mass")
        if abs(s - 1.0) > 1e-12:
            a = a / s
        a.setflags(write=False)
        object.__setattr__(self, "alpha", a)

    @classmethod
    def from_vertex(cls, z, origin=None):
        """Profile of the ray from ``origin`` through ``z``."""
        z = np.asarray(z, dtype=float)
        o = np.zeros_like(z) if origin is None else np.asarray(origin, dtype=float)
        d = z - o
        return cls(d / d.sum())


def rates_on_ray(alpha, rsum, origin):
    """Per-user rates ``origin + alpha (rsum - sum(origin))``."""
    origin = np.asarray(origin, dtype=float)
    return origin + np.asarray(alpha, dtype=float) * (rsum - origin.sum())


def target_from_profile(alpha, rsum, origin=None):
    """SINR target ``2^r - 1`` for the rate point at sum-rate ``rsum`` on the ray."""
    if isinstance(alpha, RateProfile):
        alpha = alpha.alpha
    alpha = np.asarray(alpha, dtype=float)
    origin = np.zeros_like(alpha) if origin is None else np.asarray(origin, dtype=float)
    if rsum < 0:
        raise ChannelError("sum-rate must be nonnegative")
    if rsum < origin.sum() - 1e-12:
        raise ChannelError("sum-rate is below the sum of the origin rates")
    r = rates_on_ray(alpha, rsum, origin)
    return np.expm1(r * np.log(2.0))


@dataclass(frozen=True)
class Intersection:
    """Outcome of one ray search.

    ``rates`` / ``rsum`` is the last feasible probe and ``witness`` achieves
    it. ``upper_rates`` / ``upper_rsum`` is the first sum-rate known to be
    infeasible, or equals ``rsum`` when the search hit the top of its bracket
    while still feasible (``exact`` is then True).
    """

    rates: np.ndarray
    rsum: float
    witness: Optional[dict]
    upper_rates: np.ndarray
    upper_rsum: float
    probes: int
    exact: bool = False
    info: dict = field(default_factory=dict)


# fast probes returning (feasible, certificate) plus the matching witness builder
_FAST = {
    "simo": (simo.decide, simo.witness_from_powers),
    "miso": (miso.decide, miso.witness_from_powers),
}


def _bracket_top(alpha, origin, z1):
    pos = alpha > 0
    return origin.sum() + float(np.min((z1[pos] - origin[pos]) / alpha[pos]))


def intersect(ch, alpha, origin=None, tol_bits=DEFAULT_TOL_BITS, upper=None, z1=None,
              origin_witness=None):
    """Bisect along the ray for the Pareto-boundary intersection.

    Parameters
    ----------
    ch : channel
        Any topology.
    alpha : RateProfile or array
        Ray direction.
    origin : array, optional
        Ray start (the minimum-rate tuple); zero by default.
    tol_bits : float
        Width of the final bracket in sum-rate bits.
    upper : float, optional
        Upper end of the bracket if tighter than the initial box exit.
    origin_witness : dict, optional
        Skip the origin probe when the caller already holds its witness.

    Raises
    ------
    OriginInfeasible
        The target at the origin itself is not achievable.
    """
    if isinstance(alpha, RateProfile):
        alpha = alpha.alpha
    alpha = np.asarray(alpha, dtype=float)
    K = alpha.size
    origin = np.zeros(K) if origin is None else np.asarray(origin, dtype=float)
    z1 = initial_vertex(ch) if z1 is None else np.asarray(z1, dtype=float)
    if tol_bits <= 0:
        raise ChannelError("tol_bits must be positive")

    lo = float(origin.sum())
    hi = _bracket_top(alpha, origin, z1)
    if upper is not None:
        hi = min(hi, float(upper))
    if ch.topology == "siso":
        return _intersect_siso(ch, alpha, origin, lo, hi, tol_bits)
    probes = 0

    wit = origin_witness
    if wit is None:
        out = check_feasible(ch, target_from_profile(alpha, lo, origin))
        probes += 1
        if not out.feasible:
            raise OriginInfeasible("the minimum-rate tuple is not achievable")
        wit = out.witness

    if hi <= lo:
        r = rates_on_ray(alpha, lo, origin)
        return Intersection(r, lo, wit, r, lo, probes, exact=True)

    decide, build = _FAST[ch.topology]
    ok, cert = decide(ch, target_from_profile(alpha, hi, origin), return_powers=True)
    probes += 1
    if ok:
        out = build(ch, target_from_profile(alpha, hi, origin), cert)
        r = rates_on_ray(alpha, hi, origin)
        return Intersection(r, hi, out.witness, r, hi, probes, exact=True)

    lo_cert = None
    while hi - lo > tol_bits:
        mid = 0.5 * (lo + hi)
        ok, cert = decide(ch, target_from_profile(alpha, mid, origin), return_powers=True)
        probes += 1
        if ok:
            lo, lo_cert = mid, cert
        else:
            hi = mid
    if lo_cert is not None:
        out = build(ch, target_from_profile(alpha, lo, origin), lo_cert)
        if not out.feasible:
            raise SolverFailure("witness construction disagrees with the feasibility decision")
        wit = out.witness
    return Intersection(rates_on_ray(alpha, lo, origin), lo, wit,
                        rates_on_ray(alpha, hi, origin), hi, probes)


def _intersect_siso(ch, alpha, origin, lo, hi, tol):
    # whole bisection in one kernel call; same decisions as siso.check_feasible
    lo, hi, p, probes, status = kernels.siso_bisect(
        np.ascontiguousarray(ch.gain), ch.noise, ch.pmax, np.ascontiguousarray(alpha),
        np.ascontiguousarray(origin), lo, hi, tol, siso.RHO_GUARD, siso.POWER_SLACK)
    if status < 0:
        raise OriginInfeasible("the minimum-rate tuple is not achievable")
    return Intersection(rates_on_ray(alpha, lo, origin), lo, {"p": p},
                        rates_on_ray(alpha, hi, origin), hi, probes, exact=status == 1)


class BoundaryOracle:
    """Ray-intersection oracle bound to one channel and origin.

    Counts probes across calls and caches the origin witness.
    """

    def __init__(self, ch, origin=None, tol_bits=DEFAULT_TOL_BITS):
        self.ch = ch
        self.K = ch.K
        self.origin = np.zeros(self.K) if origin is None else np.asarray(origin, dtype=float)
        self.tol_bits = float(tol_bits)
        self.z1 = initial_vertex(ch)
        self.calls = 0
        self.probes = 0
        self._origin_witness = None

    def origin_witness(self):
        """Witness for the origin; raises OriginInfeasible if there is none."""
        if self._origin_witness is None:
            gbar = target_from_profile(np.full(self.K, 1.0 / self.K), self.origin.sum(),
                                       self.origin)
            out = check_feasible(self.ch, gbar)
            self.probes += 1
            if not out.feasible:
                raise OriginInfeasible("the minimum-rate tuple is not achievable")
            self._origin_witness = out.witness
        return self._origin_witness

    def __call__(self, z):
        """Intersect the ray from the origin through vertex ``z``.

        The bracket is capped at ``z`` itself, which lies on the ray and
        bounds the region along it.
        """
        z = np.asarray(z, dtype=float)
        alpha = RateProfile.from_vertex(z, self.origin).alpha
        res = intersect(self.ch, alpha, self.origin, self.tol_bits, upper=float(z.sum()),
                        z1=self.z1, origin_witness=self.origin_witness())
        self.calls += 1
        self.probes += res.probes
        return res
