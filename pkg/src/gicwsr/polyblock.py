"""Outer polyblock approximation for weighted sum-rate maximization.

The rate region is a normal set inside the box ``[0, z1]``. The engine keeps
a finite vertex set whose boxes cover the region. Each iteration picks the
vertex with the largest weighted sum, intersects the ray through it with the
Pareto boundary, and replaces the vertex by the ``K`` vertices obtained by
lowering one coordinate at a time to the boundary point. The best boundary
point found so far is a feasible lower bound; the value of the selected vertex
is an upper bound.
"""
import csv
import io
from itertools import combinations
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels
from .channel import initial_vertex, lift_witness, subchannel
from .errors import ChannelError, EmptyEpsilonSet, OriginInfeasible, InfeasibleMinRates
from .oracle import DEFAULT_TOL_BITS, BoundaryOracle

__all__ = [
    "Vertex",
    "VertexSet",
    "PolyblockConfig",
    "TraceRow",
    "SolveResult",
    "select_vertex",
    "generate_children",
    "update_vertex_set",
    "solve",
    "solve_channel",
    "solve_supports",
    "write_trace_csv",
    "TRACE_COLUMNS",
]

TRACE_COLUMNS = ("iteration", "upper_bound", "lower_bound", "num_vertices")


@dataclass(frozen=True)
class Vertex:
    z: np.ndarray
    value: float

    @classmethod
    def of(cls, z, weights):
        z = np.asarray(z, dtype=float)
        return cls(z, float(np.dot(weights, z)))


class VertexSet:
    """Growable vertex store with alive/eligible masks.

    Rows are never reordered while alive, so selection ties resolve the same
    way on every run. Removed rows are compacted away once they dominate the
    buffer.

    Parameters
    ----------
    K : int
        Dimension.
    weights : array
        Objective weights used to cache vertex values.
    origin : array
        Lower corner of the search; eligibility needs ``z >= origin + epsilon``.
    epsilon : float
        Strip width.
    prune : bool
        Discard vertices dominated by another vertex.
    """

    def __init__(self, K, weights, origin, epsilon, prune=True, capacity=64):
        self.K = K
        self.weights = np.asarray(weights, dtype=float)
        self.origin = np.asarray(origin, dtype=float)
        self.epsilon = float(epsilon)
        self.prune = prune
        self._Z = np.empty((capacity, K))
        self._val = np.empty(capacity)
        self._alive = np.zeros(capacity, dtype=np.bool_)
        self._elig = np.zeros(capacity, dtype=np.bool_)
        self._n = 0
        self._count = 0
        self._keys = {}

    def __len__(self):
        return self._count

    def _grow(self):
        cap = 2 * self._Z.shape[0]
        for name in ("_Z", "_val", "_alive", "_elig"):
            old = getattr(self, name)
            new = np.zeros((cap,) + old.shape[1:], dtype=old.dtype)
            new[:self._n] = old[:self._n]
            setattr(self, name, new)

    def _compact(self):
        keep = np.flatnonzero(self._alive[:self._n])
        m = keep.size
        self._Z[:m] = self._Z[keep]
        self._val[:m] = self._val[keep]
        self._elig[:m] = self._elig[keep]
        self._alive[:m] = True
        self._alive[m:self._n] = False
        self._n = m
        self._keys = {self._Z[i].tobytes(): i for i in range(m)}

    @property
    def Z(self):
        """Alive vertices, in storage order."""
        return self._Z[:self._n][self._alive[:self._n]].copy()

    def vertices(self):
        return [Vertex(z, float(v)) for z, v in zip(self.Z, self.values())]

    def values(self):
        return self._val[:self._n][self._alive[:self._n]].copy()

    def index_of(self, z):
        return self._keys.get(np.asarray(z, dtype=float).tobytes())

    def add(self, z):
        """Insert ``z``; returns False when it was a duplicate or pruned.

        Unlike :meth:`add_many`, an arbitrary ``z`` may dominate stored
        vertices; with pruning on those are removed.
        """
        z = np.asarray(z, dtype=float)
        ok = bool(self.add_many(z[None, :])[0])
        if ok and self.prune:
            n = self._n - 1
            below = self._alive[:n] & np.all(self._Z[:n] <= z, axis=1)
            for i in np.flatnonzero(below):
                self._kill(i)
        return ok

    def add_many(self, C):
        """Insert the rows of ``C``; returns a mask of rows actually inserted.

        With pruning on, a row dominated by (or equal to) an alive vertex is
        discarded. Rows are never dominated by each other when they are the
        children of one vertex, and an alive vertex is never dominated by a
        child (it would have been pruned against the parent), so no existing
        vertex needs to be removed.
        """
        C = np.ascontiguousarray(C, dtype=float).reshape(-1, self.K)
        n = self._n
        if self.prune and C.shape[0]:
            keep = kernels.undominated(self._Z[:n], self._alive[:n], C)
        else:
            keep = np.ones(C.shape[0], dtype=np.bool_)
        for c in range(C.shape[0]):
            if not keep[c]:
                continue
            z = C[c]
            key = z.tobytes()
            if key in self._keys:
                keep[c] = False
                continue
            n = self._n
            if n == self._Z.shape[0]:
                self._grow()
            self._Z[n] = z
            self._val[n] = float(np.dot(self.weights, z))
            self._alive[n] = True
            self._elig[n] = bool(np.all(z >= self.origin + self.epsilon))
            self._keys[key] = n
            self._n = n + 1
            self._count += 1
        return keep

    def _kill(self, i):
        self._alive[i] = False
        self._count -= 1
        del self._keys[self._Z[i].tobytes()]

    def remove(self, z):
        i = self.index_of(z)
        if i is None:
            raise KeyError("vertex not in set")
        self._kill(i)
        if self._n > 256 and 4 * self._count < 3 * self._n:
            self._compact()

    def select(self):
        """Index-free selection: returns the argmax Vertex or raises EmptyEpsilonSet."""
        n = self._n
        mask = self._alive[:n] & self._elig[:n]
        i = kernels.select_vertex(self._Z[:n], self._val[:n], mask)
        if i < 0:
            raise EmptyEpsilonSet("no vertex survives the epsilon strip")
        return Vertex(self._Z[i].copy(), float(self._val[i]))


@dataclass(frozen=True)
class PolyblockConfig:
    epsilon: float = 0.01
    eta: float = 0.1
    max_iterations: int = 50_000
    origin: Optional[np.ndarray] = None
    prune: bool = True
    tol_bits: float = DEFAULT_TOL_BITS

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ChannelError("epsilon must be positive")
        if not self.eta > 0:
            raise ChannelError("eta must be positive")
        if int(self.max_iterations) < 1:
            raise ChannelError("max_iterations must be a positive integer")
        if not self.tol_bits > 0:
            raise ChannelError("tol_bits must be positive")
        if self.origin is not None:
            o = np.array(self.origin, dtype=float)
            o.setflags(write=False)
            object.__setattr__(self, "origin", o)

    def validate(self, z1):
        o = np.zeros_like(z1) if self.origin is None else self.origin
        if o.shape != z1.shape:
            raise ChannelError("origin has the wrong length")
        if np.any(o < 0):
            raise ChannelError("origin must be nonnegative")
        if not self.epsilon < np.min(z1 - o):
            raise ChannelError("epsilon must be below min_k (z1_k - origin_k)")
        return o


@dataclass(frozen=True)
class TraceRow:
    iteration: int
    upper_bound: float
    lower_bound: float
    num_vertices: int


@dataclass(frozen=True)
class SolveResult:
    best_point: np.ndarray
    best_value: float
    upper_bound: float
    witness: Optional[dict]
    trace: tuple
    termination: str
    iterations: int
    oracle_calls: int = 0
    probes: int = 0
    info: dict = field(default_factory=dict)

    @property
    def gap(self):
        return self.upper_bound - self.best_value

    def trace_array(self):
        return np.array([[t.iteration, t.upper_bound, t.lower_bound, t.num_vertices]
                         for t in self.trace], dtype=float).reshape(-1, 4)


def select_vertex(vs):
    """Vertex with the largest weighted sum among those outside the epsilon strip."""
    return vs.select()


def generate_children(z, r):
    """The ``K`` vertices ``z - (z_i - r_i) e_i``.

    Raises
    ------
    ValueError
        ``r`` is not dominated by ``z``.
    """
    z = np.asarray(z, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(r > z):
        raise ValueError("boundary point is not dominated by the vertex")
    kids = np.repeat(z[None, :], z.size, axis=0)
    idx = np.arange(z.size)
    kids[idx, idx] = r
    return kids


def update_vertex_set(vs, z, children):
    """Replace ``z`` by ``children`` (deduplicated, optionally pruned)."""
    vs.remove(z)
    vs.add_many(np.asarray(children, dtype=float).reshape(-1, vs.K))
    return vs


def solve(oracle, cfg, z1, weights, callback: Optional[Callable] = None,
          incumbent: float = -np.inf):
    """Run the outer polyblock iteration.

    Parameters
    ----------
    oracle : callable
        ``oracle(z)`` returns an object with ``rates``, ``witness`` and
        ``upper_rates`` (see :class:`gicwsr.oracle.Intersection`).
        ``oracle.origin_witness()`` is used for the initial lower bound when
        present.
    cfg : PolyblockConfig
    z1 : array
        Initial vertex; the box ``[0, z1]`` must contain the region.
    weights : array
        Objective weights (nonnegative).
    callback : callable, optional
        Called as ``callback(iteration, z_sel, boundary, vs)`` after each
        vertex-set update; used by instrumented tests.
    incumbent : float, optional
        Value already achieved elsewhere (e.g. on another support). The run
        stops once its upper bound is within ``eta`` of the larger of this
        and its own best value; the returned best point is still its own.

    Returns
    -------
    SolveResult
    """
    z1 = np.asarray(z1, dtype=float)
    weights = np.asarray(weights, dtype=float)
    K = z1.size
    origin = cfg.validate(z1)
    vs = VertexSet(K, weights, origin, cfg.epsilon, prune=cfg.prune)
    vs.add(z1)

    best = origin.copy()
    try:
        best_wit = oracle.origin_witness() if hasattr(oracle, "origin_witness") else None
    except OriginInfeasible as exc:
        raise InfeasibleMinRates(str(exc)) from exc
    best_val = float(np.dot(weights, best))
    trace = []
    termination = "iteration_cap"
    upper = float(np.dot(weights, z1))
    it = 0
    while it < cfg.max_iterations:
        try:
            v = vs.select()
        except EmptyEpsilonSet:
            termination = "empty_vertex_set"
            break
        it += 1
        upper = v.value
        try:
            hit = oracle(v.z)
        except OriginInfeasible as exc:
            raise InfeasibleMinRates(str(exc)) from exc
        val = float(np.dot(weights, hit.rates))
        if val > best_val:
            best, best_val, best_wit = np.asarray(hit.rates, dtype=float), val, hit.witness
        if upper - max(best_val, incumbent) <= cfg.eta:
            trace.append(TraceRow(it, upper, best_val, len(vs)))
            termination = "converged"
            break
        # cut at the first known-infeasible point so the polyblock stays outer
        cut = np.minimum(np.asarray(hit.upper_rates, dtype=float), v.z)
        kids = generate_children(v.z, cut)
        kids = [c for c in kids if not np.array_equal(c, v.z)]
        update_vertex_set(vs, v.z, kids)
        trace.append(TraceRow(it, upper, best_val, len(vs)))
        if callback is not None:
            callback(it, v, hit, vs)
    return SolveResult(
        best_point=best,
        best_value=best_val,
        upper_bound=upper,
        witness=best_wit,
        trace=tuple(trace),
        termination=termination,
        iterations=it,
        oracle_calls=getattr(oracle, "calls", it),
        probes=getattr(oracle, "probes", 0),
    )


def _with_origin(cfg, origin):
    return PolyblockConfig(cfg.epsilon, cfg.eta, cfg.max_iterations, origin, cfg.prune,
                           cfg.tol_bits)


def _rmin_vector(rmin, K):
    r = getattr(rmin, "rmin", rmin)
    return np.broadcast_to(np.asarray(r, dtype=float), (K,)).copy()


def solve_channel(ch, cfg=None, rmin=None, callback=None, supports="full"):
    """Polyblock WSR maximization on a channel instance.

    ``rmin`` (array or MinRateConstraint) overrides ``cfg.origin``. With
    ``supports="all"`` the search runs over every set of active users, see
    :func:`solve_supports`.
    """
    cfg = cfg or PolyblockConfig()
    if rmin is not None:
        cfg = _with_origin(cfg, _rmin_vector(rmin, ch.K))
    if supports == "all":
        return solve_supports(ch, cfg, callback=callback)
    if supports != "full":
        raise ChannelError(f"unknown supports mode {supports!r}")
    z1 = initial_vertex(ch)
    oracle = BoundaryOracle(ch, origin=cfg.origin, tol_bits=cfg.tol_bits)
    return solve(oracle, cfg, z1, ch.weights, callback=callback)


def solve_supports(ch, cfg=None, callback=None):
    """Polyblock search over every support (set of active users).

    A plain run only visits vertices with every coordinate at least
    ``epsilon`` above the origin, so it misses optima that switch users off.
    The rate region is the union of its faces, and the face where only the
    users in ``S`` are active is the region of ``subchannel(ch, S)``. Supports
    are visited by increasing size, every run stops once within ``eta`` of
    the best value seen on any support, and a support whose box bound is
    already within ``eta`` of that value is skipped. Users with a positive
    minimum rate belong to every support.

    The trace is global: the upper bound is the largest bound among finished,
    running and pending supports, the lower bound is the best value so far.
    """
    cfg = cfg or PolyblockConfig()
    K = ch.K
    origin = np.zeros(K) if cfg.origin is None else np.asarray(cfg.origin, dtype=float)
    z1 = initial_vertex(ch)
    cfg.validate(z1)
    forced = [k for k in range(K) if origin[k] > 0]
    free = [k for k in range(K) if origin[k] <= 0]
    sets = []
    for size in range(max(len(forced), 1), K + 1):
        for extra in combinations(free, size - len(forced)):
            sets.append(tuple(sorted(forced + list(extra))))
    box = {S: float(np.dot(ch.weights[list(S)], z1[list(S)])) for S in sets}
    done = {}
    best_val, best_point, best_wit = -np.inf, None, None
    trace = []
    it_total = 0
    probes = 0
    calls = 0
    converged = True
    runs = []
    for n, S in enumerate(sets):
        pending = max([box[T] for T in sets[n + 1:]], default=-np.inf)
        finished = max(done.values(), default=-np.inf)
        if box[S] - best_val <= cfg.eta:
            done[S] = box[S]
            runs.append({"users": list(S), "skipped": True, "upper_bound": box[S]})
            continue
        sub = subchannel(ch, S)
        sub_cfg = _with_origin(cfg, origin[list(S)])
        oracle = BoundaryOracle(sub, origin=sub_cfg.origin, tol_bits=cfg.tol_bits)
        try:
            res = solve(oracle, sub_cfg, z1[list(S)], sub.weights, callback=callback,
                        incumbent=best_val)
        except InfeasibleMinRates:
            if len(S) == len(forced):
                raise
            done[S] = -np.inf
            runs.append({"users": list(S), "skipped": False, "infeasible": True})
            continue
        probes += res.probes
        calls += res.oracle_calls
        for t in res.trace:
            lb = max(best_val, t.lower_bound)
            ub = max(t.upper_bound, pending, finished)
            trace.append(TraceRow(it_total + t.iteration, ub, lb, t.num_vertices))
        it_total += res.iterations
        if res.best_value > best_val:
            pt = np.zeros(K)
            pt[list(S)] = res.best_point
            best_val, best_point = res.best_value, pt
            best_wit = None if res.witness is None else lift_witness(ch, S, res.witness)
        done[S] = res.upper_bound
        converged &= res.termination == "converged"
        runs.append({"users": list(S), "skipped": False, "iterations": res.iterations,
                     "best_value": res.best_value, "upper_bound": res.upper_bound,
                     "termination": res.termination})
    upper = max(done.values())
    if trace and upper - best_val <= cfg.eta:
        last = trace[-1]
        if last.upper_bound != upper or last.lower_bound != best_val:
            trace.append(TraceRow(last.iteration, upper, best_val, last.num_vertices))
    return SolveResult(
        best_point=best_point,
        best_value=best_val,
        upper_bound=upper,
        witness=best_wit,
        trace=tuple(trace),
        termination="converged" if converged and upper - best_val <= cfg.eta
        else "iteration_cap",
        iterations=it_total,
        oracle_calls=calls,
        probes=probes,
        info={"supports": runs},
    )


def write_trace_csv(result, fh=None):
    """Write the convergence trace; returns the text when ``fh`` is None."""
    out = io.StringIO() if fh is None else fh
    w = csv.writer(out, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for t in result.trace:
        w.writerow([t.iteration, repr(float(t.upper_bound)), repr(float(t.lower_bound)),
                    t.num_vertices])
    if fh is None:
        return out.getvalue()
    return None
