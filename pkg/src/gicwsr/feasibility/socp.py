"""Small dense second-order cone feasibility solver.

Solves the phase-I problem

    minimize    s
    subject to  ||B_i z + b_i|| <= a_i^T z + a0_i + w_i s,   i = 1..m

over ``z`` by a log-barrier path-following interior-point method with
damped Newton steps. ``w_i`` is 1 for cones that carry the slack and 0 for
cones that do not (budgets). The original cone system is feasible iff the
optimal ``s`` is <= 0, so the method stops early as soon as an iterate has
``s <= 0`` (feasible) or the duality-gap lower bound on ``s`` turns positive
(infeasible).

Cones are stacked into dense arrays with zero-padded rows. The Newton loop
itself lives in :mod:`gicwsr.kernels` (compiled and numpy variants).
"""
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..errors import SolverFailure

__all__ = ["ConeSystem", "Phase1Result", "solve_phase1"]


@dataclass(frozen=True)
class ConeSystem:
    a: np.ndarray   # (m, d)
    a0: np.ndarray  # (m,)
    B: np.ndarray   # (m, r, d)
    b0: np.ndarray  # (m, r)
    w: np.ndarray   # (m,) slack coefficient, 0 or 1


@dataclass(frozen=True)
class Phase1Result:
    status: str     # "feasible" | "infeasible" | "boundary"
    z: np.ndarray
    s: float
    lower_bound: float
    newton_steps: int


_STATUS = {0: "feasible", 1: "infeasible", 2: "boundary"}


def solve_phase1(cs, z0, s0, gap_tol=1e-10, mu=20.0, tau0=1.0, max_newton=600):
    """Run the barrier method from the strictly feasible point ``(z0, s0)``.

    Raises
    ------
    SolverFailure
        The start point is not strictly feasible or the Newton budget ran out.
    """
    status, z, s, lower, steps = kernels.phase1(
        np.ascontiguousarray(cs.a, dtype=float), np.ascontiguousarray(cs.a0, dtype=float),
        np.ascontiguousarray(cs.B, dtype=float), np.ascontiguousarray(cs.b0, dtype=float),
        np.ascontiguousarray(cs.w, dtype=float), np.asarray(z0, dtype=float), float(s0),
        float(gap_tol), float(mu), float(tau0), int(max_newton))
    if status == -1:
        raise SolverFailure("phase-I start point is not strictly feasible")
    if status == -2:
        raise SolverFailure(f"barrier method exceeded {max_newton} Newton steps")
    return Phase1Result(_STATUS[status], z, float(s), float(lower), int(steps))
