"""Property-based checks over random instances."""
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from gicwsr.channel import rate_of, sinr_siso
from gicwsr.feasibility import siso
from gicwsr.instances import random_siso
from gicwsr.polyblock import VertexSet, generate_children

seeds = st.integers(0, 2 ** 31 - 1)


@given(st.lists(st.floats(0, 1e6), min_size=1, max_size=6))
def test_rate_of_monotone(g):
    g = np.sort(np.array(g))
    r = rate_of(g)
    assert np.all(np.diff(r) >= 0)
    assert np.all(r >= 0)


@settings(max_examples=50, deadline=None)
@given(seeds, st.floats(0.05, 3.0), st.floats(0.05, 3.0))
def test_siso_feasible_iff_reached(seed, g1, g2):
    ch = random_siso(2, seed, noise=0.3)
    g = np.array([g1, g2])
    out = siso.check_feasible(ch, g)
    if out.feasible:
        p = out.witness["p"]
        assert np.all(p <= ch.pmax)
        assert np.all(sinr_siso(ch, p) >= g * (1 - 1e-8))
    # scaling an infeasible target up keeps it infeasible
    else:
        assert not siso.check_feasible(ch, 1.5 * g).feasible


@settings(max_examples=50, deadline=None)
@given(seeds, st.floats(0.01, 0.5))
def test_children_dominated(seed, frac):
    rng = np.random.default_rng(seed)
    z = rng.uniform(1, 5, 3)
    r = z * (1 - frac * rng.random(3))
    kids = generate_children(z, r)
    assert np.all(kids <= z)
    assert np.all(kids >= r)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_vertex_set_pruned_is_antichain(seed):
    rng = np.random.default_rng(seed)
    vs = VertexSet(3, np.ones(3), np.zeros(3), 0.01)
    for z in rng.random((120, 3)):
        vs.add(z)
    Z = vs.Z
    for i in range(len(Z)):
        others = np.delete(Z, i, axis=0)
        assert not np.any(np.all(others >= Z[i], axis=1))
