import json

import numpy as np
import pytest

from gicwsr.channel import MisoChannel, sinr_miso
from gicwsr.feasibility import miso
from gicwsr.instances import random_miso
from gicwsr.reference import random_search_miso

from conftest import orthogonal_miso


def test_cone_structure_single_user():
    ch = MisoChannel([[np.array([1.0, 1.0])]], noise=1.0, pmax=3.0)
    prog = miso.build_cone_program(ch, [1.0])
    assert prog.n == 3
    assert len(prog.E) == 1
    assert prog.power.size == 1


def test_cone_empty_targets():
    ch = random_miso(2, 2, 0)
    prog = miso.build_cone_program(ch, [0.0, 0.0])
    assert len(prog.E) == 0
    out = miso.check_feasible(ch, [0.0, 0.0])
    assert out.feasible
    assert all(np.all(v == 0) for v in out.witness["V"])


def test_cone_block_layout():
    ch = random_miso(2, 2, 1, noise=[0.5, 2.0])
    prog = miso.build_cone_program(ch, [1.0, 1.0])
    E1 = prog.E[0]
    assert E1.shape == (3, 5)
    assert E1[0, 0:2] == pytest.approx(ch.h[0][0].conj())
    assert E1[1, 2:4] == pytest.approx(ch.h[0][1].conj())
    assert np.all(E1[2] == 0)
    assert np.all(E1[:, 4] == 0)
    assert prog.nvec[0][-1] == pytest.approx(np.sqrt(0.5))
    assert prog.coef[0] == pytest.approx(np.sqrt(2.0))


def test_cone_json_dump():
    ch = random_miso(2, 2, 1)
    d = json.loads(miso.build_cone_program(ch, [1.0, 2.0]).to_json())
    assert d["n"] == 5
    assert len(d["sinr_cones"]) == 2
    assert len(d["power_cones"]) == 2
    assert len(d["sinr_cones"][0]["E"][0][0]) == 2


def test_embedding_preserves_cones(rng):
    # real embedding must reproduce complex cone values at any point
    ch = random_miso(2, 2, 3)
    g = np.array([0.7, 1.3])
    prog = miso.build_cone_program(ch, g)
    cs, Aeq = miso.embed(prog)
    x = np.zeros(prog.n, dtype=complex)
    x[:-1] = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    xi = np.concatenate([x[:-1].real, x[:-1].imag])
    for i in range(2):
        sig = prog.nvec[i][-1]
        lhs = np.linalg.norm(prog.E[i] @ x + prog.nvec[i]) / sig
        assert np.linalg.norm(cs.B[i] @ xi + cs.b0[i]) == pytest.approx(lhs, rel=1e-12)
        d = prog.direct[i] @ x
        assert cs.a[i] @ xi == pytest.approx(prog.coef[i] * d.real / sig, rel=1e-12)
        assert Aeq[i] @ xi == pytest.approx(d.imag, abs=1e-12)


def test_single_user_threshold():
    h = np.array([1.0, 1.0])
    ch = MisoChannel([[h]], noise=1.0, pmax=3.0)
    out = miso.check_feasible(ch, [6.0])
    assert out.feasible
    v = out.witness["V"][0]
    mrt = np.sqrt(3.0) * h / np.linalg.norm(h)
    assert abs(np.vdot(mrt, v)) == pytest.approx(3.0, rel=1e-6)
    assert not miso.check_feasible(ch, [6.0 * (1 + 1e-6)]).feasible


def test_orthogonal_channels():
    ch = orthogonal_miso()
    assert miso.check_feasible(ch, [2.9, 2.9]).feasible
    assert not miso.check_feasible(ch, [3.1, 1.0]).feasible


def test_witness_valid(rng):
    ch = random_miso(3, 2, 5, noise=0.3)
    for _ in range(10):
        g = rng.uniform(0.1, 2.0, 3)
        out = miso.check_feasible(ch, g)
        if out.feasible:
            V = out.witness["V"]
            assert all(np.vdot(v, v).real <= ch.pmax[k] + 1e-9 for k, v in enumerate(V))
            assert np.all(sinr_miso(ch, V) >= g * (1 - 1e-8))


def test_random_search_soundness(rng):
    ch = random_miso(2, 2, 7)
    for _ in range(5):
        g = rng.uniform(0.1, 3.0, 2)
        if random_search_miso(ch, g, samples=20000, seed=1).found:
            assert miso.check_feasible(ch, g).feasible


def test_monotone_in_targets(rng):
    ch = random_miso(3, 2, 9)
    for _ in range(10):
        g = rng.uniform(0.1, 3.0, 3)
        if miso.check_feasible(ch, g).feasible:
            assert miso.check_feasible(ch, g * rng.uniform(0.3, 1.0, 3)).feasible


def test_phase_rotation_invariance(rng):
    ch = random_miso(2, 2, 11)
    h = [[v.copy() for v in row] for row in ch.h]
    h[0][0] = h[0][0] * np.exp(1j * 0.7)
    h[1][1] = h[1][1] * np.exp(-1j * 2.1)
    rot = MisoChannel(h, ch.noise, ch.pmax, ch.weights)
    for _ in range(10):
        g = rng.uniform(0.1, 3.0, 2)
        assert miso.check_feasible(ch, g).feasible == miso.check_feasible(rot, g).feasible


def test_decide_agrees(rng):
    ch = random_miso(3, 2, 2, noise=0.2)
    for _ in range(10):
        g = rng.uniform(0.1, 4.0, 3)
        ok, V = miso.decide(ch, g, return_powers=True)
        assert ok == miso.check_feasible(ch, g).feasible
        assert (V is not None) == ok


def test_cross_check_with_generic_conic_solver(rng):
    cp = pytest.importorskip("cvxpy")
    ch = random_miso(3, 2, 13, noise=0.3)
    for _ in range(8):
        g = rng.uniform(0.1, 3.0, 3)
        V = [cp.Variable(2, complex=True) for _ in range(3)]
        cons = []
        for k in range(3):
            direct = ch.h[k][k].conj() @ V[k]
            interf = cp.hstack([ch.h[k][j].conj() @ V[j] for j in range(3) if j != k]
                               + [np.sqrt(ch.noise[k])])
            cons += [cp.norm(interf) <= cp.real(direct) / np.sqrt(g[k]),
                     cp.imag(direct) == 0, cp.norm(V[k]) <= np.sqrt(ch.pmax[k])]
        prob = cp.Problem(cp.Minimize(0), cons)
        try:
            prob.solve()
        except cp.error.SolverError:
            pytest.skip("no conic solver available")
        ref = prob.status in ("optimal", "optimal_inaccurate")
        ours = miso.check_feasible(ch, g).feasible
        if ours != ref:
            # only tolerated right at the boundary
            assert miso.check_feasible(ch, g * 0.999).feasible
            assert not miso.check_feasible(ch, g * 1.001).feasible
