"""Compiled and numpy kernels must make the same decisions."""
import os
import subprocess
import sys

import numpy as np
import pytest

from gicwsr import kernels
from gicwsr.feasibility import miso, simo, siso
from gicwsr.instances import random_channel

JIT, NP = kernels.IMPLS["numba"], kernels.IMPLS["numpy"]


def test_perron_root_parity(rng):
    for _ in range(20):
        A = rng.random((5, 5))
        r1, x1, ok1 = JIT["perron_root"](A, 1e-13, 1000)
        r2, x2, ok2 = NP["perron_root"](A, 1e-13, 1000)
        assert ok1 and ok2
        assert r1 == pytest.approx(r2, rel=1e-10)
        assert r1 == pytest.approx(np.max(np.abs(np.linalg.eigvals(A))), rel=1e-10)


def test_grid_wsr_parity():
    ch = random_channel("siso", 3, 2, noise=0.2)
    args = (np.ascontiguousarray(ch.gain), ch.noise, ch.weights, ch.pmax, 15, np.zeros(3))
    v1, i1 = JIT["grid_wsr"](*args)
    v2, i2 = NP["grid_wsr"](*args)
    assert v1 == pytest.approx(v2, rel=1e-12)
    assert np.array_equal(i1, i2)


def test_vertex_kernels_parity(rng):
    Z = rng.random((300, 3))
    mask = rng.random(300) < 0.8
    vals = Z.sum(axis=1)
    assert JIT["select_vertex"](Z, vals, mask) == NP["select_vertex"](Z, vals, mask)
    C = rng.random((30, 3)) * 1.1
    assert np.array_equal(JIT["undominated"](Z, mask, C), NP["undominated"](Z, mask, C))
    for c in C[:5]:
        assert JIT["is_dominated"](Z, mask, c) == NP["is_dominated"](Z, mask, c)


def test_siso_bisect_parity(rng):
    ch = random_channel("siso", 4, 3, noise=0.1)
    for _ in range(20):
        a = rng.random(4)
        a /= a.sum()
        args = (np.ascontiguousarray(ch.gain), ch.noise, ch.pmax, a, np.zeros(4), 0.0, 30.0,
                1e-6, siso.RHO_GUARD, siso.POWER_SLACK)
        r1, r2 = JIT["siso_bisect"](*args), NP["siso_bisect"](*args)
        assert r1[0] == r2[0] and r1[1] == r2[1] and r1[4] == r2[4]


def test_simo_balance_parity(rng):
    ch = random_channel("simo", 3, 5, noise=0.1)
    Hs = simo._padded(ch)
    for _ in range(20):
        g = rng.uniform(0.2, 10.0, 3)
        args = (Hs, ch.noise, ch.pmax, g, 1e-8, 1000, simo.BUDGET_SLACK)
        c1, p1, _, s1 = JIT["simo_balance"](*args)
        c2, p2, _, s2 = NP["simo_balance"](*args)
        assert s1 == s2
        assert c1 == pytest.approx(c2, rel=1e-8)


def test_phase1_parity(rng):
    ch = random_channel("miso", 3, 5, noise=0.1)
    users = (0, 1, 2)
    _, Z, a_unit, a0, B, b0, w = miso._geometry(ch, users)
    for _ in range(20):
        g = rng.uniform(0.2, 10.0, 3)
        a = a_unit.copy()
        a[:3] *= np.sqrt(1 + 1 / g)[:, None]
        args = (a, a0, B, b0, w, np.zeros(Z.shape[1]), 2.0, 1e-10, 20.0, 1.0, 600)
        assert JIT["phase1"](*args)[0] == NP["phase1"](*args)[0]


def test_env_flag_selects_numpy():
    env = dict(os.environ, GICWSR_DISABLE_JIT="1")
    code = "import gicwsr; print(gicwsr.backend())"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "numpy"
