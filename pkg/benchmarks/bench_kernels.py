"""Compare the numba and pure-numpy kernel backends.

Both backends are importable side by side through ``kernels.IMPLS``, so one
process times both. Each kernel is called once untimed (JIT compilation or
cache load), then timed as the best of ``--repeat`` rounds.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5] [--number N]
"""
import argparse
import time

import numpy as np

from gicwsr import kernels
from gicwsr.feasibility import miso, simo, siso
from gicwsr.instances import random_channel


def _cases():
    rng = np.random.default_rng(0)
    cases = {}

    A = rng.random((6, 6)) + 0.01
    cases["perron_root"] = ((A, 1e-13, 1000), 2000)

    ch3 = random_channel("siso", 3, 1, noise=0.1)
    gain = np.ascontiguousarray(ch3.gain)
    cases["grid_wsr"] = ((gain, ch3.noise, ch3.weights, ch3.pmax, 41, np.zeros(3)), 5)

    Z = rng.random((3000, 4))
    C = rng.random((16, 4)) * 1.2
    cases["undominated"] = ((Z, np.ones(3000, dtype=np.bool_), C), 200)

    ch4 = random_channel("siso", 4, 2, noise=0.1)
    alpha = np.array([0.3, 0.2, 0.4, 0.1])
    cases["siso_bisect"] = ((np.ascontiguousarray(ch4.gain), ch4.noise, ch4.pmax, alpha,
                             np.zeros(4), 0.0, 20.0, 1e-6, siso.RHO_GUARD,
                             siso.POWER_SLACK), 500)

    chs = random_channel("simo", 4, 3, noise=0.1)
    Hs = simo._padded(chs)
    cases["simo_balance"] = ((Hs, chs.noise, chs.pmax, np.full(4, 1.5), 1e-8, 1000,
                              simo.BUDGET_SLACK), 500)

    chm = random_channel("miso", 4, 3, noise=0.1)
    users = (0, 1, 2, 3)
    _, Zm, a_unit, a0, B, b0, w = miso._geometry(chm, users)
    a = a_unit.copy()
    a[:4] *= np.sqrt(1.0 + 1.0 / 1.5)
    cases["phase1"] = ((np.ascontiguousarray(a), a0, B, b0, np.ascontiguousarray(w),
                        np.zeros(Zm.shape[1]), 2.0, 1e-10, 20.0, 1.0, 600), 50)
    return cases


def _time(fn, args, number, repeat):
    fn(*args)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / number)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=None,
                    help="calls per round (default: per-kernel)")
    args = ap.parse_args(argv)
    print(f"{'kernel':<14} {'numba':>12} {'numpy':>12} {'speedup':>8}")
    for name, (fargs, number) in _cases().items():
        n = args.number or number
        t_jit = _time(kernels.IMPLS["numba"][name], fargs, n, args.repeat)
        t_np = _time(kernels.IMPLS["numpy"][name], fargs, n, args.repeat)
        print(f"{name:<14} {t_jit * 1e6:10.1f}us {t_np * 1e6:10.1f}us {t_np / t_jit:7.1f}x")


if __name__ == "__main__":
    main()
