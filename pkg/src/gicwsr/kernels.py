"""Hot numeric kernels.

Every kernel exists twice: a numba ``@njit`` loop version (``_jit_*``) and a
vectorized numpy version (``_np_*``). The public names bind to one of them at
import time according to :mod:`gicwsr._accel`. Both versions share the exact
same contract so tests and the benchmark can call either one directly.
"""
import numpy as np

from ._accel import USE_JIT, njit

__all__ = [
    "perron_root",
    "grid_wsr",
    "select_vertex",
    "is_dominated",
    "undominated",
    "siso_bisect",
    "simo_balance",
    "phase1",
    "IMPLS",
]

# ---------------------------------------------------------------------------
# Perron root of a nonnegative matrix by shifted power iteration.
#
# Collatz-Wielandt bounds min_i (Ax)_i/x_i <= rho(A) <= max_i (Ax)_i/x_i hold
# for any positive x. Each step maps x -> Ax + hi*x; the shift by the current
# upper bound keeps x positive and breaks periodicity without changing the
# eigenvectors. Callers fall back to a dense eigensolve when not converged.
# ---------------------------------------------------------------------------


@njit
def _jit_perron_root(A, tol, maxiter):
    n = A.shape[0]
    return _jit_perron_from(A, np.ones(n) / n, tol, maxiter)


@njit
def _jit_perron_from(A, x0, tol, maxiter):
    n = A.shape[0]
    x = x0.copy()
    y = np.empty(n)
    lo = 0.0
    hi = 0.0
    for _ in range(maxiter):
        lo = np.inf
        hi = 0.0
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += A[i, j] * x[j]
            y[i] = acc
            r = acc / x[i]
            if r < lo:
                lo = r
            if r > hi:
                hi = r
        if hi - lo <= tol * hi:
            return 0.5 * (lo + hi), x, True
        tot = 0.0
        for i in range(n):
            y[i] += hi * x[i]
            tot += y[i]
        for i in range(n):
            x[i] = y[i] / tot
    return 0.5 * (lo + hi), x, False


def _np_perron_root(A, tol, maxiter):
    n = np.shape(A)[0]
    return _np_perron_from(A, np.ones(n) / n, tol, maxiter)


def _np_perron_from(A, x0, tol, maxiter):
    A = np.asarray(A, dtype=float)
    x = np.array(x0, dtype=float)
    lo = hi = 0.0
    for _ in range(maxiter):
        y = A @ x
        ratio = y / x
        lo, hi = ratio.min(), ratio.max()
        if hi - lo <= tol * hi:
            return 0.5 * (lo + hi), x, True
        y += hi * x
        x = y / y.sum()
    return 0.5 * (lo + hi), x, False


# ---------------------------------------------------------------------------
# Exhaustive power-grid WSR search for SISO channels.
# ---------------------------------------------------------------------------


@njit
def _jit_grid_wsr(gain, noise, weights, pmax, npts, rmin):
    K = gain.shape[0]
    idx = np.zeros(K, dtype=np.int64)
    p = np.zeros(K)
    best = -np.inf
    best_idx = np.zeros(K, dtype=np.int64)
    total = 1
    for _ in range(K):
        total *= npts
    for _ in range(total):
        for k in range(K):
            p[k] = pmax[k] * idx[k] / (npts - 1)
        u = 0.0
        ok = True
        for k in range(K):
            interf = noise[k]
            for j in range(K):
                if j != k:
                    interf += gain[k, j] * p[j]
            r = np.log2(1.0 + gain[k, k] * p[k] / interf)
            if r < rmin[k]:
                ok = False
                break
            u += weights[k] * r
        if ok and u > best:
            best = u
            best_idx[:] = idx
        # odometer increment, last coordinate fastest
        k = K - 1
        while k >= 0:
            idx[k] += 1
            if idx[k] < npts:
                break
            idx[k] = 0
            k -= 1
    return best, best_idx


def _np_grid_wsr(gain, noise, weights, pmax, npts, rmin, chunk=1 << 16):
    K = gain.shape[0]
    total = npts ** K
    diag = np.diag(gain)
    offdiag = gain - np.diag(diag)
    strides = npts ** np.arange(K - 1, -1, -1)
    best = -np.inf
    best_idx = np.zeros(K, dtype=np.int64)
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total))
        idx = (flat[:, None] // strides) % npts
        p = pmax * idx / (npts - 1)
        sinr = p * diag / (p @ offdiag.T + noise)
        r = np.log2(1.0 + sinr)
        u = r @ weights
        u[(r < rmin).any(axis=1)] = -np.inf
        i = int(np.argmax(u))
        if u[i] > best:
            best = float(u[i])
            best_idx = idx[i].astype(np.int64)
    return best, best_idx


# ---------------------------------------------------------------------------
# Vertex-set primitives. Z is an (n, K) array of vertices, ``mask`` flags the
# rows that take part in the operation.
# ---------------------------------------------------------------------------


@njit
def _jit_select_vertex(Z, values, mask):
    best = -1
    for i in range(Z.shape[0]):
        if not mask[i]:
            continue
        if best < 0 or values[i] > values[best]:
            best = i
        elif values[i] == values[best]:
            # lexicographically largest z wins ties
            for k in range(Z.shape[1]):
                if Z[i, k] > Z[best, k]:
                    best = i
                    break
                if Z[i, k] < Z[best, k]:
                    break
    return best


def _np_select_vertex(Z, values, mask):
    cand = np.flatnonzero(mask)
    if cand.size == 0:
        return -1
    v = values[cand]
    top = cand[v == v.max()]
    if top.size == 1:
        return int(top[0])
    keys = Z[top].T[::-1]
    return int(top[np.lexsort(keys)[-1]])


@njit
def _jit_is_dominated(Z, mask, c):
    for i in range(Z.shape[0]):
        if not mask[i]:
            continue
        dom = True
        for k in range(Z.shape[1]):
            if Z[i, k] < c[k]:
                dom = False
                break
        if dom:
            return True
    return False


def _np_is_dominated(Z, mask, c):
    if not mask.any():
        return False
    return bool(np.all(Z[mask] >= c, axis=1).any())


@njit
def _jit_undominated(Z, mask, C):
    out = np.ones(C.shape[0], dtype=np.bool_)
    for c in range(C.shape[0]):
        for i in range(Z.shape[0]):
            if not mask[i]:
                continue
            dom = True
            for k in range(Z.shape[1]):
                if Z[i, k] < C[c, k]:
                    dom = False
                    break
            if dom:
                out[c] = False
                break
    return out


def _np_undominated(Z, mask, C):
    Zm = Z[mask]
    if Zm.shape[0] == 0:
        return np.ones(C.shape[0], dtype=np.bool_)
    return ~np.all(Zm[None, :, :] >= C[:, None, :], axis=2).any(axis=1)


# ---------------------------------------------------------------------------
# Fused SISO ray bisection. For nonnegative G and eta > 0, p = (I - G)^{-1} eta
# is strictly positive iff rho(G) < 1 (Collatz-Wielandt: Gp = p - eta < p), so
# one small linear solve decides each probe. The guard band on rho is applied
# to the Collatz-Wielandt upper bound max_i (Gp)_i / p_i.
# ---------------------------------------------------------------------------


@njit
def _jit_siso_probe(gain, noise, pmax, rates, rho_guard, power_slack, p_out):
    K = gain.shape[0]
    n = 0
    act = np.empty(K, dtype=np.int64)
    for k in range(K):
        p_out[k] = 0.0
        if rates[k] > 0.0:
            act[n] = k
            n += 1
    if n == 0:
        return True
    M = np.empty((n, n + 1))
    for a in range(n):
        k = act[a]
        g = 2.0 ** rates[k] - 1.0
        d = gain[k, k]
        for b in range(n):
            j = act[b]
            M[a, b] = -g * gain[k, j] / d if j != k else 1.0
        M[a, n] = g * noise[k] / d
    # Gaussian elimination with partial pivoting
    for c in range(n):
        piv = c
        for a in range(c + 1, n):
            if abs(M[a, c]) > abs(M[piv, c]):
                piv = a
        if M[piv, c] == 0.0:
            return False
        if piv != c:
            for b in range(n + 1):
                t = M[c, b]
                M[c, b] = M[piv, b]
                M[piv, b] = t
        for a in range(c + 1, n):
            f = M[a, c] / M[c, c]
            if f != 0.0:
                for b in range(c, n + 1):
                    M[a, b] -= f * M[c, b]
    x = np.empty(n)
    for a in range(n - 1, -1, -1):
        acc = M[a, n]
        for b in range(a + 1, n):
            acc -= M[a, b] * x[b]
        x[a] = acc / M[a, a]
    for a in range(n):
        if not x[a] > 0.0:
            return False
        if x[a] > pmax[act[a]] * (1.0 + power_slack):
            return False
    # Collatz-Wielandt bound on rho(G)
    for a in range(n):
        k = act[a]
        g = 2.0 ** rates[k] - 1.0
        acc = 0.0
        for b in range(n):
            j = act[b]
            if j != k:
                acc += g * gain[k, j] / gain[k, k] * x[b]
        if acc / x[a] >= 1.0 - rho_guard:
            return False
    for a in range(n):
        p_out[act[a]] = min(x[a], pmax[act[a]])
    return True


@njit
def _jit_siso_bisect(gain, noise, pmax, alpha, origin, lo, hi, tol, rho_guard, power_slack):
    K = gain.shape[0]
    base = 0.0
    for k in range(K):
        base += origin[k]
    rates = np.empty(K)
    p = np.empty(K)
    p_lo = np.zeros(K)
    probes = 0
    for k in range(K):
        rates[k] = origin[k] + alpha[k] * (lo - base)
    probes += 1
    if not _jit_siso_probe(gain, noise, pmax, rates, rho_guard, power_slack, p_lo):
        return lo, hi, p_lo, probes, -1
    if hi <= lo:
        return lo, lo, p_lo, probes, 1
    for k in range(K):
        rates[k] = origin[k] + alpha[k] * (hi - base)
    probes += 1
    if _jit_siso_probe(gain, noise, pmax, rates, rho_guard, power_slack, p):
        return hi, hi, p.copy(), probes, 1
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        for k in range(K):
            rates[k] = origin[k] + alpha[k] * (mid - base)
        probes += 1
        if _jit_siso_probe(gain, noise, pmax, rates, rho_guard, power_slack, p):
            lo = mid
            p_lo[:] = p
        else:
            hi = mid
    return lo, hi, p_lo, probes, 0


def _np_siso_probe(gain, noise, pmax, rates, rho_guard, power_slack):
    K = gain.shape[0]
    p = np.zeros(K)
    act = np.flatnonzero(rates > 0)
    if act.size == 0:
        return p
    g = np.exp2(rates[act]) - 1.0
    sub = gain[np.ix_(act, act)]
    d = np.diag(sub)
    G = (g / d)[:, None] * sub
    np.fill_diagonal(G, 0.0)
    eta = g * noise[act] / d
    try:
        x = np.linalg.solve(np.eye(act.size) - G, eta)
    except np.linalg.LinAlgError:
        return None
    if not np.all(x > 0) or np.any(x > pmax[act] * (1.0 + power_slack)):
        return None
    if np.max(G @ x / x) >= 1.0 - rho_guard:
        return None
    p[act] = np.minimum(x, pmax[act])
    return p


def _np_siso_bisect(gain, noise, pmax, alpha, origin, lo, hi, tol, rho_guard, power_slack):
    base = origin.sum()
    args = (gain, noise, pmax)
    p_lo = _np_siso_probe(*args, origin + alpha * (lo - base), rho_guard, power_slack)
    probes = 1
    if p_lo is None:
        return lo, hi, np.zeros(gain.shape[0]), probes, -1
    if hi <= lo:
        return lo, lo, p_lo, probes, 1
    p = _np_siso_probe(*args, origin + alpha * (hi - base), rho_guard, power_slack)
    probes += 1
    if p is not None:
        return hi, hi, p, probes, 1
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        p = _np_siso_probe(*args, origin + alpha * (mid - base), rho_guard, power_slack)
        probes += 1
        if p is not None:
            lo, p_lo = mid, p
        else:
            hi = mid
    return lo, hi, p_lo, probes, 0


# ---------------------------------------------------------------------------
# SIMO max-min SINR balancing: alternating MMSE receivers and Perron
# eigenvectors of the extended coupling matrix, swept over the budget index.
# Hs[k, :, j] holds h_{k,j} zero-padded to a common receiver dimension; the
# padding only adds noise-only coordinates, which MMSE ignores.
#
# Status codes: 0 ok, 1 no admissible sub-problem, 2 non-positive Perron
# vector, 3 Perron iteration did not converge. Callers treat any nonzero
# status by rerunning the reference implementation.
# ---------------------------------------------------------------------------


@njit
def _jit_csolve(R, b):
    n = R.shape[0]
    M = R.copy()
    x = b.copy()
    for c in range(n):
        piv = c
        for a in range(c + 1, n):
            if abs(M[a, c]) > abs(M[piv, c]):
                piv = a
        if piv != c:
            for j in range(n):
                t = M[c, j]
                M[c, j] = M[piv, j]
                M[piv, j] = t
            t = x[c]
            x[c] = x[piv]
            x[piv] = t
        for a in range(c + 1, n):
            f = M[a, c] / M[c, c]
            if f != 0:
                for j in range(c, n):
                    M[a, j] -= f * M[c, j]
                x[a] -= f * x[c]
    for a in range(n - 1, -1, -1):
        acc = x[a]
        for j in range(a + 1, n):
            acc -= M[a, j] * x[j]
        x[a] = acc / M[a, a]
    return x


@njit
def _jit_simo_subproblem(Hs, noise, pmax, gbar, i, tol, maxit, p_out):
    K = Hs.shape[0]
    M = Hs.shape[1]
    p = np.zeros(K)
    A = np.empty((K + 1, K + 1))
    R = np.empty((M, M), dtype=np.complex128)
    W = np.empty((K, M), dtype=np.complex128)
    rho_prev = np.inf
    rho = np.inf
    x = np.ones(K + 1) / (K + 1)
    for _ in range(maxit):
        # MMSE receivers
        for k in range(K):
            for a in range(M):
                for b in range(M):
                    R[a, b] = noise[k] if a == b else 0.0
            for j in range(K):
                if j == k or p[j] == 0.0:
                    continue
                for a in range(M):
                    for b in range(M):
                        R[a, b] += p[j] * Hs[k, a, j] * np.conj(Hs[k, b, j])
            W[k] = _jit_csolve(R, Hs[k, :, k].copy())
        # extended coupling matrix
        for k in range(K):
            nw = 0.0
            for a in range(M):
                nw += W[k, a].real ** 2 + W[k, a].imag ** 2
            S = 0.0
            for j in range(K):
                acc = 0.0 + 0.0j
                for a in range(M):
                    acc += np.conj(W[k, a]) * Hs[k, a, j]
                g = acc.real ** 2 + acc.imag ** 2
                if j == k:
                    S = g
                    A[k, j] = 0.0
                else:
                    A[k, j] = g
            d = gbar[k] / S
            for j in range(K):
                A[k, j] *= d
            A[k, K] = d * noise[k] * nw
        for j in range(K + 1):
            A[K, j] = A[i, j] / pmax[i]
        # warm start from the previous eigenvector
        rho, x, ok = _jit_perron_from(A, x, 1e-13, 1000)
        if not ok:
            return rho, 3
        xmax = 0.0
        for j in range(K + 1):
            xmax = max(xmax, x[j])
        for j in range(K + 1):
            if not x[j] > 0.0 or not x[K] > 1e-10 * xmax:
                return rho, 2
        for k in range(K):
            p[k] = x[k] / x[K]
        if rho_prev - rho < tol:
            break
        rho_prev = rho
    p_out[:] = p
    return rho, 0


@njit
def _jit_simo_balance(Hs, noise, pmax, gbar, tol, maxit, budget_slack):
    K = Hs.shape[0]
    p = np.empty(K)
    for i in range(K):
        rho, status = _jit_simo_subproblem(Hs, noise, pmax, gbar, i, tol, maxit, p)
        if status != 0:
            return 0.0, p, i, status
        ok = True
        for k in range(K):
            if p[k] > pmax[k] * (1.0 + budget_slack):
                ok = False
                break
        if ok:
            return 1.0 / rho, p, i, 0
    return 0.0, p, -1, 1


def _np_simo_subproblem(Hs, noise, pmax, gbar, i, tol, maxit):
    K, M, _ = Hs.shape
    p = np.zeros(K)
    rho_prev = np.inf
    rho = np.inf
    x = np.ones(K + 1) / (K + 1)
    eye = np.eye(M)
    for _ in range(maxit):
        q = np.broadcast_to(p, (K, K)).copy()
        np.fill_diagonal(q, 0.0)
        R = np.einsum("kj,kaj,kbj->kab", q, Hs, Hs.conj()) + noise[:, None, None] * eye
        diag_h = Hs[np.arange(K), :, np.arange(K)]
        W = np.linalg.solve(R, diag_h[..., None])[..., 0]
        G = np.abs(np.einsum("ka,kaj->kj", W.conj(), Hs)) ** 2
        S = np.diag(G).copy()
        np.fill_diagonal(G, 0.0)
        d = gbar / S
        A = np.empty((K + 1, K + 1))
        A[:K, :K] = d[:, None] * G
        A[:K, K] = d * noise * np.sum(np.abs(W) ** 2, axis=1)
        A[K] = A[i] / pmax[i]
        rho, x, ok = _np_perron_from(A, x, 1e-13, 1000)
        if not ok:
            return rho, p, 3
        if np.any(x <= 0) or not x[K] > 1e-10 * x.max():
            return rho, p, 2
        p = x[:K] / x[K]
        if rho_prev - rho < tol:
            break
        rho_prev = rho
    return rho, p, 0


def _np_simo_balance(Hs, noise, pmax, gbar, tol, maxit, budget_slack):
    K = Hs.shape[0]
    p = np.empty(K)
    for i in range(K):
        rho, p, status = _np_simo_subproblem(Hs, noise, pmax, gbar, i, tol, maxit)
        if status != 0:
            return 0.0, p, i, status
        if np.all(p <= pmax * (1.0 + budget_slack)):
            return 1.0 / rho, p, i, 0
    return 0.0, p, -1, 1


# ---------------------------------------------------------------------------
# Phase-I barrier method for second-order cone feasibility:
#     minimize s  s.t.  ||B_i z + b_i|| <= a_i^T z + a0_i + w_i s.
# Barrier f = tau s - sum log(T_i^2 - ||u_i||^2), damped Newton with Armijo
# backtracking, tau multiplied by mu after each centering. Returns
# (status, z, s, lower_bound, newton_steps) with status 0 feasible (s <= 0
# reached), 1 infeasible (duality bound on s positive), 2 boundary (gap below
# gap_tol without a decision), -1 start not strictly feasible, -2 Newton
# step budget exhausted.
# ---------------------------------------------------------------------------


@njit
def _jit_rsolve(H, g):
    n = H.shape[0]
    M = H.copy()
    x = g.copy()
    for c in range(n):
        piv = c
        for a in range(c + 1, n):
            if abs(M[a, c]) > abs(M[piv, c]):
                piv = a
        if M[piv, c] == 0.0:
            return x, False
        if piv != c:
            for j in range(n):
                t = M[c, j]
                M[c, j] = M[piv, j]
                M[piv, j] = t
            t = x[c]
            x[c] = x[piv]
            x[piv] = t
        for a in range(c + 1, n):
            f = M[a, c] / M[c, c]
            if f != 0.0:
                for j in range(c, n):
                    M[a, j] -= f * M[c, j]
                x[a] -= f * x[c]
    for a in range(n - 1, -1, -1):
        acc = x[a]
        for j in range(a + 1, n):
            acc -= M[a, j] * x[j]
        x[a] = acc / M[a, a]
    return x, True


@njit
def _jit_barrier_terms(a, a0, B, b0, w, z, s, T, U, D):
    m, r, d = B.shape
    ok = True
    for i in range(m):
        t = a0[i] + w[i] * s
        for k in range(d):
            t += a[i, k] * z[k]
        T[i] = t
        nn = 0.0
        for q in range(r):
            u = b0[i, q]
            for k in range(d):
                u += B[i, q, k] * z[k]
            U[i, q] = u
            nn += u * u
        D[i] = t * t - nn
        if not (t > 0.0 and D[i] > 0.0):
            ok = False
    return ok


@njit
def _jit_barrier_value(a, a0, B, b0, w, z, s, tau, T, U, D):
    if not _jit_barrier_terms(a, a0, B, b0, w, z, s, T, U, D):
        return np.inf
    f = tau * s
    for i in range(D.size):
        f -= np.log(D[i])
    return f


@njit
def _jit_phase1(a, a0, B, b0, w, z0, s0, gap_tol, mu, tau0, max_newton):
    m, r, d = B.shape
    n = d + 1
    z = z0.copy()
    s = s0
    T = np.empty(m)
    U = np.empty((m, r))
    D = np.empty(m)
    lower = -np.inf
    if not _jit_barrier_terms(a, a0, B, b0, w, z, s, T, U, D):
        return -1, z, s, lower, 0
    nu = 2.0 * m
    tau = tau0
    steps = 0
    q = np.empty(n)
    grad = np.empty(n)
    H = np.empty((n, n))
    zn = np.empty(d)
    Tn = np.empty(m)
    Un = np.empty((m, r))
    Dn = np.empty(m)
    while True:
        for _ in range(100):
            _jit_barrier_terms(a, a0, B, b0, w, z, s, T, U, D)
            grad[:] = 0.0
            H[:, :] = 0.0
            for i in range(m):
                # q = grad of D_i = 2 (T a_ext - B_ext^T u)
                for k in range(d):
                    acc = 0.0
                    for t in range(r):
                        acc += B[i, t, k] * U[i, t]
                    q[k] = 2.0 * (T[i] * a[i, k] - acc)
                q[d] = 2.0 * T[i] * w[i]
                inv = 1.0 / D[i]
                for k in range(n):
                    grad[k] -= q[k] * inv
                for k in range(n):
                    ak = a[i, k] if k < d else w[i]
                    for l in range(k, n):
                        al = a[i, l] if l < d else w[i]
                        btb = 0.0
                        if k < d and l < d:
                            for t in range(r):
                                btb += B[i, t, k] * B[i, t, l]
                        h = -2.0 * inv * (ak * al - btb) + inv * inv * q[k] * q[l]
                        H[k, l] += h
                        if l != k:
                            H[l, k] += h
            grad[d] += tau
            neg = -grad
            dz, ok = _jit_rsolve(H, neg)
            if not ok:
                return -2, z, s, lower, steps
            steps += 1
            slope = 0.0
            for k in range(n):
                slope += grad[k] * dz[k]
            if -slope / 2.0 <= 1e-10:
                break
            f0 = _jit_barrier_value(a, a0, B, b0, w, z, s, tau, T, U, D)
            t = 1.0
            while True:
                for k in range(d):
                    zn[k] = z[k] + t * dz[k]
                sn = s + t * dz[d]
                fn = _jit_barrier_value(a, a0, B, b0, w, zn, sn, tau, Tn, Un, Dn)
                if fn <= f0 + 0.25 * t * slope:
                    break
                t *= 0.5
                if t < 1e-14:
                    break
            if t < 1e-14:
                break
            z[:] = zn
            s = sn
            if s <= 0.0:
                return 0, z, s, lower, steps
            if steps >= max_newton:
                return -2, z, s, lower, steps
        gap = nu / tau
        lower = s - 1.1 * gap
        if lower > 0.0:
            return 1, z, s, lower, steps
        if gap < gap_tol:
            return 2, z, s, lower, steps
        tau *= mu


def _np_residuals(a, a0, B, b0, w, z, s):
    T = a @ z + a0 + w * s
    u = np.einsum("mrd,d->mr", B, z) + b0
    return T, u, T * T - np.einsum("mr,mr->m", u, u)


def _np_barrier_value(a, a0, B, b0, w, z, s, tau):
    T, _, D = _np_residuals(a, a0, B, b0, w, z, s)
    if not (np.all(T > 0) and np.all(D > 0)):
        return np.inf
    return tau * s - np.sum(np.log(D))


def _np_phase1(a, a0, B, b0, w, z0, s0, gap_tol, mu, tau0, max_newton):
    m = a.shape[0]
    z = np.array(z0, dtype=float)
    s = float(s0)
    lower = -np.inf
    T, _, D = _np_residuals(a, a0, B, b0, w, z, s)
    if not (np.all(T > 0) and np.all(D > 0)):
        return -1, z, s, lower, 0
    nu = 2.0 * m
    aT = np.concatenate([a, w[:, None]], axis=1)
    Bu = np.concatenate([B, np.zeros(B.shape[:2] + (1,))], axis=2)
    BtB = np.einsum("mri,mrj->mij", Bu, Bu)
    aaT = np.einsum("mi,mj->mij", aT, aT)
    tau = tau0
    steps = 0
    while True:
        for _ in range(100):
            T, u, D = _np_residuals(a, a0, B, b0, w, z, s)
            q = 2.0 * (T[:, None] * aT - np.einsum("mrd,mr->md", Bu, u))
            grad = -np.sum(q / D[:, None], axis=0)
            grad[-1] += tau
            H = (np.einsum("m,mij->ij", -2.0 / D, aaT - BtB)
                 + np.einsum("m,mi,mj->ij", 1.0 / D ** 2, q, q))
            try:
                dz = -np.linalg.solve(H, grad)
            except np.linalg.LinAlgError:
                dz = -np.linalg.lstsq(H, grad, rcond=None)[0]
            steps += 1
            slope = float(grad @ dz)
            if -slope / 2.0 <= 1e-10:
                break
            f0 = _np_barrier_value(a, a0, B, b0, w, z, s, tau)
            t = 1.0
            while True:
                zn = z + t * dz[:-1]
                sn = s + t * dz[-1]
                if _np_barrier_value(a, a0, B, b0, w, zn, sn, tau) <= f0 + 0.25 * t * slope:
                    break
                t *= 0.5
                if t < 1e-14:
                    break
            if t < 1e-14:
                break
            z, s = zn, sn
            if s <= 0.0:
                return 0, z, s, lower, steps
            if steps >= max_newton:
                return -2, z, s, lower, steps
        gap = nu / tau
        lower = s - 1.1 * gap
        if lower > 0.0:
            return 1, z, s, lower, steps
        if gap < gap_tol:
            return 2, z, s, lower, steps
        tau *= mu


IMPLS = {
    "numba": {
        "perron_root": _jit_perron_root,
        "grid_wsr": _jit_grid_wsr,
        "select_vertex": _jit_select_vertex,
        "is_dominated": _jit_is_dominated,
        "undominated": _jit_undominated,
        "siso_bisect": _jit_siso_bisect,
        "simo_balance": _jit_simo_balance,
        "phase1": _jit_phase1,
    },
    "numpy": {
        "perron_root": _np_perron_root,
        "grid_wsr": _np_grid_wsr,
        "select_vertex": _np_select_vertex,
        "is_dominated": _np_is_dominated,
        "undominated": _np_undominated,
        "siso_bisect": _np_siso_bisect,
        "simo_balance": _np_simo_balance,
        "phase1": _np_phase1,
    },
}

_active = IMPLS["numba" if USE_JIT else "numpy"]

perron_root = _active["perron_root"]
grid_wsr = _active["grid_wsr"]
select_vertex = _active["select_vertex"]
is_dominated = _active["is_dominated"]
undominated = _active["undominated"]
siso_bisect = _active["siso_bisect"]
simo_balance = _active["simo_balance"]
phase1 = _active["phase1"]
