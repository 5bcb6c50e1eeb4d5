"""Float kernels for torus quadrature and Ginibre observables.

Every kernel has a numba version and a pure numpy version with the same
signature.  numba is used when it is importable and the environment variable
TAUMODELS_NO_NUMBA is unset (or "0").  Passing `use_numba` to a wrapper
overrides the flag for that call, which is what the benchmark does.
"""

from __future__ import annotations

import os
from itertools import product

import numpy as np

try:
    from numba import njit
    numba_installed = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba_installed = False


def _flag_off(value: str) -> bool:
    return value.strip().lower() in ("", "0", "false", "no")


forceNoNumba = not _flag_off(os.environ.get("TAUMODELS_NO_NUMBA", ""))


def optional_njit(*args, **kwargs):
    def decorator(func):
        if numba_installed and not forceNoNumba:
            return njit(*args, **kwargs)(func)
        return func
    return decorator


def numba_active() -> bool:
    return numba_installed and not forceNoNumba


# --- torus pair sums ---------------------------------------------------------
#
# S = sum over index tuples a (x nodes) and b (y nodes) of
#     dens(x_a) dens(y_b) det[P[a_i, b_j]] prod wx[a_i] prod wy[b_j]
# mode 0: dens(x) = conj(Delta(x));  mode 1: dens(x) = |Delta(x)|^2 / Delta(x^2)


def _njit_torus_pair_sum(xs, ys, wx, wy, P, N, mode):
    M = xs.shape[0]
    total = 0j
    if N == 1:
        for a in range(M):
            for b in range(M):
                total += P[a, b] * wx[a] * wy[b]
        return total
    if N == 2:
        for a0 in range(M):
            for a1 in range(M):
                if a0 == a1:
                    continue
                dx = _dens2(xs[a0], xs[a1], mode) * wx[a0] * wx[a1]
                for b0 in range(M):
                    for b1 in range(M):
                        if b0 == b1:
                            continue
                        dy = _dens2(ys[b0], ys[b1], mode) * wy[b0] * wy[b1]
                        det = P[a0, b0] * P[a1, b1] - P[a0, b1] * P[a1, b0]
                        total += dx * dy * det
        return total
    for a0 in range(M):
        for a1 in range(M):
            for a2 in range(M):
                if a0 == a1 or a0 == a2 or a1 == a2:
                    continue
                dx = (_dens2(xs[a0], xs[a1], mode) * _dens2(xs[a0], xs[a2], mode)
                      * _dens2(xs[a1], xs[a2], mode) * wx[a0] * wx[a1] * wx[a2])
                for b0 in range(M):
                    for b1 in range(M):
                        for b2 in range(M):
                            if b0 == b1 or b0 == b2 or b1 == b2:
                                continue
                            dy = (_dens2(ys[b0], ys[b1], mode) * _dens2(ys[b0], ys[b2], mode)
                                  * _dens2(ys[b1], ys[b2], mode) * wy[b0] * wy[b1] * wy[b2])
                            det = (P[a0, b0] * (P[a1, b1] * P[a2, b2] - P[a1, b2] * P[a2, b1])
                                   - P[a0, b1] * (P[a1, b0] * P[a2, b2] - P[a1, b2] * P[a2, b0])
                                   + P[a0, b2] * (P[a1, b0] * P[a2, b1] - P[a1, b1] * P[a2, b0]))
                            total += dx * dy * det
    return total


def _py_dens2(u, v, mode):
    if mode == 0:
        return np.conj(u - v)
    return np.conj(u - v) / (u + v)


_dens2 = optional_njit(cache=False)(_py_dens2)
torus_pair_sum_default = optional_njit(cache=False)(_njit_torus_pair_sum)

_compiled = {}


def _numba_version(name):
    # explicit jitted copies, independent of the env flag
    if name not in _compiled:
        g = dict(globals())
        g["_dens2"] = njit(_py_dens2)
        src = {"torus": _njit_torus_pair_sum, "ginibre": _njit_ginibre_obs}[name]
        fn = type(src)(src.__code__, g, src.__name__)
        _compiled[name] = njit(fn)
    return _compiled[name]


def _dens_vec(x, mode):
    # x: (K, N) complex -> (K,)
    N = x.shape[1]
    out = np.ones(x.shape[0], dtype=complex)
    for i in range(N):
        for j in range(i + 1, N):
            out *= _py_dens2(x[:, i], x[:, j], mode)
    return out


def torus_pair_sum_numpy(xs, ys, wx, wy, P, N, mode):
    M = xs.shape[0]
    idx = np.array(list(product(range(M), repeat=N)), dtype=np.int64)
    if N > 1:
        distinct = np.ones(len(idx), dtype=bool)
        for i in range(N):
            for j in range(i + 1, N):
                distinct &= idx[:, i] != idx[:, j]
        idx = idx[distinct]
    fx = _dens_vec(xs[idx], mode) * np.prod(wx[idx], axis=1)
    fy = _dens_vec(ys[idx], mode) * np.prod(wy[idx], axis=1)
    total = 0j
    # rows of the determinant are x tuples, columns are y tuples
    for k in range(len(idx)):
        sub = P[idx[k]][:, idx]            # (N, K, N): P[a_i, b_j] per y tuple
        sub = np.transpose(sub, (1, 0, 2))  # (K, N, N)
        dets = np.linalg.det(sub) if N > 1 else sub[:, 0, 0]
        total += fx[k] * np.dot(fy, dets)
    return total


def torus_pair_sum(xs, ys, wx, wy, P, N, mode=0, use_numba=None):
    if N not in (1, 2, 3):
        raise ValueError("torus sums are implemented for N <= 3")
    use = numba_active() if use_numba is None else bool(use_numba and numba_installed)
    args = (np.ascontiguousarray(xs, dtype=complex), np.ascontiguousarray(ys, dtype=complex),
            np.ascontiguousarray(wx, dtype=complex), np.ascontiguousarray(wy, dtype=complex),
            np.ascontiguousarray(P, dtype=complex), int(N), int(mode))
    if use:
        fn = torus_pair_sum_default if numba_active() else _numba_version("torus")
        return complex(fn(*args))
    return complex(torus_pair_sum_numpy(*args))


# --- Ginibre observable ------------------------------------------------------
#
# value_k = exp(tr(Z_k C1) + tr(Z_k^dag Cm1)) * |det Z_k|^(2 alpha)


def _njit_ginibre_obs(Z, C1, Cm1, alpha):
    S, N, _ = Z.shape
    out = np.empty(S, dtype=np.complex128)
    for s in range(S):
        t1 = 0j
        t2 = 0j
        for a in range(N):
            for b in range(N):
                t1 += Z[s, a, b] * C1[b, a]
                t2 += np.conj(Z[s, b, a]) * Cm1[b, a]
        val = np.exp(t1 + t2)
        if alpha != 0:
            if N == 1:
                d = Z[s, 0, 0]
            elif N == 2:
                d = Z[s, 0, 0] * Z[s, 1, 1] - Z[s, 0, 1] * Z[s, 1, 0]
            elif N == 3:
                d = (Z[s, 0, 0] * (Z[s, 1, 1] * Z[s, 2, 2] - Z[s, 1, 2] * Z[s, 2, 1])
                     - Z[s, 0, 1] * (Z[s, 1, 0] * Z[s, 2, 2] - Z[s, 1, 2] * Z[s, 2, 0])
                     + Z[s, 0, 2] * (Z[s, 1, 0] * Z[s, 2, 1] - Z[s, 1, 1] * Z[s, 2, 0]))
            else:
                d = np.linalg.det(Z[s])
            val *= (d.real * d.real + d.imag * d.imag) ** alpha
        out[s] = val
    return out


ginibre_observable_default = optional_njit(cache=False)(_njit_ginibre_obs)


def ginibre_observable_numpy(Z, C1, Cm1, alpha):
    t1 = np.einsum("sab,ba->s", Z, C1)
    t2 = np.einsum("sba,ba->s", np.conj(Z), Cm1)
    val = np.exp(t1 + t2)
    if alpha != 0:
        val = val * np.abs(np.linalg.det(Z)) ** (2 * alpha)
    return val


def ginibre_observable(Z, C1, Cm1, alpha=0, use_numba=None):
    use = numba_active() if use_numba is None else bool(use_numba and numba_installed)
    Z = np.ascontiguousarray(Z, dtype=complex)
    C1 = np.ascontiguousarray(C1, dtype=complex)
    Cm1 = np.ascontiguousarray(Cm1, dtype=complex)
    if use:
        fn = ginibre_observable_default if numba_active() else _numba_version("ginibre")
        return fn(Z, C1, Cm1, float(alpha))
    return ginibre_observable_numpy(Z, C1, Cm1, float(alpha))
