"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

The first numba call includes compilation and is reported separately.
"""

import argparse
import time

import numpy as np

from taumodels import _kernels


def _best(fn, repeat):
    out = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t)
    return min(out)


def torus_case(N, M):
    z = np.exp(2j * np.pi * np.arange(M) / M)
    w = np.exp(0.2 / z)
    P = np.exp(np.outer(z, z))
    return (z, z, w, w, P, N, 0)


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if not _kernels.numba_installed:
        print("numba not installed; only the numpy path is available")
    rows = []
    for N, M in ((2, 16), (2, 32), (3, 10), (3, 14)):
        case = torus_case(N, M)
        t_np = _best(lambda: _kernels.torus_pair_sum(*case, use_numba=False), args.repeat)
        if _kernels.numba_installed:
            t0 = time.perf_counter()
            a = _kernels.torus_pair_sum(*case, use_numba=True)
            first = time.perf_counter() - t0
            t_nb = _best(lambda: _kernels.torus_pair_sum(*case, use_numba=True), args.repeat)
            b = _kernels.torus_pair_sum(*case, use_numba=False)
            rows.append((f"torus N={N} M={M}", t_np, t_nb, first, abs(a - b) / max(abs(b), 1)))
        else:
            rows.append((f"torus N={N} M={M}", t_np, float("nan"), float("nan"), 0.0))
    rng = np.random.default_rng(0)
    for S in (10_000, 200_000):
        Z = (rng.normal(size=(S, 2, 2)) + 1j * rng.normal(size=(S, 2, 2))) / 2
        C = np.eye(2)
        t_np = _best(lambda: _kernels.ginibre_observable(Z, C, C, 1.0, use_numba=False), args.repeat)
        if _kernels.numba_installed:
            t0 = time.perf_counter()
            a = _kernels.ginibre_observable(Z, C, C, 1.0, use_numba=True)
            first = time.perf_counter() - t0
            t_nb = _best(lambda: _kernels.ginibre_observable(Z, C, C, 1.0, use_numba=True), args.repeat)
            b = _kernels.ginibre_observable(Z, C, C, 1.0, use_numba=False)
            rows.append((f"ginibre S={S}", t_np, t_nb, first, float(np.max(np.abs(a - b)))))
        else:
            rows.append((f"ginibre S={S}", t_np, float("nan"), float("nan"), 0.0))
    print(f"{'case':22s} {'numpy s':>10s} {'numba s':>10s} {'speedup':>8s} {'1st call':>9s} {'max diff':>9s}")
    for name, t_np, t_nb, first, diff in rows:
        print(f"{name:22s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f} {first:9.3f} {diff:9.1e}")


if __name__ == "__main__":
    main()
