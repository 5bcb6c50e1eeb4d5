"""Matrix ensembles and float integration back-ends.

These routines evaluate the left-hand sides of the solvable matrix
integrals at small N, independently of the exact series machinery:
torus quadrature for unitary eigenvalues, Gauss-Hermite for Gaussian
eigenvalues, and Monte Carlo over Haar / Ginibre samples.

RNG: every Monte Carlo stream is numpy's Philox counter generator keyed by
(seed, stream).  Samples are drawn in blocks, so (algorithm, seed, stream,
sample index) addresses a draw.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .combinatorics import (
    IntegerLatticeFunction,
    content_product,
    enumerate_partitions,
    enumerate_strict_partitions,
    pochhammer_lambda,
)
from .symfunc import Specialization, projective_schur, schur
from .tau import TauSeries
from .twocomp import DivergenceError, MomentRecipe, moment_matrix

__all__ = [
    "CostError",
    "EnsembleMeasure",
    "IntegralEstimate",
    "RNG_ALGORITHM",
    "rng_stream",
    "weyl_quadrature_unitary",
    "gaussian_quadrature_hermitian",
    "hermitian_pair_quadrature",
    "haar_unitary_sample",
    "haar_orthogonal_sample",
    "ginibre_sample",
    "mc_expectation",
    "contour_moment",
    "contour_moment_numeric",
    "skew_model_series",
    "brezin_hikami_kernel",
    "orthogonal_group_average",
    "fit_brezin_hikami_constants",
    "printed_brezin_hikami_constants",
    "zz1_lhs_quadrature",
    "zz1_lhs_mc",
    "zz2_lhs_quadrature",
    "zz2_lhs_mc",
    "zz2_series",
    "e1_series",
    "e1_lhs_mc",
    "det_moment_ginibre",
]

RNG_ALGORITHM = "numpy.Philox(key=[seed, stream])"
MAX_N = 3
NODE_BUDGET = 3_000_000


class CostError(ValueError):
    """Requested integration exceeds the desk-scale budget (N <= 3)."""


@dataclass(frozen=True)
class EnsembleMeasure:
    """kind: unitary_haar, hermitian_gaussian, complex_ginibre,
    skew_symmetric_gaussian or orthogonal_haar.  w is the Gaussian rate
    for hermitian_gaussian (density exp(-w tr X^2)).  All are normalized.
    """

    kind: str
    N: int
    w: float = 1.0

    KINDS = ("unitary_haar", "hermitian_gaussian", "complex_ginibre",
             "skew_symmetric_gaussian", "orthogonal_haar")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown ensemble {self.kind!r}")
        if self.N < 1:
            raise ValueError("N must be positive")

    def sample(self, rng, size: int):
        if self.kind == "unitary_haar":
            return haar_unitary_sample(self.N, rng, size)
        if self.kind == "orthogonal_haar":
            return haar_orthogonal_sample(self.N, rng, size)
        if self.kind == "complex_ginibre":
            return ginibre_sample(self.N, rng, size)
        if self.kind == "hermitian_gaussian":
            if self.w <= 0:
                raise DivergenceError(0, 0, "w <= 0 gives an unnormalizable measure")
            return _gue_sample(self.N, self.w, rng, size)
        return _skew_sample(self.N, rng, size)


@dataclass
class IntegralEstimate:
    value: complex
    error: float
    method: str
    samples_or_nodes: int
    seed: int | None = None
    flags: tuple = ()
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.error >= 0 and not math.isnan(self.error):
            raise ValueError("error must be nonnegative")

    def within(self, target, sigmas: float = 3.0, floor: float = 0.0) -> bool:
        return abs(complex(self.value) - complex(target)) <= sigmas * self.error + floor

    def to_json(self):
        v = complex(self.value)
        return {"value": [repr(v.real), repr(v.imag)], "error": repr(float(self.error)),
                "method": self.method, "samples_or_nodes": self.samples_or_nodes,
                "seed": self.seed, "flags": list(self.flags)}


def _guard(N):
    if N > MAX_N:
        raise CostError(f"integration supported for N <= {MAX_N}, got {N}")
    if N < 1:
        raise ValueError("N must be positive")


# --- quadrature --------------------------------------------------------------

def _torus_nodes(M):
    return np.exp(2j * np.pi * np.arange(M) / M)


def _vandermonde_rows(x):
    # x: (K, N) -> prod_{i<j} (x_i - x_j)
    out = np.ones(x.shape[0], dtype=x.dtype)
    for i in range(x.shape[1]):
        for j in range(i + 1, x.shape[1]):
            out = out * (x[:, i] - x[:, j])
    return out


def _weyl_once(f, N, M):
    nodes = _torus_nodes(M)
    grids = np.meshgrid(*([nodes] * N), indexing="ij")
    x = np.stack([g.ravel() for g in grids], axis=1)
    dens = np.abs(_vandermonde_rows(x)) ** 2
    return np.mean(dens * np.asarray(f(x))) / math.factorial(N)


def weyl_quadrature_unitary(f: Callable, N: int, nodes: int) -> IntegralEstimate:
    """Haar average of a class function from its eigenvalues.

    f maps an (K, N) array of unit-circle eigenvalues to K values.  The full
    torus grid is used with density |Delta|^2 / N!; the error is the change
    against a grid with fewer nodes.
    """
    _guard(N)
    if nodes ** N > NODE_BUDGET:
        raise CostError(f"{nodes}^{N} nodes exceed the budget {NODE_BUDGET}")
    val = _weyl_once(f, N, nodes)
    coarse = _weyl_once(f, N, max(nodes - max(nodes // 4, 1), N + 1))
    return IntegralEstimate(complex(val), float(abs(val - coarse)), "weyl-torus", nodes)


def _hermite(nodes, w):
    x, wt = np.polynomial.hermite.hermgauss(nodes)
    return x / math.sqrt(w), wt


def gaussian_quadrature_hermitian(f: Callable, N: int, w: float, nodes: int) -> IntegralEstimate:
    """Average of f over eigenvalues with density Delta(x)^2 prod exp(-w x_i^2).

    Tensor Gauss-Hermite; normalized by the same rule applied to 1, so f = 1
    gives exactly 1.  Polynomial f of degree < 2 nodes - 2N is integrated
    exactly up to rounding.
    """
    _guard(N)
    if w <= 0:
        raise DivergenceError(0, 0, "Gaussian rate w <= 0 does not define a finite measure")
    if nodes ** N > NODE_BUDGET:
        raise CostError("node budget exceeded")
    x1, w1 = _hermite(nodes, w)
    grids = np.meshgrid(*([x1] * N), indexing="ij")
    wgrids = np.meshgrid(*([w1] * N), indexing="ij")
    x = np.stack([g.ravel() for g in grids], axis=1)
    weight = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)
    dens = _vandermonde_rows(x) ** 2 * weight
    val = np.sum(dens * np.asarray(f(x))) / np.sum(dens)
    return IntegralEstimate(complex(val), float(np.finfo(float).eps * nodes ** N * abs(val)),
                            "gauss-hermite", nodes)


def hermitian_pair_quadrature(f: Callable, w: Sequence[float], nodes: int) -> IntegralEstimate:
    """N = 1 two-variable average: f(x, y) exp(-w1 x^2 - w2 y^2), normalized."""
    w1, w2 = float(w[0]), float(w[1])
    if w1 <= 0 or w2 <= 0:
        raise DivergenceError(0, 0, "the w = 0 pairing integral diverges; use the exact formal limit")
    x, wx = _hermite(nodes, w1)
    y, wy = _hermite(nodes, w2)
    X, Y = np.meshgrid(x, y, indexing="ij")
    W = np.outer(wx, wy)
    num = np.sum(W * f(X, Y))
    return IntegralEstimate(complex(num / np.sum(W)), 0.0, "gauss-hermite-pair", nodes)


# --- sampling ----------------------------------------------------------------

def rng_stream(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[int(seed), int(stream)]))


def _complex_normal(rng, shape, var):
    s = math.sqrt(var / 2)
    return rng.normal(scale=s, size=shape) + 1j * rng.normal(scale=s, size=shape)


def haar_unitary_sample(N: int, rng, size: int = 1):
    """(size, N, N) Haar unitaries: QR of Ginibre with the phases of R removed."""
    Z = _complex_normal(rng, (size, N, N), 1.0)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R, axis1=1, axis2=2)
    return Q * (d / np.abs(d))[:, None, :]


def haar_orthogonal_sample(N: int, rng, size: int = 1):
    Z = rng.normal(size=(size, N, N))
    Q, R = np.linalg.qr(Z)
    d = np.sign(np.diagonal(R, axis1=1, axis2=2))
    return Q * d[:, None, :]


def ginibre_sample(N: int, rng, size: int = 1):
    """Density proportional to exp(-N tr Z Z^dag): entries with E|z|^2 = 1/N."""
    return _complex_normal(rng, (size, N, N), 1.0 / N)


def _gue_sample(N, w, rng, size):
    # density exp(-w tr H^2): diagonal var 1/(2w), off-diagonal E|h|^2 = 1/(2w)
    A = _complex_normal(rng, (size, N, N), 1.0 / (2 * w))
    H = (A + np.conj(np.swapaxes(A, 1, 2))) / math.sqrt(2)
    return H


def _skew_sample(N, rng, size):
    # density exp(-sum_{i<j} X_ij^2)
    A = rng.normal(scale=math.sqrt(0.5), size=(size, N, N))
    A = np.triu(A, 1)
    return A - np.swapaxes(A, 1, 2)


def mc_expectation(observable: Callable, measures: Sequence[EnsembleMeasure], samples: int,
                   seed: int, streams: int = 8, block: int = 50_000) -> IntegralEstimate:
    """Mean of observable(M_1, ..., M_k) with M_i drawn from measures[i].

    The observable receives batches (one array of shape (B, N, N) per
    measure) and returns B values.  Stream s draws its share of samples
    from rng_stream(seed, s); partial sums are merged in stream order, so the
    estimate is bit-identical for fixed (seed, streams, samples).
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    if isinstance(measures, EnsembleMeasure):
        measures = [measures]
    share = [samples // streams + (1 if s < samples % streams else 0) for s in range(streams)]
    sums, sq, counts = [], [], []
    for s, n_s in enumerate(share):
        rng = rng_stream(seed, s)
        acc, acc2, done = 0j, 0.0, 0
        while done < n_s:
            b = min(block, n_s - done)
            mats = [m.sample(rng, b) for m in measures]
            with np.errstate(over="ignore", invalid="ignore"):
                vals = np.asarray(observable(*mats), dtype=complex)
            acc += vals.sum()
            acc2 += float(np.sum(np.abs(vals) ** 2))
            done += b
        sums.append(acc)
        sq.append(acc2)
        counts.append(n_s)
    total = math.fsum(c.real for c in sums) + 1j * math.fsum(c.imag for c in sums)
    mean = total / samples
    second = math.fsum(sq) / samples
    var = max(second - abs(mean) ** 2, 0.0) * samples / max(samples - 1, 1)
    flags = ()
    if not (math.isfinite(var) and math.isfinite(abs(mean))):
        flags = ("variance-overflow",)
        warnings.warn("Monte Carlo variance is not finite", RuntimeWarning)
    err = math.sqrt(var / samples) if math.isfinite(var) else float("inf")
    return IntegralEstimate(complex(mean), err, "monte-carlo", samples, seed, flags,
                            {"streams": streams, "rng": RNG_ALGORITHM})


# --- moments -----------------------------------------------------------------

def contour_moment(recipe: MomentRecipe, i: int, j: int):
    """Exact g_{i,j} for a unitary recipe by coefficient extraction."""
    if recipe.measure != "unitary":
        raise ValueError("contour_moment needs a unitary recipe")
    return moment_matrix(recipe, i, j)


def contour_moment_numeric(recipe: MomentRecipe, i: int, j: int, nodes: int = 64,
                           terms: int = 40) -> complex:
    """The same coefficient by trapezoid sums on |x| = |y| = 1 (float route)."""
    r = recipe.kernel.r
    a = [1.0]
    for m in range(1, terms + 1):
        a.append(a[-1] * complex(r(m)))
    z = _torus_nodes(nodes)
    X, Y = np.meshgrid(z, z, indexing="ij")
    arg = (X * Y) ** (2 if recipe.squared_arguments else 1)
    P = np.polyval(np.array(a[::-1], dtype=complex), arg)
    v = sum(complex(c) * X ** e for e, c in recipe.v)
    u = sum(complex(c) * Y ** e for e, c in recipe.u)
    F = P * v * u * (X * Y) ** recipe.shift * X ** (-i) * Y ** (-j)
    return complex(F.mean())


# --- skew-symmetric model ----------------------------------------------------

SKEW_FORMS = ("printed", "printed_full", "content", "content_corrected")


def _skew_coefficient(lam, N, form):
    h = [lam[i] - (i + 1) + N if i < len(lam) else N - (i + 1) for i in range(max(N, len(lam)))]
    if form == "printed":
        if len(lam) > N:
            return Fraction(0)
        return Fraction(math.prod(math.factorial(2 * h[i]) for i in range(len(lam))))
    if form == "printed_full":
        if len(lam) > N:
            return Fraction(0)
        return Fraction(math.prod(math.factorial(2 * h[i]) for i in range(N)))
    if form == "content":
        r = IntegerLatticeFunction((0, 2), (1,), 1) * IntegerLatticeFunction((1, 2), (1,), 1)
    else:
        r = IntegerLatticeFunction((0, 2), (1,), 1) * IntegerLatticeFunction((-1, 2), (1,), 1)
    return content_product(r, lam, N)


def skew_model_series(p1: Specialization | None, p2: Specialization | None, N: int, trunc,
                      form: str = "printed") -> TauSeries:
    """Diagonal series sum_lam c_lam s_lam(p1) s_lam(p2) of the skew two-matrix model.

    form='printed': c = prod_{i <= l(lam)} (2 h_i)!, h_i = lam_i - i + N.
    form='printed_full': the product runs over i <= N (a constant multiple
    of 'content_corrected').  form='content': content product with
    r(x) = 2x(2x+1).  form='content_corrected': r(x) = 2x(2x-1).
    """
    if form not in SKEW_FORMS:
        raise ValueError(f"form must be one of {SKEW_FORMS}")
    max_weight, max_length = trunc
    coeffs = {}
    for lam in enumerate_partitions(max_weight, max_length):
        c = _skew_coefficient(lam, N, form)
        if c != 0:
            coeffs[(lam, lam)] = c
    return TauSeries("partition_pair", coeffs, (max_weight, max_length), p1, p2,
                     meta={"N": N, "form": form})


# --- Brezin-Hikami -----------------------------------------------------------

def _mp_det(M, mp):
    return mp.det(mp.matrix(M))


def brezin_hikami_kernel(x: Sequence, y: Sequence, parity: str, precision: int | None = None):
    """det[K(x_i y_j)] / (Delta(x^2) Delta(y^2)) with K = 2cosh(2z) (even) or
    2sinh(2z)/z with the 1/(x_i y_j) taken inside the determinant (odd).

    The constants c1, c2 in front are not included.  precision (decimal
    digits) switches to mpmath.
    """
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    n = len(x)
    if len(y) != n:
        raise ValueError("x and y need the same length")
    for v in (x, y):
        sq = [float(t) ** 2 for t in v]
        if len(set(sq)) != len(sq):
            raise ValueError("coincident squared eigenvalues")
    if precision is not None:
        import mpmath as mp
        with mp.workdps(precision):
            xs, ys = [mp.mpf(t) for t in x], [mp.mpf(t) for t in y]
            if parity == "even":
                M = [[2 * mp.cosh(2 * a * b) for b in ys] for a in xs]
            else:
                M = [[2 * mp.sinh(2 * a * b) / (a * b) for b in ys] for a in xs]
            num = _mp_det(M, mp)
            den = mp.mpf(1)
            for i in range(n):
                for j in range(i + 1, n):
                    den *= (xs[i] ** 2 - xs[j] ** 2) * (ys[i] ** 2 - ys[j] ** 2)
            return num / den
    xs, ys = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    Z = np.outer(xs, ys)
    M = 2 * np.cosh(2 * Z) if parity == "even" else 2 * np.sinh(2 * Z) / Z
    den = 1.0
    for i in range(n):
        for j in range(i + 1, n):
            den *= (xs[i] ** 2 - xs[j] ** 2) * (ys[i] ** 2 - ys[j] ** 2)
    return float(np.linalg.det(M)) / den


def _skew_block(xs, N):
    X = np.zeros((N, N))
    for i, t in enumerate(xs):
        X[2 * i, 2 * i + 1] = t
        X[2 * i + 1, 2 * i] = -t
    return X


def _rotations_so3(nodes):
    # ZYZ Euler angles: trapezoid in alpha, gamma and Gauss-Legendre in cos(beta)
    a = 2 * np.pi * np.arange(nodes) / nodes
    c, wc = np.polynomial.legendre.leggauss(nodes)
    s = np.sqrt(1 - c ** 2)
    A, Cb, G = np.meshgrid(a, c, a, indexing="ij")
    Sb = np.meshgrid(a, s, a, indexing="ij")[1]
    W = np.meshgrid(np.ones(nodes), wc, np.ones(nodes), indexing="ij")[1]
    ca, sa, cg, sg = np.cos(A), np.sin(A), np.cos(G), np.sin(G)
    R = np.empty(A.shape + (3, 3))
    R[..., 0, 0] = ca * Cb * cg - sa * sg
    R[..., 0, 1] = -ca * Cb * sg - sa * cg
    R[..., 0, 2] = ca * Sb
    R[..., 1, 0] = sa * Cb * cg + ca * sg
    R[..., 1, 1] = -sa * Cb * sg + ca * cg
    R[..., 1, 2] = sa * Sb
    R[..., 2, 0] = -Sb * cg
    R[..., 2, 1] = Sb * sg
    R[..., 2, 2] = Cb
    return R.reshape(-1, 3, 3), (W / W.sum()).ravel()


def orthogonal_group_average(x: Sequence[float], y: Sequence[float], N: int, nodes: int = 24) -> float:
    """Haar average over O(N) of exp(tr(O X O^T Y)) for skew X, Y (N = 2 or 3).

    X and Y are block-diagonal with blocks [[0, x_i], [-x_i, 0]].  O(2) is
    its two components; O(3) = {+R, -R} and -R acts like R, so SO(3) Euler
    quadrature suffices.
    """
    X, Y = _skew_block(x, N), _skew_block(y, N)
    if N == 2:
        return 0.5 * (math.exp(np.trace(X @ Y)) + math.exp(np.trace(X.T @ Y)))
    if N == 3:
        R, w = _rotations_so3(nodes)
        vals = np.exp(np.einsum("kab,bc,kdc,da->k", R, X, R, Y))
        return float(np.dot(w, vals))
    raise CostError("orthogonal averages implemented for N = 2, 3")


def printed_brezin_hikami_constants(n: int = 1):
    """Measure-normalization constants (c1, c2) as written next to the kernel."""
    c1 = 2.0 ** -n * math.prod(1 / (math.gamma(2 + i) * math.gamma(0.5 + i)) for i in range(n))
    c2 = 2.0 ** -n * math.prod(1 / (math.gamma(2 + i) * math.gamma(1.5 + i)) for i in range(n))
    return c1, c2


def fit_brezin_hikami_constants(points: Sequence[tuple] = ((0.3, 0.7), (0.5, 0.4), (0.9, 1.1)),
                                nodes: int = 24):
    """Fit c1 (O(2)) and c2 (O(3)) as group average / kernel at n = 1.

    Returns {'c1': mean, 'c2': mean, 'spread1': ..., 'spread2': ...}; a
    small spread means the kernel shape is right up to a constant.
    """
    r1, r2 = [], []
    for x, y in points:
        r1.append(orthogonal_group_average([x], [y], 2) / brezin_hikami_kernel([x], [y], "even"))
        r2.append(orthogonal_group_average([x], [y], 3, nodes) / brezin_hikami_kernel([x], [y], "odd"))
    return {"c1": float(np.mean(r1)), "c2": float(np.mean(r2)),
            "spread1": float(np.ptp(r1)), "spread2": float(np.ptp(r2))}


# --- ZZ1 / ZZ2 left-hand sides ----------------------------------------------

def _ps(p):
    if isinstance(p, Specialization):
        if p.kind != "explicit":
            raise ValueError("float routes need explicit power sums")
        return [complex(v) for v in p.params]
    return [complex(v) for v in p]


def _weight_inverse(ps, z, odd_only=False):
    # exp(sum_m c_m p_m z^{-m} / m); c_m = 2 on odd m for the projective case
    expo = np.zeros_like(z, dtype=complex)
    for m, pm in enumerate(ps, start=1):
        if odd_only:
            if m % 2 == 0:
                continue
            expo = expo + 2 * pm * z ** (-m) / m
        else:
            expo = expo + pm * z ** (-m) / m
    return np.exp(expo)


def _kn_factorial(N):
    return math.prod(math.factorial(k) for k in range(N))


def zz1_lhs_quadrature(p1, p2, N: int, nodes: int = 16, use_numba=None) -> IntegralEstimate:
    """Double Haar integral of exp(tr U1 U2 + sum p1_m tr U1^-m / m + sum p2_m tr U2^-m / m).

    The angular integral of exp(tr U1 U2) is done by HCIZ-type reduction,
    prod_{k<N} k! det[exp(x_i y_j)] / (Delta(x) Delta(y)), leaving a torus
    sum over both eigenvalue sets.
    """
    _guard(N)
    if nodes ** (2 * N) > 1e9:
        raise CostError("node budget exceeded")

    def once(M):
        z = _torus_nodes(M)
        wx = _weight_inverse(_ps(p1), z)
        wy = _weight_inverse(_ps(p2), z)
        P = np.exp(np.outer(z, z))
        s = _kernels.torus_pair_sum(z, z, wx, wy, P, N, 0, use_numba)
        return s * _kn_factorial(N) / (math.factorial(N) ** 2 * M ** (2 * N))

    val = once(nodes)
    coarse = once(nodes - 2)
    return IntegralEstimate(complex(val), float(abs(val - coarse)), "weyl-torus-pair", nodes)


def _tr_neg_powers(U, ps, odd_only=False):
    Uinv = np.conj(np.swapaxes(U, 1, 2))
    acc = np.zeros(U.shape[0], dtype=complex)
    Pm = np.broadcast_to(np.eye(U.shape[1]), U.shape).astype(complex)
    for m, pm in enumerate(ps, start=1):
        Pm = Pm @ Uinv
        if odd_only and m % 2 == 0:
            continue
        c = 2 if odd_only else 1
        acc = acc + c * pm * np.trace(Pm, axis1=1, axis2=2) / m
    return acc


def zz1_lhs_mc(p1, p2, N: int, samples: int, seed: int, streams: int = 8) -> IntegralEstimate:
    """Same integral by Haar Monte Carlo over both unitaries (no eigenvalue reduction)."""
    a, b = _ps(p1), _ps(p2)

    def obs(U1, U2):
        return np.exp(np.trace(U1 @ U2, axis1=1, axis2=2)
                      + _tr_neg_powers(U1, a) + _tr_neg_powers(U2, b))

    m = EnsembleMeasure("unitary_haar", N)
    return mc_expectation(obs, [m, m], samples, seed, streams)


def zz2_lhs_quadrature(p1, p2, N: int, nodes: int = 17, use_numba=None) -> IntegralEstimate:
    """Double Haar integral of exp(tr X^2 Y^2 + sum_odd 2/m (p1_m tr X^-m + p2_m tr Y^-m)).

    The angular part uses HCIZ on X^2, Y^2, so the eigenvalue density becomes
    |Delta(x)|^2 |Delta(y)|^2 det[exp(x_i^2 y_j^2)] / (Delta(x^2) Delta(y^2)).
    An odd node count avoids x_i + x_j = 0 on the grid.
    """
    _guard(N)
    if nodes % 2 == 0:
        raise ValueError("use an odd number of nodes (antipodal nodes are singular)")

    def once(M):
        z = _torus_nodes(M)
        wx = _weight_inverse(_ps(p1), z, odd_only=True)
        wy = _weight_inverse(_ps(p2), z, odd_only=True)
        P = np.exp(np.outer(z ** 2, z ** 2))
        s = _kernels.torus_pair_sum(z, z, wx, wy, P, N, 1, use_numba)
        return s * _kn_factorial(N) / (math.factorial(N) ** 2 * M ** (2 * N))

    val = once(nodes)
    coarse = once(nodes - 2)
    return IntegralEstimate(complex(val), float(abs(val - coarse)), "weyl-torus-pair", nodes)


def zz2_lhs_mc(p1, p2, N: int, samples: int, seed: int, streams: int = 8) -> IntegralEstimate:
    a, b = _ps(p1), _ps(p2)

    def obs(X, Y):
        X2, Y2 = X @ X, Y @ Y
        return np.exp(np.trace(X2 @ Y2, axis1=1, axis2=2)
                      + _tr_neg_powers(X, a, True) + _tr_neg_powers(Y, b, True))

    m = EnsembleMeasure("unitary_haar", N)
    return mc_expectation(obs, [m, m], samples, seed, streams)


def zz2_series(p1: Specialization, p2: Specialization, max_weight: int, form: str = "printed"):
    """Exact truncations of the projective double series.

    printed:  sum_{alpha in DP} 2^{-l} Q_{2 alpha}(p1) Q_{2 alpha}(p2) / prod alpha_i!
    eigen:    sum_m q_{2m}(p1) q_{2m}(p2) / m!, the direct expansion of the
              N = 1 integral (only l(alpha) <= 1 survives, without 2^{-l}).
    max_weight bounds |2 alpha|.
    """
    if form not in ("printed", "eigen"):
        raise ValueError("form must be 'printed' or 'eigen'")
    total = Fraction(0)
    max_len = max_weight if form == "printed" else 1
    for alpha in enumerate_strict_partitions(max_weight // 2, max_len):
        doubled = tuple(2 * a for a in alpha)
        c = Fraction(1, math.prod(math.factorial(a) for a in alpha))
        if form == "printed":
            c = c / 2 ** len(alpha)
        total = total + c * projective_schur(doubled, p1) * projective_schur(doubled, p2)
    return total


# --- single-edge Ginibre model -----------------------------------------------

def det_moment_ginibre(N: int, alpha: float) -> float:
    """E|det Z|^{2 alpha} for the exp(-N tr Z Z^dag) Ginibre ensemble."""
    return math.prod(math.gamma(j + alpha) / math.gamma(j) for j in range(1, N + 1)) * N ** (-N * alpha)


def e1_series(C1, Cm1, N: int, alpha, max_weight: int):
    """sum_lam hbar^{|lam|} s_lam(hbar-scaled p_inf) s_lam(C1 C-1) (N+alpha)_lam / (N)_lam, hbar = 1/N.

    C1, C-1 are exact square matrices (lists of rows); the eigenvalue power
    sums p_m = tr (C1 C-1)^m are computed exactly.
    """
    C1 = [[Fraction(v) for v in row] for row in C1]
    Cm1 = [[Fraction(v) for v in row] for row in Cm1]
    n = len(C1)
    prod = [[sum(C1[i][k] * Cm1[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    ps, P = [], [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for _ in range(max_weight):
        P = [[sum(P[i][k] * prod[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        ps.append(sum(P[i][i] for i in range(n)))
    pc = Specialization.explicit(ps)
    hbar = Fraction(1, N)
    pinf = Specialization.explicit([hbar])
    alpha = Fraction(alpha)
    total = Fraction(0)
    for lam in enumerate_partitions(max_weight, N):
        top = pochhammer_lambda(N + alpha, lam)
        bot = pochhammer_lambda(Fraction(N), lam)
        total = total + schur(lam, pinf) * schur(lam, pc) * top / bot
    return total


def e1_lhs_mc(C1, Cm1, N: int, alpha: float, samples: int, seed: int, streams: int = 8,
              use_numba=None) -> IntegralEstimate:
    """E[exp(tr Z C1) exp(tr Z^dag C-1) |det Z|^{2 alpha}] / E|det Z|^{2 alpha} over Ginibre Z.

    The two hypergeometric factors with p = q = 0 are exponentials of traces.
    """
    C1 = np.asarray(C1, dtype=complex)
    Cm1 = np.asarray(Cm1, dtype=complex)
    norm = det_moment_ginibre(N, alpha)

    def obs(Z):
        return _kernels.ginibre_observable(Z, C1, Cm1, alpha, use_numba) / norm

    return mc_expectation(obs, [EnsembleMeasure("complex_ginibre", N)], samples, seed, streams)
