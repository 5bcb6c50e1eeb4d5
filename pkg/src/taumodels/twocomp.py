"""Two-component KP/BKP tau functions and the composition rule A3 = A1 g A2.

Infinite matrices are indexed from 0 and evaluated lazily.  The moment
matrix g is produced from a MomentRecipe: a pairing series
tau_r(1; z, 1) = sum_m z^m r(1)...r(m) with z = xy (or x^2 y^2), Laurent
weights v(x), u(y) and an ensemble measure.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, replace
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from .combinatorics import (
    IntegerLatticeFunction,
    Partition,
    StrictPartition,
    enumerate_partitions,
    enumerate_strict_partitions,
)
from .exactalg import determinant, format_scalar, parse_scalar
from .symfunc import Specialization
from .tau import HypergeometricKernel, TauSeries, k_constant

__all__ = [
    "WindowError",
    "DivergenceError",
    "CoefficientMatrix",
    "MomentRecipe",
    "moment_matrix",
    "minor_partition",
    "minor_strict",
    "compose",
    "minor_cauchy_binet",
    "tau_2kp",
    "tau_2bkp",
    "scalar_product_ss",
    "scalar_product_qq",
    "solvable_model_2kp",
    "solvable_model_2bkp",
    "solvable_chain",
    "pairing_coefficients",
]


class WindowError(IndexError):
    """An entry outside the computed window of a composed matrix was requested."""


class DivergenceError(ArithmeticError):
    def __init__(self, i, j, reason=""):
        super().__init__(f"moment g[{i},{j}] diverges: {reason}")
        self.index = (i, j)


class CoefficientMatrix:
    """Lazily evaluated infinite matrix A[i][j], i, j >= 0.

    kind: 'identity', 'table' (finite support, zero outside unless the table
    is a computed window), 'diagonal', 'rule' (callable) or 'moment'.
    """

    def __init__(self, kind: str, rule: Callable[[int, int], object], params=None,
                 window: int | None = None):
        self.kind = kind
        self._rule = rule
        self.params = params or {}
        self.window = window
        self._cache: dict = {}
        self._lock = threading.Lock()

    @classmethod
    def identity(cls):
        return cls("identity", lambda i, j: Fraction(int(i == j)))

    @classmethod
    def table(cls, rows: Sequence[Sequence], strict_window: bool = False):
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("table must be square")

        def rule(i, j):
            if i < n and j < n:
                return rows[i][j]
            if strict_window:
                raise WindowError(f"entry ({i},{j}) outside the computed {n}x{n} window")
            return Fraction(0)
        return cls("table", rule, {"rows": rows, "strict_window": strict_window},
                   window=n if strict_window else None)

    @classmethod
    def diagonal(cls, values):
        if callable(values):
            return cls("diagonal", lambda i, j: values(i) if i == j else Fraction(0),
                       {"rule": values})
        vals = list(values)
        return cls("diagonal",
                   lambda i, j: vals[i] if i == j and i < len(vals) else Fraction(0),
                   {"values": vals})

    @classmethod
    def from_rule(cls, rule):
        return cls("rule", rule)

    @classmethod
    def moments(cls, recipe: "MomentRecipe"):
        return cls("moment", lambda i, j: moment_matrix(recipe, i, j), {"recipe": recipe})

    def __getitem__(self, ij):
        i, j = ij
        if i < 0 or j < 0:
            raise IndexError("indices start at 0")
        key = (i, j)
        try:
            return self._cache[key]
        except KeyError:
            pass
        val = self._rule(i, j)
        with self._lock:
            self._cache.setdefault(key, val)
        return self._cache[key]

    def entry(self, i, j):
        return self[i, j]

    def window_rows(self, size: int):
        return [[self[i, j] for j in range(size)] for i in range(size)]

    def to_json(self):
        if self.kind == "identity":
            return {"kind": "identity"}
        if self.kind == "table":
            return {"kind": "table", "strict_window": self.params["strict_window"],
                    "rows": [[format_scalar(x) for x in r] for r in self.params["rows"]]}
        if self.kind == "diagonal" and "values" in self.params:
            return {"kind": "diagonal", "values": [format_scalar(x) for x in self.params["values"]]}
        if self.kind == "moment":
            return {"kind": "moment", "recipe": self.params["recipe"].to_json()}
        raise ValueError(f"matrix of kind {self.kind!r} built from a callable is not serializable")

    @classmethod
    def from_json(cls, obj):
        kind = obj["kind"]
        if kind == "identity":
            return cls.identity()
        if kind == "table":
            return cls.table([[parse_scalar(x) for x in r] for r in obj["rows"]],
                             obj.get("strict_window", False))
        if kind == "diagonal":
            return cls.diagonal([parse_scalar(x) for x in obj["values"]])
        if kind == "moment":
            return cls.moments(MomentRecipe.from_json(obj["recipe"]))
        raise ValueError(f"unknown matrix kind {kind!r}")


def _laurent(d):
    return tuple(sorted((int(k), v) for k, v in d.items() if v != 0))


@dataclass(frozen=True)
class MomentRecipe:
    """Recipe for g_{i,j}.

    measure: 'unitary' (both variables on the unit circle, g is the
    coefficient of x^i y^j), 'hermitian' (both real, Gaussian weights
    exp(-w1 x^2 - w2 y^2)) or 'mixed' (x on the circle, y real with weight
    exp(-y^2/2)).  v and u are Laurent polynomials given as
    ((exponent, coefficient), ...).  shift multiplies the integrand by
    (xy)^shift; it carries the (xy)^{N(1-N)/2} factor of the squared unitary
    case.  k_factor='per_entry' multiplies every entry by K_N for `N`.
    """

    kernel: HypergeometricKernel
    measure: str = "unitary"
    v: tuple = ((0, Fraction(1)),)
    u: tuple = ((0, Fraction(1)),)
    squared_arguments: bool = False
    w: tuple = (Fraction(0), Fraction(0))
    shift: int = 0
    N: int = 1
    k_factor: str = "none"
    label: str = ""

    def __post_init__(self):
        if self.measure not in ("unitary", "hermitian", "mixed"):
            raise ValueError(f"unknown measure {self.measure!r}")
        if self.k_factor not in ("none", "per_entry"):
            raise ValueError("k_factor must be 'none' or 'per_entry'")

    @classmethod
    def build(cls, r: IntegerLatticeFunction, measure="unitary", v=None, u=None, **kw):
        v = _laurent(v or {0: Fraction(1)})
        u = _laurent(u or {0: Fraction(1)})
        return cls(HypergeometricKernel(r, 0), measure, v, u, **kw)

    def effective(self, N: int):
        """Squared unitary recipe with the (xy)^{N(1-N)/2} factor baked in."""
        if not (self.squared_arguments and self.measure == "unitary"):
            return replace(self, N=N)
        return replace(self, shift=N * (1 - N) // 2, N=N)

    def to_json(self):
        return {
            "r": self.kernel.r.to_json(),
            "measure": self.measure,
            "v": {str(k): format_scalar(c) for k, c in self.v},
            "u": {str(k): format_scalar(c) for k, c in self.u},
            "squared_arguments": self.squared_arguments,
            "w": [format_scalar(x) for x in self.w],
            "shift": self.shift,
            "N": self.N,
            "k_factor": self.k_factor,
            "label": self.label,
        }

    @classmethod
    def from_json(cls, obj):
        r = IntegerLatticeFunction.from_json(obj["r"])
        v = {int(k): parse_scalar(c) for k, c in obj.get("v", {"0": "1"}).items()}
        u = {int(k): parse_scalar(c) for k, c in obj.get("u", {"0": "1"}).items()}
        return cls(HypergeometricKernel(r, 0), obj.get("measure", "unitary"), _laurent(v), _laurent(u),
                   bool(obj.get("squared_arguments", False)),
                   tuple(parse_scalar(x) for x in obj.get("w", ["0", "0"])),
                   int(obj.get("shift", 0)), int(obj.get("N", 1)),
                   obj.get("k_factor", "none"), obj.get("label", ""))


def pairing_coefficients(r, top: int):
    """a_m = r(1)...r(m) for m = 0..top."""
    out = [Fraction(1)]
    for m in range(1, top + 1):
        out.append(out[-1] * r(m))
    return out


def _exponential_rate(recipe):
    """kappa when the pairing is exp(kappa z), i.e. r(m) = kappa / m; else None."""
    r = recipe.kernel.r
    if len(r.num) == 1 and tuple(r.den) == (0, 1):
        return r.const * r.num[0]
    return None


def _pairing_degree(recipe):
    """Degree of a polynomial pairing (first m with r(m) = 0), else None."""
    r = recipe.kernel.r
    for m in range(1, 64):
        if not r.is_pole(m) and r(m) == 0:
            return m - 1
    return None


def _contour(recipe, i, j):
    # coefficient of x^i y^j in P(z) v(x) u(y) (xy)^shift, z = xy or x^2 y^2
    step = 2 if recipe.squared_arguments else 1
    total = Fraction(0)
    for a, va in recipe.v:
        for b, ub in recipe.u:
            ex, ey = i - a - recipe.shift, j - b - recipe.shift
            if ex != ey or ex < 0 or ex % step:
                continue
            m = ex // step
            total = total + va * ub * pairing_coefficients(recipe.kernel.r, m)[m]
    return total


def _double_factorial_odd(k):
    # (k-1)!! for even k >= 0, the k-th moment of N(0, 1)
    out = 1
    for s in range(k - 1, 0, -2):
        out *= s
    return out


def _mixed(recipe, i, j):
    if recipe.squared_arguments:
        raise NotImplementedError("the mixed ensemble is implemented for the xy pairing only")
    total = Fraction(0)
    for a, va in recipe.v:
        for b, ub in recipe.u:
            m = i - a - recipe.shift
            if m < 0:
                continue
            deg = j + b + recipe.shift + m
            if deg < 0 or deg % 2:
                continue
            total = total + va * ub * pairing_coefficients(recipe.kernel.r, m)[m] \
                * _double_factorial_odd(deg)
    return total


def _gauss_moment(a, b, sxx, syy, sxy):
    # E[x^a y^b] for a centred Gaussian pair with the given covariances (Wick)
    total = 0
    for k in range(min(a, b) + 1):
        ra, rb = a - k, b - k
        if ra % 2 or rb % 2:
            continue
        term = Fraction(factorial(a) * factorial(b), factorial(k) * factorial(ra) * factorial(rb))
        term = term * _double_factorial_odd(ra) * _double_factorial_odd(rb)
        total = total + term * sxy ** k * sxx ** (ra // 2) * syy ** (rb // 2)
    return total


def _hermitian(recipe, i, j):
    w1, w2 = recipe.w
    if recipe.squared_arguments:
        raise NotImplementedError(
            "Hermitian moments with the x^2 y^2 pairing are quartic; no exact route")
    kappa = _exponential_rate(recipe)
    if kappa is not None:
        # exp(-(w1 x^2 + w2 y^2) + kappa x y), normalized by its own mass.
        # w1 = w2 = 0 is read as the formal limit of the covariance.
        det = 4 * w1 * w2 - kappa * kappa
        if det == 0:
            raise DivergenceError(i, j, "degenerate quadratic form")
        sxx, syy, sxy = 2 * w2 / det, 2 * w1 / det, kappa / det
        total = 0
        for a, va in recipe.v:
            for b, ub in recipe.u:
                total = total + va * ub * _gauss_moment(i + a + recipe.shift, j + b + recipe.shift,
                                                        sxx, syy, sxy)
        return total
    deg = _pairing_degree(recipe)
    if deg is None:
        raise DivergenceError(i, j, "non-polynomial pairing needs quadrature (see ensembles)")
    if w1 <= 0 or w2 <= 0:
        raise DivergenceError(i, j, "Gaussian weights must be positive for a polynomial pairing")
    a_m = pairing_coefficients(recipe.kernel.r, deg)
    sx, sy = 1 / (2 * w1), 1 / (2 * w2)
    total = 0
    for m in range(deg + 1):
        for a, va in recipe.v:
            for b, ub in recipe.u:
                ex, ey = i + m + a + recipe.shift, j + m + b + recipe.shift
                if ex % 2 or ey % 2 or ex < 0 or ey < 0:
                    continue
                total = total + a_m[m] * va * ub * _double_factorial_odd(ex) * sx ** (ex // 2) \
                    * _double_factorial_odd(ey) * sy ** (ey // 2)
    return total


def moment_matrix(recipe: MomentRecipe, i: int, j: int):
    """Exact g_{i,j} for the recipe.

    unitary: coefficient extraction (contour-exact).  hermitian: Wick
    algebra for an exponential pairing (normalized by the coupled Gaussian
    mass, w = 0 allowed as a formal limit), or termwise Gaussian moments for
    a polynomial pairing with w > 0.  mixed: contour in x, Gaussian in y.
    """
    if i < 0 or j < 0:
        raise IndexError("moment indices start at 0")
    if recipe.measure == "unitary":
        val = _contour(recipe, i, j)
    elif recipe.measure == "mixed":
        val = _mixed(recipe, i, j)
    else:
        val = _hermitian(recipe, i, j)
    if recipe.k_factor == "per_entry":
        val = val * k_constant(recipe.kernel, recipe.N)
    return val


def moment_method(recipe: MomentRecipe) -> str:
    if recipe.measure == "unitary":
        return "contour-exact"
    if recipe.measure == "mixed":
        return "contour-gaussian-exact"
    return "gaussian-exact"


def minor_partition(A: CoefficientMatrix, lam, mu, N: int):
    """det[A_{N+lam_i-i, N+mu_j-j}]_{i,j=1..N}."""
    lam, mu = Partition(lam), Partition(mu)
    if len(lam) > N or len(mu) > N:
        raise ValueError(f"partition longer than N={N}")
    lp = list(lam) + [0] * (N - len(lam))
    mp = list(mu) + [0] * (N - len(mu))
    rows = [N + lp[i] - i - 1 for i in range(N)]
    cols = [N + mp[j] - j - 1 for j in range(N)]
    return determinant([[A[a, b] for b in cols] for a in rows])


def _pad_pair(alpha, beta):
    a, b = list(alpha), list(beta)
    if len(a) == len(b):
        return a, b
    if abs(len(a) - len(b)) == 1:
        if len(a) < len(b):
            a.append(0)
        else:
            b.append(0)
        return a, b
    return None


def minor_strict(A: CoefficientMatrix, alpha, beta):
    """det[A_{alpha_i, beta_j}] for equal lengths; 1 for two empty indices."""
    a, b = list(alpha), list(beta)
    if len(a) != len(b):
        raise ValueError("strict minors need equal lengths")
    return determinant([[A[x, y] for y in b] for x in a])


def compose(A1: CoefficientMatrix, g: CoefficientMatrix, A2: CoefficientMatrix, window: int,
            inner: int | None = None) -> CoefficientMatrix:
    """Windowed product A1 g A2 on indices < window.

    The contraction runs over indices < inner (default: window).  This is
    exact when A1 (rows < window) and A2 (columns < window) vanish beyond
    the inner range, which holds for identity, diagonal and finite tables.
    """
    inner = window if inner is None else inner
    left = [[A1[i, k] for k in range(inner)] for i in range(window)]
    mid = [[g[k, l] for l in range(inner)] for k in range(inner)]
    right = [[A2[l, j] for j in range(window)] for l in range(inner)]
    tmp = [[sum((left[i][k] * mid[k][l] for k in range(inner) if left[i][k] != 0), Fraction(0))
            for l in range(inner)] for i in range(window)]
    out = [[sum((tmp[i][l] * right[l][j] for l in range(inner) if tmp[i][l] != 0), Fraction(0))
            for j in range(window)] for i in range(window)]
    return CoefficientMatrix.table(out, strict_window=True)


def _strict_sequences(k: int, window: int):
    """Strictly decreasing k-tuples of indices in [0, window), trailing 0 allowed."""
    for comb in itertools.combinations(range(window - 1, -1, -1), k):
        yield comb


def minor_cauchy_binet(A: CoefficientMatrix, B: CoefficientMatrix, alpha, beta, window: int):
    """sum over strict gamma (last part may be 0) of A_{alpha,gamma} B_{gamma,beta}."""
    a, b = list(alpha), list(beta)
    if len(a) != len(b):
        raise ValueError("strict minors need equal lengths")
    if any(x >= window for x in a + b):
        raise WindowError("index outside the window")
    total = Fraction(0)
    for gamma in _strict_sequences(len(a), window):
        left = minor_strict(A, a, gamma)
        if left == 0:
            continue
        total = total + left * minor_strict(B, gamma, b)
    return total


def tau_2kp(A: CoefficientMatrix, p1: Specialization | None, p2: Specialization | None,
            N: int, trunc, prefactor=Fraction(1)) -> TauSeries:
    """Coefficients A_{lam,mu}(N) for |lam|, |mu| <= max_weight, lengths <= min(N, max_length)."""
    max_weight, max_length = trunc
    parts = enumerate_partitions(max_weight, min(N, max_length))
    coeffs = {}
    for lam in parts:
        for mu in parts:
            c = minor_partition(A, lam, mu, N)
            if c != 0:
                coeffs[(lam, mu)] = prefactor * c
    return TauSeries("partition_pair", coeffs, (max_weight, max_length), p1, p2,
                     meta={"N": N})


def tau_2bkp(A: CoefficientMatrix, p1: Specialization | None, p2: Specialization | None,
             trunc) -> TauSeries:
    """Coefficients 2^{-l(alpha)} A_{alpha,beta} over strict partitions.

    Lengths may differ by one; the shorter index is then padded with a 0 part.
    """
    max_weight, max_length = trunc
    parts = enumerate_strict_partitions(max_weight, max_length)
    coeffs = {}
    for alpha in parts:
        for beta in parts:
            padded = _pad_pair(alpha, beta)
            if padded is None:
                continue
            c = minor_strict(A, *padded)
            if c != 0:
                coeffs[(alpha, beta)] = Fraction(1, 2 ** len(alpha)) * c
    return TauSeries("strict_pair", coeffs, (max_weight, max_length), p1, p2)


def _k_prefactor(recipe: MomentRecipe, N: int, normalization: str):
    if normalization == "overall":
        return k_constant(recipe.kernel, N)
    if normalization == "none":
        return Fraction(1)
    raise ValueError("normalization must be 'overall' or 'none'")


def scalar_product_ss(lam, mu, recipe: MomentRecipe, N: int, normalization: str = "none"):
    """<s_lam, s_mu> = det[g_{lam_i-i+N, mu_j-j+N}] (times K_N for 'overall')."""
    g = CoefficientMatrix.moments(replace(recipe, N=N))
    return _k_prefactor(recipe, N, normalization) * minor_partition(g, lam, mu, N)


def scalar_product_qq(alpha, beta, recipe: MomentRecipe, N: int = 1):
    """<Q_alpha, Q_beta> = det[g_{alpha_i, beta_j}] with the effective squared recipe."""
    g = CoefficientMatrix.moments(recipe.effective(N))
    padded = _pad_pair(StrictPartition(alpha), StrictPartition(beta))
    if padded is None:
        raise ValueError("lengths differ by more than one")
    return minor_strict(g, *padded)


def _default_window(trunc, N):
    return trunc[0] + N + 1


def solvable_model_2kp(A1: CoefficientMatrix, A2: CoefficientMatrix, recipe: MomentRecipe,
                       p1, p2, N: int, trunc, window: int | None = None,
                       normalization: str = "overall") -> TauSeries:
    """Series sum s_lam(p1) s_mu(p2) (A1 g A2)_{lam,mu}(N).

    normalization='overall' multiplies every minor once by K_N.
    """
    window = window or _default_window(trunc, N)
    g = CoefficientMatrix.moments(replace(recipe, N=N))
    A3 = compose(A1, g, A2, window)
    out = tau_2kp(A3, p1, p2, N, trunc, _k_prefactor(recipe, N, normalization))
    out.meta.update({"window": window, "normalization": normalization,
                     "moment_method": moment_method(recipe)})
    return out


def solvable_chain(matrices: Sequence[CoefficientMatrix], recipes: Sequence[MomentRecipe],
                   p1, p2, N: int, trunc, window: int | None = None, bkp: bool = False,
                   normalization: str = "overall") -> TauSeries:
    """Chain A1 g1 A2 g2 ... A_n: len(matrices) == len(recipes) + 1."""
    if len(matrices) != len(recipes) + 1:
        raise ValueError("need one more coefficient matrix than moment recipes")
    window = window or (max(trunc[0], 1) + 2 if bkp else _default_window(trunc, N))
    acc = matrices[0]
    pref = Fraction(1)
    for rec, nxt in zip(recipes, matrices[1:]):
        g = CoefficientMatrix.moments(rec.effective(N) if bkp else replace(rec, N=N))
        acc = compose(acc, g, nxt, window)
        if not bkp:
            pref = pref * _k_prefactor(rec, N, normalization)
    if bkp:
        return tau_2bkp(acc, p1, p2, trunc)
    return tau_2kp(acc, p1, p2, N, trunc, pref)


def solvable_model_2bkp(A1: CoefficientMatrix, A2: CoefficientMatrix, recipe: MomentRecipe,
                        p1, p2, N: int, trunc, window: int | None = None) -> TauSeries:
    """Series sum 2^{-l(alpha)} Q_alpha(p1) Q_beta(p2) (A1 g A2)_{alpha,beta}."""
    if not recipe.squared_arguments:
        raise ValueError("the BKP family needs a squared-argument recipe")
    window = window or (max(trunc[0], 1) + 2)
    g = CoefficientMatrix.moments(recipe.effective(N))
    A3 = compose(A1, g, A2, window)
    out = tau_2bkp(A3, p1, p2, trunc)
    out.meta.update({"window": window, "N": N, "moment_method": moment_method(recipe)})
    return out
