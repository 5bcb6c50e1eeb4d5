"""Hypergeometric tau functions and their determinant formulas.

Every identity here is an identity of formal series.  To compare two sides we
introduce a global scale t (eigenvalues x -> t x, or p_m -> t^m p_m) and
compare the coefficients of t^0 .. t^D.  The helpers return those graded
coefficients as lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .combinatorics import (
    IntegerLatticeFunction,
    Partition,
    PoleError,
    StrictPartition,
    content_product,
    enumerate_partitions,
    format_scalar,
    parse_scalar,
)
from .exactalg import SingularityError, determinant, vandermonde
from .symfunc import (
    Specialization,
    elementary_schur,
    projective_schur,
    schur,
)

__all__ = [
    "HypergeometricKernel",
    "TauSeries",
    "TPoly",
    "tau_elementary",
    "tau_pp",
    "tau_XY_det_rhs",
    "tau_npp_det_rhs",
    "tau_nXp_det_rhs",
    "k_constant",
    "c_constant",
    "graded_sum",
]


@dataclass(frozen=True)
class HypergeometricKernel:
    """A lattice function r together with the offset n."""

    r: IntegerLatticeFunction
    n: int = 0

    def content(self, lam, n=None):
        return content_product(self.r, lam, self.n if n is None else n)

    def to_json(self):
        return {"r": self.r.to_json(), "n": self.n}

    @classmethod
    def from_json(cls, obj):
        return cls(IntegerLatticeFunction.from_json(obj["r"]), int(obj.get("n", 0)))


class TPoly:
    """Polynomial in the scale variable t truncated at degree `bound`.

    Coefficients are arbitrary ring elements (Fractions, ComplexRational,
    PowerSumSeries).  Used as a ring for determinants of scaled matrices.
    """

    __slots__ = ("c", "bound")

    def __init__(self, coeffs, bound):
        coeffs = list(coeffs)[: bound + 1]
        self.c = coeffs + [0] * (bound + 1 - len(coeffs))
        self.bound = bound

    @classmethod
    def monomial(cls, coeff, deg, bound):
        out = [0] * (bound + 1)
        if deg <= bound:
            out[deg] = coeff
        return cls(out, bound)

    def _wrap(self, o):
        return o if isinstance(o, TPoly) else TPoly([o], self.bound)

    def __add__(self, o):
        o = self._wrap(o)
        b = min(self.bound, o.bound)
        return TPoly([self.c[k] + o.c[k] for k in range(b + 1)], b)

    __radd__ = __add__

    def __neg__(self):
        return TPoly([-x for x in self.c], self.bound)

    def __sub__(self, o):
        return self + (-self._wrap(o))

    def __rsub__(self, o):
        return self._wrap(o) - self

    def __mul__(self, o):
        if not isinstance(o, TPoly):
            return TPoly([x * o for x in self.c], self.bound)
        b = min(self.bound, o.bound)
        out = [0] * (b + 1)
        for i, a in enumerate(self.c[: b + 1]):
            if a == 0:
                continue
            for j in range(b + 1 - i):
                if o.c[j] != 0:
                    out[i + j] = out[i + j] + a * o.c[j]
        return TPoly(out, b)

    __rmul__ = __mul__

    def __eq__(self, o):
        if isinstance(o, TPoly):
            return self.c == o.c
        return all(x == 0 for x in self.c[1:]) and self.c[0] == o

    def __hash__(self):
        return hash(tuple(self.c))

    def __repr__(self):
        return f"TPoly({self.c})"


def c_constant(r, k: int, start: int = 0):
    """c_k = prod_{i=start}^{k-1} r(i)^(i-k)."""
    acc = Fraction(1)
    for i in range(start, k):
        val = r(i)
        if val == 0:
            raise PoleError(i, f"c_{k} needs r({i})^{i - k} but r({i}) = 0")
        acc = acc * val ** (i - k)
    return acc


def k_constant(k: HypergeometricKernel, N: int):
    """K_N = 1 / prod_{m=1}^{N-1} prod_{i=1}^{m} r(i); K_1 = 1."""
    acc = Fraction(1)
    for m in range(1, N):
        for i in range(1, m + 1):
            acc = acc * k.r(i)
    if acc == 0:
        raise ZeroDivisionError(f"r vanishes on 1..{N - 1}")
    return 1 / acc


def tau_elementary(k: HypergeometricKernel, x, terms: int):
    """sum_{m=0}^{terms} x^m prod_{s=1}^{m} r(n+s)."""
    if terms < 0:
        raise ValueError("terms must be nonnegative")
    total, coeff, power = Fraction(1), Fraction(1), Fraction(1)
    for m in range(1, terms + 1):
        coeff = coeff * k.r(k.n + m)
        power = power * x
        total = total + coeff * power
    return total


def _row_coeffs(r, start: int, terms: int, factors: str = "content"):
    """a_m for m=0..terms with a_m = r(start)...r(start+m-1) ('content')
    or r(start)...r(start+m) ('printed', m+1 factors)."""
    out = []
    acc = Fraction(1)
    if factors == "printed":
        acc = acc * r(start)
    elif factors != "content":
        raise ValueError(f"unknown factor convention {factors!r}")
    out.append(acc)
    for m in range(1, terms + 1):
        acc = acc * r(start + m - 1 + (1 if factors == "printed" else 0))
        out.append(acc)
    return out


@dataclass
class TauSeries:
    """Coefficients of a double (or single) series over partitions.

    index_kind is 'partition_pair', 'strict_pair' or 'partition_single'.
    Keys are (lam, mu) tuples for pairs and lam for singles.  When p1/p2 are
    attached the stored numbers are structure coefficients and `term`
    multiplies in s_lam(p1) s_mu(p2) (or 2^{-l} Q_a Q_b for strict pairs the
    factor 2^{-l} is already inside the coefficient); otherwise the stored
    numbers are complete terms.
    """

    index_kind: str
    coeffs: dict
    truncation: tuple
    p1: Specialization | None = None
    p2: Specialization | None = None
    meta: dict = field(default_factory=dict)

    def coefficient(self, *index):
        key = index[0] if len(index) == 1 else tuple(index)
        if self.index_kind != "partition_single" and len(index) == 2:
            key = (tuple(index[0]), tuple(index[1]))
        return self.coeffs.get(key, Fraction(0))

    def _basis(self, idx, p):
        if p is None:
            return Fraction(1)
        if self.index_kind == "strict_pair":
            return projective_schur(idx, p)
        return schur(idx, p)

    def term(self, key):
        c = self.coeffs[key]
        if self.index_kind == "partition_single":
            return c * self._basis(key, self.p1)
        lam, mu = key
        return c * self._basis(lam, self.p1) * self._basis(mu, self.p2)

    def weight_of(self, key):
        if self.index_kind == "partition_single":
            return sum(key)
        return sum(key[0]), sum(key[1])

    def evaluate(self):
        return sum((self.term(k) for k in self.coeffs), Fraction(0))

    def graded(self, max_degree: int, which: str = "left"):
        """Sum of terms grouped by |lam| ('left'), |mu| ('right') or |lam|+|mu|."""
        out = [Fraction(0)] * (max_degree + 1)
        for key in self.coeffs:
            w = self.weight_of(key)
            if isinstance(w, tuple):
                d = {"left": w[0], "right": w[1], "total": w[0] + w[1]}[which]
            else:
                d = w
            if d <= max_degree:
                out[d] = out[d] + self.term(key)
        return out

    def to_json(self):
        def key_str(k):
            if self.index_kind == "partition_single":
                return list(k)
            return [list(k[0]), list(k[1])]
        return {
            "index_kind": self.index_kind,
            "truncation": list(self.truncation),
            "entries": [{"index": key_str(k), "value": format_scalar(v)}
                        for k, v in self.coeffs.items()],
        }

    @classmethod
    def from_json(cls, obj):
        kind = obj["index_kind"]
        P = StrictPartition if kind == "strict_pair" else Partition
        coeffs = {}
        for e in obj["entries"]:
            if kind == "partition_single":
                key = P(e["index"])
            else:
                key = (P(e["index"][0]), P(e["index"][1]))
            coeffs[key] = parse_scalar(e["value"])
        return cls(kind, coeffs, tuple(obj["truncation"]))


def tau_pp(k: HypergeometricKernel, p1: Specialization, p2: Specialization, trunc):
    """Diagonal series sum_lam r_lam(n) s_lam(p1) s_lam(p2), stored as full terms."""
    max_weight, max_length = trunc
    coeffs = {}
    for lam in enumerate_partitions(max_weight, max_length):
        rl = k.content(lam)
        if rl == 0:
            continue
        term = rl * schur(lam, p1) * schur(lam, p2)
        if term != 0:
            coeffs[(lam, lam)] = term
    return TauSeries("partition_pair", coeffs, (max_weight, max_length),
                     meta={"r": repr(k.r), "n": k.n})


def graded_sum(series: TauSeries, max_degree: int, which="left"):
    return series.graded(max_degree, which)


def _c_prefactor_xy(r, n: int, N: int, normalization: str):
    if normalization == "printed":
        return c_constant(r, n, 0) / c_constant(r, n - N, 0)
    if normalization == "from_one":
        return c_constant(r, n, 1) / c_constant(r, n - N, 1)
    if normalization == "derived":
        acc = Fraction(1)
        for s in range(n - N + 1, n):
            acc = acc * r(s) ** (n - s)
        return 1 / acc
    raise ValueError(f"unknown normalization {normalization!r}")


def tau_XY_det_rhs(k: HypergeometricKernel, x: Sequence, y: Sequence, max_degree: int,
                   normalization: str = "printed", inner: str = "content"):
    """Graded coefficients of c * det[T(n-N+1; t x_i y_j)] / (Delta(t x) Delta(y)).

    inner='content' uses T(k; z) = sum_m z^m r(k)...r(k+m-1); inner='elementary'
    uses the shifted product r(k+1)...r(k+m).  normalization picks the constant:
    'printed' (c_k with the product from i=0), 'from_one' (product from i=1)
    or 'derived' (1 / prod_{s=n-N+1}^{n-1} r(s)^(n-s)).
    Returns [coefficient of t^d for d = 0..max_degree].
    """
    N = len(x)
    if len(y) != N:
        raise ValueError("x and y must have the same length")
    if vandermonde(x) == 0 or vandermonde(y) == 0:
        raise SingularityError("repeated eigenvalue")
    shift = N * (N - 1) // 2
    bound = max_degree + shift
    start = k.n - N + 1
    if inner == "elementary":
        start += 1
    elif inner != "content":
        raise ValueError(f"unknown inner convention {inner!r}")
    pref = _c_prefactor_xy(k.r, k.n, N, normalization)
    a = _row_coeffs(k.r, start, bound)
    M = []
    for xi in x:
        row = []
        for yj in y:
            z = xi * yj
            row.append(TPoly([a[m] * z ** m for m in range(bound + 1)], bound))
        M.append(row)
    det = determinant(M)
    if isinstance(det, int):
        det = TPoly([det], bound)
    denom = vandermonde(x) * vandermonde(y)
    return [pref * det.c[d + shift] / denom for d in range(max_degree + 1)]


def _derived_schur(m: int, a: int, p: Specialization, bound):
    """d^a/dp_1^a of s_(m)(p); symbolic on free specializations."""
    if p.is_free:
        s = elementary_schur(m, p, bound)
        for _ in range(a):
            s = s.derivative(1)
        return s
    # d/dp_1 s_(m) = s_(m-1)
    return elementary_schur(m - a, p)


def tau_npp_det_rhs(k: HypergeometricKernel, p1: Specialization, p2: Specialization,
                    n: int, max_degree: int, normalization: str = "printed"):
    """Graded coefficients of c_n det[d^a_{p1_1} d^b_{p2_1} tau_r(1; p1, p2)]_{a,b<n}.

    The one-row tau is 1 + sum_m r(1)...r(m) s_(m)(p1) s_(m)(p2).  Both
    alphabets are scaled, so the t-degree of a term is |lam| + |mu|; the
    returned list is indexed by the total degree 2|lam| of the diagonal series,
    i.e. entry d is the coefficient of t^(2d).
    normalization='printed' uses c_n = prod_{i=1}^{n-1} r(i)^(i-n);
    'from_zero' starts the product at i=0.
    """
    if k.r.is_pole(0) or k.r(0) != 0:
        raise ValueError("the determinant formula needs r(0) = 0")
    if n < 1:
        raise ValueError("n must be at least 1")
    # entry (a, b) collects t^(2m-a-b); the determinant's t^0 term is the
    # empty-partition coefficient, so no degree shift is needed
    shift = 0
    bound = 2 * max_degree
    top = max_degree + n
    R = [Fraction(1)]
    for m in range(1, top + 1):
        R.append(R[-1] * k.r(m))
    deg_bound = _series_bound(p1, p2, max_degree + n)
    M = []
    for a in range(n):
        row = []
        for b in range(n):
            coeffs = [0] * (bound + 1)
            for m in range(max(a, b), top + 1):
                d = 2 * m - a - b
                if d > bound:
                    break
                coeffs[d] = coeffs[d] + R[m] * _derived_schur(m, a, p1, deg_bound) \
                    * _derived_schur(m, b, p2, deg_bound)
            row.append(TPoly(coeffs, bound))
        M.append(row)
    det = determinant(M)
    if normalization == "printed":
        pref = c_constant(k.r, n, 1)
    elif normalization == "from_zero":
        pref = c_constant(k.r, n, 0)
    else:
        raise ValueError(f"unknown normalization {normalization!r}")
    if isinstance(det, int):
        det = TPoly([det], bound)
    out = []
    for d in range(max_degree + 1):
        out.append(pref * det.c[2 * d + shift])
    return out


def _series_bound(p1, p2, default):
    bounds = [p.degree_bound for p in (p1, p2) if p.is_free]
    return min(bounds) if bounds else default


def tau_nXp_det_rhs(k: HypergeometricKernel, x: Sequence, p: Specialization, max_degree: int,
                    factors: str = "printed"):
    """Graded coefficients of det[x_i^(N-c) tau_r(n-c+1; x_i, p)] / det[x_i^(N-c)].

    Inner series tau_r(s; z, p) = sum_m z^m s_(m)(p) times the product
    r(s)...r(s+m) as printed (factors='printed', m+1 factors) or
    r(s)...r(s+m-1) (factors='content', m factors).  x -> t x.
    """
    N = len(x)
    if vandermonde(x) == 0:
        raise SingularityError("repeated eigenvalue")
    shift = N * (N - 1) // 2
    bound = max_degree + shift
    bnd = p.degree_bound if p.is_free else None
    h = [elementary_schur(m, p, bnd) for m in range(bound + 1)]
    M = []
    for xi in x:
        row = []
        for c in range(1, N + 1):
            a = _row_coeffs(k.r, k.n - c + 1, bound, factors)
            lead = N - c
            coeffs = [0] * (bound + 1)
            for m in range(bound + 1 - lead):
                coeffs[m + lead] = a[m] * xi ** (m + lead) * h[m]
            row.append(TPoly(coeffs, bound))
        M.append(row)
    det = determinant(M)
    if isinstance(det, int):
        det = TPoly([det], bound)
    denom = vandermonde(x)
    return [det.c[d + shift] / denom for d in range(max_degree + 1)]
