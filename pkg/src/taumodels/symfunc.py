"""Schur and projective Schur functions over power sums.

A PowerSumSeries is a polynomial in p_1, p_2, ... with exact coefficients,
graded by deg p_m = m and truncated at an explicit degree bound.  Monomials
are keyed by the partition mu listing the indices, so p_mu = p_{mu_1} p_{mu_2}...

A Specialization fixes numeric values of the p_m: finite eigenvalues (Schur or
projective convention), p_infinity, p(a), p(q, t), an explicit vector, or the
free (symbolic) power sums truncated at a degree bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .combinatorics import Partition, PoleError, StrictPartition
from .exactalg import determinant, pfaffian, vandermonde

__all__ = [
    "PowerSumSeries",
    "Specialization",
    "specialize",
    "elementary_schur",
    "elementary_symmetric",
    "schur",
    "schur_bialternant",
    "q_function",
    "q_skew_entry",
    "projective_schur",
]


def _merge(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b, reverse=True))


class PowerSumSeries:
    """Truncated polynomial in power sums with exact coefficients."""

    __slots__ = ("coeffs", "degree_bound")

    def __init__(self, coeffs=None, degree_bound: int = 0):
        if degree_bound is None or degree_bound < 0:
            raise ValueError("degree_bound must be a nonnegative integer")
        self.degree_bound = degree_bound
        self.coeffs = {}
        for mono, c in (coeffs or {}).items():
            mono = tuple(sorted(mono, reverse=True))
            if sum(mono) <= degree_bound and c != 0:
                self.coeffs[mono] = self.coeffs.get(mono, 0) + c
        self.coeffs = {m: c for m, c in self.coeffs.items() if c != 0}

    @classmethod
    def constant(cls, c, degree_bound):
        return cls({(): Fraction(c)}, degree_bound)

    @classmethod
    def generator(cls, m: int, degree_bound: int, coeff=1):
        return cls({(m,): Fraction(coeff)}, degree_bound)

    def _wrap(self, other):
        if isinstance(other, PowerSumSeries):
            return other
        return PowerSumSeries({(): other}, self.degree_bound)

    def __add__(self, other):
        other = self._wrap(other)
        bound = min(self.degree_bound, other.degree_bound)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return PowerSumSeries(out, bound)

    __radd__ = __add__

    def __neg__(self):
        return PowerSumSeries({m: -c for m, c in self.coeffs.items()}, self.degree_bound)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, PowerSumSeries):
            if other == 0:
                return PowerSumSeries({}, self.degree_bound)
            return PowerSumSeries({m: c * other for m, c in self.coeffs.items()},
                                  self.degree_bound)
        bound = min(self.degree_bound, other.degree_bound)
        out = {}
        for m1, c1 in self.coeffs.items():
            d1 = sum(m1)
            for m2, c2 in other.coeffs.items():
                if d1 + sum(m2) > bound:
                    continue
                key = _merge(m1, m2)
                out[key] = out.get(key, 0) + c1 * c2
        return PowerSumSeries(out, bound)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return PowerSumSeries({m: c / scalar for m, c in self.coeffs.items()},
                              self.degree_bound)

    def __eq__(self, other):
        if isinstance(other, PowerSumSeries):
            return self.coeffs == other.coeffs
        if other == 0:
            return not self.coeffs
        return self.coeffs == ({(): other} if other != 0 else {})

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        if not self.coeffs:
            return f"PowerSumSeries(0, bound={self.degree_bound})"
        terms = []
        for m, c in sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            mono = "*".join(f"p{k}" for k in m) or "1"
            terms.append(f"{c}*{mono}")
        return f"PowerSumSeries({' + '.join(terms)}, bound={self.degree_bound})"

    def truncate(self, degree_bound: int):
        return PowerSumSeries(self.coeffs, min(degree_bound, self.degree_bound))

    def homogeneous(self, d: int):
        return PowerSumSeries({m: c for m, c in self.coeffs.items() if sum(m) == d},
                              self.degree_bound)

    def coefficient(self, mono: Sequence[int]):
        return self.coeffs.get(tuple(sorted(mono, reverse=True)), 0)

    def derivative(self, m: int):
        """Partial derivative with respect to p_m."""
        out = {}
        for mono, c in self.coeffs.items():
            k = mono.count(m)
            if k:
                lst = list(mono)
                lst.remove(m)
                key = tuple(lst)
                out[key] = out.get(key, 0) + c * k
        return PowerSumSeries(out, self.degree_bound)

    def evaluate(self, values):
        """Substitute p_m -> values(m) (a callable or a mapping)."""
        get = values if callable(values) else values.__getitem__
        cache = {}
        total = 0
        for mono, c in self.coeffs.items():
            term = c
            for k in mono:
                if k not in cache:
                    cache[k] = get(k)
                term = term * cache[k]
            total = total + term
        return total

    def max_degree(self) -> int:
        return max((sum(m) for m in self.coeffs), default=0)


@dataclass(frozen=True)
class Specialization:
    """Numeric (or free) values for the power sums.

    kind is one of 'schur', 'projective', 'p_infinity', 'p_of_a', 'p_of_qt',
    'explicit', 'free'.
    """

    kind: str
    params: tuple = ()
    degree_bound: int | None = None

    @classmethod
    def finite(cls, xs, convention="schur"):
        if convention not in ("schur", "projective"):
            raise ValueError(f"unknown convention {convention!r}")
        return cls(convention, tuple(_exact(x) for x in xs))

    @classmethod
    def p_infinity(cls):
        return cls("p_infinity")

    @classmethod
    def p_of_a(cls, a):
        return cls("p_of_a", (_exact(a),))

    @classmethod
    def p_of_qt(cls, q, t):
        return cls("p_of_qt", (_exact(q), _exact(t)))

    @classmethod
    def explicit(cls, ps):
        """ps[0] is p_1; missing higher p_m are 0."""
        return cls("explicit", tuple(_exact(p) for p in ps))

    @classmethod
    def free(cls, degree_bound: int):
        return cls("free", (), degree_bound)

    @property
    def is_free(self):
        return self.kind == "free"

    @property
    def size(self):
        """Number of eigenvalues for finite kinds, else None."""
        return len(self.params) if self.kind in ("schur", "projective") else None

    def scaled(self, s):
        """p_m -> s^m p_m (eigenvalues x -> s x)."""
        if self.kind in ("schur", "projective"):
            return Specialization(self.kind, tuple(s * x for x in self.params))
        raise ValueError("scaling only defined for finite eigenvalue specializations")


def _exact(x):
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    return x


def specialize(p: Specialization, m: int, with_flag=False):
    """Value of p_m under a specialization.

    With the projective convention even m are absent from p_odd: the value 0
    is returned and, when with_flag is set, a True flag accompanies it.
    """
    if m < 1:
        raise ValueError("power sums are indexed from 1")
    flag = False
    kind = p.kind
    if kind == "schur":
        val = sum((x ** m for x in p.params), Fraction(0))
    elif kind == "projective":
        if m % 2 == 0:
            val, flag = Fraction(0), True
        else:
            val = 2 * sum((x ** m for x in p.params), Fraction(0))
    elif kind == "p_infinity":
        val = Fraction(1) if m == 1 else Fraction(0)
    elif kind == "p_of_a":
        val = p.params[0]
    elif kind == "p_of_qt":
        q, t = p.params
        den = 1 - t ** m
        if den == 0:
            raise PoleError(m, f"p(q,t) has a pole: t^{m} = 1")
        val = (1 - q ** m) / den
    elif kind == "explicit":
        val = p.params[m - 1] if m <= len(p.params) else Fraction(0)
    elif kind == "free":
        raise ValueError("free specialization has no numeric value")
    else:
        raise ValueError(f"unknown specialization kind {kind!r}")
    return (val, flag) if with_flag else val


def _check_bound(p, degree_bound):
    if p.is_free:
        bound = p.degree_bound if degree_bound is None else degree_bound
        if bound is None:
            raise ValueError("series-valued calls need an explicit degree bound")
        return bound
    return None


@lru_cache(maxsize=4096)
def _elementary_table(p: Specialization, top: int, kind: str, bound):
    """h_0..h_top (kind 'h'), e_0..e_top ('e') or q_0..q_top ('q')."""
    if p.is_free:
        def pm(k):
            return PowerSumSeries.generator(k, bound)
        one = PowerSumSeries.constant(1, bound)
    else:
        def pm(k):
            return specialize(p, k)
        one = Fraction(1)
    vals = [one]
    for m in range(1, top + 1):
        acc = 0
        for k in range(1, m + 1):
            if kind == "q" and k % 2 == 0:
                continue
            if p.is_free and k > bound:
                continue
            term = pm(k) * vals[m - k]
            if kind == "q":
                term = 2 * term
            elif kind == "e" and k % 2 == 0:
                term = -term
            acc = acc + term
        if p.is_free and not isinstance(acc, PowerSumSeries):
            acc = PowerSumSeries.constant(acc, bound)
        vals.append(acc / m)
    return tuple(vals)


def elementary_schur(m: int, p: Specialization, degree_bound: int | None = None):
    """Coefficient of x^m in exp(sum_k p_k x^k / k); 0 for m < 0."""
    bound = _check_bound(p, degree_bound)
    if m < 0:
        return PowerSumSeries({}, bound) if p.is_free else Fraction(0)
    return _elementary_table(p, m, "h", bound)[m]


def elementary_symmetric(m: int, p: Specialization, degree_bound: int | None = None):
    """Coefficient of x^m in exp(sum_k (-1)^(k-1) p_k x^k / k)."""
    bound = _check_bound(p, degree_bound)
    if m < 0:
        return PowerSumSeries({}, bound) if p.is_free else Fraction(0)
    return _elementary_table(p, m, "e", bound)[m]


def q_function(m: int, p: Specialization, degree_bound: int | None = None):
    """Coefficient of x^m in exp(sum_{k odd} 2 p_k x^k / k)."""
    bound = _check_bound(p, degree_bound)
    if m < 0:
        return PowerSumSeries({}, bound) if p.is_free else Fraction(0)
    return _elementary_table(p, m, "q", bound)[m]


def schur(lam: Sequence[int], p: Specialization, degree_bound: int | None = None,
          method: str = "auto"):
    """Schur function s_lam by the Jacobi-Trudi determinant.

    The dual (elementary) form is used when lam has more rows than columns;
    method='h' or 'e' forces one of them.  For finite eigenvalues with
    l(lam) > N the result is exactly 0.
    """
    lam = Partition(lam)
    bound = _check_bound(p, degree_bound)
    zero = PowerSumSeries({}, bound) if p.is_free else Fraction(0)
    if p.kind == "schur" and len(lam) > len(p.params):
        return zero
    if p.is_free and lam.weight() > bound:
        return zero
    if not lam:
        return PowerSumSeries.constant(1, bound) if p.is_free else Fraction(1)
    if method == "auto":
        method = "e" if len(lam) > lam[0] else "h"
    if method == "e":
        mu, table_kind = lam.conjugate(), "e"
    else:
        mu, table_kind = lam, "h"
    top = mu[0] + len(mu)
    table = _elementary_table(p, top, table_kind, bound)
    n = len(mu)

    def entry(k):
        return table[k] if k >= 0 else zero

    M = [[entry(mu[i] - i + j) for j in range(n)] for i in range(n)]
    return determinant(M)


def schur_bialternant(lam: Sequence[int], xs: Sequence):
    """s_lam(x_1..x_N) = det[x_i^(lam_j + N - j)] / Vandermonde(x)."""
    lam = Partition(lam)
    N = len(xs)
    if len(lam) > N:
        return Fraction(0)
    parts = list(lam) + [0] * (N - len(lam))
    num = determinant([[x ** (parts[j] + N - 1 - j) for j in range(N)] for x in xs])
    return num / vandermonde(list(xs))


def q_skew_entry(i: int, j: int, p: Specialization, degree_bound: int | None = None):
    """Q_ij = q_i q_j + 2 sum_{k=1}^{j} (-1)^k q_{i+k} q_{j-k}; Q_00 = 0."""
    if i < 0 or j < 0:
        raise ValueError("indices must be nonnegative")
    bound = _check_bound(p, degree_bound)
    if i == 0 and j == 0:
        return PowerSumSeries({}, bound) if p.is_free else Fraction(0)
    table = _elementary_table(p, i + j, "q", bound)
    acc = table[i] * table[j]
    for k in range(1, j + 1):
        term = 2 * table[i + k] * table[j - k]
        acc = acc - term if k % 2 else acc + term
    return acc


def projective_schur(alpha: Sequence[int], p: Specialization,
                     degree_bound: int | None = None):
    """Q_alpha = Pf[Q_{alpha_i alpha_j}], odd length padded with a 0 part."""
    alpha = StrictPartition(alpha)
    bound = _check_bound(p, degree_bound)
    if not alpha:
        return PowerSumSeries.constant(1, bound) if p.is_free else Fraction(1)
    if p.is_free and alpha.weight() > bound:
        return PowerSumSeries({}, bound)
    parts = list(alpha) + ([0] if len(alpha) % 2 else [])
    n = len(parts)
    zero = PowerSumSeries({}, bound) if p.is_free else Fraction(0)
    M = [[zero] * n for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            v = q_skew_entry(parts[a], parts[b], p, bound)
            M[a][b] = v
            M[b][a] = -v
    return pfaffian(M)
