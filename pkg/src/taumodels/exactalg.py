"""Exact linear algebra: determinants, Pfaffians, Vandermonde products.

Entries may be ints, Fractions, the ComplexRational type below, mpmath
numbers, or any commutative ring element supporting +, - and * (for example
PowerSumSeries).  Field entries go through elimination; generic ring entries
go through a division-free expansion over column subsets.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Number
from typing import Sequence

__all__ = [
    "SingularityError",
    "ComplexRational",
    "determinant",
    "pfaffian",
    "vandermonde",
    "vandermonde_star",
    "is_field_element",
    "format_scalar",
    "parse_scalar",
]


class SingularityError(ZeroDivisionError):
    pass


class ComplexRational:
    """a + b*i with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(x):
        if isinstance(x, ComplexRational):
            return x
        if isinstance(x, (int, Fraction)):
            return ComplexRational(x, 0)
        if isinstance(x, complex):
            return ComplexRational(Fraction(x.real), Fraction(x.imag))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ComplexRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ComplexRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ComplexRational(self.re * o.re - self.im * o.im,
                               self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("complex division by zero")
        return ComplexRational((self.re * o.re + self.im * o.im) / d,
                               (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return ComplexRational(1) / (self ** -k)
        out, base = ComplexRational(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        return ComplexRational(self.re, -self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im)) if self.im else hash(self.re)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ComplexRational({self.re}, {self.im})"

    def __str__(self):
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


_EXACT = (int, Fraction, ComplexRational)


def _fmt_fraction(c: Fraction) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)


def format_scalar(c) -> str:
    """Exact scalars as "num/den" (complex: "re+im i"); reals via repr."""
    if isinstance(c, ComplexRational):
        if c.im == 0:
            return _fmt_fraction(c.re)
        sign = "+" if c.im >= 0 else "-"
        return f"{_fmt_fraction(c.re)}{sign}{_fmt_fraction(abs(c.im))}i"
    if isinstance(c, (int, Fraction)):
        return _fmt_fraction(c)
    if isinstance(c, complex):
        return repr(c)
    return repr(float(c)) if isinstance(c, float) else str(c)


def parse_scalar(s):
    """Inverse of format_scalar for exact values."""
    if not isinstance(s, str):
        return Fraction(s) if isinstance(s, int) else s
    s = s.strip()
    if s.endswith("i"):
        body = s[:-1]
        # split at the sign that separates real and imaginary parts
        cut = max(body.rfind("+"), body.rfind("-"))
        if cut <= 0:
            return ComplexRational(0, Fraction(body or "1"))
        return ComplexRational(Fraction(body[:cut]), Fraction(body[cut:]))
    return Fraction(s)


def is_field_element(x) -> bool:
    return isinstance(x, (Number, ComplexRational)) or hasattr(x, "__mpf__") \
        or type(x).__module__.startswith("mpmath")


def _is_exact(x) -> bool:
    return isinstance(x, _EXACT)


def _square(M):
    M = [list(row) for row in M]
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix is not square")
    return M


def _det_cofactor(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = 0
    for j in range(n):
        if M[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _det_bareiss(M):
    # fraction-free elimination; every division below is exact
    n = len(M)
    M = [row[:] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        piv = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * piv - M[i][k] * M[k][j]) / prev
            M[i][k] = 0
        prev = piv
    d = M[n - 1][n - 1]
    return -d if sign < 0 else d


def _det_gauss(M):
    # partial pivoting for inexact scalars
    n = len(M)
    M = [row[:] for row in M]
    det = 1
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(M[i][k]))
        if M[p][k] == 0:
            return 0 * M[0][0]
        if p != k:
            M[k], M[p] = M[p], M[k]
            det = -det
        piv = M[k][k]
        det = det * piv
        for i in range(k + 1, n):
            f = M[i][k] / piv
            if f != 0:
                for j in range(k + 1, n):
                    M[i][j] = M[i][j] - f * M[k][j]
    return det


def _det_ring(M):
    # division-free: dynamic programming over used-column subsets
    n = len(M)
    partial = {0: 1}
    for i in range(n):
        nxt = {}
        row = M[i]
        for mask, val in partial.items():
            # sign of placing column j after the columns already used
            for j in range(n):
                if mask >> j & 1 or row[j] == 0:
                    continue
                above = bin(mask >> (j + 1)).count("1")
                term = val * row[j]
                key = mask | (1 << j)
                if above % 2:
                    term = -term
                nxt[key] = nxt[key] + term if key in nxt else term
        partial = nxt
        if not partial:
            return 0
    return partial.get((1 << n) - 1, 0)


def determinant(M):
    """Determinant of a square matrix (list of rows); 1 for the 0x0 matrix."""
    M = _square(M)
    n = len(M)
    if n == 0:
        return Fraction(1)
    entries = [x for row in M for x in row]
    field = all(is_field_element(x) for x in entries)
    if not field:
        return _det_ring(M)
    if n <= 4:
        return _det_cofactor(M)
    if all(_is_exact(x) for x in entries):
        return _det_bareiss(M)
    return _det_gauss(M)


def _check_skew(M):
    n = len(M)
    for i in range(n):
        if M[i][i] != 0:
            raise ValueError("matrix is not skew-symmetric: nonzero diagonal")
        for j in range(i + 1, n):
            if M[i][j] != -M[j][i]:
                raise ValueError(f"matrix is not skew-symmetric at ({i}, {j})")


def _pf_elim(M):
    # skew Gaussian elimination with pivot search on exact scalars
    M = [row[:] for row in M]
    n = len(M)
    pf = Fraction(1)
    for k in range(0, n - 1, 2):
        piv_col = next((j for j in range(k + 1, n) if M[k][j] != 0), None)
        if piv_col is None:
            return Fraction(0)
        if piv_col != k + 1:
            # simultaneous swap of rows/cols k+1 and piv_col flips the sign
            for row in M:
                row[k + 1], row[piv_col] = row[piv_col], row[k + 1]
            M[k + 1], M[piv_col] = M[piv_col], M[k + 1]
            pf = -pf
        a = M[k][k + 1]
        pf = pf * a
        rk, rk1 = M[k], M[k + 1]
        for i in range(k + 2, n):
            for j in range(i + 1, n):
                v = M[i][j] + (rk[j] * rk1[i] - rk[i] * rk1[j]) / a
                M[i][j] = v
                M[j][i] = -v
    return pf


def _pf_ring(M):
    # recursive expansion along the first remaining index, memoized on subsets
    n = len(M)
    memo = {}

    def rec(idx):
        if not idx:
            return 1
        key = idx
        if key in memo:
            return memo[key]
        first, rest = idx[0], idx[1:]
        total = 0
        for pos, j in enumerate(rest):
            a = M[first][j]
            if a == 0:
                continue
            sub = rec(rest[:pos] + rest[pos + 1:])
            term = a * sub
            total = total - term if pos % 2 else total + term
        memo[key] = total
        return total

    return rec(tuple(range(n)))


def pfaffian(M):
    """Pfaffian of an even-order skew-symmetric matrix, Pf[[0,a],[-a,0]] = a."""
    M = _square(M)
    n = len(M)
    if n % 2:
        raise ValueError("Pfaffian of an odd-order matrix is undefined")
    _check_skew(M)
    if n == 0:
        return Fraction(1)
    entries = [x for row in M for x in row]
    if all(_is_exact(x) for x in entries) and n > 4:
        return _pf_elim(M)
    return _pf_ring(M)


def vandermonde(x: Sequence):
    """prod_{i<j} (x_i - x_j)."""
    acc = Fraction(1)
    for i in range(len(x)):
        for j in range(i + 1, len(x)):
            acc = acc * (x[i] - x[j])
    return acc


def vandermonde_star(x: Sequence):
    """prod_{i<j} (x_i - x_j) / (x_i + x_j)."""
    acc = Fraction(1)
    for i in range(len(x)):
        for j in range(i + 1, len(x)):
            s = x[i] + x[j]
            if s == 0:
                raise SingularityError(f"x[{i}] + x[{j}] = 0")
            acc = acc * (x[i] - x[j]) / s
    return acc
