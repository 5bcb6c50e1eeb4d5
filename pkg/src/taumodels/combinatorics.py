"""Partitions, strict partitions and the products indexed by them.

Partitions are plain tuples of positive integers in weakly decreasing order.
The helper classes below validate on construction and otherwise behave like
tuples, so they can be used as dictionary keys and compared directly.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .exactalg import format_scalar, parse_scalar

__all__ = [
    "Partition",
    "StrictPartition",
    "FrobeniusCoordinates",
    "PoleError",
    "DomainError",
    "IntegerLatticeFunction",
    "enumerate_partitions",
    "enumerate_strict_partitions",
    "enumerate_odd_part_partitions",
    "partition_count",
    "content_product",
    "pochhammer_lambda",
    "qt_pochhammer_lambda",
    "to_frobenius",
    "from_frobenius",
]


class PoleError(ZeroDivisionError):
    """Raised when a lattice function is evaluated at one of its poles."""

    def __init__(self, point, message=None):
        self.point = point
        super().__init__(message or f"lattice function has a pole at x = {point}")


class DomainError(ValueError):
    pass


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"parts must be weakly decreasing: {parts}")
        if parts and parts[-1] < 0:
            raise ValueError(f"parts must be positive: {parts}")
        return super().__new__(cls, parts)

    def weight(self) -> int:
        return sum(self)

    def length(self) -> int:
        return len(self)

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > j) for j in range(self[0]))

    def nodes(self):
        """Yield the (row, column) coordinates of the Young diagram, 1-based."""
        for i, p in enumerate(self, start=1):
            for j in range(1, p + 1):
                yield i, j

    def contents(self):
        return [j - i for i, j in self.nodes()]

    def doubled(self) -> "Partition":
        return Partition(2 * p for p in self)

    def __repr__(self):
        return f"Partition({tuple(self)!r})"


class StrictPartition(Partition):
    """Strictly decreasing tuple of positive integers."""

    def __new__(cls, parts=()):
        self = super().__new__(cls, parts)
        for a, b in zip(self, self[1:]):
            if a <= b:
                raise ValueError(f"parts must be strictly decreasing: {tuple(self)}")
        return self

    def doubled(self) -> "StrictPartition":
        return StrictPartition(2 * p for p in self)

    def __repr__(self):
        return f"StrictPartition({tuple(self)!r})"


class FrobeniusCoordinates(tuple):
    """Pair (arms, legs) of equal-length strictly decreasing sequences.

    The last arm or leg may be 0 (a one-node hook on the diagonal).
    """

    def __new__(cls, arms, legs):
        arms, legs = tuple(arms), tuple(legs)
        if len(arms) != len(legs):
            raise ValueError("arms and legs must have equal length")
        for seq in (arms, legs):
            if any(a <= b for a, b in zip(seq, seq[1:])) or (seq and seq[-1] < 0):
                raise ValueError(f"not a strictly decreasing nonnegative sequence: {seq}")
        return super().__new__(cls, (arms, legs))

    @property
    def arms(self):
        return self[0]

    @property
    def legs(self):
        return self[1]


def to_frobenius(lam: Sequence[int]) -> FrobeniusCoordinates:
    lam = Partition(lam)
    conj = lam.conjugate()
    d = sum(1 for i, p in enumerate(lam, start=1) if p >= i)
    arms = [lam[i] - i - 1 for i in range(d)]
    legs = [conj[i] - i - 1 for i in range(d)]
    return FrobeniusCoordinates(arms, legs)


def from_frobenius(fc: FrobeniusCoordinates) -> Partition:
    arms, legs = fc
    d = len(arms)
    if d == 0:
        return Partition()
    rows = [arms[i] + i + 1 for i in range(d)]
    # rows below the diagonal block: row k (0-based, k >= d) has
    # #{i : legs[i] + i >= k} cells
    nrows = legs[0] + 1
    for k in range(d, nrows):
        rows.append(sum(1 for i in range(d) if legs[i] + i >= k))
    return Partition(rows)


def _partitions_of(n: int, max_part: int, max_length: int) -> Iterator[tuple]:
    # lexicographically descending
    if n == 0:
        yield ()
        return
    if max_length == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions_of(n - first, first, max_length - 1):
            yield (first,) + rest


def enumerate_partitions(max_weight: int, max_length: int) -> list:
    """All partitions with weight <= max_weight and length <= max_length.

    Order: by weight, then lexicographically descending within a weight.
    """
    if max_weight < 0 or max_length < 0:
        raise ValueError("max_weight and max_length must be nonnegative")
    return [Partition(p) for n in range(max_weight + 1)
            for p in _partitions_of(n, n, max_length)]


def _strict_of(n: int, max_part: int, max_length: int) -> Iterator[tuple]:
    if n == 0:
        yield ()
        return
    if max_length == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _strict_of(n - first, first - 1, max_length - 1):
            yield (first,) + rest


def enumerate_strict_partitions(max_weight: int, max_length: int) -> list:
    """Strict partitions, same ordering convention as enumerate_partitions."""
    if max_weight < 0 or max_length < 0:
        raise ValueError("max_weight and max_length must be nonnegative")
    return [StrictPartition(p) for n in range(max_weight + 1)
            for p in _strict_of(n, n, max_length)]


def enumerate_odd_part_partitions(max_weight: int, max_length: int) -> list:
    """Partitions all of whose parts are odd (a filter, kept for completeness)."""
    return [p for p in enumerate_partitions(max_weight, max_length)
            if all(x % 2 for x in p)]


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """p(n) via Euler's pentagonal recurrence."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total = 0
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > n:
            break
        sign = 1 if k % 2 else -1
        total += sign * partition_count(n - g1)
        g2 = k * (3 * k + 1) // 2
        if g2 <= n:
            total += sign * partition_count(n - g2)
        k += 1
    return total


def _to_scalar(c):
    if isinstance(c, (str, int)):
        return parse_scalar(c)
    return c


def _poly_eval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _strip(coeffs):
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


class IntegerLatticeFunction:
    """Rational function r(x) = const * p(x) / q(x) evaluated on integers.

    Polynomials are coefficient lists, lowest degree first.  Evaluating at a
    zero of q raises PoleError carrying the point.
    """

    __slots__ = ("num", "den", "const", "label")

    def __init__(self, num=(1,), den=(1,), const=1, label=None):
        self.num = tuple(_strip([_to_scalar(c) for c in num]))
        self.den = tuple(_strip([_to_scalar(c) for c in den]))
        if all(c == 0 for c in self.den):
            raise ValueError("denominator polynomial is identically zero")
        self.const = _to_scalar(const)
        self.label = label

    @classmethod
    def constant(cls, c=1):
        return cls((1,), (1,), c, label=f"const({c})")

    @classmethod
    def from_shifts(cls, num_shifts=(), den_shifts=(), const=1, label=None):
        """r(x) = const * prod(a + x) / prod(b + x)."""
        num, den = [1], [1]
        for a in num_shifts:
            num = _poly_mul(num, [_to_scalar(a), 1])
        for b in den_shifts:
            den = _poly_mul(den, [_to_scalar(b), 1])
        return cls(num, den, const, label)

    @classmethod
    def hypergeometric(cls, a=(), b=(), const=1):
        """r(x) = const * prod(a_i + x) / (x * prod(b_i + x)), giving pFq series."""
        return cls.from_shifts(a, tuple(b) + (0,), const, label=f"pFq(a={tuple(a)}, b={tuple(b)})")

    def __call__(self, x):
        d = _poly_eval(self.den, x)
        if d == 0:
            raise PoleError(x)
        val = self.const * _poly_eval(self.num, x)
        if isinstance(val, int) and isinstance(d, int):
            return Fraction(val, d)
        return val / d

    def is_pole(self, x) -> bool:
        return _poly_eval(self.den, x) == 0

    def is_zero(self, x) -> bool:
        return not self.is_pole(x) and self(x) == 0

    def product(self, start: int, stop: int):
        """prod_{s=start}^{stop} r(s); empty product is 1."""
        acc = Fraction(1)
        for s in range(start, stop + 1):
            acc *= self(s)
        return acc

    def shifted(self, k):
        """x -> r(x + k)."""
        def shift(coeffs):
            out = [0]
            for c in reversed(coeffs):
                out = _poly_mul(out, [k, 1])
                out[0] += c
            return out
        return IntegerLatticeFunction(shift(self.num), shift(self.den), self.const)

    def __mul__(self, other):
        if not isinstance(other, IntegerLatticeFunction):
            return IntegerLatticeFunction(self.num, self.den, self.const * other)
        return IntegerLatticeFunction(_poly_mul(self.num, other.num),
                                      _poly_mul(self.den, other.den),
                                      self.const * other.const)

    __rmul__ = __mul__

    def to_json(self):
        return {"num": [_fmt(c) for c in self.num],
                "den": [_fmt(c) for c in self.den],
                "const": _fmt(self.const)}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["num"], obj.get("den", [1]), obj.get("const", 1))

    def __eq__(self, other):
        if not isinstance(other, IntegerLatticeFunction):
            return NotImplemented
        return (self.num, self.den, self.const) == (other.num, other.den, other.const)

    def __hash__(self):
        return hash((self.num, self.den, self.const))

    def __repr__(self):
        if self.label:
            return f"IntegerLatticeFunction<{self.label}>"
        return f"IntegerLatticeFunction(num={self.num}, den={self.den}, const={self.const})"


def _fmt(c):
    return format_scalar(c)


def content_product(r, lam: Sequence[int], n=0):
    """prod over nodes (i, j) of lam of r(n + j - i); 1 for the empty partition.

    r is any callable; an IntegerLatticeFunction raises PoleError naming the
    offending lattice point.
    """
    acc = Fraction(1)
    for i, p in enumerate(lam, start=1):
        for j in range(1, p + 1):
            acc = acc * r(n + j - i)
    return acc


def rising(a, k: int):
    acc = Fraction(1) if isinstance(a, (int, Fraction)) else 1
    for s in range(k):
        acc = acc * (a + s)
    return acc


def pochhammer_lambda(a, lam: Sequence[int]):
    """(a)_lam = (a)_{lam_1} (a-1)_{lam_2} ..."""
    acc = Fraction(1) if isinstance(a, (int, Fraction)) else 1
    for i, p in enumerate(lam):
        acc = acc * rising(a - i, p)
    return acc


def qt_pochhammer(q, t, k: int):
    acc = Fraction(1) if isinstance(q, (int, Fraction)) else 1
    for s in range(k):
        acc = acc * (1 - q * t ** s)
    return acc


def qt_pochhammer_lambda(q, t, lam: Sequence[int]):
    """(q;t)_lam = (q;t)_{lam_1} (q/t;t)_{lam_2} ... (q t^{1-l};t)_{lam_l}."""
    lam = Partition(lam)
    if t == 0 and len(lam) > 1:
        raise DomainError("t = 0 needs negative powers of t for partitions of length > 1")
    acc = Fraction(1) if isinstance(q, (int, Fraction)) else 1
    for i, p in enumerate(lam):
        shift = q * (t ** -i) if i else q
        acc = acc * qt_pochhammer(shift, t, p)
    return acc
