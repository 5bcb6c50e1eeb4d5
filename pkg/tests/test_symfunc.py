from fractions import Fraction
from itertools import permutations
from math import factorial

import pytest
import sympy
from hypothesis import given, strategies as st

from taumodels.combinatorics import Partition, PoleError, enumerate_partitions, rising
from taumodels.symfunc import (
    PowerSumSeries,
    Specialization,
    elementary_schur,
    elementary_symmetric,
    projective_schur,
    q_function,
    q_skew_entry,
    schur,
    schur_bialternant,
    specialize,
)

small = st.fractions(min_value=-3, max_value=3, max_denominator=4)
partitions_st = st.lists(st.integers(1, 4), max_size=3).map(lambda xs: Partition(sorted(xs, reverse=True)))
strict_st = st.sets(st.integers(1, 4), max_size=3).map(lambda s: tuple(sorted(s, reverse=True)))


def P(coeffs, bound=6):
    return PowerSumSeries(coeffs, bound)


def _hook_dim(lam):
    lam = Partition(lam)
    conj = lam.conjugate()
    hooks = 1
    for i, j in lam.nodes():
        hooks *= lam[i - 1] - j + conj[j - 1] - i + 1
    return Fraction(factorial(lam.weight()), hooks)


def _q_by_symmetrization(alpha, xs):
    # Q_alpha(x_1..x_N) = 2^l / (N-l)! sum_w w( x^alpha prod_{i<=l, i<j} (x_i+x_j)/(x_i-x_j) )
    l, N = len(alpha), len(xs)
    if l > N:
        return Fraction(0)
    total = Fraction(0)
    for w in permutations(xs):
        term = Fraction(1)
        for i in range(l):
            term *= w[i] ** alpha[i]
            for j in range(i + 1, N):
                term *= (w[i] + w[j]) / (w[i] - w[j])
        total += term
    return total * 2 ** l / factorial(N - l)


def test_small_schur_expansions():
    # hand-derived expansions in power sums
    free = Specialization.free(6)
    assert schur((2,), free) == P({(1, 1): Fraction(1, 2), (2,): Fraction(1, 2)})
    assert schur((1, 1), free) == P({(1, 1): Fraction(1, 2), (2,): Fraction(-1, 2)})
    assert schur((2, 1), free) == P({(1, 1, 1): Fraction(1, 3), (3,): Fraction(-1, 3)})
    assert schur((), free) == P({(): 1})
    assert schur((4, 3), free) == P({})


@pytest.mark.parametrize("lam", enumerate_partitions(6, 6))
def test_jacobi_trudi_dual_forms_agree(lam):
    free = Specialization.free(6)
    assert schur(lam, free, method="h") == schur(lam, free, method="e")


@given(partitions_st, st.lists(small, min_size=1, max_size=3, unique=True))
def test_jacobi_trudi_matches_bialternant(lam, xs):
    assert schur(lam, Specialization.finite(xs)) == schur_bialternant(lam, xs)


@given(partitions_st, st.lists(small, min_size=1, max_size=3))
def test_free_schur_evaluates_to_finite(lam, xs):
    free = schur(lam, Specialization.free(lam.weight()))
    ps = {m: sum((x ** m for x in xs), Fraction(0)) for m in range(1, lam.weight() + 1)}
    assert free.evaluate(ps) == schur(lam, Specialization.finite(xs))


@pytest.mark.parametrize("lam", [(1,), (2,), (1, 1), (3, 1), (2, 2, 1), (4, 2, 1)])
def test_p_infinity_is_hook_dimension(lam):
    assert schur(lam, Specialization.p_infinity()) == _hook_dim(lam) / factorial(sum(lam))


@given(st.integers(0, 6), small)
def test_p_of_a_gives_pochhammer(m, a):
    p = Specialization.p_of_a(a)
    assert elementary_schur(m, p) == rising(a, m) / factorial(m)
    assert elementary_symmetric(m, p) == rising(a - m + 1, m) / factorial(m)


def test_elementary_against_sympy():
    x = sympy.symbols("x1:4")
    t = sympy.Symbol("t")
    xs = [Fraction(1, 2), Fraction(-2, 3), Fraction(5, 4)]
    subs = {xi: sympy.Rational(v.numerator, v.denominator) for xi, v in zip(x, xs)}
    E = sympy.expand(sympy.prod([1 + xi * t for xi in x]))
    for m in range(5):
        ref = E.coeff(t, m).subs(subs)
        assert elementary_symmetric(m, Specialization.finite(xs)) == Fraction(str(ref))


def test_specialize_kinds():
    assert specialize(Specialization.finite([1, 2]), 2) == 5
    assert specialize(Specialization.finite([1, 2], "projective"), 3) == 18
    assert specialize(Specialization.finite([1, 2], "projective"), 2, with_flag=True) == (0, True)
    assert specialize(Specialization.explicit([3]), 2) == 0
    assert specialize(Specialization.p_of_qt(Fraction(1, 2), Fraction(1, 3)), 1) == Fraction(3, 4)
    with pytest.raises(PoleError):
        specialize(Specialization.p_of_qt(2, 1), 1)
    with pytest.raises(ValueError):
        specialize(Specialization.free(3), 1)
    with pytest.raises(ValueError):
        specialize(Specialization.p_infinity(), 0)
    assert Specialization.finite([1, 2]).scaled(3).params == (3, 6)
    with pytest.raises(ValueError):
        Specialization.p_infinity().scaled(2)


def test_q_function_one_variable():
    # eigenvalue convention p_m = 2 x^m feeds exp(sum 2 p_m z^m / m) = ((1 + x z)/(1 - x z))^2
    x0 = Fraction(2, 3)
    p = Specialization.finite([x0], "projective")
    z = sympy.Symbol("z")
    x = sympy.Rational(2, 3)
    gen = sympy.series(((1 + x * z) / (1 - x * z)) ** 2, z, 0, 6).removeO()
    for n in range(1, 6):
        assert q_function(n, p) == Fraction(str(gen.coeff(z, n)))
    assert q_skew_entry(0, 0, p) == 0
    with pytest.raises(ValueError):
        q_skew_entry(-1, 0, p)


@given(strict_st, st.lists(st.fractions(min_value=1, max_value=4, max_denominator=3),
                           min_size=1, max_size=3, unique=True))
def test_projective_schur_matches_symmetrization(alpha, xs):
    # textbook Q_alpha(x) is the free series at p_m = sum x^m
    free = projective_schur(alpha, Specialization.free(sum(alpha)))
    ps = {m: sum((x ** m for x in xs), Fraction(0)) for m in range(1, sum(alpha) + 1)}
    assert free.evaluate(ps) == _q_by_symmetrization(alpha, xs)


@given(strict_st, st.lists(small, min_size=1, max_size=3))
def test_projective_convention_doubles_odd_power_sums(alpha, xs):
    free = projective_schur(alpha, Specialization.free(sum(alpha)))
    ps = {m: (2 * sum((x ** m for x in xs), Fraction(0)) if m % 2 else 0) for m in range(1, sum(alpha) + 1)}
    assert free.evaluate(ps) == projective_schur(alpha, Specialization.finite(xs, "projective"))


@given(st.integers(0, 5), st.integers(0, 5))
def test_q_skew_entry_antisymmetric(i, j):
    free = Specialization.free(10)
    assert q_skew_entry(i, j, free) + q_skew_entry(j, i, free) == PowerSumSeries({}, 10)


def test_projective_schur_free_examples():
    free = Specialization.free(4)
    assert projective_schur((1,), free) == P({(1,): 2}, 4)
    assert projective_schur((2,), free) == P({(1, 1): 2}, 4)
    # Q_(2,1) = q_2 q_1 - 2 q_3 with q_1 = 2p1, q_2 = 2p1^2, q_3 = 4p1^3/3 + 2p3/3
    assert projective_schur((2, 1), free) == P({(1, 1, 1): Fraction(4, 3), (3,): Fraction(-4, 3)}, 4)


@given(strict_st)
def test_projective_schur_has_only_odd_power_sums(alpha):
    Q = projective_schur(alpha, Specialization.free(9))
    assert all(k % 2 for mono in Q.coeffs for k in mono)


def test_power_sum_series_algebra():
    a = PowerSumSeries.generator(1, 4)
    b = PowerSumSeries.generator(2, 4)
    s = a * a + b
    assert s.coefficient((1, 1)) == 1 and s.coefficient((2,)) == 1
    assert (s * s).max_degree() == 4
    assert (s * s * s).max_degree() == 0  # everything above the bound is dropped
    assert s.derivative(1) == 2 * a
    assert s.homogeneous(2) == s and s.homogeneous(1) == P({}, 4)
    assert s.evaluate({1: 3, 2: 5}) == 14
    assert (s - s) == P({}, 4) and (1 - a) == P({(): 1, (1,): -1}, 4)
    assert s.truncate(1) == P({}, 1)
    assert (s / 2).coefficient((2,)) == Fraction(1, 2)
    with pytest.raises(ValueError):
        PowerSumSeries({}, -1)


def test_series_needs_bound():
    with pytest.raises(ValueError):
        schur((1,), Specialization("free"))
