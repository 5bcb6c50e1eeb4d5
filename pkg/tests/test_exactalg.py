from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from taumodels.exactalg import (
    _det_bareiss,
    _det_ring,
    _pf_elim,
    _pf_ring,
    ComplexRational,
    SingularityError,
    determinant,
    format_scalar,
    parse_scalar,
    pfaffian,
    vandermonde,
    vandermonde_star,
)
from taumodels.symfunc import PowerSumSeries

fracs = st.fractions(min_value=-9, max_value=9, max_denominator=6)
complexes = st.builds(ComplexRational, fracs, fracs)


def square(n, elems=fracs):
    return st.lists(st.lists(elems, min_size=n, max_size=n), min_size=n, max_size=n)


def skew(n):
    k = n * (n - 1) // 2
    return st.lists(fracs, min_size=k, max_size=k).map(lambda v: _skew_from(n, v))


def _skew_from(n, vals):
    M = [[Fraction(0)] * n for _ in range(n)]
    it = iter(vals)
    for i in range(n):
        for j in range(i + 1, n):
            M[i][j] = next(it)
            M[j][i] = -M[i][j]
    return M


def _sympy_det(M):
    return Fraction(str(sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in M]).det()))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7])
@given(data=st.data())
def test_determinant_matches_sympy(n, data):
    M = data.draw(square(n))
    assert determinant(M) == _sympy_det(M)


@given(square(6))
def test_determinant_routes_agree(M):
    # exact Bareiss against the division-free ring route
    assert _det_bareiss(M) == _det_ring(M)


@given(square(5))
def test_determinant_float_route(M):
    fl = [[float(x) for x in r] for r in M]
    assert determinant(fl) == pytest.approx(float(determinant(M)), abs=1e-6 * (1 + abs(float(determinant(M)))))


def test_determinant_edge_cases():
    assert determinant([]) == 1
    assert determinant([[0, 1, 2, 3, 4]] + [[i, 0, 0, 0, 0] for i in range(1, 5)]) == 0
    with pytest.raises(ValueError):
        determinant([[1, 2]])


@pytest.mark.parametrize("n", [2, 4, 6, 8])
@given(data=st.data())
def test_pfaffian_squared_is_determinant(n, data):
    M = data.draw(skew(n))
    assert pfaffian(M) ** 2 == determinant(M)


@given(skew(6))
def test_pfaffian_routes_agree(M):
    assert _pf_elim(M) == _pf_ring(M)


def test_pfaffian_examples():
    assert pfaffian([[0, 5], [-5, 0]]) == 5
    a, b, c, d, e, f = range(1, 7)
    M = [[0, a, b, c], [-a, 0, d, e], [-b, -d, 0, f], [-c, -e, -f, 0]]
    assert pfaffian(M) == a * f - b * e + c * d
    assert pfaffian([]) == 1
    with pytest.raises(ValueError):
        pfaffian([[0, 1, 0], [-1, 0, 0], [0, 0, 0]])
    with pytest.raises(ValueError):
        pfaffian([[1, 1], [-1, 0]])


def test_ring_entries_use_division_free_route():
    t = PowerSumSeries.generator(1, 4)
    one = PowerSumSeries.constant(1, 4)
    M = [[one, t], [t, one]]
    assert determinant(M) == one - t * t
    S = [[0, t], [-t, 0]]
    assert pfaffian(S) == t


@given(complexes, complexes, complexes)
def test_complex_rational_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert a - a == 0
    if b != 0:
        assert (a / b) * b == a
    assert complex(a * b) == pytest.approx(complex(a) * complex(b))
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()


def test_complex_rational_powers_and_errors():
    i = ComplexRational(0, 1)
    assert i ** 2 == -1 and i ** -1 == -i and i ** 0 == 1
    with pytest.raises(ZeroDivisionError):
        i / 0
    assert hash(ComplexRational(3, 0)) == hash(Fraction(3))
    assert 1 - i == ComplexRational(1, -1)
    assert 2 / i == ComplexRational(0, -2)


@given(st.one_of(fracs, complexes))
def test_scalar_format_roundtrip(c):
    assert parse_scalar(format_scalar(c)) == c


def test_scalar_format_examples():
    assert format_scalar(Fraction(-3, 4)) == "-3/4"
    assert format_scalar(ComplexRational(Fraction(1, 2), -2)) == "1/2-2i"
    assert parse_scalar("3i") == ComplexRational(0, 3)
    assert parse_scalar("-1/3+1/5i") == ComplexRational(Fraction(-1, 3), Fraction(1, 5))


@given(st.lists(fracs, min_size=1, max_size=6))
def test_vandermonde_is_determinant(xs):
    n = len(xs)
    # det[x_i^{n-j}] = prod_{i<j} (x_i - x_j)
    M = [[x ** (n - 1 - j) for j in range(n)] for x in xs]
    assert vandermonde(xs) == determinant(M)


@given(st.lists(st.fractions(min_value=1, max_value=9, max_denominator=5), min_size=2, max_size=4, unique=True))
def test_vandermonde_star_is_schur_pfaffian(xs):
    # Schur's Pfaffian: Pf[(x_i - x_j)/(x_i + x_j)] for even size
    if len(xs) % 2:
        xs = xs[:-1]
    M = [[(a - b) / (a + b) for b in xs] for a in xs]
    assert vandermonde_star(xs) == pfaffian(M)


def test_vandermonde_star_singular():
    with pytest.raises(SingularityError):
        vandermonde_star([1, -1])
