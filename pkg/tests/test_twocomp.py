from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from hypothesis import given, strategies as st

from taumodels.combinatorics import IntegerLatticeFunction, enumerate_partitions, enumerate_strict_partitions
from taumodels.symfunc import Specialization
from taumodels.tau import HypergeometricKernel, tau_pp
from taumodels.twocomp import (
    CoefficientMatrix,
    DivergenceError,
    MomentRecipe,
    WindowError,
    compose,
    minor_cauchy_binet,
    minor_partition,
    minor_strict,
    moment_matrix,
    pairing_coefficients,
    scalar_product_qq,
    scalar_product_ss,
    solvable_chain,
    solvable_model_2bkp,
    solvable_model_2kp,
    tau_2bkp,
    tau_2kp,
)

R_ONE = IntegerLatticeFunction.constant(1)
R_EXP = IntegerLatticeFunction([1], [0, 1])            # r(m) = 1/m, pairing exp(z)
R_LIN = IntegerLatticeFunction([2, -1], [0, 1])        # r(1) = 1, r(2) = 0, pairing 1 + z
fracs = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def table_st(n):
    return st.lists(st.lists(fracs, min_size=n, max_size=n), min_size=n, max_size=n)


def _gauss_oracle(i, j, w1, w2, kappa, nodes=80):
    # normalized E[x^i y^j] under exp(-w1 x^2 - w2 y^2 + kappa x y) by tensor Gauss-Hermite
    t, wt = np.polynomial.hermite.hermgauss(nodes)
    x = t[:, None] / np.sqrt(w1)
    y = t[None, :] / np.sqrt(w2)
    W = wt[:, None] * wt[None, :] * np.exp(kappa * x * y)
    return float((W * x ** i * y ** j).sum() / W.sum())


def test_contour_moments():
    unit = MomentRecipe.build(R_ONE)
    assert [moment_matrix(unit, i, j) for i in range(3) for j in range(3)] == [1, 0, 0, 0, 1, 0, 0, 0, 1]
    expo = MomentRecipe.build(R_EXP)
    assert all(moment_matrix(expo, i, i) == Fraction(1, factorial(i)) for i in range(6))
    shifted = MomentRecipe.build(R_ONE, v={-2: 1})
    assert moment_matrix(shifted, 1, 3) == 1 and moment_matrix(shifted, 3, 1) == 0
    sq = MomentRecipe.build(R_ONE, squared_arguments=True)
    assert moment_matrix(sq, 2, 2) == 1 and moment_matrix(sq, 1, 1) == 0
    with pytest.raises(IndexError):
        moment_matrix(unit, -1, 0)


def test_pairing_coefficients():
    assert pairing_coefficients(R_EXP, 4) == [1, 1, Fraction(1, 2), Fraction(1, 6), Fraction(1, 24)]
    assert pairing_coefficients(R_LIN, 3) == [1, 1, 0, 0]


@pytest.mark.parametrize("i,j", [(0, 0), (1, 1), (2, 0), (2, 2), (3, 1), (4, 2), (1, 0)])
def test_hermitian_exponential_pairing_matches_quadrature(i, j):
    w1, w2, kappa = Fraction(1), Fraction(3, 2), Fraction(1, 2)
    rec = MomentRecipe.build(IntegerLatticeFunction([kappa], [0, 1]), "hermitian", w=(w1, w2))
    exact = moment_matrix(rec, i, j)
    assert float(exact) == pytest.approx(_gauss_oracle(i, j, 1.0, 1.5, 0.5), abs=1e-12)


def test_hermitian_polynomial_pairing():
    rec = MomentRecipe.build(R_LIN, "hermitian", w=(Fraction(1, 2), Fraction(1, 2)))
    # unit-variance Gaussians: g_ij = E[x^i] E[y^j] + E[x^(i+1)] E[y^(j+1)]
    assert moment_matrix(rec, 0, 0) == 1
    assert moment_matrix(rec, 1, 1) == 1
    assert moment_matrix(rec, 2, 0) == 1
    assert moment_matrix(rec, 2, 2) == 1
    assert moment_matrix(rec, 3, 1) == 3


def test_hermitian_errors():
    poly = MomentRecipe.build(R_LIN, "hermitian")
    with pytest.raises(DivergenceError):
        moment_matrix(poly, 0, 0)
    with pytest.raises(DivergenceError):
        moment_matrix(MomentRecipe.build(IntegerLatticeFunction.from_shifts([Fraction(1, 2)], [0]), "hermitian",
                                         w=(1, 1)), 0, 0)
    degenerate = MomentRecipe.build(IntegerLatticeFunction([2], [0, 1]), "hermitian", w=(1, 1))
    with pytest.raises(DivergenceError):
        moment_matrix(degenerate, 0, 0)
    with pytest.raises(NotImplementedError):
        moment_matrix(MomentRecipe.build(R_EXP, "hermitian", squared_arguments=True, w=(1, 1)), 0, 0)
    with pytest.raises(NotImplementedError):
        moment_matrix(MomentRecipe.build(R_EXP, "mixed", squared_arguments=True), 0, 0)
    with pytest.raises(ValueError):
        MomentRecipe.build(R_EXP, "circle")
    with pytest.raises(ValueError):
        MomentRecipe.build(R_EXP, k_factor="sometimes")


def test_mixed_moments_parity():
    rec = MomentRecipe.build(R_EXP, "mixed")
    for i in range(4):
        for j in range(4):
            g = moment_matrix(rec, i, j)
            if (i + j) % 2:
                assert g == 0
            else:
                # x^i from the contour with 1/i!, then E[y^(i+j)]
                dfact = np.prod(np.arange(i + j - 1, 0, -2), dtype=object) if i + j else 1
                assert g == Fraction(int(dfact), factorial(i))


def test_recipe_json_and_effective():
    rec = MomentRecipe.build(R_EXP, "hermitian", v={1: Fraction(1, 2)}, w=(Fraction(1), Fraction(2)))
    assert MomentRecipe.from_json(rec.to_json()) == rec
    sq = MomentRecipe.build(R_ONE, squared_arguments=True)
    assert sq.effective(3).shift == -3 and sq.effective(3).N == 3
    assert rec.effective(2).shift == 0


def test_matrix_kinds_and_json():
    I = CoefficientMatrix.identity()
    assert I[3, 3] == 1 and I[3, 2] == 0
    with pytest.raises(IndexError):
        I[-1, 0]
    T = CoefficientMatrix.table([[1, 2], [3, 4]])
    assert T[5, 5] == 0
    W = CoefficientMatrix.table([[1, 2], [3, 4]], strict_window=True)
    with pytest.raises(WindowError):
        W[2, 0]
    with pytest.raises(ValueError):
        CoefficientMatrix.table([[1, 2]])
    D = CoefficientMatrix.diagonal([1, 2, 3])
    assert D[2, 2] == 3 and D[3, 3] == 0
    assert CoefficientMatrix.diagonal(lambda i: i + 1)[4, 4] == 5
    for M in (I, T, W, D, CoefficientMatrix.moments(MomentRecipe.build(R_EXP))):
        size = 2 if M is W else 3
        assert CoefficientMatrix.from_json(M.to_json()).window_rows(size) == M.window_rows(size)
    with pytest.raises(ValueError):
        CoefficientMatrix.from_rule(lambda i, j: 0).to_json()
    with pytest.raises(ValueError):
        CoefficientMatrix.from_json({"kind": "sparse"})


@given(table_st(3))
def test_table_json_roundtrip(rows):
    M = CoefficientMatrix.table(rows)
    assert CoefficientMatrix.from_json(M.to_json()).window_rows(4) == M.window_rows(4)


def test_minor_partition_of_identity_is_kronecker():
    I = CoefficientMatrix.identity()
    parts = enumerate_partitions(4, 3)
    for lam in parts:
        for mu in parts:
            assert minor_partition(I, lam, mu, 3) == int(lam == mu)
    with pytest.raises(ValueError):
        minor_partition(I, (1, 1, 1), (), 2)


@given(table_st(4), table_st(4))
def test_cauchy_binet_matches_composed_minor(a, b):
    A, B = CoefficientMatrix.table(a), CoefficientMatrix.table(b)
    AB = compose(A, CoefficientMatrix.identity(), B, 4)
    for alpha, beta in [((1, 0), (2, 1)), ((3, 1), (3, 2)), ((2,), (0,)), ((3, 2, 0), (2, 1, 0))]:
        assert minor_cauchy_binet(A, B, alpha, beta, 4) == minor_strict(AB, alpha, beta)


@given(table_st(3), table_st(3), table_st(3))
def test_compose_matches_numpy_product(a, g, b):
    C = compose(CoefficientMatrix.table(a), CoefficientMatrix.table(g), CoefficientMatrix.table(b), 3)
    ref = np.array(a, dtype=object).dot(np.array(g, dtype=object)).dot(np.array(b, dtype=object))
    assert C.window_rows(3) == ref.tolist()
    with pytest.raises(WindowError):
        C[3, 0]


def test_minor_errors():
    I = CoefficientMatrix.identity()
    with pytest.raises(ValueError):
        minor_strict(I, (1,), (2, 1))
    with pytest.raises(ValueError):
        minor_cauchy_binet(I, I, (1,), (2, 1), 4)
    with pytest.raises(WindowError):
        minor_cauchy_binet(I, I, (5,), (1,), 4)


def test_tau_2kp_identity_is_cauchy_series():
    xs = [Fraction(1, 2), Fraction(-1, 3)]
    ys = [Fraction(2, 5), Fraction(1, 7)]
    p1, p2 = Specialization.finite(xs), Specialization.finite(ys)
    s = tau_2kp(CoefficientMatrix.identity(), p1, p2, 2, (4, 2))
    ref = tau_pp(HypergeometricKernel(R_ONE), p1, p2, (4, 2))
    assert s.graded(4) == ref.graded(4)


def test_tau_2bkp_identity_is_diagonal():
    s = tau_2bkp(CoefficientMatrix.identity(), None, None, (5, 3))
    for (alpha, beta), c in s.coeffs.items():
        assert alpha == beta and c == Fraction(1, 2 ** len(alpha))
    assert len(s.coeffs) == len(enumerate_strict_partitions(5, 3)) == 10


def test_scalar_products():
    unit = MomentRecipe.build(R_ONE)
    for lam in enumerate_partitions(3, 2):
        for mu in enumerate_partitions(3, 2):
            assert scalar_product_ss(lam, mu, unit, 2) == int(lam == mu)
    expo = MomentRecipe.build(R_EXP)
    # det[1/(lam_i - i + N)!] times K_N with K_N the inverse of prod r(i) over the staircase
    assert scalar_product_ss((1,), (1,), expo, 1, "overall") == 1
    with pytest.raises(ValueError):
        scalar_product_ss((1,), (1,), expo, 1, "sometimes")
    sq = MomentRecipe.build(R_ONE, squared_arguments=True)
    assert scalar_product_qq((2,), (2,), sq) == 1
    assert scalar_product_qq((2, 1), (2, 1), sq) == 0
    with pytest.raises(ValueError):
        scalar_product_qq((3, 2, 1), (1,), sq)


def test_chain_with_one_recipe_equals_model():
    A1 = CoefficientMatrix.table([[1, Fraction(1, 2)], [0, 1]])
    A2 = CoefficientMatrix.diagonal([1, Fraction(1, 3), Fraction(1, 5)])
    rec = MomentRecipe.build(R_EXP)
    p1 = Specialization.explicit([Fraction(1, 2), Fraction(1, 3)])
    p2 = Specialization.explicit([Fraction(-1, 4), Fraction(1, 5)])
    a = solvable_model_2kp(A1, A2, rec, p1, p2, 2, (3, 2))
    b = solvable_chain([A1, A2], [rec], p1, p2, 2, (3, 2))
    assert a.coeffs == b.coeffs
    with pytest.raises(ValueError):
        solvable_chain([A1], [rec], p1, p2, 2, (3, 2))


def test_bkp_model_needs_squared_recipe():
    I = CoefficientMatrix.identity()
    with pytest.raises(ValueError):
        solvable_model_2bkp(I, I, MomentRecipe.build(R_ONE), None, None, 1, (3, 2))
    s = solvable_model_2bkp(I, I, MomentRecipe.build(R_ONE, squared_arguments=True), None, None, 1, (4, 2))
    assert s.meta["moment_method"] == "contour-exact"


def test_concurrent_lazy_evaluation_is_consistent():
    g = CoefficientMatrix.moments(MomentRecipe.build(R_EXP, "mixed"))
    keys = [(i, j) for i in range(12) for j in range(12)] * 4
    with ThreadPoolExecutor(8) as pool:
        vals = list(pool.map(lambda ij: g[ij], keys))
    fresh = CoefficientMatrix.moments(MomentRecipe.build(R_EXP, "mixed"))
    assert vals == [fresh[k] for k in keys]
