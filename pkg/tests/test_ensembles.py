import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from taumodels import ensembles as ens
from taumodels.combinatorics import IntegerLatticeFunction
from taumodels.symfunc import Specialization
from taumodels.twocomp import DivergenceError, MomentRecipe

R_RAT = IntegerLatticeFunction.from_shifts([Fraction(1, 2)], [Fraction(7, 3)])


def _sample_mean(f, kind, N, size=40_000, seed=7, w=1.0):
    M = ens.EnsembleMeasure(kind, N, w).sample(ens.rng_stream(seed, 0), size)
    vals = f(M)
    return vals.mean(), vals.std() / math.sqrt(size)


# --- quadrature ---------------------------------------------------------------

@pytest.mark.parametrize("N", [1, 2, 3])
def test_weyl_quadrature_haar_moments(N):
    one = ens.weyl_quadrature_unitary(lambda x: np.ones(len(x)), N, 12)
    assert one.value == pytest.approx(1, abs=1e-12)
    tr2 = ens.weyl_quadrature_unitary(lambda x: np.abs(x.sum(1)) ** 2, N, 12)
    assert tr2.value == pytest.approx(1, abs=1e-12)
    # E|tr U|^4 is 1 for N = 1 and 2 for N >= 2
    tr4 = ens.weyl_quadrature_unitary(lambda x: np.abs(x.sum(1)) ** 4, N, 12)
    assert tr4.value == pytest.approx(1 if N == 1 else 2, abs=1e-12)
    tr1 = ens.weyl_quadrature_unitary(lambda x: x.sum(1), N, 12)
    assert abs(tr1.value) < 1e-12


@pytest.mark.parametrize("N,w", [(1, 1.0), (2, 1.0), (2, 0.5), (3, 2.0)])
def test_gaussian_quadrature_second_moment(N, w):
    est = ens.gaussian_quadrature_hermitian(lambda x: (x ** 2).sum(1), N, w, 20)
    assert est.value.real == pytest.approx(N * N / (2 * w), rel=1e-10)
    assert ens.gaussian_quadrature_hermitian(lambda x: np.ones(len(x)), N, w, 8).value == pytest.approx(1)


@pytest.mark.parametrize("k", range(5))
def test_gaussian_quadrature_odd_double_factorial(k):
    # one eigenvalue with exp(-x^2/2): E[x^{2k}] = (2k-1)!!
    est = ens.gaussian_quadrature_hermitian(lambda x: x[:, 0] ** (2 * k), 1, 0.5, 30)
    assert est.value.real == pytest.approx(math.prod(range(2 * k - 1, 0, -2)), rel=1e-10)


def test_pair_quadrature():
    est = ens.hermitian_pair_quadrature(lambda x, y: x ** 2 * y ** 2, (1.0, 2.0), 10)
    assert est.value.real == pytest.approx(1 / (4 * 1.0 * 2.0))
    with pytest.raises(DivergenceError):
        ens.hermitian_pair_quadrature(lambda x, y: x, (0.0, 1.0), 10)


def test_cost_and_divergence_guards():
    with pytest.raises(ens.CostError):
        ens.weyl_quadrature_unitary(lambda x: np.ones(len(x)), 4, 4)
    with pytest.raises(ens.CostError):
        ens.weyl_quadrature_unitary(lambda x: np.ones(len(x)), 3, 200)
    with pytest.raises(DivergenceError):
        ens.gaussian_quadrature_hermitian(lambda x: x, 1, 0.0, 8)
    with pytest.raises(DivergenceError):
        ens.gaussian_quadrature_hermitian(lambda x: x, 1, -1.0, 8)
    with pytest.raises(DivergenceError):
        ens.EnsembleMeasure("hermitian_gaussian", 2, 0.0).sample(ens.rng_stream(0, 0), 1)
    with pytest.raises(ens.CostError):
        ens.zz1_lhs_quadrature([0.1], [0.1], 4)
    with pytest.raises(ens.CostError):
        ens.orthogonal_group_average([0.1, 0.2], [0.3, 0.4], 4)
    with pytest.raises(ValueError):
        ens.EnsembleMeasure("circular", 2)
    with pytest.raises(ValueError):
        ens.EnsembleMeasure("unitary_haar", 0)


# --- samplers -----------------------------------------------------------------

@pytest.mark.parametrize("N", [1, 2, 3])
def test_haar_unitary_moments(N):
    m, e = _sample_mean(lambda U: U[:, 0, 0], "unitary_haar", N)
    assert abs(m) < 4 * e + 1e-3
    m, e = _sample_mean(lambda U: np.abs(U[:, 0, 0]) ** 2, "unitary_haar", N)
    assert abs(m - 1 / N) < 4 * e
    m, e = _sample_mean(lambda U: np.abs(np.trace(U, axis1=1, axis2=2)) ** 2, "unitary_haar", N)
    assert abs(m - 1) < 4 * e
    U = ens.haar_unitary_sample(N, ens.rng_stream(1, 0), 5)
    assert np.allclose(U @ np.conj(np.swapaxes(U, 1, 2)), np.eye(N))


def test_haar_orthogonal_covers_both_components():
    O = ens.haar_orthogonal_sample(3, ens.rng_stream(2, 0), 2000)
    assert np.allclose(O @ np.swapaxes(O, 1, 2), np.eye(3))
    d = np.linalg.det(O)
    assert np.allclose(np.abs(d), 1)
    assert 0.4 < (d > 0).mean() < 0.6


def test_gaussian_samplers():
    m, e = _sample_mean(lambda Z: np.abs(Z[:, 0, 1]) ** 2, "complex_ginibre", 3)
    assert abs(m - 1 / 3) < 4 * e
    for w in (1.0, 0.5):
        m, e = _sample_mean(lambda H: np.trace(H @ H, axis1=1, axis2=2).real, "hermitian_gaussian", 2, w=w)
        assert abs(m - 4 / (2 * w)) < 4 * e
    H = ens.EnsembleMeasure("hermitian_gaussian", 3).sample(ens.rng_stream(0, 0), 4)
    assert np.allclose(H, np.conj(np.swapaxes(H, 1, 2)))
    X = ens.EnsembleMeasure("skew_symmetric_gaussian", 3).sample(ens.rng_stream(0, 0), 40_000)
    assert np.allclose(X, -np.swapaxes(X, 1, 2))
    assert X[:, 0, 1].var() == pytest.approx(0.5, rel=0.03)


# --- Monte Carlo driver ---------------------------------------------------------

def test_mc_constant_observable_is_exact():
    est = ens.mc_expectation(lambda U: np.ones(len(U)), [ens.EnsembleMeasure("unitary_haar", 2)], 1000, 3)
    assert est.value == 1 and est.error == 0
    assert est.meta["rng"] == ens.RNG_ALGORITHM and est.samples_or_nodes == 1000


def test_mc_is_deterministic_per_seed():
    def obs(U):
        return np.trace(U, axis1=1, axis2=2).real ** 2

    m = ens.EnsembleMeasure("unitary_haar", 2)
    a = ens.mc_expectation(obs, m, 20_001, 11, block=777)
    b = ens.mc_expectation(obs, m, 20_001, 11, block=777)
    c = ens.mc_expectation(obs, m, 20_001, 12, block=777)
    assert a.value == b.value and a.error == b.error
    assert a.value != c.value
    # E[(Re tr U)^2] = 1/2
    assert a.within(0.5, 4)


def test_mc_flags_variance_overflow():
    with pytest.warns(RuntimeWarning):
        est = ens.mc_expectation(lambda U: np.full(len(U), np.inf), [ens.EnsembleMeasure("unitary_haar", 1)], 10, 0)
    assert "variance-overflow" in est.flags
    with pytest.raises(ValueError):
        ens.mc_expectation(lambda U: U, [ens.EnsembleMeasure("unitary_haar", 1)], 0, 0)


def test_integral_estimate():
    est = ens.IntegralEstimate(1 + 0.5j, 0.1, "x", 10, 3)
    assert est.within(1.2 + 0.5j) and not est.within(2)
    js = est.to_json()
    assert js["value"] == ["1.0", "0.5"] and js["seed"] == 3
    with pytest.raises(ValueError):
        ens.IntegralEstimate(0, -1.0, "x", 1)


# --- moments ------------------------------------------------------------------

@given(st.integers(0, 5), st.integers(0, 5), st.sampled_from([{0: 1}, {-1: 2, 1: Fraction(1, 3)}, {2: -1}]))
@settings(max_examples=25)
def test_contour_moment_routes_agree(i, j, v):
    rec = MomentRecipe.build(R_RAT, v=v, u={1: Fraction(1, 2), 0: 1})
    exact = ens.contour_moment(rec, i, j)
    assert ens.contour_moment_numeric(rec, i, j) == pytest.approx(complex(exact), abs=1e-12)


def test_contour_moment_needs_unitary():
    with pytest.raises(ValueError):
        ens.contour_moment(MomentRecipe.build(R_RAT, "mixed"), 0, 0)


# --- skew model -----------------------------------------------------------------

def test_skew_series_forms():
    s = ens.skew_model_series(None, None, 2, (3, 3), "printed")
    # lam = (1), N = 2: h_1 = 2, product over i <= 1 gives 4!
    assert s.coefficient((1,), (1,)) == 24
    assert s.coefficient((1, 1, 1), (1, 1, 1)) == 0
    with pytest.raises(ValueError):
        ens.skew_model_series(None, None, 2, (3, 3), "bogus")


@pytest.mark.parametrize("N", [1, 2, 3])
def test_full_product_is_corrected_content_up_to_constant(N):
    full = ens.skew_model_series(None, None, N, (5, N), "printed_full")
    corr = ens.skew_model_series(None, None, N, (5, N), "content_corrected")
    base = full.coefficient((), ())
    assert set(full.coeffs) == set(corr.coeffs)
    assert all(full.coeffs[k] == base * corr.coeffs[k] for k in full.coeffs)


# --- orthogonal kernel ------------------------------------------------------------

def test_brezin_hikami_kernel_routes():
    x, y = [0.3, 0.8], [0.5, 1.1]
    for parity in ("even", "odd"):
        f = ens.brezin_hikami_kernel(x, y, parity)
        m = ens.brezin_hikami_kernel(x, y, parity, precision=40)
        assert float(m) == pytest.approx(f, rel=1e-12)
        assert ens.brezin_hikami_kernel(y, x, parity) == pytest.approx(f, rel=1e-12)
    assert ens.brezin_hikami_kernel([0.5], [0.7], "even") == pytest.approx(2 * math.cosh(0.7))
    with pytest.raises(ValueError):
        ens.brezin_hikami_kernel([0.5], [0.7], "neither")
    with pytest.raises(ValueError):
        ens.brezin_hikami_kernel([0.5, -0.5], [0.7, 0.1], "even")
    with pytest.raises(ValueError):
        ens.brezin_hikami_kernel([0.5], [0.7, 0.1], "even")


def test_orthogonal_average():
    # O(2): mean of exp(-2xy) and exp(2xy)
    assert ens.orthogonal_group_average([0.4], [0.5], 2) == pytest.approx(math.cosh(0.4))
    assert ens.orthogonal_group_average([0.0], [0.9], 3) == pytest.approx(1.0)
    a = ens.orthogonal_group_average([0.7], [0.6], 3, 16)
    b = ens.orthogonal_group_average([0.7], [0.6], 3, 28)
    assert a == pytest.approx(b, rel=1e-12)


def test_fitted_constants_are_stable():
    fit = ens.fit_brezin_hikami_constants()
    assert fit["c1"] == pytest.approx(0.5, rel=1e-12)
    assert fit["c2"] == pytest.approx(0.25, rel=1e-12)
    assert fit["spread1"] < 1e-12 and fit["spread2"] < 1e-12
    c1, c2 = ens.printed_brezin_hikami_constants()
    assert c1 == pytest.approx(1 / (2 * math.sqrt(math.pi)))
    assert c2 == pytest.approx(1 / math.sqrt(math.pi))


# --- unitary pair integrals -----------------------------------------------------

@pytest.mark.parametrize("N", [1, 2])
def test_pair_integrals_with_zero_couplings_are_one(N):
    # aliasing on an M-node grid decays factorially in M
    for est in (ens.zz1_lhs_quadrature([0.0], [0.0], N, 16), ens.zz2_lhs_quadrature([0.0], [0.0], N, 17)):
        assert est.value == pytest.approx(1, abs=1e-9)
        assert est.error < 1e-8


def test_pair_quadrature_numba_and_numpy_agree():
    p1, p2 = [0.3, 0.0, 0.2], [0.25, 0.1]
    a = ens.zz1_lhs_quadrature(p1, p2, 2, 10, use_numba=True).value
    b = ens.zz1_lhs_quadrature(p1, p2, 2, 10, use_numba=False).value
    assert a == pytest.approx(b, abs=1e-12)
    a = ens.zz2_lhs_quadrature(p1, p2, 2, 11, use_numba=True).value
    b = ens.zz2_lhs_quadrature(p1, p2, 2, 11, use_numba=False).value
    assert a == pytest.approx(b, abs=1e-12)


def test_zz1_quadrature_matches_mc_n1():
    p1, p2 = [0.3, 0.1], [0.2, -0.1]
    q = ens.zz1_lhs_quadrature(p1, p2, 1, 20)
    mc = ens.zz1_lhs_mc(p1, p2, 1, 200_000, 5)
    assert mc.within(q.value, 4)


def test_zz2_guards_and_forms():
    with pytest.raises(ValueError):
        ens.zz2_lhs_quadrature([0.1], [0.1], 1, 10)
    p = Specialization.explicit([Fraction(1, 4), 0, Fraction(1, 4)])
    assert ens.zz2_series(p, p, 0, "eigen") == 1
    assert ens.zz2_series(p, p, 0, "printed") == 1
    with pytest.raises(ValueError):
        ens.zz2_series(p, p, 2, "other")
    with pytest.raises(ValueError):
        ens._ps(Specialization.p_infinity())


# --- single-edge Ginibre --------------------------------------------------------

def test_det_moment_ginibre():
    assert ens.det_moment_ginibre(3, 0) == 1
    assert ens.det_moment_ginibre(1, 1) == pytest.approx(1)
    # N = 2, alpha = 1: Gamma(2) Gamma(3) / (Gamma(1) Gamma(2)) / 4 = 1/2
    assert ens.det_moment_ginibre(2, 1) == pytest.approx(0.5)
    m, e = _sample_mean(lambda Z: np.abs(np.linalg.det(Z)) ** 2, "complex_ginibre", 2, size=100_000)
    assert abs(m - 0.5) < 4 * e


def test_e1_series_converges_to_e():
    I = [[1, 0], [0, 1]]
    assert float(ens.e1_series(I, I, 2, 0, 14)) == pytest.approx(math.e, rel=1e-9)


def test_e1_mc_matches_series():
    C1 = [[Fraction(1, 2), 0], [0, Fraction(1, 3)]]
    Cm1 = [[Fraction(1, 2), 0], [0, Fraction(-1, 4)]]
    series = float(ens.e1_series(C1, Cm1, 2, 1, 10))
    mc = ens.e1_lhs_mc(C1, Cm1, 2, 1.0, 200_000, 9)
    assert mc.within(series, 4)
    other = ens.e1_lhs_mc(C1, Cm1, 2, 1.0, 2_000, 9, use_numba=False)
    again = ens.e1_lhs_mc(C1, Cm1, 2, 1.0, 2_000, 9, use_numba=True)
    assert other.value == pytest.approx(again.value, rel=1e-12)
