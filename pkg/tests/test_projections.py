import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bandlim.concentration import Signal, epsilon_band, get_signal, hat, indicator, sinc
from bandlim.errors import DomainError, RegimeError
from bandlim.orthopoly import Norm, chebyshev_eval, hermite_functions, legendre_eval
from bandlim.projections import (
    Basis,
    Expansion,
    bound_chebyshev_coeff,
    bound_chebyshev_coeff_rigorous,
    bound_chebyshev_tail,
    bound_hermite,
    bound_hermite_practical,
    bound_legendre_almost,
    bound_legendre_coeff,
    bound_legendre_tail,
    bound_scaled,
    chebyshev_moments,
    coefficient_tail,
    error_norm,
    eval_expansion,
    expand,
    legendre_moments,
    read_expansion_csv,
    write_expansion_csv,
)

E = math.e


def poly_signal(coeffs):
    p = np.polynomial.Polynomial(coeffs)
    return Signal.from_function("poly", lambda x: np.where(np.abs(x) <= 1, p(x), 0.0), (-1, 1))


def test_expand_legendre_p3():
    P3 = Signal.from_function("P3", lambda x: np.where(np.abs(x) <= 1, (5 * x ** 3 - 3 * x) / 2, 0.0), (-1, 1))
    e = expand(P3, Basis.LEGENDRE, 5)
    ref = np.zeros(6)
    ref[3] = math.sqrt(2 / 7)
    assert np.allclose(e.coeffs, ref, atol=1e-14)


def test_expand_hermite_h2():
    h2 = Signal.from_function("h2", lambda x: hermite_functions(2, x)[2], (-15, 15))
    e = expand(h2, "hermite", 4)
    assert np.allclose(e.coeffs, [0, 0, 1, 0, 0], atol=1e-8)


@pytest.mark.parametrize("basis", ["legendre", "chebyshev"])
def test_polynomial_round_trip(basis):
    f = poly_signal([0.3, -1.0, 0.0, 2.0, 0.5, 0.0, -0.7])
    e = expand(f, basis, 8)
    x = np.linspace(-1, 1, 101)
    assert np.allclose(e(x), f(x), atol=1e-10)
    assert error_norm(f, e) < 1e-8


def test_eval_expansion_basics():
    x = np.linspace(-1, 1, 9)
    assert np.all(eval_expansion(Expansion(Basis.LEGENDRE, 4, np.zeros(5)), x) == 0)
    unit = np.zeros(6)
    unit[5] = 1.0
    assert np.allclose(Expansion(Basis.LEGENDRE, 5, unit)(x), legendre_eval(5, x, Norm.ORTHONORMAL))
    assert np.allclose(Expansion(Basis.CHEBYSHEV, 5, unit)(x), chebyshev_eval(5, x, Norm.ORTHONORMAL))
    assert np.allclose(Expansion(Basis.HERMITE, 5, unit)(x), hermite_functions(5, x)[5])
    sc = Expansion(Basis.SCALED_HERMITE, 5, unit, 0.1)
    assert np.allclose(sc(x), hermite_functions(5, x / 0.1)[5] / math.sqrt(0.1))
    with pytest.raises(DomainError):
        eval_expansion(Expansion(Basis.LEGENDRE, 1, [1.0, 0.0]), 1.5)
    with pytest.raises(DomainError):
        Expansion(Basis.LEGENDRE, 2, [1.0])


def test_expansion_read_only_and_truncated():
    e = expand(hat(), "legendre", 10)
    with pytest.raises(ValueError):
        e.coeffs[0] = 1.0
    t = e.truncated(4)
    assert t.order == 4 and np.array_equal(t.coeffs, e.coeffs[:5])


def test_order_zero_sanity():
    f = indicator()
    e = expand(f, "legendre", 0)
    # <f, P~_0> = sqrt(1/2); error^2 = ||f||^2 on (-1,1) minus c_0^2
    assert e.coeffs[0] == pytest.approx(math.sqrt(0.5))
    assert error_norm(f, e) == pytest.approx(math.sqrt(1.0 - 0.5), rel=1e-12)


def test_chebyshev_integrability_violation():
    bad = Signal.from_function("bad", lambda x: np.where(np.abs(x) < 1, (1 - x * x) ** -0.25, 0.0), (-1, 1))
    with pytest.raises(DomainError):
        expand(bad, "chebyshev", 5)
    expand(bad, "legendre", 5)


def test_moment_routes_agree():
    f = sinc(10)
    a = legendre_moments(f, 30, "spectral")
    b = legendre_moments(f, 30, "quadrature")
    assert np.allclose(a, b, atol=1e-15)
    a = chebyshev_moments(f, 30, "spectral")
    b = chebyshev_moments(f, 30, "quadrature")
    assert np.allclose(a, b, atol=1e-14)
    with pytest.raises(DomainError):
        legendre_moments(hat(), 5, "spectral")


@pytest.mark.parametrize("k", [20, 45, 70])
def test_moments_against_mpmath(k):
    f = sinc(10)
    with mp.workdps(60):
        g = lambda x: mp.sin(10 * x) / (10 * x) if x != 0 else mp.mpf(1)
        leg = mp.quad(lambda x: g(x) * mp.legendre(k, x), mp.linspace(-1, 1, 9))
        cheb = mp.quad(lambda t: g(mp.cos(t)) * mp.cos(k * t), mp.linspace(0, mp.pi, 9))
    assert legendre_moments(f, k)[k] == pytest.approx(float(leg), rel=1e-9)
    assert chebyshev_moments(f, k)[k] == pytest.approx(float(cheb), rel=1e-9)


def test_error_norm_gibbs_and_ordering():
    f, g = indicator(), hat()
    errs = [error_norm(f, expand(f, "legendre", N)) for N in (10, 20, 50)]
    assert errs[0] > errs[1] > errs[2]
    e50 = expand(f, "legendre", 50)
    x = np.linspace(-1, 1, 2001)
    r = np.abs(f(x) - e50(x))
    assert abs(abs(x[np.argmax(r)]) - 0.5) < 0.02
    assert error_norm(g, expand(g, "legendre", 50)) < errs[2]
    assert error_norm(f, e50, p="Linf") == pytest.approx(r.max())
    with pytest.raises(DomainError):
        error_norm(f, e50, p="L3")


def test_error_norm_matches_coefficient_tail():
    f = sinc(10)
    e = expand(f, "legendre", 60)
    for N in (12, 20):
        assert error_norm(f, e.truncated(N)) == pytest.approx(coefficient_tail(e, N), rel=1e-6)
    e = expand(f, "chebyshev", 60)
    assert error_norm(f, e.truncated(15), weighted=True) == pytest.approx(coefficient_tail(e, 15), rel=1e-6)


@settings(max_examples=12, deadline=None)
@given(st.sampled_from(["indicator", "hat", "sinc:c=10", "gaussian"]),
       st.sampled_from(["hermite", "legendre", "chebyshev"]), st.integers(1, 30))
def test_best_approximation_monotone(name, basis, n):
    f = get_signal(name)
    e = expand(f, basis, n + 5)
    weighted = basis == "chebyshev"
    interval = (-1.0, 1.0)
    if basis == "hermite":
        interval = (-12.0, 12.0)
    a = error_norm(f, e.truncated(n), interval, weighted=weighted)
    b = error_norm(f, e, interval, weighted=weighted)
    if basis == "hermite" and name in ("hat", "indicator", "gaussian"):
        assert b <= a + 1e-8
    elif basis != "hermite":
        assert b <= a + 1e-10


@pytest.mark.parametrize("name", ["indicator", "hat", "gaussian", "sinc:c=10"])
@pytest.mark.parametrize("basis", ["hermite", "legendre", "chebyshev"])
def test_bessel_inequality(name, basis):
    f = get_signal(name)
    e = expand(f, basis, 40)
    if basis == "hermite":
        total = f.l2_norm ** 2
    elif basis == "legendre":
        total = error_norm(f, Expansion(Basis.LEGENDRE, 0, [0.0])) ** 2
    else:
        total = error_norm(f, Expansion(Basis.CHEBYSHEV, 0, [0.0]), weighted=True) ** 2
    assert float(e.coeffs @ e.coeffs) <= total + 1e-8


def test_coefficient_bound_formulas():
    assert float(bound_chebyshev_coeff(2.0, 0)) == pytest.approx(E / math.sqrt(2))
    assert float(bound_legendre_coeff(5.0, 3)) == pytest.approx(
        2 / math.sqrt(7) * math.sqrt(E / (5 * math.pi)) * (5 * E / 9) ** 4)
    big = bound_legendre_coeff(10.0, 2000)
    assert float(big) == 0.0 and big.underflow and big.log < -745
    for k in range(15, 60):
        assert bound_legendre_coeff(10, k + 1) < bound_legendre_coeff(10, k)
    assert float(bound_legendre_coeff(1e-6, 3)) < 1e-15
    with pytest.raises(DomainError):
        bound_legendre_coeff(0.0, 1)


@pytest.mark.parametrize("c", [10.0, 50.0])
def test_coefficient_dominance(c):
    f = sinc(c)
    k0 = math.ceil(E * c / 2) + 1
    ks = range(k0, 121)
    lk = legendre_moments(f, 120)
    ck = chebyshev_moments(f, 120)
    for k in ks:
        assert abs(lk[k]) <= float(bound_legendre_coeff(c, k)) * f.l2_norm
        assert abs(ck[k]) <= float(bound_chebyshev_coeff_rigorous(c, k)) * f.l2_norm


def test_literal_chebyshev_bound_fails_for_c10():
    # even k: ratio measured/bound crosses 1 at k = 34 and keeps growing
    f = sinc(10)
    ck = chebyshev_moments(f, 120)
    ratio = {k: abs(ck[k]) / (float(bound_chebyshev_coeff(10, k)) * f.l2_norm) for k in range(14, 121, 2)}
    assert all(ratio[k] < 1.0 for k in range(14, 33, 2))
    assert all(ratio[k] > 1.0 for k in range(34, 121, 2))
    assert ratio[120] > ratio[60] > 1.3


def test_legendre_tail_bounds():
    f = sinc(10)
    e = expand(f, "legendre", 80)
    measured = coefficient_tail(e, 20) / f.l2_norm
    assert measured <= float(bound_legendre_tail(10, 20))
    assert error_norm(f, e.truncated(20), p="Linf") / f.l2_norm <= float(bound_legendre_tail(10, 20, "Linf"))
    assert bound_legendre_tail(10, 21) < bound_legendre_tail(10, 20)
    with pytest.raises(RegimeError):
        bound_legendre_tail(10, 13)
    with pytest.raises(DomainError):
        bound_legendre_tail(10, 20, "L1")


def test_legendre_almost():
    assert bound_legendre_almost(10, 20, 0, 0) == pytest.approx(float(bound_legendre_tail(10, 20)))
    assert bound_legendre_almost(10, 20, 0.1, 0.2, "Global") >= bound_legendre_almost(10, 20, 0.1, 0.2)
    f = indicator()
    c = 2 * 50 / E
    emp = error_norm(f, expand(f, "legendre", 50)) / f.l2_norm
    assert emp <= bound_legendre_almost(c, 50, 0.0, epsilon_band(f, c))
    with pytest.raises(DomainError):
        bound_legendre_almost(10, 20, 0, 0, "Nowhere")


def test_chebyshev_tail():
    f = sinc(10)
    e = expand(f, "chebyshev", 80)
    assert coefficient_tail(e, 20) / f.l2_norm <= float(bound_chebyshev_tail(10, 20))
    assert bound_chebyshev_tail(10, 25) < bound_chebyshev_tail(10, 20)
    assert float(bound_chebyshev_tail(1e-8, 3)) < 1e-20


def test_bound_hermite():
    b = bound_hermite(0.0, 0.0, 2.0, 10 ** 12)
    assert b.theoretical < 1e-3
    b = bound_hermite(0.1, 0.2, 2.0, 50, Omega=3.0)
    assert b.theoretical == pytest.approx(sum(b.components.values()))
    assert b.regime_ok
    assert not bound_hermite(0.1, 0.2, 2.0, 10, Omega=3.0).regime_ok
    f = indicator()
    n, T, Om = 40, 2.0, 2.0
    e = expand(f, "hermite", n)
    emp = math.sqrt(f.l2_norm ** 2 - float(e.coeffs @ e.coeffs)) / f.l2_norm
    b = bound_hermite(0.0, epsilon_band(f, Om), T, n, Om, emp)
    assert b.regime_ok and b.holds


def test_bound_hermite_practical():
    assert bound_hermite_practical(0, 0, 0) == 0
    n, T = 50, 2.0
    hs = 34 * T ** 3 / math.sqrt(2 * n + 1) * 0.5
    assert bound_hermite_practical(0.1, 0.2, hs) <= bound_hermite(0.1, 0.2, T, n).theoretical


def test_bound_scaled():
    T, Om, n = 3.0, 4.0, 500
    b = bound_scaled(0.0, 0.0, T, T, n, c=T * Om)
    assert b.components["kernel"] == pytest.approx(34 / math.sqrt(2 * n + 1))
    b1 = bound_scaled(0.1, 0.2, 2.0, 1.0, 100, c=5.0)
    h = bound_hermite(0.1, 0.2, 2.0, 100)
    assert b1.components["kernel"] == pytest.approx(h.components["kernel"])
    assert b1.theoretical == pytest.approx(h.theoretical)
    assert b1.components["stated_total"] < b1.components["proof_total"] == b1.theoretical
    assert bound_scaled(0, 0, 2.0, 1.0, 50, c=5.0).regime_ok
    assert not bound_scaled(0, 0, 2.0, 1.0, 49, c=5.0).regime_ok


def test_scaled_beats_unscaled():
    f = indicator()
    c = 100.0
    un = error_norm(f, expand(f, "hermite", 40))
    sc = error_norm(f, expand(f, "scaled_hermite", 40, alpha=c ** -0.5))
    assert sc < un


def test_expansion_csv_round_trip(tmp_path):
    e = expand(indicator(), "scaled_hermite", 12, alpha=0.1)
    path = tmp_path / "e.csv"
    write_expansion_csv(e, path)
    text = path.read_text()
    assert text.startswith("#schema=1\n#basis=scaled_hermite\n#order=12\n")
    back = read_expansion_csv(path)
    assert back.basis is e.basis and back.alpha == e.alpha
    assert np.array_equal(back.coeffs, e.coeffs)
