import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from bandlim.errors import DomainError
from bandlim.orthopoly import (
    Kind,
    Norm,
    PolyFamily,
    bessel_J,
    bessel_J_envelope,
    bessel_J_table,
    chebyshev_eval,
    chebyshev_fourier_constant,
    chebyshev_table,
    finite_fourier_legendre,
    hermite_center_values,
    hermite_function_batch,
    hermite_functions,
    legendre_derivative_tables,
    legendre_eval,
    legendre_table,
    read_constants,
    spherical_bessel_envelope,
    spherical_bessel_j,
    spherical_bessel_table,
    weighted_finite_fourier_chebyshev,
)
from bandlim.quadrature import gauss_chebyshev_rule, gauss_legendre_rule, integrate_arcsine_weighted

PI_Q = math.pi ** -0.25

# mpmath closed forms at 50 digits (scripts/oracles.py)
HERMITE_ORACLE = [
    (5, 1.5, -0.46041714684867435),
    (40, 3.0, 0.057369581235740706),
    (100, 7.25, -0.17130651319126439),
    (200, 0.3, 0.17156703802536132),
]
SPHERICAL_ORACLE = [
    (5, 2.0, 0.0026351697702441173),
    (0, 0.5, 0.958851077208406),
    (12, 30.0, 0.03284742792427147),
    (40, 10.0, 8.4356716344592087e-22),
]
BESSEL_ORACLE = [
    (3, 1.5, 0.060963951141139631),
    (0, 7.0, 0.3000792705195556),
    (20, 5.0, 2.7703300521289417e-11),
]


def test_legendre_examples():
    assert legendre_eval(0, 0.7) == 1.0
    assert legendre_eval(1, -0.3) == -0.3
    assert legendre_eval(5, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert legendre_eval(4, 0.5) == pytest.approx(-0.2890625, abs=1e-15)
    assert legendre_eval(3, 0.2, Norm.ORTHONORMAL) == pytest.approx(math.sqrt(3.5) * special.eval_legendre(3, 0.2))


def test_legendre_domain():
    with pytest.raises(DomainError):
        legendre_eval(2, 1.01)
    legendre_eval(2, 1 + 1e-13)


def test_legendre_table_matches_scipy():
    x = np.linspace(-1, 1, 37)
    P = legendre_table(60, x)
    for k in (0, 7, 33, 60):
        assert np.allclose(P[k], special.eval_legendre(k, x), atol=1e-13)


def test_legendre_derivatives():
    x = np.linspace(-0.95, 0.95, 11)
    P, dP, d2P = legendre_derivative_tables(12, x)
    for k in (2, 5, 12):
        poly = np.polynomial.legendre.Legendre.basis(k)
        assert np.allclose(dP[k], poly.deriv()(x), atol=1e-11)
        assert np.allclose(d2P[k], poly.deriv(2)(x), atol=1e-9)


def test_chebyshev_examples():
    assert chebyshev_eval(3, math.cos(0.4)) == pytest.approx(math.cos(1.2), abs=1e-15)
    assert chebyshev_eval(0, -0.2) == 1.0
    assert chebyshev_eval(7, 1.0) == 1.0
    assert chebyshev_eval(0, 0.3, Norm.ORTHONORMAL) == pytest.approx(math.sqrt(1 / math.pi))
    with pytest.raises(DomainError):
        chebyshev_eval(1, -1.5)


def test_chebyshev_matches_recurrence():
    x = np.linspace(-1, 1, 21)
    T = chebyshev_table(30, x)
    assert np.allclose(T[30], special.eval_chebyt(30, x), atol=1e-12)


def test_poly_family():
    fam = PolyFamily(Kind.LEGENDRE, Norm.ORTHONORMAL)
    assert fam(1, 1.0) == pytest.approx(math.sqrt(1.5))
    assert PolyFamily(Kind.CHEBYSHEV).table(3, np.array([0.5]))[2, 0] == pytest.approx(-0.5)


def test_orthonormality():
    g = gauss_legendre_rule(64)
    P = legendre_table(40, g.nodes, Norm.ORTHONORMAL)
    assert np.allclose((P * g.weights) @ P.T, np.eye(41), atol=1e-10)
    c = gauss_chebyshev_rule(64)
    T = chebyshev_table(40, c.nodes, Norm.ORTHONORMAL)
    assert np.allclose((T * c.weights) @ T.T, np.eye(41), atol=1e-10)


def test_hermite_examples():
    assert hermite_functions(0, 0.0)[0] == pytest.approx(PI_Q)
    assert hermite_functions(2, 0.0)[2] == pytest.approx(-PI_Q / math.sqrt(2))
    b = hermite_function_batch(9, np.array([0.0]))
    assert np.all(b.values[1::2] == 0.0)
    assert b[0][0] == pytest.approx(PI_Q)


@pytest.mark.parametrize("n, x, ref", HERMITE_ORACLE)
def test_hermite_oracle(n, x, ref):
    assert hermite_functions(n, x)[n] == pytest.approx(ref, rel=1e-12)


def test_hermite_against_mpmath_grid():
    xs = [-9.5, -2.0, 0.4, 6.6, 10.0]
    H = hermite_functions(200, np.array(xs))
    with mp.workdps(40):
        for n in (3, 77, 150, 200):
            for i, x in enumerate(xs):
                ref = mp.hermite(n, x) * mp.exp(-mp.mpf(x) ** 2 / 2) / mp.sqrt(2 ** n * mp.factorial(n) * mp.sqrt(mp.pi))
                assert H[n, i] == pytest.approx(float(ref), rel=1e-12, abs=1e-300)


def test_hermite_large_order_no_overflow():
    H = hermite_functions(10_000, np.array([0.0, 10.0, 50.0, 141.0]))
    assert np.all(np.isfinite(H))
    assert abs(H[10_000, 0]) == pytest.approx(abs(hermite_center_values(5000)[0]), rel=1e-10)


def test_hermite_orthonormality():
    R = math.sqrt(2 * 60 + 1) + 10
    g = gauss_legendre_rule(400).mapped(-R, R)
    H = hermite_functions(60, g.nodes)
    assert np.allclose((H * g.weights) @ H.T, np.eye(61), atol=1e-8)


@settings(max_examples=40)
@given(st.integers(0, 60), st.floats(-12, 12))
def test_hermite_parity(n, x):
    a = hermite_functions(n, x)[n]
    b = hermite_functions(n, -x)[n]
    assert b == pytest.approx((-1) ** n * a, abs=1e-300)


def test_hermite_center_values():
    h0, d1 = hermite_center_values(0)
    assert h0 == pytest.approx(PI_Q) and d1 == pytest.approx(math.sqrt(2) * PI_Q)
    h0, d1 = hermite_center_values(1)
    assert h0 == pytest.approx(-PI_Q / math.sqrt(2))
    assert d1 == pytest.approx(-math.sqrt(6) * PI_Q / math.sqrt(2))
    h0, d1 = hermite_center_values(50)
    assert h0 == pytest.approx(0.21190426776343109, rel=1e-12)
    with mp.workdps(40):
        h101 = lambda x: mp.hermite(101, x) * mp.exp(-x * x / 2) / mp.sqrt(2 ** 101 * mp.factorial(101) * mp.sqrt(mp.pi))
        assert d1 == pytest.approx(float(mp.diff(h101, 0)), rel=1e-10)
    assert np.isfinite(hermite_center_values(100_000)[0])


def test_spherical_bessel_examples():
    assert spherical_bessel_j(0, math.pi) == pytest.approx(0.0, abs=1e-16)
    assert spherical_bessel_j(0, 0.0) == 1.0
    assert spherical_bessel_j(3, 0.0) == 0.0
    assert abs(spherical_bessel_j(5, 2.0)) <= math.exp(6.5) / (math.sqrt(2) * 13 ** 6) * 2 ** 5


@pytest.mark.parametrize("k, x, ref", SPHERICAL_ORACLE)
def test_spherical_bessel_oracle(k, x, ref):
    assert spherical_bessel_j(k, x) == pytest.approx(ref, rel=1e-13)


def test_spherical_bessel_table_vs_scipy():
    x = np.concatenate([np.linspace(-60, 60, 241), [1e-9, 3e-5]])
    J = spherical_bessel_table(50, x)
    for k in (0, 1, 9, 30, 50):
        ref = special.spherical_jn(k, x)
        big = np.abs(ref) > 1e-280
        assert np.allclose(J[k][big], ref[big], rtol=1e-11, atol=1e-15)


@pytest.mark.parametrize("k, x, ref", BESSEL_ORACLE)
def test_bessel_oracle(k, x, ref):
    assert bessel_J(k, x) == pytest.approx(ref, rel=1e-13)


def test_bessel_examples_and_table():
    assert bessel_J(0, 0.0) == 1.0
    assert bessel_J(1, 0.0) == 0.0
    x = np.linspace(-200, 200, 401)
    J = bessel_J_table(40, x)
    for k in (0, 3, 17, 40):
        assert np.allclose(J[k], special.jv(k, x), rtol=1e-10, atol=1e-14)


@settings(max_examples=80)
@given(st.integers(0, 40), st.floats(-200, 200))
def test_bessel_envelopes(k, x):
    assert abs(spherical_bessel_j(k, x)) <= spherical_bessel_envelope(k, x) * (1 + 1e-12) + 1e-300
    assert abs(bessel_J(k, x)) <= bessel_J_envelope(k, x) * (1 + 1e-12) + 1e-300


@settings(max_examples=30)
@given(st.integers(0, 30), st.floats(0.01, 30))
def test_bessel_parity(k, x):
    assert spherical_bessel_j(k, -x) == pytest.approx((-1) ** k * spherical_bessel_j(k, x), abs=1e-300)


def test_finite_fourier_legendre():
    assert finite_fourier_legendre(0, 1e-12) == pytest.approx(2.0)
    g = gauss_legendre_rule(64)
    for k in (1, 4, 13, 30):
        for x in (1.0, 3.0, -17.0, 100.0):
            P = legendre_table(k, g.nodes)[k]
            rule = gauss_legendre_rule(256)
            Pk = legendre_table(k, rule.nodes)[k]
            lhs = complex(np.sum(rule.weights * np.exp(1j * x * rule.nodes) * Pk))
            assert abs(finite_fourier_legendre(k, x) - lhs) < 1e-10
    v = finite_fourier_legendre(4, 3.0)
    assert v.imag == 0.0 and v.real == pytest.approx(2 * special.spherical_jn(4, 3.0))
    assert finite_fourier_legendre(1, 1.0) == pytest.approx(2j * special.spherical_jn(1, 1.0))


def test_weighted_finite_fourier_chebyshev():
    assert weighted_finite_fourier_chebyshev(0, 0.0) == pytest.approx(math.pi)
    assert weighted_finite_fourier_chebyshev(1, 0.0) == pytest.approx(0.0, abs=1e-16)
    for k, x in ((2, 1.3), (5, 4.0), (8, 11.0)):
        lhs = (integrate_arcsine_weighted(lambda y: np.cos(x * y) * np.cos(k * np.arccos(y)))
               + 1j * integrate_arcsine_weighted(lambda y: np.sin(x * y) * np.cos(k * np.arccos(y))))
        assert abs(weighted_finite_fourier_chebyshev(k, x) - lhs) < 1e-10


def test_constants_file():
    consts = read_constants()
    kappa = chebyshev_fourier_constant()
    assert kappa == pytest.approx(math.pi, rel=1e-12)
    assert float(consts["oracle_residual"]) < 1e-10
    assert float(consts["rejected_kappa_residual"]) > 0.1
