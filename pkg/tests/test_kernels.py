import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bandlim.errors import DomainError, RegimeError
from bandlim.kernels import (
    KernelScan,
    bandwidth_N,
    christoffel_darboux,
    kernel_regime,
    residual,
    residual_bounds,
    residual_scan,
    sinc_kernel,
)
from bandlim.orthopoly import hermite_functions
from bandlim.quadrature import gauss_legendre_rule


def test_bandwidth():
    assert bandwidth_N(0) == pytest.approx((1 + math.sqrt(3)) / 2)
    assert bandwidth_N(4) == pytest.approx((3 + math.sqrt(11)) / 2)
    for n in (1, 17, 300):
        assert math.sqrt(2 * n + 1) < bandwidth_N(n) < math.sqrt(2 * n + 3)


def test_cd_order_zero():
    x, y = 0.7, -1.1
    assert christoffel_darboux(0, x, y) == pytest.approx(math.exp(-(x * x + y * y) / 2) / math.sqrt(math.pi))


def test_cd_branches_agree():
    H = hermite_functions(25, np.array([0.3, -0.4]))
    direct = float(H[:, 0] @ H[:, 1])
    assert christoffel_darboux(25, 0.3, -0.4) == pytest.approx(direct, abs=1e-10)
    # across the near-diagonal switch
    a = christoffel_darboux(25, 0.3, 0.3 + 0.9e-6)
    b = christoffel_darboux(25, 0.3, 0.3 + 1.1e-6)
    assert a == pytest.approx(b, abs=1e-5)


@settings(max_examples=40)
@given(st.integers(0, 80), st.floats(-8, 8), st.floats(-8, 8))
def test_cd_symmetric(n, x, y):
    assert christoffel_darboux(n, x, y) == pytest.approx(christoffel_darboux(n, y, x), abs=1e-12)


def test_reproducing_property():
    n = 30
    R = math.sqrt(2 * n + 1) + 10
    rule = gauss_legendre_rule(300).mapped(-R, R)
    H = hermite_functions(n, rule.nodes)
    g = 0.5 * H[3] - 1.5 * H[17] + H[30]
    x = np.array([-2.0, 0.1, 3.3])
    K = christoffel_darboux(n, x[:, None], rule.nodes[None, :])
    Hx = hermite_functions(n, x)
    assert np.allclose(K @ (rule.weights * g), 0.5 * Hx[3] - 1.5 * Hx[17] + Hx[30], atol=1e-8)


def test_sinc_kernel():
    assert sinc_kernel(3.0, 0.2, 0.2) == pytest.approx(3 / math.pi)
    assert sinc_kernel(math.pi, 1.0, 0.0) == pytest.approx(0.0, abs=1e-16)
    assert sinc_kernel(2.0, 0.3, -0.5) == sinc_kernel(2.0, -0.5, 0.3)
    with pytest.raises(DomainError):
        sinc_kernel(0.0, 0.0, 1.0)


def test_residual_shape():
    r = residual(10, np.linspace(-1, 1, 5), np.linspace(-1, 1, 7))
    assert r.shape == (5, 7)


def test_residual_bounds():
    u, h = residual_bounds(50, 1.0)
    assert u == pytest.approx(17 / math.sqrt(101)) and h == pytest.approx(34 / math.sqrt(101))
    u, h = residual_bounds(80, 3.0)
    assert h / u == pytest.approx(6.0)
    with pytest.raises(RegimeError):
        residual_bounds(5, 1.0)
    with pytest.raises(RegimeError):
        residual_bounds(7, 2.0)


def test_regime_labels():
    assert kernel_regime(8, 2.0) == "main"
    assert kernel_regime(6, 1.0) == "small_T"
    assert kernel_regime(5, 1.0) == "outside"
    assert kernel_regime(100, 1.5) == "outside"


def test_residual_scan_examples():
    s = residual_scan(6, 1.0, 40)
    assert isinstance(s, KernelScan) and s.regime == "small_T" and s.regime_ok
    s = residual_scan(50, 1.0, 80)
    assert s.E_tilde == pytest.approx(0.025, abs=0.005)
    with pytest.raises(DomainError):
        residual_scan(10, 1.0, 1)
