"""Hermite projection kernel, the sinc kernel and their residual."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, RegimeError
from .orthopoly import hermite_functions
from .quadrature import gauss_legendre_rule

__all__ = [
    "KernelScan",
    "bandwidth_N",
    "christoffel_darboux",
    "sinc_kernel",
    "residual",
    "residual_scan",
    "residual_bounds",
    "kernel_regime",
]

CD_DELTA = 1e-6
HS_ORDER = 64
HS_SELF_CHECK = 1e-6


def bandwidth_N(n: int) -> float:
    """N = (sqrt(2n+1) + sqrt(2n+3)) / 2."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    return 0.5 * (math.sqrt(2 * n + 1) + math.sqrt(2 * n + 3))


def _cd_from_tables(n, hx, hy, x, y):
    # hx, hy: (n+2, ...) Hermite tables broadcast against each other
    d = x - y
    near = np.abs(d) <= CD_DELTA
    with np.errstate(divide="ignore", invalid="ignore"):
        cd = math.sqrt((n + 1) / 2) * (hx[n + 1] * hy[n] - hy[n + 1] * hx[n]) / d
    if np.any(near):
        direct = np.sum(hx[: n + 1] * hy[: n + 1], axis=0)
        cd = np.where(near, direct, cd)
    return cd


def christoffel_darboux(n: int, x, y):
    """Kernel k_n(x, y) = sum_{k<=n} h_k(x) h_k(y).

    Uses the Christoffel-Darboux quotient off the diagonal and the direct
    sum when |x - y| <= 1e-6.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    hx = hermite_functions(n + 1, x)
    hy = hermite_functions(n + 1, y)
    val = _cd_from_tables(n, hx, hy, x, y)
    return float(val) if val.ndim == 0 else val


def sinc_kernel(N: float, x, y):
    """sin(N(x - y)) / (pi (x - y)), equal to N/pi on the diagonal."""
    if N <= 0:
        raise DomainError("N must be positive")
    d = np.asarray(x, float) - np.asarray(y, float)
    small = np.abs(d) < 1e-12
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(small, N / math.pi, np.sin(N * d) / (math.pi * d))
    return float(val) if val.ndim == 0 else val


def residual(n: int, x, y):
    """R_n(x, y) = k_n(x, y) - sinc_N(x, y) on the outer grid x[:, None], y[None, :]."""
    x = np.asarray(x, float).ravel()
    y = np.asarray(y, float).ravel()
    hx = hermite_functions(n + 1, x)[:, :, None]
    hy = hermite_functions(n + 1, y)[:, None, :]
    X, Y = x[:, None], y[None, :]
    return _cd_from_tables(n, hx, hy, X, Y) - sinc_kernel(bandwidth_N(n), X, Y)


def kernel_regime(n: int, T: float) -> str:
    """'main' if T >= 2 and n >= 2T^2, 'small_T' if T <= 1 and n >= 6, else 'outside'."""
    if T >= 2 and n >= 2 * T * T:
        return "main"
    if T <= 1 and n >= 6:
        return "small_T"
    return "outside"


def residual_bounds(n: int, T: float) -> tuple[float, float]:
    """(17 T^2, 34 T^3) / sqrt(2n+1): uniform and Hilbert-Schmidt bounds."""
    if T < 1 or n < max(6, 2 * T * T):
        raise RegimeError(f"bounds need T >= 1 and n >= max(6, 2T^2); got n={n}, T={T}")
    s = math.sqrt(2 * n + 1)
    return 17 * T * T / s, 34 * T ** 3 / s


def _hs_norm(n, T, m):
    rule = gauss_legendre_rule(m).mapped(-T, T)
    r = residual(n, rule.nodes, rule.nodes)
    w = rule.weights
    return math.sqrt(max(float(w @ (r * r) @ w), 0.0))


@dataclass(frozen=True)
class KernelScan:
    n: int
    T: float
    grid_m: int
    E_tilde: float
    hs_norm: float
    regime: str

    @property
    def regime_ok(self) -> bool:
        return self.regime != "outside"


def residual_scan(n: int, T: float, grid_m: int = 80) -> KernelScan:
    """Sup of |R_n| on a uniform grid_m x grid_m grid of [-T, T]^2, plus ||R_n||_HS.

    The Hilbert-Schmidt norm uses a 64-point tensor Gauss-Legendre rule and
    is checked against the 128-point rule.
    """
    if grid_m < 2:
        raise DomainError("grid_m must be at least 2")
    if T <= 0:
        raise DomainError("T must be positive")
    g = np.linspace(-T, T, grid_m)
    e_tilde = float(np.max(np.abs(residual(n, g, g))))
    hs = _hs_norm(n, T, HS_ORDER)
    hs2 = _hs_norm(n, T, 2 * HS_ORDER)
    if abs(hs - hs2) > HS_SELF_CHECK * max(1.0, hs2):
        raise ConvergenceError(f"HS norm not converged: {hs} vs {hs2}")
    return KernelScan(n, T, grid_m, e_tilde, hs2, kernel_regime(n, T))
