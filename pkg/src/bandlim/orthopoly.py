"""Orthogonal polynomials, Hermite functions and Bessel functions.

All evaluators accept scalars or numpy arrays.  ``*_table`` variants
return every order 0..kmax at once (leading axis = order), which is what
the Galerkin and projection code consumes.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, RangeError

__all__ = [
    "Kind",
    "Norm",
    "PolyFamily",
    "HermiteBatch",
    "legendre_eval",
    "legendre_table",
    "legendre_derivative_tables",
    "chebyshev_eval",
    "chebyshev_table",
    "hermite_function_batch",
    "hermite_functions",
    "hermite_center_values",
    "spherical_bessel_j",
    "spherical_bessel_table",
    "bessel_J",
    "bessel_J_table",
    "spherical_bessel_envelope",
    "bessel_J_envelope",
    "finite_fourier_legendre",
    "weighted_finite_fourier_chebyshev",
    "chebyshev_fourier_constant",
    "read_constants",
]

_DOMAIN_TOL = 1e-12
_BIG = 1e150
_LOG_BIG = 150.0 * math.log(10.0)
PI_QUARTER = math.pi ** -0.25


class Kind(enum.Enum):
    LEGENDRE = "legendre"
    CHEBYSHEV = "chebyshev"


class Norm(enum.Enum):
    CLASSICAL = "classical"
    ORTHONORMAL = "orthonormal"


def _check_unit(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + _DOMAIN_TOL):
        raise DomainError("argument outside [-1, 1]")
    return np.clip(x, -1.0, 1.0)


def _scalar(a):
    return float(a) if np.ndim(a) == 0 else a


def _legendre_scale(k):
    return np.sqrt(np.asarray(k) + 0.5)


def _chebyshev_scale(k):
    k = np.asarray(k)
    return np.where(k == 0, math.sqrt(1.0 / math.pi), math.sqrt(2.0 / math.pi))


def legendre_table(kmax: int, x, norm: Norm = Norm.CLASSICAL) -> np.ndarray:
    """P_0..P_kmax at ``x`` by forward recurrence, shape (kmax+1, *x.shape)."""
    x = _check_unit(x)
    out = np.empty((kmax + 1,) + x.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = x
    for k in range(1, kmax):
        out[k + 1] = ((2 * k + 1) * x * out[k] - k * out[k - 1]) / (k + 1)
    if norm is Norm.ORTHONORMAL:
        out *= _legendre_scale(np.arange(kmax + 1)).reshape((-1,) + (1,) * x.ndim)
    return out


def legendre_eval(k: int, x, norm: Norm = Norm.CLASSICAL):
    """P_k(x), or sqrt(k + 1/2) P_k(x) when ``norm`` is orthonormal."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    return _scalar(legendre_table(k, x, norm)[k])


def legendre_derivative_tables(kmax: int, x):
    """Tables of P_k, P_k' and P_k'' for k <= kmax (classical normalization).

    Uses P'_{k+1} = P'_{k-1} + (2k+1) P_k and the same relation one
    derivative higher, so no division by 1 - x^2 occurs.
    """
    p = legendre_table(kmax, x)
    dp = np.zeros_like(p)
    d2p = np.zeros_like(p)
    for k in range(kmax):
        prev1 = dp[k - 1] if k >= 1 else 0.0
        prev2 = d2p[k - 1] if k >= 1 else 0.0
        dp[k + 1] = prev1 + (2 * k + 1) * p[k]
        d2p[k + 1] = prev2 + (2 * k + 1) * dp[k]
    return p, dp, d2p


def chebyshev_table(kmax: int, x, norm: Norm = Norm.CLASSICAL) -> np.ndarray:
    """T_0..T_kmax at ``x`` through T_k(cos t) = cos(k t)."""
    x = _check_unit(x)
    theta = np.arccos(x)
    k = np.arange(kmax + 1).reshape((-1,) + (1,) * x.ndim)
    out = np.cos(k * theta)
    if norm is Norm.ORTHONORMAL:
        out = out * _chebyshev_scale(k)
    return out


def chebyshev_eval(k: int, x, norm: Norm = Norm.CLASSICAL):
    """T_k(x) via the cosine identity (orthonormal: sqrt(2/(c_k pi)) T_k)."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    x = _check_unit(x)
    val = np.cos(k * np.arccos(x))
    if norm is Norm.ORTHONORMAL:
        val = val * float(_chebyshev_scale(k))
    return _scalar(val)


@dataclass(frozen=True)
class PolyFamily:
    """A polynomial family together with its normalization."""

    kind: Kind
    normalization: Norm = Norm.CLASSICAL

    def __call__(self, k: int, x):
        if self.kind is Kind.LEGENDRE:
            return legendre_eval(k, x, self.normalization)
        return chebyshev_eval(k, x, self.normalization)

    def table(self, kmax: int, x) -> np.ndarray:
        if self.kind is Kind.LEGENDRE:
            return legendre_table(kmax, x, self.normalization)
        return chebyshev_table(kmax, x, self.normalization)


# --- Hermite functions -------------------------------------------------

@dataclass(frozen=True, eq=False)
class HermiteBatch:
    """h_0..h_{n_max} at the points ``x``; ``values[k]`` holds h_k."""

    n_max: int
    x: np.ndarray
    values: np.ndarray

    def __getitem__(self, k):
        return self.values[k]


def hermite_functions(n_max: int, x) -> np.ndarray:
    """Array of h_k(x) for k = 0..n_max, shape (n_max+1, *x.shape).

    The orthonormal recurrence runs on a rescaled sequence with a per-point
    log scale, so neither the Gaussian factor nor the polynomial growth can
    underflow or overflow on the way.
    """
    if n_max < 0:
        raise DomainError("n_max must be nonnegative")
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    logs = -0.5 * x * x + math.log(PI_QUARTER)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    out[0] = np.exp(logs)
    with np.errstate(divide="ignore", under="ignore"):
        for k in range(n_max):
            nxt = x * math.sqrt(2.0 / (k + 1)) * cur - math.sqrt(k / (k + 1)) * prev
            prev, cur = cur, nxt
            big = np.abs(cur) > _BIG
            if np.any(big):
                prev = np.where(big, prev / _BIG, prev)
                cur = np.where(big, cur / _BIG, cur)
                logs = logs + np.where(big, _LOG_BIG, 0.0)
            out[k + 1] = np.sign(cur) * np.exp(logs + np.log(np.abs(cur)))
    if not np.all(np.isfinite(out)):
        raise RangeError("Hermite recurrence left the floating-point range")
    return out


def hermite_function_batch(n_max: int, x) -> HermiteBatch:
    """Hermite functions h_0(x)..h_{n_max}(x) as a :class:`HermiteBatch`."""
    x = np.asarray(x, dtype=float)
    return HermiteBatch(n_max, x, hermite_functions(n_max, x))


def hermite_center_values(p: int) -> tuple[float, float]:
    """Return (h_{2p}(0), h'_{2p+1}(0)).

    h_{2p}(0) = (-1)^p pi^{-1/4} sqrt((2p-1)!!/(2p)!!) and
    h'_{2p+1}(0) = sqrt(4p+2) h_{2p}(0); the double-factorial ratio is
    formed from log-gamma values.
    """
    if p < 0:
        raise DomainError("p must be nonnegative")
    log_ratio = gammaln(2 * p + 1) - 2 * gammaln(p + 1) - 2 * p * math.log(2.0)
    h0 = (-1) ** p * PI_QUARTER * math.exp(0.5 * log_ratio)
    return h0, math.sqrt(4 * p + 2) * h0


# --- Bessel functions -------------------------------------------------

def _miller_start(kmax, xmax):
    top = max(kmax, math.ceil(xmax))
    return top + 30 + int(math.sqrt(40.0 * (top + 1)))


def spherical_bessel_table(kmax: int, x) -> np.ndarray:
    """j_0..j_kmax at ``x``, shape (kmax+1, *x.shape).

    Upward recurrence where |x| >= kmax, Miller's normalized downward
    recurrence elsewhere (normalized by whichever of j_0, j_1 is larger),
    and the leading series term for |x| < 1e-8.
    """
    if kmax < 0:
        raise DomainError("kmax must be nonnegative")
    x = np.asarray(x, dtype=float)
    shape = x.shape
    ax = np.abs(x).ravel()
    out = np.zeros((kmax + 1, ax.size))
    k = np.arange(kmax + 1)

    tiny = ax < 1e-8
    if np.any(tiny):
        xt = ax[tiny]
        # x^k / (2k+1)!!, with (2k+1)!! = (2k+1)! / (2^k k!)
        logdf = gammaln(2 * k + 2) - k * math.log(2.0) - gammaln(k + 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            lead = np.exp(np.outer(k, np.log(xt)) - logdf[:, None])
        lead[0] = 1.0 - xt * xt / 6.0
        out[:, tiny] = lead

    up = (ax >= max(kmax, 1)) & ~tiny
    if np.any(up):
        xu = ax[up]
        s, c = np.sin(xu), np.cos(xu)
        j0 = s / xu
        out[0, up] = j0
        if kmax >= 1:
            j1 = (j0 - c) / xu
            out[1, up] = j1
            for n in range(1, kmax):
                out[n + 1, up] = (2 * n + 1) / xu * out[n, up] - out[n - 1, up]

    down = ~(tiny | up)
    if np.any(down):
        xd = ax[down]
        block = np.zeros((max(kmax, 1) + 1, xd.size))
        nstart = _miller_start(kmax, xd.max())
        nxt = np.zeros_like(xd)
        cur = np.full_like(xd, 1e-30)
        for n in range(nstart, 0, -1):
            nxt, cur = cur, (2 * n + 1) / xd * cur - nxt
            if n - 1 < block.shape[0]:
                block[n - 1] = cur
            big = np.abs(cur) > _BIG
            if np.any(big):
                cur = np.where(big, cur / _BIG, cur)
                nxt = np.where(big, nxt / _BIG, nxt)
                block[:, big] /= _BIG
        j0 = np.sin(xd) / xd
        j1 = (j0 - np.cos(xd)) / xd
        scale = np.where(np.abs(j0) >= np.abs(j1), j0 / block[0], j1 / block[1])
        block = block[: kmax + 1]
        out[:, down] = block * scale

    neg = (x.ravel() < 0)
    if np.any(neg):
        out[1::2, neg] *= -1.0
    return out.reshape((kmax + 1,) + shape)


def spherical_bessel_j(k: int, x):
    """Spherical Bessel function j_k(x) of the first kind."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    return _scalar(spherical_bessel_table(k, x)[k])


def bessel_J_table(kmax: int, x) -> np.ndarray:
    """J_0..J_kmax at ``x`` for integer orders, shape (kmax+1, *x.shape).

    Miller's downward recurrence from well above max(kmax, |x|), normalized
    by J_0 + 2 sum J_{2m} = 1; series term for |x| < 1e-8.
    """
    if kmax < 0:
        raise DomainError("kmax must be nonnegative")
    x = np.asarray(x, dtype=float)
    shape = x.shape
    ax = np.abs(x).ravel()
    out = np.zeros((kmax + 1, ax.size))
    k = np.arange(kmax + 1)

    tiny = ax < 1e-8
    if np.any(tiny):
        xt = ax[tiny]
        with np.errstate(divide="ignore", invalid="ignore"):
            lead = np.exp(np.outer(k, np.log(0.5 * xt)) - gammaln(k + 1)[:, None])
        lead[0] = 1.0 - 0.25 * xt * xt
        out[:, tiny] = lead

    rest = ~tiny
    if np.any(rest):
        xr = ax[rest]
        block = np.zeros((kmax + 1, xr.size))
        nstart = _miller_start(kmax, xr.max())
        nstart += nstart % 2
        nxt = np.zeros_like(xr)
        cur = np.full_like(xr, 1e-30)
        norm = 2.0 * cur  # nstart is even
        for n in range(nstart, 0, -1):
            prev = 2.0 * n / xr * cur - nxt
            nxt, cur = cur, prev
            m = n - 1
            if m <= kmax:
                block[m] = cur
            if m % 2 == 0:
                norm = norm + (cur if m == 0 else 2.0 * cur)
            big = np.abs(cur) > _BIG
            if np.any(big):
                cur = np.where(big, cur / _BIG, cur)
                nxt = np.where(big, nxt / _BIG, nxt)
                norm = np.where(big, norm / _BIG, norm)
                block[:, big] /= _BIG
        out[:, rest] = block / norm

    neg = (x.ravel() < 0)
    if np.any(neg):
        out[1::2, neg] *= -1.0
    return out.reshape((kmax + 1,) + shape)


def bessel_J(k: int, x):
    """Bessel function J_k(x) of integer order k >= 0."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    return _scalar(bessel_J_table(k, x)[k])


def spherical_bessel_envelope(k, x):
    """e^{k+3/2} / (sqrt(2) (2k+3)^{k+1}) |x|^k, an upper bound for |j_k(x)|."""
    k = np.asarray(k, dtype=float)
    ax = np.abs(np.asarray(x, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        logv = (k + 1.5) - 0.5 * math.log(2.0) - (k + 1) * np.log(2 * k + 3) + k * np.log(ax)
    return np.where((k == 0) & (ax == 0), math.exp(1.5) / (math.sqrt(2) * 3), np.exp(logv))


def bessel_J_envelope(k, x):
    """|x|^k / (2^k k!), an upper bound for |J_k(x)|."""
    k = np.asarray(k, dtype=float)
    ax = np.abs(np.asarray(x, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        logv = k * np.log(0.5 * ax) - gammaln(k + 1)
    return np.where((k == 0), 1.0, np.exp(logv))


def _times_i_power(k: int, r):
    """i^k * r for real r, built from the k mod 4 case split."""
    q = k % 4
    if q == 0:
        return complex(r, 0.0)
    if q == 1:
        return complex(0.0, r)
    if q == 2:
        return complex(-r, 0.0)
    return complex(0.0, -r)


def finite_fourier_legendre(k: int, x: float) -> complex:
    """The integral of e^{ixy} P_k(y) over [-1, 1], equal to 2 i^k j_k(x)."""
    return _times_i_power(k, 2.0 * spherical_bessel_j(k, x))


def weighted_finite_fourier_chebyshev(k: int, x: float) -> complex:
    """The integral of e^{ixy} T_k(y) (1-y^2)^{-1/2} over [-1, 1].

    Equals i^k kappa J_k(x) with kappa read from the constants file.
    """
    return _times_i_power(k, chebyshev_fourier_constant() * bessel_J(k, x))


# --- constants file ---------------------------------------------------

@lru_cache(maxsize=1)
def read_constants() -> dict[str, str]:
    """Key/value pairs from the packaged ``constants.txt``."""
    text = resources.files("bandlim").joinpath("data/constants.txt").read_text("utf-8")
    out = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def chebyshev_fourier_constant() -> float:
    """The constant kappa in the weighted finite Fourier identity for T_k."""
    return float(read_constants()["chebyshev_fourier_kappa"])
