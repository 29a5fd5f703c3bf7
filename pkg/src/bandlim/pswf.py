"""Prolate spheroidal wave functions through Legendre-Galerkin matrices.

Two Galerkin matrices are assembled in the orthonormal Legendre basis:
the sinc operator Q_c (entries are integrals of j_j(cx) j_k(cx)) and the
finite Fourier transform F_c (entries are integrals of P_j(x) j_k(cx)).
They share eigenvectors and lambda_n = c |mu_n|^2 / (2 pi).  Because
|mu_n| ~ sqrt(lambda_n), the F_c route resolves eigenvectors far deeper
into the super-exponential tail, so eigenvectors and eigenvalues come
from it and the Q_c spectrum is kept as a cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import ConvergenceError, DomainError
from .orthopoly import legendre_derivative_tables, legendre_table, spherical_bessel_table
from .quadrature import gauss_legendre_rule

__all__ = [
    "PswfSpectrum",
    "ChiBracket",
    "CertifiedBound",
    "default_order",
    "galerkin_matrix",
    "fourier_galerkin_block",
    "spectrum",
    "lower_bound_naz",
    "lower_bound_bk",
    "certified_lower_bound_piecewise",
    "chi_bracket",
    "beta_bound",
]

LAMBDA_FLOOR = 1e-14
CERTIFY_TOL = 1e-10
CERTIFY_EXTRA = 20
# one refinement step costs about eps * |mu_0 / mu_n| in the leading components
REFINE_RATIO = 1e-8
MP_PIECEWISE_MAX = 24
# eigenvectors with a larger Legendre tail are truncation artifacts
TAIL_TOL = 1e-8


def default_order(c: float) -> int:
    return math.ceil(2 * c / math.pi) + 40


def _rule(c, K):
    return gauss_legendre_rule(K + math.ceil(c) + 40)


def galerkin_matrix(c: float, K: int) -> np.ndarray:
    """K x K matrix of Q_c in the orthonormal Legendre basis.

    M_jk = (2c/pi) sqrt((j+1/2)(k+1/2)) (-1)^{(j-k)/2} int_{-1}^{1} j_j(cx) j_k(cx) dx
    for j = k (mod 2), zero otherwise.
    """
    if c <= 0 or K < 1:
        raise DomainError("need c > 0 and K >= 1")
    rule = _rule(c, K)
    jt = spherical_bessel_table(K - 1, c * rule.nodes)
    gram = (jt * rule.weights) @ jt.T
    k = np.arange(K)
    diff = k[:, None] - k[None, :]
    sign = np.where(diff % 2 == 0, (-1.0) ** (diff // 2), 0.0)
    s = np.sqrt(k + 0.5)
    M = (2 * c / math.pi) * s[:, None] * s[None, :] * sign * gram
    return 0.5 * (M + M.T)


def fourier_galerkin_block(c: float, K: int, parity: int) -> tuple[np.ndarray, np.ndarray]:
    """Real symmetric R with F_c = i^parity R on the Legendre indices of that parity.

    F_jk = 2 i^k sqrt((j+1/2)(k+1/2)) int P_j(x) j_k(cx) dx, and by symmetry of
    e^{icxy} the same value arises with j and k swapped.  Each entry uses
    the form with the higher index on the Bessel function, which stays
    accurate when the entry is tiny.  Returns (indices, R).
    """
    rule = _rule(c, K)
    idx = np.arange(parity, K, 2)
    P = legendre_table(K - 1, rule.nodes)[idx]
    J = spherical_bessel_table(K - 1, c * rule.nodes)[idx]
    A = (P * rule.weights) @ J.T  # A[a, b] = int P_a j_b
    lo = np.minimum.outer(idx, idx)
    hi = np.maximum.outer(idx, idx)
    pos = {k: i for i, k in enumerate(idx)}
    rows = np.vectorize(pos.get)(lo)
    cols = np.vectorize(pos.get)(hi)
    vals = A[rows, cols]
    sign = (-1.0) ** (hi // 2)
    s = np.sqrt(idx + 0.5)
    R = 2 * s[:, None] * s[None, :] * sign * vals
    return idx, 0.5 * (R + R.T)


@dataclass(frozen=True, eq=False)
class PswfSpectrum:
    """Eigenpairs of Q_c: ``lambdas`` descending; ``eigvecs[:, n]`` are the
    orthonormal-Legendre coefficients of psi_n; ``beta = sqrt(k+1/2) * eigvecs``
    are the classical-Legendre coefficients."""

    c: float
    K: int
    lambdas: np.ndarray
    mus: np.ndarray
    eigvecs: np.ndarray
    galerkin_lambdas: np.ndarray
    certified: bool

    @property
    def beta(self) -> np.ndarray:
        return np.sqrt(np.arange(self.K) + 0.5)[:, None] * self.eigvecs

    @property
    def trace(self) -> float:
        return float(np.sum(self.galerkin_lambdas))

    def resolved(self, floor: float = LAMBDA_FLOOR) -> np.ndarray:
        """Indices n with lambda_n above the discretization floor."""
        return np.flatnonzero(self.lambdas > floor)

    def tail(self, n: int, width: int = 6) -> float:
        """Largest of the last ``width`` coefficients of psi_n; large means truncated."""
        return float(np.max(np.abs(self.eigvecs[-width:, n])))

    def psi(self, n: int, x):
        """psi_n(x) on [-1, 1], normalized in L2(-1, 1) with psi_n(1) > 0."""
        P = legendre_table(self.K - 1, x)
        return np.tensordot(self.beta[:, n], P, axes=1)


def _solve(c, K):
    vecs, mus = [], []
    for parity in (0, 1):
        idx, R = fourier_galerkin_block(c, K, parity)
        w, V = np.linalg.eigh(R)
        top = np.max(np.abs(w))
        for j in range(len(w)):
            v = V[:, j]
            if abs(w[j]) > REFINE_RATIO * top:
                v = R @ v / w[j]
                v /= np.linalg.norm(v)
            full = np.zeros(K)
            full[idx] = v
            if np.dot(np.sqrt(np.arange(K) + 0.5), full) < 0:
                full = -full
            vecs.append(full)
            mus.append(w[j])
    mus = np.array(mus)
    order = np.argsort(-np.abs(mus), kind="stable")
    mus = mus[order]
    V = np.column_stack([vecs[i] for i in order])
    lambdas = c * mus ** 2 / (2 * math.pi)
    return lambdas, mus, V


def spectrum(c: float, K: int | None = None, certify: bool = True) -> PswfSpectrum:
    """Eigenvalues and Legendre coefficients of the PSWFs psi_{n,c}.

    Certification reruns at K+20 and requires every lambda_n above 1e-14
    to agree within 1e-10.
    """
    if c <= 0:
        raise DomainError("c must be positive")
    K = default_order(c) if K is None else int(K)
    if K < 8:
        raise DomainError("K must be at least 8")
    lambdas, mus, V = _solve(c, K)
    g = np.sort(np.linalg.eigvalsh(galerkin_matrix(c, K)))[::-1]
    if certify:
        ref, _, _ = _solve(c, K + CERTIFY_EXTRA)
        keep = lambdas > LAMBDA_FLOOR
        gap = np.max(np.abs(lambdas[keep] - ref[: K][keep]), initial=0.0)
        if gap > CERTIFY_TOL:
            raise ConvergenceError(f"eigenvalues moved by {gap:.3g} from K={K} to K={K + CERTIFY_EXTRA}")
    for a in (lambdas, mus, V, g):
        a.setflags(write=False)
    return PswfSpectrum(float(c), K, lambdas, mus, V, g, certify)


# --- eigenvalue lower bounds ---------------------------------------------------

@dataclass(frozen=True)
class CertifiedBound:
    """A lower bound together with the 0-based eigenvalue index it certifies."""

    value: float
    index: int


def _plunge(c):
    return math.floor(2 * c / math.pi)


def lower_bound_naz(n: int, c: float) -> CertifiedBound:
    """Lower bound from an n-dimensional trial space of step functions.

    For n > 2c/pi: 7 (1 - 2c/(n pi))^2 (c/(7 pi n))^{2n-1}; for
    n = floor(2c/pi): 4/(pi + 2c).  Both certify lambda_{n-1} (0-based).
    """
    nc = _plunge(c)
    if n < max(nc, 1):
        raise DomainError(f"need n >= max(floor(2c/pi), 1) = {max(nc, 1)}, got {n}")
    if n > 2 * c / math.pi:
        logv = (math.log(7) + 2 * math.log1p(-2 * c / (n * math.pi))
                + (2 * n - 1) * math.log(c / (7 * math.pi * n)))
        return CertifiedBound(math.exp(logv), n - 1)
    return CertifiedBound(4 / (math.pi + 2 * c), n - 1)


def lower_bound_bk(n: int, c: float) -> float:
    """(2/5) (2c/(pi(n+1)))^{5(n+1)}, a lower bound for lambda_n when n >= max(3, 2c/pi)."""
    if n < max(3, 2 * c / math.pi):
        raise DomainError(f"need n >= max(3, 2c/pi), got n={n}, c={c}")
    return math.exp(math.log(0.4) + 5 * (n + 1) * math.log(2 * c / (math.pi * (n + 1))))


def _toeplitz_symbol_mp(ell, a):
    """int_{-a}^{a} cos(ell t) (sin(t/2)/(t/2))^2 dt via Si second differences."""
    def A(p):
        p = abs(p)
        if p == 0:
            return mpmath.mpf(0)
        return p * mpmath.si(p * a) - (1 - mpmath.cos(p * a)) / a
    return 2 * (A(ell + 1) + A(ell - 1) - 2 * A(ell))


def _toeplitz_symbol(ell, a):
    rule = gauss_legendre_rule(64).mapped(0.0, a)
    t = rule.nodes
    return 2 * float(rule.weights @ (np.cos(ell * t) * np.sinc(t / (2 * math.pi)) ** 2))


def certified_lower_bound_piecewise(n: int, c: float) -> CertifiedBound:
    """(n/2) lambda_min(G) over step functions on n equal cells of [-1, 1].

    G_jk = (1/(pi n)) int_{|t| < 2c/n} cos((j-k) t) (sin(t/2)/(t/2))^2 dt.
    The n-dimensional trial space certifies lambda_{n-1}.  Entries come in
    closed form and the smallest eigenvalue is computed in extended
    precision for n <= 24; beyond that a double-precision value minus a
    rounding margin, clamped at 0.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    if c <= 0:
        raise DomainError("c must be positive")
    if n <= MP_PIECEWISE_MAX:
        with mpmath.workdps(40 + 2 * n):
            a = mpmath.mpf(2) * c / n
            sym = [_toeplitz_symbol_mp(l, a) / (mpmath.pi * n) for l in range(n)]
            G = mpmath.matrix(n, n)
            for j in range(n):
                for k in range(n):
                    G[j, k] = sym[abs(j - k)]
            lam_min = min(mpmath.eigsy(G, eigvals_only=True))
            return CertifiedBound(max(0.0, float(n * lam_min / 2)), n - 1)
    a = 2 * c / n
    sym = np.array([_toeplitz_symbol(l, a) for l in range(n)]) / (math.pi * n)
    G = sym[np.abs(np.subtract.outer(np.arange(n), np.arange(n)))]
    w = np.linalg.eigvalsh(G)
    margin = 4 * n * np.finfo(float).eps * np.max(np.abs(w))
    return CertifiedBound(max(0.0, float(n * (w[0] - margin) / 2)), n - 1)


# --- chi_n and beta bounds -----------------------------------------------------

@dataclass(frozen=True)
class ChiBracket:
    n: int
    c: float
    lower: float
    upper: float
    rayleigh: float | None = None

    @property
    def holds(self) -> bool:
        return self.rayleigh is None or self.lower <= self.rayleigh <= self.upper


def chi_bracket(n: int, c: float, spec: PswfSpectrum | None = None) -> ChiBracket:
    """n(n+1) <= chi_n(c) <= n(n+1) + c^2, with the Rayleigh quotient of
    L_c psi = -(1-x^2) psi'' + 2x psi' + c^2 x^2 psi when ``spec`` is given."""
    lower, upper = n * (n + 1), n * (n + 1) + c * c
    if spec is None:
        return ChiBracket(n, c, lower, upper)
    if n >= spec.K - 5:
        raise DomainError(f"need n < K - 5 = {spec.K - 5}")
    if spec.c != c:
        raise DomainError("spectrum was computed for another c")
    rule = gauss_legendre_rule(spec.K + 40)
    x = rule.nodes
    P, dP, d2P = legendre_derivative_tables(spec.K - 1, x)
    b = spec.beta[:, n]
    psi, dpsi, d2psi = b @ P, b @ dP, b @ d2P
    Lpsi = -(1 - x * x) * d2psi + 2 * x * dpsi + c * c * x * x * psi
    rq = float(rule.weights @ (Lpsi * psi)) / float(rule.weights @ (psi * psi))
    return ChiBracket(n, c, lower, upper, rq)


def beta_bound(n: int, k: int, c: float) -> float:
    """Bound on |beta_k^n(c)| from the coefficient decay of B_c and a lower
    bound on lambda_n; the case is chosen by n against floor(2c/pi)."""
    if n < 0 or k < 0 or c <= 0:
        raise DomainError("need n, k >= 0 and c > 0")
    nc = _plunge(c)
    decay = (k + 1) * math.log(math.e * c / (2 * k + 3))
    if n <= nc - 1:
        logv = math.log(2) + 0.5 * (1 - math.log(math.pi * c)) + 0.5 * math.log(2 * k + 1)
    elif n == nc:
        logv = 0.5 * math.log(math.e * (math.pi + 2 * c) / (2 * math.pi * c)) + 0.5 * math.log(k + 0.5)
    else:
        logv = (0.5 * math.log(2 * math.e / (7 * math.pi)) - 0.5 * math.log(c)
                - math.log1p(-2 * c / (n * math.pi))
                + (n - 0.5) * math.log(7 * math.pi * n / c) + 0.5 * math.log(k + 0.5))
    return math.exp(logv + decay)
