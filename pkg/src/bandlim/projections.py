"""Truncated orthogonal expansions of signals and their error bounds.

Coefficients are always stored in the orthonormal basis: h_k^alpha,
sqrt(k+1/2) P_k on (-1, 1), or sqrt(2/(c_k pi)) T_k in L^2(dmu).  Bound
formulas are evaluated in the log domain and exponentiated last.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from numpy.polynomial import legendre as npleg
from scipy.special import gammaln

from .concentration import CATALOG, Signal
from .errors import ConfigError, DomainError, EvaluationError, RegimeError
from .orthopoly import (bessel_J_table, chebyshev_fourier_constant, hermite_functions,
                        legendre_table, spherical_bessel_table)
from .quadrature import composite_rule

__all__ = [
    "Basis",
    "Expansion",
    "ErrorBudget",
    "Bound",
    "expand",
    "legendre_moments",
    "chebyshev_moments",
    "eval_expansion",
    "error_norm",
    "coefficient_tail",
    "bound_hermite",
    "bound_hermite_practical",
    "bound_scaled",
    "bound_legendre_coeff",
    "bound_chebyshev_coeff",
    "bound_chebyshev_coeff_rigorous",
    "bound_legendre_tail",
    "bound_legendre_almost",
    "bound_chebyshev_tail",
    "write_expansion_csv",
    "read_expansion_csv",
]

E = math.e


class Basis(enum.Enum):
    HERMITE = "hermite"
    SCALED_HERMITE = "scaled_hermite"
    LEGENDRE = "legendre"
    CHEBYSHEV = "chebyshev"

    @property
    def on_interval(self) -> bool:
        return self in (Basis.LEGENDRE, Basis.CHEBYSHEV)


@dataclass(frozen=True, eq=False)
class Expansion:
    """Truncated expansion sum_{k<=order} coeffs[k] * phi_k."""

    basis: Basis
    order: int
    coeffs: np.ndarray
    alpha: float = 1.0

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float)
        if coeffs.shape != (self.order + 1,):
            raise DomainError(f"expected {self.order + 1} coefficients, got {coeffs.shape}")
        if self.alpha <= 0:
            raise DomainError("alpha must be positive")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def __call__(self, x):
        return eval_expansion(self, x)

    def truncated(self, order: int) -> "Expansion":
        return Expansion(self.basis, order, self.coeffs[: order + 1], self.alpha)


class Bound(float):
    """A float bound that remembers whether exp() underflowed to 0."""

    underflow: bool = False

    def __new__(cls, log_value: float):
        val = math.exp(log_value) if log_value > -745.0 else 0.0
        obj = super().__new__(cls, val)
        obj.underflow = val == 0.0 and log_value != -math.inf
        obj.log = log_value
        return obj


@dataclass(frozen=True)
class ErrorBudget:
    """Measured error against a theoretical bound; both relative to ||f||."""

    empirical: float
    theoretical: float
    regime_ok: bool
    components: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return not (self.empirical > self.theoretical)


# --- coefficients --------------------------------------------------------

def _signal_scale(f: Signal) -> float:
    """Largest oscillation frequency of f worth resolving."""
    return f.band_limit if f.band_limit is not None else 1.0


def _panel_width(freq: float) -> float:
    # 64 nodes per panel, at least 8 per period
    return min(0.5, 16 * math.pi / max(freq, 1.0))


def _hermite_window(f: Signal, order: int, alpha: float):
    reach = alpha * (math.sqrt(2 * order + 1) + 10.0)
    lo, hi = -reach, reach
    if f.support is not None:
        lo, hi = max(lo, f.support[0]), min(hi, f.support[1])
    if lo >= hi:
        raise DomainError("support does not meet the Hermite window")
    return lo, hi


def _rule_on(f: Signal, lo, hi, freq):
    inner = sorted(p for p in f.breakpoints if lo < p < hi)
    return composite_rule([lo, *inner, hi], 64, _panel_width(freq))


def _values(f: Signal, x):
    v = np.asarray(f(x), dtype=float)
    if not np.all(np.isfinite(v)):
        raise EvaluationError(f"{f.name} is not finite on the quadrature nodes")
    return v


def _hermite_coeffs(f, order, alpha):
    lo, hi = _hermite_window(f, order, alpha)
    freq = max(math.sqrt(2 * order + 1) / alpha, _signal_scale(f))
    rule = _rule_on(f, lo, hi, freq)
    table = hermite_functions(order, rule.nodes / alpha) / math.sqrt(alpha)
    return table @ (rule.weights * _values(f, rule.nodes))


def _use_spectral(f: Signal, method: str) -> bool:
    if method not in ("auto", "spectral", "quadrature"):
        raise ConfigError(f"unknown coefficient method {method!r}")
    ok = f.band_limit is not None and f.fourier is not None
    if method == "spectral" and not ok:
        raise DomainError("spectral route needs a band-limited signal with a transform")
    return ok and method != "quadrature"


def _real_channels(f: Signal, nodes):
    vals = np.asarray(f.fourier(nodes))
    return np.real(vals).astype(float), np.imag(vals).astype(float)


def _spectral_moments(f: Signal, kmax: int, table_fn, factor: float):
    """factor * Re(i^k * int f^(xi) B_k(xi) dxi) over the band, by real channels."""
    c = f.band_limit
    rule = composite_rule([-c, c], 64, 1.0)
    re, im = _real_channels(f, rule.nodes)
    table = table_fn(kmax, rule.nodes)
    ir = table @ (rule.weights * re)
    ii = table @ (rule.weights * im)
    k = np.arange(kmax + 1) % 4
    out = np.select([k == 0, k == 1, k == 2, k == 3], [ir, -ii, -ir, ii])
    return factor * out


def legendre_moments(f: Signal, kmax: int, method: str = "auto") -> np.ndarray:
    """Classical moments <f, P_k> over (-1, 1) for k = 0..kmax.

    For band-limited signals the default route integrates the transform
    against 2 i^k j_k over the band, which keeps relative accuracy in
    moments far below the double-precision noise of direct quadrature.
    """
    if _use_spectral(f, method):
        return _spectral_moments(f, kmax, spherical_bessel_table, 2.0 / math.sqrt(2 * math.pi))
    freq = max(_signal_scale(f), kmax)
    rule = _rule_on(f, -1.0, 1.0, freq)
    return legendre_table(kmax, rule.nodes) @ (rule.weights * _values(f, rule.nodes))


def chebyshev_moments(f: Signal, kmax: int, method: str = "auto") -> np.ndarray:
    """Weighted moments <f, T_k>_{dmu} for k = 0..kmax.

    Direct route: theta-substitution, integral of f(cos t) cos(k t) over
    [0, pi].  Spectral route: transform against kappa i^k J_k.
    """
    if _use_spectral(f, method):
        kappa = chebyshev_fourier_constant()
        return _spectral_moments(f, kmax, bessel_J_table, kappa / math.sqrt(2 * math.pi))
    freq = max(_signal_scale(f), kmax)
    cuts = sorted({math.acos(p) for p in f.breakpoints if -1 < p < 1})
    rule = composite_rule([0.0, *cuts, math.pi], 64, _panel_width(freq))
    vals = _values(f, np.cos(rule.nodes))
    k = np.arange(kmax + 1)[:, None]
    return np.cos(k * rule.nodes[None, :]) @ (rule.weights * vals)


def _check_chebyshev_integrable(f: Signal):
    """Catalog signals are known to lie in L2(dmu); others must show a
    weighted mass that is stable under refinement."""
    if f.name.partition(":")[0] in CATALOG:
        return
    masses = []
    for m in (64, 128):
        rule = composite_rule([0.0, math.pi], m, math.pi / 8)
        with np.errstate(all="ignore"):
            v = np.asarray(f(np.cos(rule.nodes)), dtype=float)
        masses.append(float(rule.weights @ (v * v)))
    a, b = masses
    if not (math.isfinite(a) and math.isfinite(b)) or abs(a - b) > 1e-6 * max(abs(b), 1e-300):
        raise DomainError(f"{f.name} is not square-integrable against the Chebyshev weight")


def _legendre_norms(kmax):
    return np.sqrt(np.arange(kmax + 1) + 0.5)


def _chebyshev_norms(kmax):
    s = np.full(kmax + 1, math.sqrt(2 / math.pi))
    s[0] = math.sqrt(1 / math.pi)
    return s


def expand(f: Signal, basis: Basis | str, order: int, alpha: float = 1.0,
           method: str = "auto") -> Expansion:
    """Project ``f`` onto the first ``order + 1`` functions of ``basis``.

    Hermite variants integrate f against h_k^alpha(x) = alpha^{-1/2} h_k(x/alpha)
    over the support of f (or a window where h_order is negligible);
    Legendre and Chebyshev integrate over (-1, 1) with their own weights.
    """
    basis = Basis(basis)
    if order < 0:
        raise DomainError("order must be nonnegative")
    if basis is Basis.HERMITE:
        alpha = 1.0
    if basis in (Basis.HERMITE, Basis.SCALED_HERMITE):
        coeffs = _hermite_coeffs(f, order, alpha)
    elif basis is Basis.LEGENDRE:
        coeffs = legendre_moments(f, order, method) * _legendre_norms(order)
        alpha = 1.0
    else:
        _check_chebyshev_integrable(f)
        coeffs = chebyshev_moments(f, order, method) * _chebyshev_norms(order)
        alpha = 1.0
    return Expansion(basis, order, coeffs, alpha)


def eval_expansion(e: Expansion, x):
    """Evaluate an expansion; Legendre and Chebyshev use Clenshaw summation."""
    x = np.asarray(x, dtype=float)
    if e.basis.on_interval and np.any(np.abs(x) > 1 + 1e-12):
        raise DomainError("Legendre/Chebyshev expansions live on [-1, 1]")
    if e.basis is Basis.LEGENDRE:
        val = npleg.legval(np.clip(x, -1, 1), e.coeffs * _legendre_norms(e.order))
    elif e.basis is Basis.CHEBYSHEV:
        val = npcheb.chebval(np.clip(x, -1, 1), e.coeffs * _chebyshev_norms(e.order))
    else:
        table = hermite_functions(e.order, x / e.alpha) / math.sqrt(e.alpha)
        val = np.tensordot(e.coeffs, table, axes=1)
    return float(val) if np.ndim(val) == 0 else val


def error_norm(f: Signal, e: Expansion, interval=(-1.0, 1.0), p: str = "L2",
               m: int = 2001, weighted: bool = False) -> float:
    """||f - e|| on ``interval``.

    ``p="L2"`` uses composite Gauss-Legendre split at the signal's
    breakpoints (or, with ``weighted=True`` on [-1, 1], the Chebyshev
    measure via x = cos t); ``p="Linf"`` takes the max over ``m`` equispaced
    points.
    """
    a, b = map(float, interval)
    if not a < b:
        raise DomainError("empty interval")
    if p == "Linf":
        x = np.linspace(a, b, m)
        return float(np.max(np.abs(f(x) - eval_expansion(e, x))))
    if p != "L2":
        raise DomainError(f"unknown norm {p!r}")
    freq = max(_signal_scale(f), math.sqrt(2 * e.order + 1) / e.alpha, e.order)
    if weighted:
        if (a, b) != (-1.0, 1.0):
            raise DomainError("weighted norm is defined on [-1, 1]")
        cuts = sorted({math.acos(q) for q in f.breakpoints if -1 < q < 1})
        rule = composite_rule([0.0, *cuts, math.pi], 64, _panel_width(freq))
        x = np.cos(rule.nodes)
    else:
        rule = _rule_on(f, a, b, freq)
        x = rule.nodes
    diff = _values(f, x) - eval_expansion(e, x)
    return math.sqrt(float(rule.weights @ (diff * diff)))


def coefficient_tail(e: Expansion, N: int) -> float:
    """sqrt(sum_{k>N} coeffs[k]^2): the L2 (or L2(dmu)) distance from the order-N truncation.

    Exact by Parseval once ``e.order`` is large enough for the tail to be
    negligible, which for band-limited signals happens quickly.
    """
    tail = e.coeffs[N + 1:]
    return math.sqrt(float(tail @ tail))


# --- bounds ----------------------------------------------------------------

def _log(x):
    return math.log(x) if x > 0 else -math.inf


def bound_legendre_coeff(c: float, k: int) -> Bound:
    """(2/sqrt(2k+1)) sqrt(e/(pi c)) (ec/(2k+3))^{k+1}, bounding |<f, P_k>| / ||f||."""
    if c <= 0 or k < 0:
        raise DomainError("need c > 0 and k >= 0")
    return Bound(math.log(2) - 0.5 * math.log(2 * k + 1) + 0.5 * (1 - math.log(math.pi * c))
                 + (k + 1) * math.log(E * c / (2 * k + 3)))


def bound_chebyshev_coeff(c: float, k: int) -> Bound:
    """(1/sqrt((2k+1)c)) (ec/(2(k+1)))^{k+1}, the stated bound for |<f, T_k>_dmu| / ||f||."""
    if c <= 0 or k < 0:
        raise DomainError("need c > 0 and k >= 0")
    return Bound(-0.5 * math.log((2 * k + 1) * c) + (k + 1) * math.log(E * c / (2 * (k + 1))))


def bound_chebyshev_coeff_rigorous(c: float, k: int) -> Bound:
    """sqrt(pi) c^{k+1/2} / (2^k k! sqrt(2k+1)), bounding |<f, T_k>_dmu| / ||f||.

    Follows from <f, T_k>_dmu = (2 pi)^{-1/2} pi i^k int f^(xi) J_k(xi) dxi,
    Cauchy-Schwarz and |J_k(x)| <= |x|^k / (2^k k!).
    """
    if c <= 0 or k < 0:
        raise DomainError("need c > 0 and k >= 0")
    return Bound(0.5 * math.log(math.pi) + (k + 0.5) * math.log(c) - k * math.log(2)
                 - float(gammaln(k + 1)) - 0.5 * math.log(2 * k + 1))


def _check_legendre_regime(c, N):
    if c <= 0:
        raise DomainError("c must be positive")
    if N < E * c / 2:
        raise RegimeError(f"need N >= ec/2 = {E * c / 2:.4g}, got N={N}")


def bound_legendre_tail(c: float, N: int, p: str = "L2") -> Bound:
    """Truncation bound for f in B_c: Linf sqrt(c/(2N+5)) r^N, L2 sqrt(c) r^{N+1}, r = ec/(2N+5)."""
    _check_legendre_regime(c, N)
    r = math.log(E * c / (2 * N + 5))
    if p == "Linf":
        return Bound(0.5 * math.log(c / (2 * N + 5)) + N * r)
    if p == "L2":
        return Bound(0.5 * math.log(c) + (N + 1) * r)
    raise DomainError(f"unknown norm {p!r}")


def bound_legendre_almost(c: float, N: int, eps_T: float, eps_Omega: float,
                          which: str = "OnInterval") -> float:
    """2 eps_Omega + sqrt(c) r^{N+1} on (-1, 1); add eps_T for the global form."""
    tail = float(bound_legendre_tail(c, N, "L2"))
    if which == "OnInterval":
        return 2 * eps_Omega + tail
    if which == "Global":
        return eps_T + 2 * eps_Omega + tail
    raise DomainError(f"unknown variant {which!r}")


def bound_chebyshev_tail(c: float, N: int) -> Bound:
    """(e sqrt(c) / (2(2N+3))) (ce/(2N+4))^{N+1}, bounding the L2(dmu) tail / ||f||."""
    _check_legendre_regime(c, N)
    return Bound(1 + 0.5 * math.log(c) - math.log(2 * (2 * N + 3))
                 + (N + 1) * math.log(c * E / (2 * N + 4)))


def bound_hermite(eps_T: float, eps_Omega: float, T: float, n: int,
                  Omega: float = 2.0, empirical: float = math.nan) -> ErrorBudget:
    """2 eps_T + eps_Omega + 34 T^3 / sqrt(2n+1), relative to ||f||.

    Regime: T >= 2, Omega >= 2 and n >= max(2T^2, 2 Omega^2).
    """
    comps = {
        "2eps_T": 2 * eps_T,
        "eps_Omega": eps_Omega,
        "kernel": 34 * T ** 3 / math.sqrt(2 * n + 1),
    }
    ok = T >= 2 and Omega >= 2 and n >= max(2 * T * T, 2 * Omega * Omega)
    return ErrorBudget(empirical, sum(comps.values()), ok, comps)


def bound_hermite_practical(eps_T: float, eps_Omega: float, hs_norm_R: float) -> float:
    """eps_Omega + ||R_n||_HS + 2 eps_T with a measured Hilbert-Schmidt norm."""
    return eps_Omega + hs_norm_R + 2 * eps_T


def bound_scaled(eps_T: float, eps_c_over_alpha: float, T: float, alpha: float, n: int,
                 c: float | None = None, empirical: float = math.nan) -> ErrorBudget:
    """eps_T + eps_{c/alpha} + 34 (T/alpha)^3 / sqrt(2n+1) for K_n^alpha.

    The proof route picks up 2 eps_T rather than eps_T; both totals are kept
    in ``components`` and the larger one is the theoretical value.
    Regime: T >= 2, c >= 2/alpha, n >= max(2 (T/alpha)^2, 2 c^2).
    """
    kernel = 34 * (T / alpha) ** 3 / math.sqrt(2 * n + 1)
    stated = eps_T + eps_c_over_alpha + kernel
    proof = 2 * eps_T + eps_c_over_alpha + kernel
    comps = {
        "eps_T": eps_T,
        "eps_c_over_alpha": eps_c_over_alpha,
        "kernel": kernel,
        "stated_total": stated,
        "proof_total": proof,
    }
    ok = T >= 2 and c is not None and c >= 2 / alpha and n >= max(2 * (T / alpha) ** 2, 2 * c * c)
    return ErrorBudget(empirical, max(stated, proof), ok, comps)


# --- serialization ----------------------------------------------------------

def write_expansion_csv(e: Expansion, path) -> None:
    """Write ``#schema=1``, basis/order/alpha comments, then one coefficient per row."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write("#schema=1\n")
        fh.write(f"#basis={e.basis.value}\n#order={e.order}\n#alpha={e.alpha:.17g}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "coeff"])
        for k, v in enumerate(e.coeffs):
            w.writerow([k, f"{v:.17g}"])


def read_expansion_csv(path) -> Expansion:
    meta, rows = {}, []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                meta[key] = value
            elif line and not line.startswith("k,"):
                rows.append(float(line.split(",")[1]))
    return Expansion(Basis(meta["basis"]), int(meta["order"]), np.array(rows), float(meta["alpha"]))
