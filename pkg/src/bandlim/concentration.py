"""Test signals with closed-form Fourier transforms and their concentration.

Fourier transforms follow f^(w) = (2 pi)^{-1/2} int f(t) e^{-itw} dt, so
the Gaussian e^{-x^2/2} is its own transform.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import erfc, sici

from .errors import ConfigError, DomainError, EvaluationError
from .quadrature import integrate_piecewise

__all__ = [
    "Signal",
    "ConcentrationReport",
    "indicator",
    "hat",
    "sinc",
    "gaussian",
    "get_signal",
    "CATALOG",
    "epsilon_time",
    "epsilon_band",
    "sobolev_norm",
    "sobolev_band_bound",
    "concentration_report",
]

PARSEVAL_TOL = 1e-8
TAIL_FLOOR = 1e-14
MAX_CUTOFF = 1e6


@dataclass(frozen=True, eq=False)
class Signal:
    """A real test function on the line.

    ``time_tail(T)`` and ``band_tail(W)`` return the squared L2 mass of f
    outside [-T, T] and of f^ outside [-W, W] when closed forms exist.
    ``fourier_decay = (C, p)`` certifies |f^(w)|^2 <= C |w|^{-p} for |w| >= 1.
    """

    name: str
    eval: Callable
    l2_norm: float
    fourier: Callable | None = None
    support: tuple[float, float] | None = None
    breakpoints: tuple[float, ...] = ()
    band_limit: float | None = None
    time_tail: Callable | None = None
    band_tail: Callable | None = None
    fourier_decay: tuple[float, float] | None = None
    tags: str = ""
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.eval(np.asarray(x, dtype=float))

    @classmethod
    def from_function(cls, name, fn, support=None, breakpoints=(), tags=""):
        """Wrap a vectorized callable; the norm is found by quadrature."""
        sig = cls(name, fn, 1.0, support=support, breakpoints=tuple(breakpoints), tags=tags)
        if support is None:
            raise DomainError("ad-hoc signals need a finite support")
        mass = integrate_piecewise(lambda x: fn(x) ** 2, _pieces(support, breakpoints), 64, 0.5)
        return cls(name, fn, math.sqrt(mass), support=tuple(support),
                   breakpoints=tuple(breakpoints), tags=tags)

    @property
    def support_radius(self) -> float | None:
        if self.support is None:
            return None
        return max(abs(self.support[0]), abs(self.support[1]))


def _pieces(interval, breakpoints):
    a, b = interval
    inner = sorted(p for p in breakpoints if a < p < b)
    return [a, *inner, b]


def _sine_tail(a):
    """Integral of sin^2(u)/u^2 over (a, inf), for a >= 0."""
    a = np.asarray(a, dtype=float)
    si, _ = sici(2 * a)
    with np.errstate(divide="ignore", invalid="ignore"):
        first = np.where(a > 0, np.sin(a) ** 2 / a, 0.0)
    return first + 0.5 * math.pi - si


def _sine4_tail(a):
    """Integral of sin^4(u)/u^4 over (a, inf), for a >= 0."""
    a = float(a)
    if a < 1.0:
        head = 0.0 if a == 0 else integrate_piecewise(
            lambda u: np.sinc(u / math.pi) ** 4, [0.0, a], 32, None)
        return math.pi / 3 - head
    s, c = math.sin(a), math.cos(a)
    si2, _ = sici(2 * a)
    si4, _ = sici(4 * a)
    return (2 * si2 / 3 - 4 * si4 / 3 + math.pi / 3 - 8 * s ** 4 / (3 * a)
            + 2 * s * s / a + 2 * s ** 3 * c / (3 * a * a) + s ** 4 / (3 * a ** 3))


def indicator() -> Signal:
    """1 on [-1/2, 1/2]."""
    return _register(Signal(
        "indicator",
        lambda x: np.where(np.abs(x) <= 0.5, 1.0, 0.0),
        1.0,
        fourier=lambda w: math.sqrt(2 / math.pi) * 0.5 * np.sinc(np.asarray(w) / (2 * math.pi)),
        support=(-0.5, 0.5),
        breakpoints=(-0.5, 0.5),
        time_tail=lambda T: max(0.0, 1.0 - 2.0 * T),
        band_tail=lambda W: 2 / math.pi * float(_sine_tail(0.5 * W)),
        fourier_decay=(2 / math.pi, 2.0),
        tags="discontinuous; H^s for s < 1/2",
    ))


def hat() -> Signal:
    """(1 - |x|) on [-1, 1]."""
    return _register(Signal(
        "hat",
        lambda x: np.maximum(1.0 - np.abs(x), 0.0),
        math.sqrt(2.0 / 3.0),
        fourier=lambda w: np.sinc(np.asarray(w) / (2 * math.pi)) ** 2 / math.sqrt(2 * math.pi),
        support=(-1.0, 1.0),
        breakpoints=(-1.0, 0.0, 1.0),
        time_tail=lambda T: 2.0 * max(0.0, 1.0 - T) ** 3 / 3.0,
        band_tail=lambda W: 2 / math.pi * _sine4_tail(0.5 * W),
        fourier_decay=(8 / math.pi, 4.0),
        tags="continuous; H^s for s < 3/2",
    ))


def sinc(c: float = 10.0) -> Signal:
    """f_c(x) = sin(cx)/(cx), band-limited to [-c, c]."""
    if c <= 0:
        raise DomainError("c must be positive")
    height = math.sqrt(math.pi / 2) / c
    return _register(Signal(
        f"sinc:c={c:g}",
        lambda x: np.sinc(c * np.asarray(x) / math.pi),
        math.sqrt(math.pi / c),
        fourier=lambda w: np.where(np.abs(w) < c, height, 0.0),
        band_limit=float(c),
        time_tail=lambda T: 2 / c * float(_sine_tail(c * T)),
        band_tail=lambda W: math.pi * max(0.0, c - W) / c ** 2,
        tags="band-limited",
        params={"c": float(c)},
    ))


def gaussian() -> Signal:
    """e^{-x^2/2}, its own Fourier transform."""
    g = lambda x: np.exp(-0.5 * np.asarray(x) ** 2)
    tail = lambda T: math.sqrt(math.pi) * float(erfc(T))
    return _register(Signal(
        "gaussian", g, math.pi ** 0.25, fourier=g,
        time_tail=tail, band_tail=tail, tags="smooth",
    ))


def _bulk_mass(fn, radius, breakpoints, panel):
    pts = _pieces((-radius, radius), breakpoints)
    return integrate_piecewise(lambda x: np.abs(fn(x)) ** 2, pts, 64, panel)


def _register(sig: Signal) -> Signal:
    """Parseval self-check: time and frequency masses must match l2_norm^2."""
    target = sig.l2_norm ** 2
    if sig.support is not None:
        t_mass = _bulk_mass(sig.eval, sig.support_radius, sig.breakpoints, 0.5)
    else:
        X = 60.0
        t_mass = _bulk_mass(sig.eval, X, (), 0.25) + sig.time_tail(X)
    B = sig.band_limit if sig.band_limit is not None else 400.0
    f_mass = _bulk_mass(sig.fourier, B, (), 0.5) + sig.band_tail(B)
    for label, mass in (("time", t_mass), ("frequency", f_mass)):
        if abs(mass - target) > PARSEVAL_TOL * target:
            raise EvaluationError(f"{sig.name}: {label}-side mass {mass!r} != {target!r}")
    return sig


CATALOG = {
    "indicator": indicator,
    "hat": hat,
    "sinc": sinc,
    "gaussian": gaussian,
}


def get_signal(spec: str) -> Signal:
    """Build a catalog signal from ``name[:key=value,...]``, e.g. ``sinc:c=10``."""
    name, _, rest = spec.strip().partition(":")
    if name not in CATALOG:
        raise ConfigError(f"unknown signal {name!r}; choose from {sorted(CATALOG)}")
    kwargs = {}
    for item in filter(None, rest.split(",")):
        key, eq, value = item.partition("=")
        if not eq:
            raise ConfigError(f"bad signal parameter {item!r}")
        try:
            kwargs[key.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"bad signal parameter {item!r}") from None
    try:
        return CATALOG[name](**kwargs)
    except TypeError as exc:
        raise ConfigError(f"{spec}: {exc}") from None


def _tail_quadrature(fn, start):
    """Mass of |fn|^2 on |x| > start, integrating out to a negligible cutoff."""
    X = max(2.0 * start, start + 8.0)
    while max(abs(fn(X)) ** 2, abs(fn(-X)) ** 2) >= TAIL_FLOOR:
        X *= 2.0
        if X > MAX_CUTOFF:
            raise DomainError("tail does not decay; integrand not integrable")
    sq = lambda x: np.abs(fn(x)) ** 2
    return integrate_piecewise(sq, [start, X], 64, 2.0) + integrate_piecewise(sq, [-X, -start], 64, 2.0)


def _relative(mass, norm):
    return min(1.0, max(0.0, math.sqrt(max(mass, 0.0)) / norm))


def epsilon_time(f: Signal, T: float) -> float:
    """sqrt(int_{|t|>T} |f|^2) / ||f||, clamped to [0, 1]."""
    if T <= 0:
        raise DomainError("T must be positive")
    if f.support is not None and T >= f.support_radius:
        return 0.0
    if f.time_tail is not None:
        return _relative(f.time_tail(T), f.l2_norm)
    if f.support is not None:
        a, b = f.support
        mass = 0.0
        if b > T:
            mass += integrate_piecewise(lambda x: f.eval(x) ** 2, _pieces((T, b), f.breakpoints), 64, 0.5)
        if a < -T:
            mass += integrate_piecewise(lambda x: f.eval(x) ** 2, _pieces((a, -T), f.breakpoints), 64, 0.5)
        return _relative(mass, f.l2_norm)
    return _relative(_tail_quadrature(f.eval, T), f.l2_norm)


def epsilon_band(f: Signal, Omega: float) -> float:
    """sqrt(int_{|w|>Omega} |f^|^2) / ||f||, clamped to [0, 1]."""
    if Omega <= 0:
        raise DomainError("Omega must be positive")
    if f.band_limit is not None and Omega >= f.band_limit:
        return 0.0
    if f.band_tail is not None:
        return _relative(f.band_tail(Omega), f.l2_norm)
    if f.fourier is None:
        raise DomainError(f"{f.name} has no Fourier transform")
    return _relative(_tail_quadrature(f.fourier, Omega), f.l2_norm)


def sobolev_norm(f: Signal, s: float, cutoff: float = 2000.0) -> float:
    """(int (1+|w|)^{2s} |f^(w)|^2 dw)^{1/2}.

    Quadrature on [-cutoff, cutoff]; beyond it the signal's ``fourier_decay``
    envelope supplies an upper bound for the remainder, so the result never
    underestimates the norm.  Returns inf when that envelope does not make
    the weight integrable.
    """
    if not 0 < s <= 2:
        raise DomainError("s must lie in (0, 2]")
    if f.fourier is None:
        raise DomainError(f"{f.name} has no Fourier transform")
    W = cutoff if f.band_limit is None else f.band_limit
    integrand = lambda w: (1 + np.abs(w)) ** (2 * s) * np.abs(f.fourier(w)) ** 2
    mass = integrate_piecewise(integrand, [-W, W], 64, 1.0)
    if f.band_limit is None and f.fourier_decay is not None:
        C, p = f.fourier_decay
        if p - 2 * s <= 1:
            return math.inf
        # (1+w)^{2s} <= (1+1/W)^{2s} w^{2s} on w >= W
        mass += 2 * C * (1 + 1 / W) ** (2 * s) * W ** (2 * s + 1 - p) / (p - 2 * s - 1)
    return math.sqrt(mass)


def sobolev_band_bound(hs_norm: float, l2_norm: float, s: float, Omega: float) -> float:
    """(1 + Omega)^{-s} ||f||_{H^s} / ||f||, an upper bound for epsilon_band."""
    if s <= 0 or Omega < 0 or hs_norm <= 0 or l2_norm <= 0:
        raise DomainError("need s > 0, Omega >= 0 and positive norms")
    return (1 + Omega) ** (-s) * hs_norm / l2_norm


@dataclass(frozen=True)
class ConcentrationReport:
    T: float
    Omega: float
    eps_T: float
    eps_Omega: float


def concentration_report(f: Signal, T: float, Omega: float) -> ConcentrationReport:
    return ConcentrationReport(T, Omega, epsilon_time(f, T), epsilon_band(f, Omega))
