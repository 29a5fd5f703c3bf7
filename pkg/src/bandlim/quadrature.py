"""Fixed, deterministic quadrature rules on finite intervals.

Gauss-Legendre rules are built by Newton iteration on the Legendre
recurrence and cached per order.  Everything here is vectorized: the
integrands are numpy callables evaluated once on the full node array.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, EvaluationError

__all__ = [
    "RuleKind",
    "QuadRule",
    "gauss_legendre_rule",
    "gauss_chebyshev_rule",
    "tanh_sinh_rule",
    "composite_rule",
    "integrate_interval",
    "integrate_piecewise",
    "integrate_chebyshev_weighted",
    "integrate_arcsine_weighted",
]

MAX_ORDER = 4096


class RuleKind(enum.Enum):
    GAUSS_LEGENDRE = "gauss-legendre"
    GAUSS_CHEBYSHEV = "gauss-chebyshev"
    TANH_SINH = "tanh-sinh"
    COMPOSITE_GL = "composite-gl"


@dataclass(frozen=True, eq=False)
class QuadRule:
    """Nodes and positive weights; ``sum(w * f(x))`` approximates the integral."""

    kind: RuleKind
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __call__(self, f: Callable) -> float:
        return _apply(f, self.nodes, self.weights)

    def mapped(self, a: float, b: float) -> "QuadRule":
        """Affine image of a rule on [-1, 1] onto [a, b]."""
        half = 0.5 * (b - a)
        return QuadRule(self.kind, self.order,
                        0.5 * (a + b) + half * self.nodes,
                        half * self.weights)


def _apply(f, nodes, weights):
    vals = np.asarray(f(nodes), dtype=float)
    if vals.shape != nodes.shape:
        vals = np.broadcast_to(vals, nodes.shape)
    if not np.all(np.isfinite(vals)):
        bad = nodes[~np.isfinite(vals)][0]
        raise EvaluationError(f"integrand is not finite at x={bad!r}")
    return float(np.dot(weights, vals))


def _legendre_pair(m, x):
    """P_m(x) and P_{m-1}(x) by the three-term recurrence."""
    p0 = np.ones_like(x)
    p1 = x.copy()
    if m == 0:
        return p0, np.zeros_like(x)
    for k in range(1, m):
        p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
    return p1, p0


@lru_cache(maxsize=64)
def gauss_legendre_rule(m: int) -> QuadRule:
    """Gauss-Legendre rule with ``m`` nodes on [-1, 1].

    Nodes are the roots of P_m found by Newton's method from the usual
    cosine guesses; weights are 2 / ((1 - x^2) P_m'(x)^2).
    """
    if not 1 <= m <= MAX_ORDER:
        raise DomainError(f"order must be in [1, {MAX_ORDER}], got {m}")
    half = (m + 1) // 2
    i = np.arange(half)
    x = np.cos(np.pi * (i + 0.75) / (m + 0.5))
    for _ in range(100):
        p, q = _legendre_pair(m, x)
        dp = m * (x * p - q) / (x * x - 1.0)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    else:
        raise ConvergenceError(f"Newton iteration for GL({m}) did not converge")
    p, q = _legendre_pair(m, x)
    dp = m * (x * p - q) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    if m % 2:
        x[-1] = 0.0
    nodes = np.concatenate([-x, x[: m // 2][::-1]])
    weights = np.concatenate([w, w[: m // 2][::-1]])
    return QuadRule(RuleKind.GAUSS_LEGENDRE, m, nodes, weights)


@lru_cache(maxsize=16)
def gauss_chebyshev_rule(m: int) -> QuadRule:
    """Gauss-Chebyshev rule for the weight (1 - x^2)^(-1/2), weights pi/m."""
    if not 1 <= m <= MAX_ORDER:
        raise DomainError(f"order must be in [1, {MAX_ORDER}], got {m}")
    j = np.arange(m)
    nodes = np.cos((2 * j + 1) * np.pi / (2 * m))[::-1].copy()
    return QuadRule(RuleKind.GAUSS_CHEBYSHEV, m, nodes, np.full(m, np.pi / m))


@lru_cache(maxsize=8)
def tanh_sinh_rule(h: float = 1.0 / 64, tmax: float = 4.5) -> QuadRule:
    """Tanh-sinh rule with the arcsine weight (1 - y^2)^(-1/2) built in.

    With y = tanh(u), u = (pi/2) sinh(t), the weighted measure becomes
    (pi/2) cosh(t) / cosh(u) dt, which has no endpoint cancellation.
    Far nodes round to +-1 in floating point but still carry weight of
    order 1e-8 in total, so they are kept; the integrand must be finite
    at the endpoints.
    """
    t = h * np.arange(-math.ceil(tmax / h), math.ceil(tmax / h) + 1)
    u = 0.5 * np.pi * np.sinh(t)
    y = np.tanh(u)
    w = h * 0.5 * np.pi * np.cosh(t) / np.cosh(u)
    return QuadRule(RuleKind.TANH_SINH, len(t), y, w)


def composite_rule(points: Sequence[float], m: int = 64,
                   max_width: float | None = 2.0) -> QuadRule:
    """Gauss-Legendre panels between consecutive ``points``.

    Each piece wider than ``max_width`` is split into equal panels.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 1 or len(pts) < 2 or np.any(np.diff(pts) <= 0):
        raise DomainError("points must be strictly increasing with length >= 2")
    base = gauss_legendre_rule(m)
    xs, ws = [], []
    for a, b in zip(pts[:-1], pts[1:]):
        npan = 1 if max_width is None else max(1, math.ceil((b - a) / max_width - 1e-12))
        edges = np.linspace(a, b, npan + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            r = base.mapped(lo, hi)
            xs.append(r.nodes)
            ws.append(r.weights)
    return QuadRule(RuleKind.COMPOSITE_GL, m, np.concatenate(xs), np.concatenate(ws))


def integrate_interval(f: Callable, a: float, b: float, m: int = 64) -> float:
    """Integrate a vectorized ``f`` over [a, b].

    A single mapped rule is used when b - a <= 4, otherwise
    ceil((b - a) / 2) equal panels of ``m`` nodes each.
    """
    if not a < b:
        raise DomainError(f"need a < b, got [{a}, {b}]")
    width = None if b - a <= 4 else 2.0
    return composite_rule([a, b], m, width)(f)


def integrate_piecewise(f: Callable, points: Sequence[float], m: int = 64,
                        max_width: float | None = 2.0) -> float:
    """Integrate over [points[0], points[-1]] with breaks at every point."""
    return composite_rule(points, m, max_width)(f)


def integrate_chebyshev_weighted(f: Callable, m: int = 64) -> float:
    """Integral of f(x) (1 - x^2)^(-1/2) over (-1, 1) by Gauss-Chebyshev."""
    return gauss_chebyshev_rule(m)(f)


def integrate_arcsine_weighted(g: Callable, h: float = 1.0 / 64) -> float:
    """Integral of g(y) (1 - y^2)^(-1/2) over (-1, 1) by tanh-sinh."""
    return tanh_sinh_rule(h)(g)
