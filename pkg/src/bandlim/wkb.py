"""WKB main terms for Hermite functions and their explicit error envelopes."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RegimeError
from .orthopoly import hermite_center_values

__all__ = [
    "PhaseParams",
    "WkbEnvelope",
    "EnvelopeForm",
    "phase",
    "phase_defect",
    "wkb_main",
    "wkb_simplified",
    "error_envelopes",
    "PhaseIncrement",
    "phase_increment_report",
]

# main term is refused this close to the turning point
TURNING_GUARD = 1e-9


@dataclass(frozen=True)
class PhaseParams:
    """Order n and lambda = sqrt(2n+1)."""

    n: int

    @property
    def lam(self) -> float:
        return math.sqrt(2 * self.n + 1)

    @property
    def lam2(self) -> int:
        return 2 * self.n + 1


class EnvelopeForm(enum.Enum):
    FULL = "full"
    HALF_DISK = "half-disk"
    SIMPLIFIED = "simplified"


@dataclass(frozen=True)
class WkbEnvelope:
    n: int
    T: float
    form: EnvelopeForm
    sup_bound: float
    lipschitz_bound: float | None


def phase(n: int, x):
    """phi_n(x), the integral of sqrt(2n+1 - t^2) from 0 to x.

    Closed form ((2n+1)/2) arcsin(x/lam) + (x/2) sqrt(2n+1 - x^2).
    """
    lam2 = 2 * n + 1
    lam = math.sqrt(lam2)
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > lam * (1 + 1e-15)):
        raise DomainError(f"|x| exceeds sqrt(2n+1) = {lam}")
    x = np.clip(x, -lam, lam)
    val = 0.5 * lam2 * np.arcsin(x / lam) + 0.5 * x * np.sqrt(np.maximum(lam2 - x * x, 0.0))
    return float(val) if val.ndim == 0 else val


def phase_defect(n: int, x):
    """e_n(x) = sqrt(2n+1) x - phi_n(x)."""
    return math.sqrt(2 * n + 1) * np.asarray(x, dtype=float) - phase(n, x)


def wkb_main(n: int, x):
    """Main WKB term of h_n(x) for |x| < sqrt(2n+1)."""
    lam = math.sqrt(2 * n + 1)
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= lam * (1 - TURNING_GUARD)):
        raise DomainError("main term is singular at the turning point |x| = sqrt(2n+1)")
    amp = (lam * lam - x * x) ** -0.25
    phi = phase(n, x)
    h0, dh1 = hermite_center_values(n // 2)
    if n % 2 == 0:
        val = math.sqrt(lam) * h0 * np.cos(phi) * amp
    else:
        val = dh1 / math.sqrt(lam) * np.sin(phi) * amp
    return float(val) if val.ndim == 0 else val


def wkb_simplified(n: int, x):
    """Simplified main term (-1)^p cos or sin(phi_n(x)) / (sqrt(pi) p^{1/4})."""
    if n < 2:
        raise DomainError("simplified form needs n >= 2")
    p = n // 2
    coef = (-1) ** p / (math.sqrt(math.pi) * p ** 0.25)
    phi = phase(n, x)
    val = coef * (np.cos(phi) if n % 2 == 0 else np.sin(phi))
    return float(val) if np.ndim(val) == 0 else val


def error_envelopes(n: int, T: float, form: EnvelopeForm) -> WkbEnvelope:
    """Sup and Lipschitz envelopes for the WKB remainder on [-T, T].

    FULL gives (5/4)(lam/(lam^2 - T^2))^{5/2} with no Lipschitz part;
    HALF_DISK gives (2/lam^3, 7/lam^{5/2});
    SIMPLIFIED gives (3T^2/(2n+1)^{5/4}, 8T^2/(2n+1)^{3/4}).
    """
    if T < 0:
        raise DomainError("T must be nonnegative")
    lam2 = 2 * n + 1
    lam = math.sqrt(lam2)
    form = EnvelopeForm(form)
    if form is EnvelopeForm.FULL:
        if T >= lam:
            raise RegimeError("full envelope needs T < sqrt(2n+1)")
        return WkbEnvelope(n, T, form, 1.25 * (lam / (lam2 - T * T)) ** 2.5, None)
    if T > lam / 2:
        raise RegimeError("envelope needs T <= sqrt(2n+1)/2")
    if form is EnvelopeForm.HALF_DISK:
        return WkbEnvelope(n, T, form, 2.0 / lam ** 3, 7.0 / lam ** 2.5)
    return WkbEnvelope(n, T, form, 3 * T * T / lam2 ** 1.25, 8 * T * T / lam2 ** 0.75)


@dataclass(frozen=True)
class PhaseIncrement:
    """One phase inequality: ``lhs <= rhs`` should hold in regime."""

    name: str
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def phase_increment_report(n: int, T: float, x: float, y: float) -> list[PhaseIncrement]:
    """Evaluate the five phase-increment inequalities at (n, T, x, y).

    Names follow the quantities bounded: ``step`` |phi_{n+1}(x) - phi_n(x)|,
    ``step_lipschitz`` its increment between x and y, ``step_sum`` the sum at
    x and y, ``residual`` the epsilon_n(x, y) of the linearised sum, and
    ``lipschitz`` |phi_n(x) - phi_n(y)|.
    """
    lam = math.sqrt(2 * n + 1)
    if not (abs(x) <= T and abs(y) <= T and T <= lam / 2):
        raise RegimeError("need |x|, |y| <= T <= sqrt(2n+1)/2")
    a0, a1 = phase(n, x), phase(n + 1, x)
    b0, b1 = phase(n, y), phase(n + 1, y)
    dist = abs(x - y)
    eps = a1 + a0 - b1 - b0 - (lam + math.sqrt(2 * n + 3)) * (x - y)
    return [
        PhaseIncrement("step", abs(a1 - a0), 3 * T / lam),
        PhaseIncrement("step_lipschitz", abs(a1 - b1 - a0 + b0), 3 / lam * dist),
        PhaseIncrement("step_sum", abs(a1 - a0 + b1 - b0), 5 * T / lam),
        PhaseIncrement("residual", abs(eps), T * T / lam * dist),
        PhaseIncrement("lipschitz", abs(a0 - b0), 1.25 * lam * dist),
    ]
