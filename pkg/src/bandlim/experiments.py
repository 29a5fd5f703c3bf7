"""The numerical experiments behind the CLI: each returns CSV-ready tables."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import plotting
from ._parallel import pmap
from .concentration import epsilon_band, epsilon_time, get_signal, sinc, sobolev_band_bound, sobolev_norm
from .csvio import write_table
from .errors import DomainError, RegimeError
from .kernels import kernel_regime, residual_bounds, residual_scan
from .projections import (
    Basis,
    ErrorBudget,
    bound_chebyshev_coeff,
    bound_chebyshev_coeff_rigorous,
    bound_hermite,
    bound_legendre_almost,
    bound_legendre_coeff,
    bound_scaled,
    chebyshev_moments,
    error_norm,
    expand,
    legendre_moments,
    write_expansion_csv,
)
from .pswf import (
    LAMBDA_FLOOR,
    MP_PIECEWISE_MAX,
    TAIL_TOL,
    certified_lower_bound_piecewise,
    chi_bracket,
    lower_bound_bk,
    lower_bound_naz,
    spectrum,
)

GRID_POINTS = 2001
# Sobolev index used for the epsilon_Omega envelope of each catalog signal
SOBOLEV_S = {"indicator": 0.25, "hat": 1.0}


@dataclass
class Table:
    stem: str
    columns: list
    rows: list
    meta: dict = field(default_factory=dict)
    footer: dict = field(default_factory=dict)

    def write(self, out: Path) -> Path:
        return write_table(Path(out) / f"{self.stem}.csv", self.columns, self.rows, self.meta, self.footer)

    def column(self, name):
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


# --- kernel scan: projection kernel against the sinc kernel ---------------------

def kernel_scan(orders, T: float, grid_m: int) -> Table:
    scans = pmap(lambda n: residual_scan(n, T, grid_m), orders)
    rows = []
    for s in scans:
        try:
            ub, hb = residual_bounds(s.n, T)
        except RegimeError:
            ub = hb = math.nan
        rows.append([s.n, s.T, s.E_tilde, ub, s.hs_norm, hb, s.regime, s.regime_ok])
    cols = ["n", "T", "E_tilde", "uniform_bound", "hs_norm", "hs_bound", "regime", "regime_ok"]
    return Table("kernel_scan", cols, rows, {"grid_m": grid_m})


def plot_kernel_scan(t: Table, out: Path):
    n = t.column("n")
    series = {"E_tilde": t.column("E_tilde"), "HS norm": t.column("hs_norm")}
    if not any(math.isnan(v) for v in t.column("uniform_bound")):
        series["17T^2/sqrt(2n+1)"] = t.column("uniform_bound")
    return plotting.line_plot(Path(out) / "kernel_scan.svg", n, series, "n", "residual", logy=True, markers=True)


# --- projections of time-limited signals ----------------------

@dataclass(frozen=True)
class ProjectionRun:
    signal: str
    basis: str
    order: int
    alpha: float = 1.0
    convention: str = ""

    @property
    def stem(self) -> str:
        tag = f"_{self.convention}" if self.convention else ""
        return f"project_{self.signal.replace(':', '_').replace('=', '')}_{self.basis}{tag}_n{self.order}"


def hermite_runs(c: float, orders, alpha: float | None = None) -> list[ProjectionRun]:
    """Unscaled and scaled Hermite on the indicator; the scaled run uses
    alpha = c^{-1/2} unless given, and alpha = c and 1/c are logged too."""
    chosen = c ** -0.5 if alpha is None else alpha
    runs = []
    for n in orders:
        runs.append(ProjectionRun("indicator", "hermite", n))
        runs.append(ProjectionRun("indicator", "scaled_hermite", n, chosen))
        runs.append(ProjectionRun("indicator", "scaled_hermite", n, c, "alpha_c"))
        runs.append(ProjectionRun("indicator", "scaled_hermite", n, 1 / c, "alpha_inv_c"))
    return runs


def interval_runs(orders) -> list[ProjectionRun]:
    return [ProjectionRun(s, b, n) for s in ("indicator", "hat")
            for b in ("legendre", "chebyshev") for n in orders]


def _budget(f, run: ProjectionRun, e, T, Omega, c) -> tuple[float, ErrorBudget]:
    """(L2(-1,1) error, error budget relative to ||f||)."""
    basis = Basis(run.basis)
    l2 = error_norm(f, e, (-1.0, 1.0))
    if basis in (Basis.HERMITE, Basis.SCALED_HERMITE):
        # Parseval: the global error of an orthogonal projection
        glob = math.sqrt(max(f.l2_norm ** 2 - float(e.coeffs @ e.coeffs), 0.0)) / f.l2_norm
        eps_T = epsilon_time(f, T)
        if basis is Basis.HERMITE:
            b = bound_hermite(eps_T, epsilon_band(f, Omega), T, run.order, Omega, glob)
        else:
            b = bound_scaled(eps_T, epsilon_band(f, c / run.alpha), T, run.alpha, run.order, c, glob)
        return l2, b
    emp = l2 / f.l2_norm
    if basis is Basis.LEGENDRE:
        if run.order == 0:
            return l2, ErrorBudget(emp, math.inf, False, {})
        # largest band with N >= ec/2, guarding the rounding at the edge
        band = min(c, 2 * run.order / math.e)
        while math.e * band / 2 > run.order:
            band = math.nextafter(band, 0.0)
        eps_O = epsilon_band(f, band)
        comps = {"band": band, "eps_T": epsilon_time(f, 1.0), "eps_Omega": eps_O}
        s = SOBOLEV_S.get(f.name)
        if s is not None:
            comps["eps_Omega_sobolev"] = sobolev_band_bound(sobolev_norm(f, s), f.l2_norm, s, band)
        theo = bound_legendre_almost(band, run.order, comps["eps_T"], eps_O, "OnInterval")
        return l2, ErrorBudget(emp, theo, comps["eps_T"] == 0.0, comps)
    # no Chebyshev bound exists for signals that are only almost band-limited
    return l2, ErrorBudget(emp, math.inf, False, {})


def run_projection(run: ProjectionRun, T: float, Omega: float, c: float):
    f = get_signal(run.signal)
    e = expand(f, run.basis, run.order, run.alpha)
    x = np.linspace(-1.0, 1.0, GRID_POINTS)
    fx, ax = f(x), e(x)
    pointwise = Table(run.stem, ["x", "f", "approx", "error"],
                      [list(r) for r in zip(x, fx, ax, fx - ax)],
                      {"signal": run.signal, "basis": run.basis, "order": run.order, "alpha": e.alpha})
    l2, budget = _budget(f, run, e, T, Omega, c)
    linf = float(np.max(np.abs(fx - ax)))
    return e, pointwise, l2, linf, budget


SUMMARY_COLUMNS = ["signal", "basis", "convention", "order", "alpha", "l2_error", "linf_error",
                   "empirical", "theoretical", "regime_ok", "holds", "components"]


def project(runs, T: float, Omega: float, c: float, out: Path | None = None) -> tuple[Table, list]:
    """Run every projection; write pointwise and coefficient CSVs when ``out`` is set."""
    results = pmap(lambda r: run_projection(r, T, Omega, c), runs)
    rows, pointwise = [], []
    for run, (e, pw, l2, linf, b) in zip(runs, results):
        comps = ";".join(f"{k}={v:.17g}" for k, v in b.components.items())
        rows.append([run.signal, run.basis, run.convention or "chosen", run.order, e.alpha, l2, linf,
                     b.empirical, b.theoretical, b.regime_ok, b.holds, comps])
        pointwise.append(pw)
        if out is not None:
            pw.write(out)
            write_expansion_csv(e, Path(out) / f"{run.stem}_coeffs.csv")
    meta = {"T": T, "Omega": Omega, "c": c}
    return Table("project_summary", SUMMARY_COLUMNS, rows, meta), pointwise


def plot_projections(runs, pointwise, out: Path):
    paths = []
    groups = {}
    for run, pw in zip(runs, pointwise):
        if run.convention:
            continue
        groups.setdefault((run.signal, run.basis), []).append((run, pw))
    for (sig, basis), items in groups.items():
        x = items[0][1].column("x")
        series = {"f": items[0][1].column("f")}
        errs = {}
        for run, pw in items:
            series[f"n={run.order}"] = pw.column("approx")
            errs[f"n={run.order}"] = pw.column("error")
        stem = items[0][0].stem.rsplit("_n", 1)[0]
        paths.append(plotting.line_plot(Path(out) / f"{stem}.svg", x, series, "x", "value", f"{sig}, {basis}"))
        paths.append(plotting.line_plot(Path(out) / f"{stem}_error.svg", x, errs, "x", "f - approx",
                                        f"{sig}, {basis}"))
    return paths


# --- coefficient decay of f_c ---------------------------------------

def coeff_decay(c: float, count: int = 60) -> Table:
    """Measured Legendre and Chebyshev coefficients of sin(cx)/(cx) against their bounds."""
    f = sinc(c)
    k0 = math.ceil(math.e * c / 2) + 1
    ks = range(k0, k0 + count)
    lk = legendre_moments(f, ks[-1])
    ck = chebyshev_moments(f, ks[-1])
    lognorm = math.log(f.l2_norm)
    rows = []
    for k in ks:
        bl = bound_legendre_coeff(c, k).log + lognorm
        bc = bound_chebyshev_coeff(c, k).log + lognorm
        br = bound_chebyshev_coeff_rigorous(c, k).log + lognorm
        ll, lc = _logabs(lk[k]), _logabs(ck[k])
        rows.append([k, lk[k], ll, bl, ck[k], lc, bc, br, ll <= bl, lc <= bc, lc <= br])
    cols = ["k", "l_k", "log_abs_l_k", "log_legendre_bound", "c_k", "log_abs_c_k",
            "log_chebyshev_bound", "log_chebyshev_bound_rigorous",
            "legendre_ok", "chebyshev_ok", "chebyshev_rigorous_ok"]
    return Table(f"coeff_decay_c{_num(c)}", cols, rows, {"c": c, "k_start": k0, "l2_norm": f.l2_norm})


def _logabs(v):
    return math.log(abs(v)) if v != 0 else -math.inf


def _num(v: float) -> str:
    return f"{v:g}".replace(".", "p")


def plot_coeff_decay(t: Table, out: Path):
    k = t.column("k")
    c = _num(t.meta["c"])
    return [
        plotting.scatter_vs_bound(Path(out) / f"coeff_decay_c{c}_legendre.svg", k, t.column("log_abs_l_k"),
                                  t.column("log_legendre_bound"), ("log |l_k|", "log bound"),
                                  f"Legendre, c={t.meta['c']:g}"),
        plotting.scatter_vs_bound(Path(out) / f"coeff_decay_c{c}_chebyshev.svg", k, t.column("log_abs_c_k"),
                                  t.column("log_chebyshev_bound"), ("log |c_k|", "log bound"),
                                  f"Chebyshev, c={t.meta['c']:g}"),
    ]


# --- PSWF spectrum ------------------------------------------------------------------

def _maybe(fn, *args):
    try:
        return fn(*args)
    except DomainError:
        return None


def pswf_tables(c: float, K: int | None = None) -> tuple[Table, Table]:
    """Row n holds lambda_n and every lower bound certifying lambda_n.

    The step-function bounds with m cells certify index m-1, so row n uses
    m = n+1.  Bounds are asserted only where lambda_n is above 1e-14 and
    the Rayleigh quotient only where psi_n's Legendre tail is negligible.
    """
    spec = spectrum(c, K)
    rows = []
    for n in range(spec.K):
        lam = float(spec.lambdas[n])
        naz = _maybe(lower_bound_naz, n + 1, c)
        bk = _maybe(lower_bound_bk, n, c)
        pw = certified_lower_bound_piecewise(n + 1, c) if n + 1 <= MP_PIECEWISE_MAX else None
        resolved = n < spec.K - 5 and spec.tail(n) < TAIL_TOL
        chi = chi_bracket(n, c, spec) if resolved else chi_bracket(n, c)
        above = lam > LAMBDA_FLOOR
        ok = above and all(b is None or b <= lam for b in
                           (naz and naz.value, bk, pw and pw.value))
        rows.append([n, lam, float(spec.galerkin_lambdas[n]), not above,
                     naz.value if naz else None, bk, pw.value if pw else None,
                     chi.lower, chi.upper, chi.rayleigh, chi.holds, ok if above else None])
    cols = ["n", "lambda", "galerkin_lambda", "below_floor", "naz_bound", "bk_bound", "piecewise_bound",
            "chi_lower", "chi_upper", "chi_rayleigh", "chi_ok", "sandwich_ok"]
    expected = 2 * c / math.pi
    footer = {"trace": spec.trace, "trace_expected": expected,
              "trace_rel_err": abs(spec.trace - expected) / expected}
    table = Table(f"pswf_c{_num(c)}", cols, rows, {"c": c, "K": spec.K, "certified": spec.certified,
                                                  "lambda_floor": LAMBDA_FLOOR}, footer)
    beta = spec.beta
    brows = [[k, *beta[k]] for k in range(spec.K)]
    btable = Table(f"pswf_c{_num(c)}_beta", ["k", *(f"n{n}" for n in range(spec.K))], brows,
                   {"c": c, "K": spec.K})
    return table, btable


def plot_pswf(t: Table, out: Path):
    n = t.column("n")
    keep = [i for i, b in enumerate(t.column("below_floor")) if not b]
    pick = lambda name: [_nan(t.column(name)[i]) for i in keep]
    series = {"lambda_n": pick("lambda"), "naz": pick("naz_bound"), "bk": pick("bk_bound"),
              "piecewise": pick("piecewise_bound")}
    return plotting.line_plot(Path(out) / f"{t.stem}.svg", [n[i] for i in keep], series, "n", "value",
                              f"c={t.meta['c']:g}", logy=True, markers=True)


def _nan(v):
    return math.nan if v is None or v == 0 else v
