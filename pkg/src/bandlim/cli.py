"""Command line entry point: ``bandlim kernel-scan|project|coeff-decay|pswf|run-all``."""
from __future__ import annotations

import argparse
import dataclasses
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import experiments as ex
from .concentration import get_signal
from .errors import BandlimError, ConfigError, ConvergenceError
from .projections import Basis

log = logging.getLogger("bandlim")

SUBCOMMANDS = ("kernel-scan", "project", "coeff-decay", "pswf")
PRESETS = ("all", "hermite", "interval", "none")
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run depends on; serializes to ``key=value`` lines."""

    subcommand: str
    signals: tuple = ()
    bases: tuple = ()
    orders: tuple = ()
    c: tuple = ()
    T: float = 1.0
    omega: float = 2.0
    alpha: float | None = None
    grid_m: int = 80
    K: int | None = None
    preset: str = "none"
    seed: int = 0
    out: str = "out"

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(_fmt(x) for x in v)
            lines.append(f"{f.name}={'' if v is None else _fmt(v)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, base: "ExperimentConfig | None" = None) -> "ExperimentConfig":
        values = {}
        for num, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, eq, value = line.partition("=")
            if not eq:
                raise ConfigError(f"line {num}: expected key=value")
            values[key.strip()] = value.strip()
        sub = values.pop("subcommand", None) or (base.subcommand if base else None)
        if sub is None:
            raise ConfigError("config names no subcommand")
        cfg = base if base is not None and base.subcommand == sub else default_config(sub)
        return cfg.replace_text(values)

    def replace_text(self, values: dict) -> "ExperimentConfig":
        """Apply string overrides, converting each to its field type."""
        fields = {f.name: f for f in dataclasses.fields(self)}
        changes = {}
        for key, raw in values.items():
            if key not in fields or key == "subcommand":
                raise ConfigError(f"unknown config key {key!r}")
            changes[key] = _convert(key, raw)
        return validate(dataclasses.replace(self, **changes))


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


_LISTS = {"signals": str, "bases": str, "orders": int, "c": float}
_SCALARS = {"T": float, "omega": float, "alpha": float, "grid_m": int, "K": int,
            "preset": str, "seed": int, "out": str}


def _convert(key, raw):
    try:
        if key in _LISTS:
            kind = _LISTS[key]
            if key == "signals":
                return tuple(_split_signals(raw))
            return tuple(kind(s) for s in raw.split(",") if s.strip())
        if raw == "" and key in ("alpha", "K"):
            return None
        return _SCALARS[key](raw)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def _split_signals(raw):
    # signal specs carry their own commas (sinc:c=10,...); a new name starts a new item
    out = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        if out and "=" in part and ":" not in part:
            out[-1] += "," + part
        else:
            out.append(part)
    return out


def default_config(sub: str) -> ExperimentConfig:
    """Defaults reproduce the reference experiments."""
    if sub == "kernel-scan":
        return ExperimentConfig(sub, orders=(10, 25, 50, 75, 100), T=1.0, grid_m=80)
    if sub == "project":
        return ExperimentConfig(sub, signals=("indicator", "hat"),
                                bases=("hermite", "scaled_hermite", "legendre", "chebyshev"),
                                orders=(40, 80), c=(100.0,), T=2.0, omega=2.0, preset="all")
    if sub == "coeff-decay":
        return ExperimentConfig(sub, c=(10.0, 50.0))
    if sub == "pswf":
        return ExperimentConfig(sub, c=(5.0,))
    raise ConfigError(f"unknown subcommand {sub!r}")


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    if cfg.subcommand not in SUBCOMMANDS:
        raise ConfigError(f"unknown subcommand {cfg.subcommand!r}")
    if cfg.subcommand == "kernel-scan" or (cfg.subcommand == "project" and cfg.preset == "none"):
        if not cfg.orders:
            raise ConfigError("orders must not be empty")
    if any(n < 0 for n in cfg.orders):
        raise ConfigError("orders must be nonnegative")
    if cfg.subcommand in ("coeff-decay", "pswf", "project") and not cfg.c:
        raise ConfigError("c must not be empty")
    if any(not (v > 0 and math.isfinite(v)) for v in cfg.c):
        raise ConfigError("c values must be positive")
    for name in ("T", "omega"):
        v = getattr(cfg, name)
        if not (v > 0 and math.isfinite(v)):
            raise ConfigError(f"{name} must be positive")
    if cfg.alpha is not None and not cfg.alpha > 0:
        raise ConfigError("alpha must be positive")
    if cfg.grid_m < 2:
        raise ConfigError("grid_m must be at least 2")
    if cfg.K is not None and cfg.K < 8:
        raise ConfigError("K must be at least 8")
    if cfg.preset not in PRESETS:
        raise ConfigError(f"preset must be one of {PRESETS}")
    for s in cfg.signals:
        get_signal(s)
    for b in cfg.bases:
        try:
            Basis(b)
        except ValueError:
            raise ConfigError(f"unknown basis {b!r}") from None
    return cfg


# --- commands -------------------------------------------------------------

def _out(cfg) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{cfg.subcommand}.config.txt").write_text(cfg.to_text(), encoding="utf-8")
    return out


def cmd_kernel_scan(cfg: ExperimentConfig) -> list[Path]:
    out = _out(cfg)
    t = ex.kernel_scan(cfg.orders, cfg.T, cfg.grid_m)
    for row in t.rows:
        log.info("n=%d E_tilde=%.5f hs=%.5f regime=%s", row[0], row[2], row[4], row[6])
    return [t.write(out), ex.plot_kernel_scan(t, out)]


def _project_runs(cfg):
    c = cfg.c[0]
    if cfg.preset == "none":
        return [ex.ProjectionRun(s, b, n, (cfg.alpha or c ** -0.5) if b == "scaled_hermite" else 1.0)
                for s in cfg.signals for b in cfg.bases for n in cfg.orders]
    runs = []
    if cfg.preset in ("all", "hermite"):
        runs += ex.hermite_runs(c, cfg.orders, cfg.alpha)
    if cfg.preset in ("all", "interval"):
        runs += ex.interval_runs((50,))
    return runs


def cmd_project(cfg: ExperimentConfig) -> list[Path]:
    out = _out(cfg)
    runs = _project_runs(cfg)
    summary, pointwise = ex.project(runs, cfg.T, cfg.omega, cfg.c[0], out)
    for row in summary.rows:
        log.info("%s %s %s n=%d alpha=%.4g L2(-1,1)=%.4g", *row[:5], row[5])
    return [summary.write(out), *ex.plot_projections(runs, pointwise, out)]


def cmd_coeff_decay(cfg: ExperimentConfig) -> list[Path]:
    out = _out(cfg)
    paths = []
    for c in cfg.c:
        t = ex.coeff_decay(c)
        bad = sum(not r[8] for r in t.rows), sum(not r[9] for r in t.rows)
        log.info("c=%g: %d Legendre and %d Chebyshev rows above the bound", c, *bad)
        paths += [t.write(out), *ex.plot_coeff_decay(t, out)]
    return paths


def cmd_pswf(cfg: ExperimentConfig) -> list[Path]:
    out = _out(cfg)
    paths = []
    for c in cfg.c:
        t, beta = ex.pswf_tables(c, cfg.K)
        log.info("c=%g K=%d trace relative error %.2e", c, t.meta["K"], t.footer["trace_rel_err"])
        paths += [t.write(out), beta.write(out), ex.plot_pswf(t, out)]
    return paths


COMMANDS = {
    "kernel-scan": cmd_kernel_scan,
    "project": cmd_project,
    "coeff-decay": cmd_coeff_decay,
    "pswf": cmd_pswf,
}


# --- argument parsing --------------------------------------------------------

def _csv_list(kind):
    def parse(text):
        try:
            return tuple(kind(s) for s in text.split(",") if s.strip())
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
    return parse


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bandlim", description="Band-limited approximation experiments.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="subcommand", required=True)
    for name in (*SUBCOMMANDS, "run-all"):
        s = sub.add_parser(name)
        s.add_argument("--config", type=Path, help="key=value config file")
        s.add_argument("--out", help="output directory")
        if name == "run-all":
            continue
        s.add_argument("--orders", type=_csv_list(int))
        s.add_argument("--c", type=_csv_list(float))
        s.add_argument("--T", type=float)
        s.add_argument("--K", type=int)
        s.add_argument("--seed", type=int)
        if name == "kernel-scan":
            s.add_argument("--grid-m", dest="grid_m", type=int)
        if name == "project":
            s.add_argument("--signal", dest="signals", action="append",
                           help="indicator|hat|sinc:c=10|gaussian (repeatable)")
            s.add_argument("--basis", dest="bases", action="append",
                           help="hermite|scaled_hermite|legendre|chebyshev (repeatable)")
            s.add_argument("--omega", type=float)
            s.add_argument("--alpha", type=float)
            s.add_argument("--preset", choices=PRESETS)
    return p


def config_from_args(args, sub: str) -> ExperimentConfig:
    cfg = default_config(sub)
    if getattr(args, "config", None) is not None:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        cfg = ExperimentConfig.from_text(text, cfg)
        if cfg.subcommand != sub:
            raise ConfigError(f"config is for {cfg.subcommand!r}, not {sub!r}")
    changes = {}
    for key in ("orders", "c", "T", "K", "seed", "grid_m", "signals", "bases", "omega", "alpha", "preset"):
        v = getattr(args, key, None)
        if v is not None:
            changes[key] = tuple(v) if isinstance(v, list) else v
    if sub == "project" and ("signals" in changes or "bases" in changes) and "preset" not in changes:
        changes["preset"] = "none"
    if args.out is not None:
        changes["out"] = args.out
    return validate(dataclasses.replace(cfg, **changes))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        if args.subcommand == "run-all":
            if args.config is not None:
                raise ConfigError("run-all takes no config file; use the subcommands")
            out = args.out or "out"
            cfgs = [dataclasses.replace(default_config(s), out=out) for s in SUBCOMMANDS]
        else:
            cfgs = [config_from_args(args, args.subcommand)]
        for cfg in cfgs:
            for path in COMMANDS[cfg.subcommand](cfg):
                print(path)
    except ConfigError as exc:
        print(f"bandlim: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"bandlim: convergence not certified: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except BandlimError as exc:
        print(f"bandlim: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
