"""Command-line front end: ``kerrqc {geometry,equilibrium,transient,neq-steady}``."""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from .errors import NumericalError
from .sweep import MODELS, ConfigError, ScenarioConfig, parse_range, run, to_csv, write_svgs

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

# option name -> (ScenarioConfig field, parser)
_OPTIONS = {
    "mass-range": ("mass_range", parse_range),
    "spin-range": ("spin_range", parse_range),
    "dr-range": ("dr_range", parse_range),
    "time-range": ("time_range", parse_range),
    "fixed-spin": ("fixed_spin", float),
    "fixed-mass": ("fixed_mass", float),
    "families": ("families", lambda s: tuple(x.strip() for x in s.split(",") if x.strip())),
    "omega": ("omega", float),
    "mu": ("mu", float),
    "coupling-k": ("coupling_k", float),
    "radial-factor": ("radial_factor", float),
    "neq-base-factor": ("neq_base_factor", float),
    "tau-star": ("tau_star", float),
    "jobs": ("jobs", int),
}


def read_config_file(path: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("_", "-")
        if key not in _OPTIONS and key not in ("out", "svg"):
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        out[key] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="kerrqc",
        description="Sweeps of detector correlations near a Kerr horizon; writes CSV.",
    )
    p.add_argument("model", choices=MODELS)
    p.add_argument("--config", metavar="PATH", help="key=value config file")
    p.add_argument("--out", metavar="PATH", help="CSV path (default: stdout)")
    p.add_argument("--svg", action="store_true", default=None,
                   help="also write SVG line plots next to --out")
    for name, (_, _) in _OPTIONS.items():
        p.add_argument(f"--{name}", dest=name.replace("-", "_"), metavar="VALUE")
    return p


def config_from_args(args: argparse.Namespace) -> ScenarioConfig:
    raw: dict[str, str] = {}
    if args.config:
        raw.update(read_config_file(args.config))
    for name in _OPTIONS:
        v = getattr(args, name.replace("-", "_"))
        if v is not None:
            raw[name] = v
    kwargs: dict = {"model": args.model}
    for name, text in raw.items():
        if name == "out":
            kwargs["out"] = text
        elif name == "svg":
            kwargs["svg"] = text.lower() in ("1", "true", "yes", "on")
        else:
            field, conv = _OPTIONS[name]
            try:
                kwargs[field] = conv(text)
            except ValueError as exc:
                raise ConfigError(f"--{name}: {exc}") from None
    if args.out is not None:
        kwargs["out"] = args.out
    if args.svg:
        kwargs["svg"] = True
    return ScenarioConfig(**kwargs)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"kerrqc: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = run(cfg)
    except NumericalError as exc:
        print(f"kerrqc: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    text = to_csv(result)
    if cfg.out:
        with open(cfg.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cfg.svg:
        stem = os.path.splitext(cfg.out)[0] if cfg.out else f"kerrqc-{cfg.model}"
        for path in write_svgs(result, stem):
            print(f"wrote {path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
