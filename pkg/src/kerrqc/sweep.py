"""
Parameter sweeps for the geometry, equilibrium, transient and two-bath
models, with CSV and SVG output.

Every model sweeps two one-parameter families of black holes: the "mass"
family (spin fixed, M from a to a + 40) and the "spin" family (M fixed, a
from 0.1 to M - 0.01). Per-point domain problems become row flags.
"""

from __future__ import annotations

import dataclasses
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import __version__
from .bath import BathSpectrum, dissipation_coeffs
from .errors import DomainError, NumericalError, ValidationError
from .geometry import (
    BlackHoleParams,
    DetectorPosition,
    horizons,
    kerr_spring_gravity,
    local_acceleration,
)
from .gksl import (
    TwoQubitHamiltonian,
    apply,
    bath_dissipator,
    commutator_super,
    eigen_structure,
    equilibrium_steady_state,
    flux,
    neq_steady_state_closed_form,
    transient_evolution,
    transient_rates,
    transition_ops,
)
from .measures import (
    CorrelationReport,
    correlation_report,
    decay_rate,
    effective_epr,
    epr,
)
from .states import density_to_pauli, bell_phi_plus, is_valid_density, validity_report

MODELS = ("geometry", "equilibrium", "transient", "neq-steady")
FAMILIES = ("mass", "spin")
REPORT_FIELDS = [f.name for f in dataclasses.fields(CorrelationReport)]
VALIDITY_FIELDS = ["hermitian_err", "trace_err", "min_eig"]


class ConfigError(ValueError):
    pass


Range = tuple[float, float, int]


def parse_range(text: str) -> Range:
    """Parse ``lo:hi:n``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"range must be lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad range {text!r}: {exc}") from None
    if n < 1 or (n == 1 and lo != hi) or hi < lo:
        raise ConfigError(f"empty or inverted range {text!r}")
    return lo, hi, n


def grid(r: Range) -> np.ndarray:
    return np.linspace(r[0], r[1], r[2])


@dataclass
class ScenarioConfig:
    model: str = "equilibrium"
    mass_range: Optional[Range] = None
    spin_range: Optional[Range] = None
    fixed_spin: float = 10.0
    fixed_mass: float = 10.01
    families: tuple[str, ...] = FAMILIES
    radial_factor: float = 1.01
    neq_base_factor: float = 1.006
    dr_range: Range = (0.0, 0.5, 100)
    omega: float = 0.1
    mu: float = 0.01
    coupling_k: Optional[float] = None
    tau_star: float = -1.0
    time_range: Range = (0.0, 100.0, 200)
    out: Optional[str] = None
    svg: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; choose from {MODELS}")
        for fam in self.families:
            if fam not in FAMILIES:
                raise ConfigError(f"unknown family {fam!r}")
        if not self.families:
            raise ConfigError("at least one family is required")
        if self.omega <= 0 or self.mu <= 0:
            raise ConfigError("omega and mu must be positive")
        if self.time_range[0] != 0.0:
            raise ConfigError("time range must start at 0")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")

    @property
    def K(self) -> float:
        return 0.05 * self.omega if self.coupling_k is None else self.coupling_k

    def resolved_ranges(self) -> tuple[Range, Range]:
        """Mass range of the mass family and spin range of the spin family."""
        n_default = 5 if self.model == "neq-steady" else 80
        a, m = self.fixed_spin, self.fixed_mass
        return (
            self.mass_range or (a, a + 40.0, n_default),
            self.spin_range or (0.1, m - 0.01, n_default),
        )

    def black_holes(self) -> list[tuple[str, float, float]]:
        """(family, mass, spin) in sweep order."""
        mass_r, spin_r = self.resolved_ranges()
        out = []
        if "mass" in self.families:
            out += [("mass", float(m), self.fixed_spin) for m in grid(mass_r)]
        if "spin" in self.families:
            out += [("spin", self.fixed_mass, float(a)) for a in grid(spin_r)]
        return out

    def echo(self) -> list[str]:
        d = dataclasses.asdict(self)
        d["mass_range"], d["spin_range"] = self.resolved_ranges()
        d["coupling_k"] = self.K
        for k in ("model", "out", "jobs", "svg"):
            d.pop(k)
        return [f"{k}={_fmt_cfg(v)}" for k, v in d.items()]


def _fmt_cfg(v) -> str:
    if isinstance(v, (tuple, list)):
        if len(v) == 3 and isinstance(v[2], int) and not isinstance(v[0], str):
            return f"{v[0]!r}:{v[1]!r}:{v[2]}"
        return ",".join(str(x) for x in v)
    return repr(v) if isinstance(v, float) else str(v)


@dataclass
class SweepResult:
    model: str
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    config: Optional[ScenarioConfig] = None

    def column(self, name: str, where: Optional[dict] = None) -> np.ndarray:
        rows = self.rows if where is None else [
            r for r in self.rows if all(r.get(k) == v for k, v in where.items())
        ]
        return np.array([r[name] for r in rows], dtype=float)


# ---------------------------------------------------------------------------
# per-point evaluation
# ---------------------------------------------------------------------------

def _nan_report() -> dict:
    return {k: math.nan for k in REPORT_FIELDS + VALIDITY_FIELDS}


def _state_columns(rho: np.ndarray, coherence_basis=None) -> tuple[dict, str]:
    v = validity_report(rho)
    if not is_valid_density(rho):
        return {**{k: math.nan for k in REPORT_FIELDS}, **v}, "invalid_state"
    rep = correlation_report(rho, coherence_basis).as_dict()
    return {**rep, **v}, ""


def _join_flags(*flags: str) -> str:
    return ";".join(f for f in flags if f)


def _bh(family, mass, spin) -> tuple[Optional[BlackHoleParams], str]:
    try:
        bh = BlackHoleParams(mass, spin)
    except DomainError as exc:
        return None, "naked_singularity" if "naked" in str(exc) else "invalid_params"
    return bh, "extremal" if bh.extremal else ""


GEOMETRY_COLUMNS = [
    "family", "mass", "spin", "radial_factor", "r_plus", "r_minus", "kappa",
    "omega_plus", "kappa_r", "temperature", "kappa_kerr", "kappa_times_4M", "flag",
]


def _geometry_point(cfg: ScenarioConfig, family, mass, spin) -> list[dict]:
    row = {k: math.nan for k in GEOMETRY_COLUMNS}
    row.update(family=family, mass=mass, spin=spin, radial_factor=cfg.radial_factor)
    bh, flag = _bh(family, mass, spin)
    if bh is not None:
        h = horizons(bh)
        kr = local_acceleration(bh, DetectorPosition(cfg.radial_factor))
        row.update(
            r_plus=h.r_plus, r_minus=h.r_minus, kappa=h.kappa, omega_plus=h.omega_plus,
            kappa_r=kr, temperature=kr / (2 * math.pi),
            kappa_kerr=kerr_spring_gravity(bh), kappa_times_4M=4 * mass * h.kappa,
        )
    row["flag"] = flag
    return [row]


EQUILIBRIUM_COLUMNS = [
    "family", "mass", "spin", "radial_factor", "kappa_r", "temperature", "R",
    "tau_star", *REPORT_FIELDS, *VALIDITY_FIELDS, "flag",
]


def _equilibrium_point(cfg: ScenarioConfig, family, mass, spin) -> list[dict]:
    row = {k: math.nan for k in EQUILIBRIUM_COLUMNS}
    row.update(family=family, mass=mass, spin=spin, radial_factor=cfg.radial_factor,
               tau_star=cfg.tau_star)
    bh, flag = _bh(family, mass, spin)
    if bh is not None:
        kr = local_acceleration(bh, DetectorPosition(cfg.radial_factor))
        coeffs = dissipation_coeffs(BathSpectrum.unruh(kr), cfg.omega, cfg.mu)
        rho = equilibrium_steady_state(coeffs.R, cfg.tau_star).to_density()
        cols, sflag = _state_columns(rho)
        row.update(kappa_r=kr, temperature=kr / (2 * math.pi), R=coeffs.R, **cols)
        flag = _join_flags(flag, sflag)
    row["flag"] = flag
    return [row]


RATE_FIELDS = ["concurrence", "coherence_l1", "mutual_info", "discord", "vn_entropy"]
TRANSIENT_COLUMNS = [
    "family", "mass", "spin", "radial_factor", "kappa_r", "R", "t_scaled", "tau",
    *REPORT_FIELDS, "entropy_production_bound", "epr",
    *[f"decay_{k}" for k in RATE_FIELDS], *VALIDITY_FIELDS, "flag",
]


def _transient_point(cfg: ScenarioConfig, family, mass, spin) -> list[dict]:
    times = grid(cfg.time_range)
    base = dict(family=family, mass=mass, spin=spin, radial_factor=cfg.radial_factor)
    bh, flag = _bh(family, mass, spin)
    rows = []
    if bh is None:
        for t in times:
            row = {k: math.nan for k in TRANSIENT_COLUMNS}
            row.update(base, t_scaled=t, tau=t / cfg.mu**2, flag=flag)
            rows.append(row)
        return rows
    kr = local_acceleration(bh, DetectorPosition(cfg.radial_factor))
    coeffs = dissipation_coeffs(BathSpectrum.unruh(kr), cfg.omega, cfg.mu)
    A, B = transient_rates(coeffs)
    p0 = density_to_pauli(bell_phi_plus())
    for t in times:
        tau = t / cfg.mu**2
        rho = transient_evolution(p0, A, B, cfg.omega, tau).to_density()
        cols, sflag = _state_columns(rho)
        row = {k: math.nan for k in TRANSIENT_COLUMNS}
        row.update(base, kappa_r=kr, R=coeffs.R, t_scaled=t, tau=tau, **cols,
                   flag=_join_flags(flag, sflag))
        rows.append(row)
    mi = np.array([r["mutual_info"] for r in rows])
    rates = epr(mi, times)
    for k, row in enumerate(rows):
        row["epr"] = rates[k]
        row["entropy_production_bound"] = mi[0] - mi[k]
        for name in RATE_FIELDS:
            row[f"decay_{name}"] = (
                0.0 if k == 0 else decay_rate(rows[0][name], row[name], times[k])
            )
    return rows


NEQ_COLUMNS = [
    "family", "mass", "spin", "delta_r", "kappa_r1", "kappa_r2", "T1", "T2",
    "Omega1", "Omega2", "p1", "p2", "p3", "p4", *REPORT_FIELDS,
    "coherence_eigen", "flux_1", "flux_2", "flux_sum", "effective_epr",
    "stationarity_residual", *VALIDITY_FIELDS, "flag",
]


def _neq_point(cfg: ScenarioConfig, family, mass, spin) -> list[dict]:
    drs = grid(cfg.dr_range)
    bh, flag = _bh(family, mass, spin)
    rows = []
    if bh is not None:
        H = TwoQubitHamiltonian(cfg.omega, cfg.omega, cfg.K)
        es = eigen_structure(H)
        ops = transition_ops(es)
        hmat = H.matrix()
        kr1 = local_acceleration(bh, DetectorPosition(cfg.neq_base_factor))
    for dr in drs:
        row = {k: math.nan for k in NEQ_COLUMNS}
        row.update(family=family, mass=mass, spin=spin, delta_r=dr)
        if bh is None:
            row["flag"] = flag
            rows.append(row)
            continue
        kr2 = local_acceleration(bh, DetectorPosition(cfg.neq_base_factor + dr))
        b1, b2 = BathSpectrum.unruh(kr1), BathSpectrum.unruh(kr2)
        rho_eig = neq_steady_state_closed_form(es, b1, b2, basis="eigen")
        rho = neq_steady_state_closed_form(es, b1, b2, basis="bare")
        L1 = bath_dissipator(es, ops, 1, b1, cfg.mu)
        L2 = bath_dissipator(es, ops, 2, b2, cfg.mu)
        L = commutator_super(hmat) + L1 + L2
        f1 = flux(L1, rho, hmat, L)
        f2 = flux(L2, rho, hmat)
        cols, sflag = _state_columns(rho)
        pflag = ""
        try:
            e_epr = effective_epr(f1.value, b1.temperature, b2.temperature)
        except DomainError:
            e_epr, pflag = math.nan, "zero_temperature"
        row.update(
            kappa_r1=kr1, kappa_r2=kr2, T1=b1.temperature, T2=b2.temperature,
            Omega1=es.Omega1, Omega2=es.Omega2,
            **dict(zip(("p1", "p2", "p3", "p4"), np.diag(rho_eig).real)),
            **cols,
            coherence_eigen=float(np.sum(np.abs(rho_eig)) - np.sum(np.abs(np.diag(rho_eig)))),
            flux_1=f1.value, flux_2=f2.value, flux_sum=f1.value + f2.value,
            effective_epr=e_epr, stationarity_residual=f1.residual,
            flag=_join_flags(flag, sflag, pflag, "" if f1.steady else "not_steady"),
        )
        rows.append(row)
    return rows


_POINT_FN = {
    "geometry": (_geometry_point, GEOMETRY_COLUMNS),
    "equilibrium": (_equilibrium_point, EQUILIBRIUM_COLUMNS),
    "transient": (_transient_point, TRANSIENT_COLUMNS),
    "neq-steady": (_neq_point, NEQ_COLUMNS),
}


def _evaluate(args) -> list[dict]:
    cfg, family, mass, spin = args
    fn, _ = _POINT_FN[cfg.model]
    try:
        return fn(cfg, family, mass, spin)
    except (NumericalError, ValidationError) as exc:
        raise NumericalError(
            f"{cfg.model}: failure at family={family} mass={mass!r} spin={spin!r}: {exc}"
        ) from exc


def run(cfg: ScenarioConfig) -> SweepResult:
    """Evaluate every grid point of ``cfg``; rows are ordered by grid index."""
    _, columns = _POINT_FN[cfg.model]
    tasks = [(cfg, *bh) for bh in cfg.black_holes()]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            chunks = list(pool.map(_evaluate, tasks))
    else:
        chunks = [_evaluate(t) for t in tasks]
    rows = [r for chunk in chunks for r in chunk]
    return SweepResult(cfg.model, list(columns), rows, cfg)


def run_geometry(cfg: ScenarioConfig) -> SweepResult:
    return run(dataclasses.replace(cfg, model="geometry"))


def run_equilibrium(cfg: ScenarioConfig) -> SweepResult:
    return run(dataclasses.replace(cfg, model="equilibrium"))


def run_transient(cfg: ScenarioConfig) -> SweepResult:
    return run(dataclasses.replace(cfg, model="transient"))


def run_neq_steady(cfg: ScenarioConfig) -> SweepResult:
    return run(dataclasses.replace(cfg, model="neq-steady"))


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(v)
    x = float(v)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.12g" % x


def to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    buf.write(f"# kerrqc {__version__} model={result.model}\n")
    if result.config is not None:
        for line in result.config.echo():
            buf.write(f"# {line}\n")
    buf.write(",".join(result.columns) + "\n")
    for row in result.rows:
        buf.write(",".join(_fmt(row[c]) for c in result.columns) + "\n")
    return buf.getvalue()


def read_csv(path_or_text: str) -> tuple[list[str], list[dict]]:
    """Parse a CSV written by :func:`to_csv` back into typed rows."""
    text = path_or_text
    if "\n" not in text:
        with open(text) as fh:
            text = fh.read()
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    columns = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        row = {}
        for c, v in zip(columns, ln.split(",")):
            if c in ("family", "flag"):
                row[c] = v
            else:
                row[c] = float(v)
        rows.append(row)
    return columns, rows


SVG_SERIES = {
    "geometry": ["kappa_r", "kappa", "kappa_kerr"],
    "equilibrium": ["concurrence", "coherence_l1", "mutual_info", "discord", "vn_entropy"],
    "transient": ["concurrence", "coherence_l1", "mutual_info", "discord", "vn_entropy"],
    "neq-steady": ["concurrence", "coherence_l1", "mutual_info", "discord", "vn_entropy"],
}


def svg_panels(result: SweepResult) -> Iterable[tuple[str, str, list[dict]]]:
    """(name, x column, rows) for each plotted panel."""
    for fam in ("mass", "spin"):
        rows = [r for r in result.rows if r["family"] == fam]
        if not rows:
            continue
        if result.model in ("geometry", "equilibrium"):
            yield fam, fam, rows
        else:
            first = (rows[0]["mass"], rows[0]["spin"])
            sub = [r for r in rows if (r["mass"], r["spin"]) == first]
            x = "t_scaled" if result.model == "transient" else "delta_r"
            yield f"{fam}-M{first[0]:g}-a{first[1]:g}", x, sub
            if result.model == "neq-steady":
                yield f"{fam}-flux-M{first[0]:g}-a{first[1]:g}", x, sub


def write_svgs(result: SweepResult, stem: str) -> list[str]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    paths = []
    for name, x, rows in svg_panels(result):
        ys = SVG_SERIES[result.model]
        if "-flux-" in name:
            ys = ["flux_1", "effective_epr"]
        fig, ax = plt.subplots(figsize=(6, 4))
        xs = [r[x] for r in rows]
        for y in ys:
            ax.plot(xs, [r[y] for r in rows], label=y)
        ax.set_xlabel(x)
        ax.set_title(f"{result.model} ({name})")
        ax.legend(fontsize="small")
        fig.tight_layout()
        path = f"{stem}-{name}.svg"
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        paths.append(path)
    return paths
