"""Parameter sweeps producing the tabular data behind the static and dynamic studies.

A sweep is described by a :class:`SweepSpec`, normally parsed from a JSON
document. Every grid point is an independent pure evaluation; a process
pool may evaluate them, and rows are always emitted in canonical order so
that output does not depend on the worker count.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .constants import CODATA2018, CONSTANTS_VERSION, PhysicalConstants
from .gaussian import default_horizon, entanglement_series, max_entropy, normal_modes_bound
from .physics import (
    INTERACTIONS,
    TrapPair,
    couplings,
    dynamic_dip_squeezing,
    in_squeezing_bounds,
    squeezing_bounds,
    static_dip_frequency,
    zero_point,
)
from .static import lambda_first_order, lambda_nonrelativistic, two_qubit_entropy

MODES = ("static", "dynamic", "heatmap", "dip", "oracle")

STATIC_COLUMNS = ["omega_rad_s", "d_m", "delta_x_m", "delta_p_si", "lambda", "lambda_nr", "S_C", "S_CD"]
DYNAMIC_COLUMNS = ["t_s", "S_C", "S_CD", "nbar_C", "nbar_CD"]
HEATMAP_COLUMNS = ["d_m", "xi", "S_max_C", "S_max_CD", "xi_x", "xi_p", "xi_dip", "in_bounds"]
DIP_COLUMNS = ["d_m", "omega_rad_s", "omega_star_rad_s", "xi_dip", "xi_x", "xi_p"]
PROVENANCE_COLUMNS = ["artifact_version", "constants_version", "log_base", "flags"]

DEFAULTS = {
    "static": {"omega": {"log": [1e9, 1e18, 256]}, "d": [1e-7, 1e-6, 5e-5]},
    "dynamic": {"omega": 1e10, "d": 5e-5, "xi": 6.16, "t": {"horizon": 1e-9, "samples": 2048}},
    "heatmap": {
        "omega": 1e10,
        "d": {"log": [1e-7, 1e-3, 128]},
        "xi": {"linear": [-10.0, 10.0, 128]},
        "horizon_periods": 4.0,
        "scan_samples": 4096,
    },
    "dip": {"omega": 1e10, "d": {"log": [1e-7, 1e-3, 128]}},
}


class ConfigError(ValueError):
    """Invalid sweep configuration (CLI exit code 2)."""


def _axis(value, name: str) -> list[float]:
    """Expand a range description into a list of floats.

    Accepts a number, a list, ``{"log": [start, stop, num]}`` or
    ``{"linear": [start, stop, num]}``.
    """
    if value is None:
        raise ConfigError(f"missing range {name!r}")
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        out = [float(value)]
    elif isinstance(value, list):
        out = [float(v) for v in value]
    elif isinstance(value, dict) and len(value) == 1:
        (kind, args), = value.items()
        if not (isinstance(args, list) and len(args) == 3):
            raise ConfigError(f"{name}: {kind} range needs [start, stop, num]")
        start, stop, num = float(args[0]), float(args[1]), int(args[2])
        if num < 1:
            raise ConfigError(f"{name}: num must be >= 1")
        if kind == "log":
            if start <= 0 or stop <= 0:
                raise ConfigError(f"{name}: log range needs positive endpoints")
            out = list(np.geomspace(start, stop, num))
        elif kind == "linear":
            out = list(np.linspace(start, stop, num))
        else:
            raise ConfigError(f"{name}: unknown range kind {kind!r}")
    else:
        raise ConfigError(f"{name}: cannot interpret {value!r}")
    if not out:
        raise ConfigError(f"{name}: empty range")
    if not all(math.isfinite(v) for v in out):
        raise ConfigError(f"{name}: non-finite value")
    return [float(v) for v in out]


def parse_log_base(value) -> float:
    if value in (2, "2", 2.0):
        return 2.0
    if value in ("e", "E", "ln", math.e):
        return math.e
    raise ConfigError(f"log base must be 2 or e, got {value!r}")


def log_base_label(base: float) -> str:
    return "2" if base == 2.0 else "e"


@dataclass(frozen=True)
class SweepSpec:
    mode: str
    omega: tuple = ()
    d: tuple = ()
    xi: tuple = (0.0,)
    t_horizon: float | None = None
    t_samples: int = 2048
    interaction: str = "coulomb_plus_darwin"
    log_base: float = 2.0
    out: str | None = None
    workers: int = 1
    mass: float = CODATA2018.electron_mass
    horizon_periods: float = 4.0
    scan_samples: int = 4096
    constants: PhysicalConstants = CODATA2018
    oracle: dict = field(default_factory=dict)

    def canonical(self) -> dict:
        """Spec content that determines the output (worker count and path excluded)."""
        return {
            "mode": self.mode,
            "omega": list(self.omega),
            "d": list(self.d),
            "xi": list(self.xi),
            "t_horizon": self.t_horizon,
            "t_samples": self.t_samples,
            "interaction": self.interaction,
            "log_base": log_base_label(self.log_base),
            "mass": self.mass,
            "horizon_periods": self.horizon_periods,
            "scan_samples": self.scan_samples,
            "constants": self.constants.as_dict(),
            "oracle": self.oracle,
        }

    def digest(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def spec_from_config(config: dict, mode: str, overrides: dict | None = None) -> SweepSpec:
    """Build a validated :class:`SweepSpec` from a JSON-like mapping.

    Fields given in ``overrides`` (command-line flags) win over the mapping,
    which wins over the per-mode defaults. Any malformed value raises
    :class:`ConfigError`.
    """
    try:
        return _build_spec(config, mode, overrides)
    except ConfigError:
        raise
    except (TypeError, ValueError, AttributeError) as exc:
        raise ConfigError(f"malformed configuration: {exc}") from None


def _build_spec(config: dict, mode: str, overrides: dict | None) -> SweepSpec:
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}")
    cfg = dict(DEFAULTS.get(mode, {}))
    cfg.update(config or {})
    for key, value in (overrides or {}).items():
        if value is not None:
            cfg[key] = value
    if cfg.get("mode", mode) != mode:
        raise ConfigError(f"config mode {cfg['mode']!r} does not match subcommand {mode!r}")

    known = {"mode", "omega", "d", "xi", "t", "interaction", "log_base", "out", "workers", "mass",
             "horizon_periods", "scan_samples", "constants", "oracle"}
    unknown = set(cfg) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    interaction = cfg.get("interaction", "coulomb_plus_darwin")
    if interaction not in INTERACTIONS:
        raise ConfigError(f"interaction must be one of {INTERACTIONS}")

    t = cfg.get("t", {}) or {}
    if not isinstance(t, dict):
        raise ConfigError("t must be an object with horizon and samples")
    t_horizon = t.get("horizon")
    t_samples = int(t.get("samples", 2048))
    if t_horizon is not None and not (math.isfinite(float(t_horizon)) and float(t_horizon) > 0):
        raise ConfigError("t.horizon must be > 0")
    if t_samples < 1:
        raise ConfigError("t.samples must be >= 1")

    workers = cfg.get("workers")
    if workers is None:
        workers = os.environ.get("PCE_WORKERS", 1)
    try:
        workers = int(workers)
    except (TypeError, ValueError):
        raise ConfigError(f"workers must be an integer, got {workers!r}") from None
    if workers < 1:
        raise ConfigError("workers must be >= 1")

    try:
        constants = PhysicalConstants(**{**CODATA2018.as_dict(), **(cfg.get("constants") or {})})
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"constants: {exc}") from None

    needs = {"static": ("omega", "d"), "dynamic": ("omega", "d", "xi"), "heatmap": ("omega", "d", "xi"),
             "dip": ("omega", "d"), "oracle": ()}
    axes = {}
    for name in ("omega", "d", "xi"):
        if name in cfg:
            axes[name] = _axis(cfg[name], name)
        elif name in needs[mode]:
            raise ConfigError(f"missing range {name!r}")
    for name in ("omega", "d"):
        if any(v <= 0 for v in axes.get(name, [])):
            raise ConfigError(f"{name} values must be > 0")
    if mode in ("dynamic", "heatmap") and len(axes["omega"]) != 1:
        raise ConfigError(f"{mode} needs a single omega")
    if mode == "dynamic" and (len(axes["d"]) != 1 or len(axes["xi"]) != 1):
        raise ConfigError("dynamic needs a single d and xi")

    mass = float(cfg.get("mass", CODATA2018.electron_mass))
    if not mass > 0:
        raise ConfigError("mass must be > 0")
    scan = int(cfg.get("scan_samples", 4096))
    periods = float(cfg.get("horizon_periods", 4.0))
    if scan < 2 or periods <= 0:
        raise ConfigError("scan_samples must be >= 2 and horizon_periods > 0")

    return SweepSpec(
        mode=mode,
        omega=tuple(axes.get("omega", ())),
        d=tuple(axes.get("d", ())),
        xi=tuple(axes.get("xi", (0.0,))),
        t_horizon=None if t_horizon is None else float(t_horizon),
        t_samples=t_samples,
        interaction=interaction,
        log_base=parse_log_base(cfg.get("log_base", 2)),
        out=cfg.get("out"),
        workers=workers,
        mass=mass,
        horizon_periods=periods,
        scan_samples=scan,
        constants=constants,
        oracle=dict(cfg.get("oracle") or {}),
    )


def column_interactions(interaction: str) -> tuple[str, str]:
    """Interactions behind the ``*_C`` and ``*_CD`` result columns.

    The ``*_CD`` column uses the configured selector as given and the
    ``*_C`` column the same selector with the Darwin term removed, so the
    default gives Coulomb versus Coulomb plus Darwin and ``none`` zeroes both.
    """
    without_darwin = {"coulomb_plus_darwin": "coulomb_only", "coulomb_only": "coulomb_only",
                      "darwin_only": "none", "none": "none"}
    return without_darwin[interaction], interaction


# -- per-point evaluations (module level so they pickle) ---------------------

def _static_lambda(tp: TrapPair, interaction: str, const: PhysicalConstants) -> float:
    if interaction == "none":
        return 0.0
    if interaction == "coulomb_only":
        return lambda_nonrelativistic(tp, const)
    if interaction == "darwin_only":
        return lambda_first_order(tp, const) - lambda_nonrelativistic(tp, const)
    return lambda_first_order(tp, const)


def _static_point(args):
    omega, d, mass, base, interaction, const = args
    tp = TrapPair(omega, d, 0.0, mass)
    zp = zero_point(tp, const)
    lam = lambda_first_order(tp, const)
    lam_nr = lambda_nonrelativistic(tp, const)
    sel_c, sel_cd = column_interactions(interaction)
    s_c = two_qubit_entropy(_static_lambda(tp, sel_c, const), "exact", base)
    s_cd = two_qubit_entropy(_static_lambda(tp, sel_cd, const), "exact", base)
    return [omega, d, zp.dx, zp.dp, lam, lam_nr, s_c, s_cd]


def _heatmap_point(args):
    omega, d, xi, mass, base, periods, samples, interaction, const = args
    tp = TrapPair(omega, d, xi, mass)
    cpl = couplings(tp, const)
    horizon = default_horizon(cpl, periods)
    sel_c, sel_cd = column_interactions(interaction)
    s_c = max_entropy(tp, sel_c, horizon, samples, base, cpl, const)[0]
    s_cd = max_entropy(tp, sel_cd, horizon, samples, base, cpl, const)[0]
    xi_x, xi_p = squeezing_bounds(tp, const)
    row = [d, xi, s_c, s_cd, xi_x, xi_p, dynamic_dip_squeezing(omega, d, const), in_squeezing_bounds(tp, const)]
    flags = [] if normal_modes_bound(tp, cpl) else ["unbound_normal_mode"]
    return row, flags


def _dip_point(args):
    omega, d, mass, const = args
    tp = TrapPair(omega, d, 0.0, mass)
    xi_x, xi_p = squeezing_bounds(tp, const)
    return [d, omega, static_dip_frequency(d, const), dynamic_dip_squeezing(omega, d, const), xi_x, xi_p]


def _map(fn, tasks, workers: int):
    if workers <= 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    chunk = max(1, len(tasks) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=chunk))


@dataclass
class Table:
    """Result rows plus the metadata written into the CSV header."""

    columns: list[str]
    rows: list[list]
    meta: dict
    row_flags: list[list[str]] | None = None


def _meta(spec: SweepSpec, **extra) -> dict:
    meta = {
        "artifact": "pce",
        "artifact_version": __version__,
        "constants_version": CONSTANTS_VERSION,
        "constants": spec.constants.as_dict(),
        "log_base": log_base_label(spec.log_base),
        "spec_hash": spec.digest(),
        "mode": spec.mode,
        "interaction": spec.interaction,
        "column_interactions": "C=%s CD=%s" % column_interactions(spec.interaction),
    }
    meta.update(extra)
    return meta


def run_static_sweep(spec: SweepSpec) -> Table:
    """Perturbative entropies on the (d, omega) grid, d-major."""
    tasks = [(w, d, spec.mass, spec.log_base, spec.interaction, spec.constants)
             for d in spec.d for w in spec.omega]
    rows = _map(_static_point, tasks, spec.workers)
    return Table(STATIC_COLUMNS, rows, _meta(spec, state="static perturbative eigenstate, no time axis"))


def run_dynamic_series(spec: SweepSpec) -> Table:
    """S(t) and occupations with and without the Darwin coupling."""
    tp = TrapPair(spec.omega[0], spec.d[0], spec.xi[0], spec.mass)
    cpl = couplings(tp, spec.constants)
    horizon = spec.t_horizon if spec.t_horizon is not None else default_horizon(cpl, spec.horizon_periods)
    times = np.linspace(0.0, horizon, spec.t_samples)
    sel_c, sel_cd = column_interactions(spec.interaction)
    _, s_c, n_c = entanglement_series(tp, sel_c, times, spec.log_base, cpl, spec.constants)
    _, s_cd, n_cd = entanglement_series(tp, sel_cd, times, spec.log_base, cpl, spec.constants)
    rows = [list(r) for r in zip(times, s_c, s_cd, n_c, n_cd)]
    xi_x, xi_p = squeezing_bounds(tp, spec.constants)
    return Table(DYNAMIC_COLUMNS, rows, _meta(
        spec, omega_rad_s=tp.omega, d_m=tp.d, xi=tp.xi, xi_x=xi_x, xi_p=xi_p,
        in_bounds=in_squeezing_bounds(tp, spec.constants), g_c=cpl.g_c, g_d=cpl.g_d,
        omega_eff=cpl.omega_eff, horizon_s=horizon,
    ))


def run_heatmap(spec: SweepSpec) -> Table:
    """Maximum entropy over the horizon on a (d, xi) grid at fixed omega."""
    omega = spec.omega[0]
    tasks = [(omega, d, xi, spec.mass, spec.log_base, spec.horizon_periods, spec.scan_samples,
              spec.interaction, spec.constants)
             for d in spec.d for xi in spec.xi]
    results = _map(_heatmap_point, tasks, spec.workers)
    return Table(HEATMAP_COLUMNS, [r for r, _ in results], _meta(
        spec, omega_rad_s=omega,
        horizon=f"{spec.horizon_periods:g} effective periods 2*pi/omega_eff per point",
        scan_samples=spec.scan_samples,
        unbound="S_max is NA where |g_C| is large enough to unbind a normal mode",
    ), row_flags=[f for _, f in results])


def run_dip(spec: SweepSpec) -> Table:
    """Static dip frequency and dynamic dip squeezing along d, for plot overlays."""
    tasks = [(w, d, spec.mass, spec.constants) for w in spec.omega for d in spec.d]
    rows = _map(_dip_point, tasks, spec.workers)
    return Table(DIP_COLUMNS, rows, _meta(spec))


# -- output ------------------------------------------------------------------

def _cell(value) -> tuple[str, bool]:
    """Render one value; returns (text, degenerate)."""
    if isinstance(value, (bool, np.bool_)):
        return ("true" if value else "false"), False
    if isinstance(value, (int, np.integer)):
        return str(int(value)), False
    v = float(value)
    if not math.isfinite(v):
        return "NA", True
    return repr(v), False


def table_rows(table: Table) -> list[list[str]]:
    """Rendered rows including provenance columns."""
    meta = table.meta
    out = []
    extra = table.row_flags or [[] for _ in table.rows]
    for row, row_flags in zip(table.rows, extra):
        cells, flags = [], list(row_flags)
        for name, value in zip(table.columns, row):
            text, bad = _cell(value)
            cells.append(text)
            if bad:
                flags.append(f"nonfinite:{name}")
        cells += [meta["artifact_version"], meta["constants_version"], meta["log_base"],
                  ";".join(flags) if flags else "ok"]
        out.append(cells)
    return out


def render_csv(table: Table) -> str:
    """RFC 4180 CSV preceded by a ``#`` metadata block."""
    buf = io.StringIO()
    for key in sorted(table.meta):
        value = table.meta[key]
        if isinstance(value, dict):
            value = json.dumps(value, sort_keys=True)
        buf.write(f"# {key}: {value}\r\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(table.columns + PROVENANCE_COLUMNS)
    writer.writerows(table_rows(table))
    return buf.getvalue()


def csv_body(text: str) -> str:
    """CSV text without the metadata block."""
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))


def render_jsonl(table: Table) -> str:
    cols = table.columns + PROVENANCE_COLUMNS
    lines = [json.dumps(dict(zip(cols, r))) for r in table_rows(table)]
    return "\n".join(lines) + ("\n" if lines else "")


RUNNERS = {
    "static": run_static_sweep,
    "dynamic": run_dynamic_series,
    "heatmap": run_heatmap,
    "dip": run_dip,
}


def run(spec: SweepSpec) -> Table:
    return RUNNERS[spec.mode](spec)


def with_workers(spec: SweepSpec, workers: int) -> SweepSpec:
    return replace(spec, workers=workers)
