"""One-dimensional parameter sweeps, figure presets and CSV/JSON datasets."""

from __future__ import annotations

import configparser
import contextlib
import csv
import enum
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, ShgError
from .model import CavityParams, DriveSpec, steady_state
from .oracle import output_spectra_full
from .spectra import SpectrumPoint, spectrum_x_sum, spectrum_y_diff

__all__ = [
    "Axis",
    "Spacing",
    "Grid",
    "SweepConfig",
    "OUTPUT_COLUMNS",
    "FIGURE_IDS",
    "FIGURE_PARAMS",
    "figure_config",
    "figure_dataset",
    "run_sweep",
    "columns_for",
    "write_csv",
    "read_csv",
    "write_json",
    "read_json",
    "write_rows",
    "load_config",
]

OUTPUT_COLUMNS = (
    "s_x_sum",
    "s_y_diff",
    "duan_sum",
    "epr_product",
    "sigma",
    "sigma_prime",
    "regime",
    "oracle_residual",
)

CSV_MAGIC = "# shg-entangler v"


class Axis(str, enum.Enum):
    OMEGA_NORM = "OmegaNorm"
    SIGMA = "Sigma"
    CHI_BETA = "ChiBeta"
    GAMMA0 = "Gamma0"

    @property
    def column(self) -> str:
        return {"OmegaNorm": "omega_norm", "Sigma": "sigma", "ChiBeta": "chi_beta", "Gamma0": "gamma0"}[self.value]


class Spacing(str, enum.Enum):
    LINEAR = "linear"
    LOG = "log"


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    count: int
    spacing: Spacing = Spacing.LINEAR

    def __post_init__(self):
        object.__setattr__(self, "spacing", Spacing(self.spacing))
        if not self.start < self.stop:
            raise ConfigError(f"grid start {self.start} must be below stop {self.stop}")
        if self.count < 2:
            raise ConfigError("grid needs at least 2 points")
        if self.spacing is Spacing.LOG and self.start <= 0:
            raise ConfigError("log spacing requires start > 0")

    def values(self) -> np.ndarray:
        if self.spacing is Spacing.LOG:
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepConfig:
    """A 1-D sweep anchored at (params, drive, omega_norm).

    The swept axis overrides the matching anchor field: OmegaNorm replaces
    omega_norm, Sigma and ChiBeta replace the drive, Gamma0 replaces
    params.gamma0 while keeping the anchor drive.
    """

    params: CavityParams
    drive: DriveSpec
    axis: Axis
    grid: Grid
    omega_norm: float = 0.6
    outputs: tuple = ("s_x_sum", "s_y_diff", "regime")
    sink: Path | None = None
    format: str = "csv"

    def __post_init__(self):
        object.__setattr__(self, "axis", Axis(self.axis))
        unknown = set(self.outputs) - set(OUTPUT_COLUMNS)
        if unknown:
            raise ConfigError(f"unknown output columns: {sorted(unknown)}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.omega_norm < 0:
            raise ConfigError("omega_norm must be non-negative")
        if self.axis is Axis.OMEGA_NORM and self.grid.start < 0:
            raise ConfigError("normalized frequencies must be non-negative")

    def point(self, x: float):
        """(params, drive, omega_norm) at axis value ``x``."""
        params, drive, omega = self.params, self.drive, self.omega_norm
        if self.axis is Axis.OMEGA_NORM:
            omega = x
        elif self.axis is Axis.SIGMA:
            drive = DriveSpec.pump(x)
        elif self.axis is Axis.CHI_BETA:
            drive = DriveSpec.amplitude(x)
        else:
            params = params.replace(gamma0=x)
        return params, drive, omega


def columns_for(config: SweepConfig) -> list[str]:
    cols = [config.axis.column]
    for name in OUTPUT_COLUMNS:
        if name in config.outputs and name not in cols:
            cols.append(name)
            if name == "duan_sum":
                cols.append("inseparable_sum")
            elif name == "epr_product":
                cols.append("inseparable_product")
    cols.append("error")
    return cols


def _evaluate(config: SweepConfig, x: float) -> dict:
    params, drive, omega = config.point(x)
    # past threshold the symmetric continuation is reported and flagged
    steady = steady_state(params, drive, "Symmetric")
    sx = spectrum_x_sum(omega, steady.sigma_prime, params)
    sy = spectrum_y_diff(omega, steady.sigma_prime, params)
    point = SpectrumPoint.from_spectra(omega, sx, sy)
    row = point.as_dict()
    row.update(sigma=steady.sigma, sigma_prime=steady.sigma_prime, regime=steady.regime.value)
    if "oracle_residual" in config.outputs:
        full = output_spectra_full(omega, steady, params)
        row["oracle_residual"] = max(abs(sx - full[0]), abs(sy - full[3]))
    return row


def run_sweep(config: SweepConfig) -> list[dict]:
    """Evaluate every grid point; failures land in the row's ``error`` column."""
    cols = columns_for(config)
    rows = []
    for x in config.grid.values():
        x = float(x)
        try:
            full = _evaluate(config, x)
            error = ""
        except (ShgError, ValueError, ArithmeticError) as exc:
            full, error = {}, f"{type(exc).__name__}: {exc}"
        full[config.axis.column] = x
        row = {c: full.get(c) for c in cols}
        row["error"] = error
        rows.append(row)
    return rows


FIGURE_IDS = ("fig2", "fig3", "fig4", "fig5", "fig6")
FIGURE_PARAMS = CavityParams(gamma_b=0.015, gamma_c=0.005, gamma0=0.002, chi=1.0)
_META = ("sigma", "sigma_prime", "regime")


def figure_config(fig_id: str, points: int = 200) -> SweepConfig:
    """Sweep behind one of the five published figures.

    Harmonic-loss sweeps start at 1e-5 instead of 0, where the threshold
    vanishes and sigma is undefined.
    """
    both = ("s_x_sum", "s_y_diff") + _META
    product = ("epr_product",) + both
    omega_grid = Grid(0.0, 5.0, points)
    gamma0_grid = Grid(1e-5, 0.02, points)
    presets = {
        "fig2": SweepConfig(FIGURE_PARAMS, DriveSpec.pump(0.8), Axis.OMEGA_NORM, omega_grid, outputs=both),
        "fig3": SweepConfig(FIGURE_PARAMS, DriveSpec.amplitude(0.001), Axis.GAMMA0, gamma0_grid, 0.6, both),
        "fig4": SweepConfig(FIGURE_PARAMS, DriveSpec.amplitude(0.001), Axis.GAMMA0, gamma0_grid, 0.6, product),
        "fig5": SweepConfig(FIGURE_PARAMS, DriveSpec.pump(0.8), Axis.SIGMA, Grid(0.0, 1.0, points), 0.6, product),
        "fig6": SweepConfig(FIGURE_PARAMS, DriveSpec.pump(0.8), Axis.OMEGA_NORM, omega_grid, outputs=product),
    }
    try:
        return presets[fig_id]
    except KeyError:
        raise ConfigError(f"unknown figure {fig_id!r}; choose from {', '.join(FIGURE_IDS)}") from None


def figure_dataset(fig_id: str, points: int = 200) -> list[dict]:
    return run_sweep(figure_config(fig_id, points))


# ---------------------------------------------------------------- file formats


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _parse(text: str):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return float(text)
    except ValueError:
        return text


@contextlib.contextmanager
def _opened(target, **kwargs):
    if hasattr(target, "write"):
        yield target
    else:
        with open(target, "w", **kwargs) as fh:
            yield fh


def write_csv(rows: list[dict], target, columns: list[str] | None = None) -> None:
    """Write rows to a path or open text stream, floats with 17 significant digits."""
    columns = columns or (list(rows[0]) if rows else [])
    with _opened(target, newline="") as fh:
        fh.write(f"{CSV_MAGIC}{__version__}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(c)) for c in columns])


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        first = fh.readline()
        if not first.startswith(CSV_MAGIC):
            raise ConfigError(f"{path} is not a shg-entangler dataset")
        reader = csv.reader(fh)
        header = next(reader)
        rows = []
        for rec in reader:
            row = {k: _parse(v) for k, v in zip(header, rec)}
            if row.get("error") is None:
                row["error"] = ""
            rows.append(row)
        return rows


def _jsonable(value):
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def write_json(rows: list[dict], target, columns: list[str] | None = None) -> None:
    columns = columns or (list(rows[0]) if rows else [])
    data = [{c: _jsonable(row.get(c)) for c in columns} for row in rows]
    with _opened(target) as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def read_json(path) -> list[dict]:
    with open(path) as fh:
        return json.load(fh)


def write_rows(rows: list[dict], target, fmt: str = "csv", columns: list[str] | None = None) -> None:
    if fmt == "csv":
        write_csv(rows, target, columns)
    elif fmt == "json":
        write_json(rows, target, columns)
    else:
        raise ConfigError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------- config files


def _get_float(section, key, default=None):
    raw = section.get(key)
    if raw is None:
        if default is None:
            raise ConfigError(f"missing [{section.name}] {key}")
        return default
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section.name}] {key} = {raw!r} is not a number") from None


def load_config(path) -> SweepConfig:
    """Read a SweepConfig from an INI-style file.

    Sections mirror the dataclass fields::

        [cavity]
        gamma_b = 0.015
        gamma_c = 0.005
        gamma0 = 0.002
        chi = 1.0

        [drive]
        sigma = 0.8          ; or chi_beta = 0.001

        [sweep]
        axis = OmegaNorm     ; OmegaNorm | Sigma | ChiBeta | Gamma0
        start = 0
        stop = 5
        count = 200
        spacing = linear
        omega_norm = 0.6     ; anchor frequency for non-frequency sweeps

        [output]
        columns = s_x_sum, s_y_diff, epr_product, regime
        path = sweep.csv
        format = csv
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for name in ("cavity", "drive", "sweep"):
        if not parser.has_section(name):
            raise ConfigError(f"config lacks a [{name}] section")
    cav, drv, swp = parser["cavity"], parser["drive"], parser["sweep"]
    try:
        params = CavityParams(
            gamma_b=_get_float(cav, "gamma_b"),
            gamma_c=_get_float(cav, "gamma_c", 0.0),
            gamma0=_get_float(cav, "gamma0"),
            chi=_get_float(cav, "chi", 1.0),
            tau=_get_float(cav, "tau", 1.0),
        )
        if ("sigma" in drv) == ("chi_beta" in drv):
            raise ConfigError("[drive] needs exactly one of sigma or chi_beta")
        drive = DriveSpec.pump(_get_float(drv, "sigma")) if "sigma" in drv else DriveSpec.amplitude(_get_float(drv, "chi_beta"))
        count = swp.get("count", "200")
        if not count.isdigit():
            raise ConfigError(f"[sweep] count = {count!r} is not a positive integer")
        grid = Grid(_get_float(swp, "start"), _get_float(swp, "stop"), int(count), swp.get("spacing", "linear"))
        out = parser["output"] if parser.has_section("output") else {}
        columns = tuple(c.strip() for c in out.get("columns", "s_x_sum, s_y_diff, regime").split(",") if c.strip())
        sink = out.get("path")
        return SweepConfig(
            params=params,
            drive=drive,
            axis=Axis(swp.get("axis", "OmegaNorm")),
            grid=grid,
            omega_norm=_get_float(swp, "omega_norm", 0.6),
            outputs=columns,
            sink=Path(sink) if sink else None,
            format=out.get("format", "csv"),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def with_sink(config: SweepConfig, path, fmt: str | None = None) -> SweepConfig:
    return replace(config, sink=Path(path), format=fmt or config.format)
