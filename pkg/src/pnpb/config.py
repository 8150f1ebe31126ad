"""Line-oriented "key = value" run configuration.

'#' starts a comment, arrays are comma lists, unknown keys are errors.  A
``preset`` key expands to the named sweep; explicit keys override every sweep
point.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from . import presets
from .errors import ParseError, ValidationError
from .kernels import KernelSpec
from .model import ExternalField, Grid, ModelParams, SpeciesSet, State, uniform_state

_SCALAR_KEYS = {
    "dim": int,
    "N": int,
    "L": float,
    "eta": float,
    "lambda": float,
    "nu": float,
    "v0": float,
    "dt": float,
    "t_end": float,
    "theta": float,
    "tol": float,
    "max_iter": int,
}
_ARRAY_KEYS = {"z", "v", "D", "C_bulk", "C_init", "output_times"}
_STRING_KEYS = {"preset", "kernel", "initial", "mode", "gamma_guard", "output_dir", "external_field"}

_KEY_TO_FIELD = {
    "dim": "dim",
    "N": "n",
    "L": "half_extent",
    "eta": "eta",
    "lambda": "lam",
    "nu": "nu",
    "v0": "v0",
    "dt": "dt",
    "t_end": "t_end",
    "kernel": "kernel",
    "z": "valence",
    "v": "volume",
    "D": "diffusivity",
    "C_bulk": "bulk",
    "C_init": "initial_values",
    "initial": "initial",
    "mode": "mode",
    "gamma_guard": "gamma_guard",
    "output_times": "output_times",
    "theta": "theta",
    "tol": "tol",
    "max_iter": "max_iter",
    "external_field": "external_field",
}


@dataclass
class RunConfig:
    """One resolvable run request: either a preset sweep or an explicit setup."""

    preset: Optional[str] = None
    output_dir: Optional[str] = None
    overrides: dict = dc_field(default_factory=dict)
    explicit: dict = dc_field(default_factory=dict)

    def points(self):
        """Expand to a list of (label, setup dict)."""
        if self.preset is not None:
            pts = presets.expand(self.preset)
            return [(label, {**cfg, **self.overrides}) for label, cfg in pts]
        defaults = dict(
            dim=1,
            n=100,
            half_extent=1.0,
            eta=0.0,
            lam=1.0,
            nu=1.0,
            kernel=None,
            v0=None,
            valence=None,
            volume=None,
            diffusivity=None,
            bulk=None,
            initial="uniform",
            initial_values=None,
            external_field=("none",),
            dt=0.005,
            t_end=1.0,
            mode="dynamics",
            gamma_guard="strict",
            output_times=(),
            theta=0.5,
            tol=1e-10,
            max_iter=2000,
        )
        cfg = {**defaults, **self.explicit}
        for key in ("valence", "volume", "diffusivity"):
            if cfg[key] is None:
                raise ValidationError(f"missing required key for '{key}'")
        if cfg["kernel"] is None:
            cfg["kernel"] = "screened-1d-picard" if cfg["dim"] == 1 else "log-2d"
        return [("run", cfg)]


def parse_config(text: str) -> RunConfig:
    """Parse the key = value format into a RunConfig (no model validation yet)."""
    raw = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ParseError(line_no, f"expected 'key = value', got '{body}'")
        key, _, value = body.partition("=")
        key, value = key.strip(), value.strip()
        if key in raw:
            raise ParseError(line_no, f"duplicate key '{key}'")
        if key in _SCALAR_KEYS:
            try:
                raw[key] = _SCALAR_KEYS[key](value)
            except ValueError as exc:
                raise ParseError(line_no, f"bad value for {key}: {exc}") from None
        elif key in _ARRAY_KEYS:
            try:
                raw[key] = tuple(float(v) for v in value.split(","))
            except ValueError as exc:
                raise ParseError(line_no, f"bad array for {key}: {exc}") from None
        elif key in _STRING_KEYS:
            raw[key] = value
        else:
            raise ParseError(line_no, f"unknown key '{key}'")

    preset = raw.pop("preset", None)
    if preset is not None and preset not in presets.PRESET_NAMES:
        raise ValidationError(f"unknown preset '{preset}'")
    output_dir = raw.pop("output_dir", None)
    if "external_field" in raw:
        raw["external_field"] = _parse_field_spec(raw["external_field"])
    mapped = {_KEY_TO_FIELD[k]: v for k, v in raw.items()}
    _sanity(mapped)
    if preset is not None:
        return RunConfig(preset=preset, output_dir=output_dir, overrides=mapped)
    return RunConfig(output_dir=output_dir, explicit=mapped)


def _parse_field_spec(value: str):
    """'none', 'linear:10' or 'linear:10,0' (coefficient per axis)."""
    kind, _, rest = value.partition(":")
    kind = kind.strip()
    if kind == "none":
        return ("none",)
    if kind == "linear":
        try:
            coeffs = tuple(float(v) for v in rest.split(","))
        except ValueError:
            raise ValidationError(f"bad external field '{value}'") from None
        return ("linear",) + coeffs
    raise ValidationError(f"unknown external field kind '{kind}'")


def _sanity(mapped: dict) -> None:
    if "eta" in mapped and mapped["eta"] < 0:
        raise ValidationError("eta must be nonnegative")
    if "nu" in mapped and mapped["nu"] <= 0:
        raise ValidationError("nu must be positive")
    if "dt" in mapped and mapped["dt"] <= 0:
        raise ValidationError("dt must be positive")
    if "mode" in mapped and mapped["mode"] not in ("dynamics", "equilibrium", "both"):
        raise ValidationError(f"unknown mode '{mapped['mode']}'")
    if "gamma_guard" in mapped and mapped["gamma_guard"] not in ("strict", "permissive"):
        raise ValidationError(f"unknown gamma guard '{mapped['gamma_guard']}'")


def gaussian_initial_2d(grid: Grid) -> np.ndarray:
    """Three Gaussian blobs: cations at (+1/5, +1/5), anions at (-1/5, -1/5),
    water at the center, all with amplitude 40/pi and width 1/sqrt(10)."""
    x, y = np.meshgrid(grid.nodes, grid.nodes, indexing="ij")
    amp = 40.0 / np.pi
    c1 = amp * np.exp(-10.0 * ((x - 0.2) ** 2 + (y - 0.2) ** 2))
    c2 = amp * np.exp(-10.0 * ((x + 0.2) ** 2 + (y + 0.2) ** 2))
    c3 = amp * np.exp(-10.0 * (x**2 + y**2))
    return np.stack([c1, c2, c3])


def build_setup(cfg: dict):
    """Materialize one sweep-point dict into (grid, params, species, state, spec)."""
    grid = Grid(dim=cfg["dim"], n=cfg["n"], half_extent=cfg["half_extent"])

    if cfg["initial"] == "uniform":
        values = cfg.get("initial_values")
        if values is None:
            raise ValidationError("uniform initial data needs C_init")
        state = uniform_state(grid, values)
    elif cfg["initial"] == "gaussians-2d":
        if grid.dim != 2:
            raise ValidationError("gaussians-2d initial data needs dim = 2")
        state = State(grid, gaussian_initial_2d(grid))
    else:
        raise ValidationError(f"unknown initial condition '{cfg['initial']}'")

    valence = np.asarray(cfg["valence"], dtype=float)
    bulk = cfg.get("bulk")
    if bulk is None:
        # default: domain-average of the initial concentrations
        axes = tuple(range(1, 1 + grid.dim))
        bulk = state.concentrations.mean(axis=axes)
    species = SpeciesSet(
        count_charged=len(valence) - 1,
        valence=valence,
        volume=cfg["volume"],
        diffusivity=cfg["diffusivity"],
        bulk=bulk,
    )

    ef = cfg.get("external_field", ("none",))
    if ef[0] == "none":
        external = ExternalField.none()
    elif ef[0] == "linear":
        external = ExternalField.linear(*ef[1:])
    else:
        raise ValidationError(f"unknown external field '{ef[0]}'")

    params = ModelParams(
        eta=cfg["eta"],
        lam=cfg["lam"],
        nu=cfg["nu"],
        kernel=cfg["kernel"],
        v0=cfg.get("v0"),
        external_field=external,
    )
    spec = KernelSpec(cfg["kernel"], grid.dim, lam=params.lam, nu=params.nu)
    return grid, params, species, state, spec
