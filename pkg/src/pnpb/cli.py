"""Batch front end: `pnpb run <config>`, `pnpb presets`, `pnpb verify <config>`.

Exit codes: 0 ok, 1 configuration/validation error, 2 solver failure.
The output root can be overridden with the PNPB_OUTPUT_ROOT environment
variable.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import diagnostics, presets
from .config import build_setup, parse_config
from .equilibrium import solve_equilibrium
from .errors import (
    DimensionMismatch,
    NonPositiveBulkVoid,
    NonPositiveTotalVoid,
    ParseError,
    PnpbError,
    ValidationError,
)

_VALIDATION_ERRORS = (
    ValidationError,
    NonPositiveBulkVoid,
    NonPositiveTotalVoid,
    DimensionMismatch,
)
from .kernels import build_tensor
from .model import validate
from .output import write_marginal_x, write_profile
from .scheme import run_dynamics

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SOLVER = 2


def _output_root(config_dir: str | None) -> Path:
    env = os.environ.get("PNPB_OUTPUT_ROOT")
    if env:
        return Path(env)
    return Path(config_dir) if config_dir else Path("pnpb-out")


def run_point(label: str, cfg: dict, out_dir: Path) -> None:
    """Run one sweep point and write its CSV outputs."""
    grid, params, species, state, spec = build_setup(cfg)
    validate(params, species, state)
    table = build_tensor(spec, grid)
    guard = cfg.get("gamma_guard", "strict")
    mode = cfg.get("mode", "dynamics")
    out_dir.mkdir(parents=True, exist_ok=True)

    if mode in ("dynamics", "both"):
        records = []

        def diag_hook(step_index, st, fields, trace):
            records.append(
                diagnostics.record(st, fields, params, species, guard=guard)
            )

        result = run_dynamics(
            state,
            table,
            params,
            species,
            dt=cfg["dt"],
            t_end=cfg["t_end"],
            guard=guard,
            save_times=cfg.get("output_times", ()),
            hooks=[diag_hook],
        )
        diagnostics.write_trace(out_dir / "trace.csv", records, species.n_species)
        for t, saved in sorted(result.saved_states.items()):
            from .fields import compute_fields

            fl = compute_fields(saved, table, params, species, guard=guard)
            stem = f"t{t:g}"
            write_profile(out_dir / f"profile_{stem}.csv", saved, fl, species)
            if grid.dim == 2:
                write_marginal_x(out_dir / f"marginal_x_{stem}.csv", saved, species)

    if mode in ("equilibrium", "both"):
        report = solve_equilibrium(
            state,
            table,
            params,
            species,
            theta=cfg.get("theta", 0.5),
            tol=cfg.get("tol", 1e-10),
            max_iter=cfg.get("max_iter", 2000),
        )
        write_profile(
            out_dir / "profile_equilibrium.csv", report.state, report.fields, species
        )
        if grid.dim == 2:
            write_marginal_x(out_dir / "marginal_x_equilibrium.csv", report.state, species)
        logger.info(
            "%s: equilibrium in %d iterations (update %.2e, energy %.6e)",
            label, report.iterations, report.final_update, report.energy,
        )


def cmd_run(args) -> int:
    try:
        text = Path(args.config).read_text()
        config = parse_config(text)
        points = config.points()
    except (OSError, ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    root = _output_root(config.output_dir)
    if config.preset:
        root = root / config.preset
    failures = 0
    for label, cfg in points:
        out_dir = root / label
        try:
            run_point(label, cfg, out_dir)
            print(f"{label}: ok -> {out_dir}")
        except _VALIDATION_ERRORS as exc:
            print(f"{label}: validation error: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
        except PnpbError as exc:
            # solver failure (incl. strict-mode void collapse) aborts this
            # sweep point only
            print(f"{label}: solver failure: {exc}", file=sys.stderr)
            failures += 1
    return EXIT_SOLVER if failures else EXIT_OK


def cmd_verify(args) -> int:
    try:
        text = Path(args.config).read_text()
        config = parse_config(text)
        for label, cfg in config.points():
            grid, params, species, state, _spec = build_setup(cfg)
            validate(params, species, state)
            print(f"{label}: valid")
    except (OSError, PnpbError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_presets(_args) -> int:
    for name in presets.PRESET_NAMES:
        labels = ", ".join(label for label, _ in presets.expand(name))
        print(f"{name}: {labels}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="pnpb", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a configuration or preset sweep")
    p_run.add_argument("config")
    p_run.set_defaults(func=cmd_run)
    p_ver = sub.add_parser("verify", help="validate a configuration only")
    p_ver.add_argument("config")
    p_ver.set_defaults(func=cmd_verify)
    p_pre = sub.add_parser("presets", help="list available presets")
    p_pre.set_defaults(func=cmd_presets)
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
