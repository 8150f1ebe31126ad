"""Deterministic CSV emission for profiles and marginals.

Fixed formatting contract: 17 significant digits, '.' decimal point, ','
separator, LF newlines — re-running a preset reproduces byte-identical files.
"""
from __future__ import annotations

import csv

import numpy as np

from .model import FieldSet, ModelParams, SpeciesSet, State


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def profile_columns(dim: int, n_species: int):
    cols = ["x"] + (["y"] if dim == 2 else [])
    cols += [f"C_{i+1}" for i in range(n_species)]
    cols += ["rho", "theta", "Gamma", "phi", "S"]
    cols += [f"mu_{i+1}" for i in range(n_species)]
    return cols


def write_profile(path, state: State, fields: FieldSet, species: SpeciesSet) -> None:
    grid = state.grid
    n_sp = species.n_species
    theta = np.tensordot(species.volume, state.concentrations, axes=1)
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(profile_columns(grid.dim, n_sp))
        if grid.dim == 1:
            for j, x in enumerate(grid.nodes):
                row = [_fmt(x)]
                row += [_fmt(state.concentrations[i][j]) for i in range(n_sp)]
                row += [
                    _fmt(fields.charge[j]),
                    _fmt(theta[j]),
                    _fmt(fields.gamma[j]),
                    _fmt(fields.phi[j]),
                    _fmt(fields.steric[j]),
                ]
                row += [_fmt(fields.chem[i][j]) for i in range(n_sp)]
                writer.writerow(row)
        else:
            for jx, x in enumerate(grid.nodes):
                for jy, y in enumerate(grid.nodes):
                    row = [_fmt(x), _fmt(y)]
                    row += [_fmt(state.concentrations[i][jx, jy]) for i in range(n_sp)]
                    row += [
                        _fmt(fields.charge[jx, jy]),
                        _fmt(theta[jx, jy]),
                        _fmt(fields.gamma[jx, jy]),
                        _fmt(fields.phi[jx, jy]),
                        _fmt(fields.steric[jx, jy]),
                    ]
                    row += [_fmt(fields.chem[i][jx, jy]) for i in range(n_sp)]
                    writer.writerow(row)


def write_marginal_x(path, state: State, species: SpeciesSet) -> None:
    """x-marginals int C_i dy (uniform dy weights), 2D only."""
    grid = state.grid
    marg = grid.dx * state.concentrations.sum(axis=2)
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x"] + [f"C_{i+1}" for i in range(species.n_species)])
        for jx, x in enumerate(grid.nodes):
            writer.writerow(
                [_fmt(x)] + [_fmt(marg[i][jx]) for i in range(species.n_species)]
            )
