"""Discrete free energy, dissipation and steady-state residuals.

The discrete free energy uses the symmetric-form exponent
    g_i = 1/2 * z_i * phi + z_i * V0 - (v_i / v0) * S
(half weight on the self-consistent potential, full weight on the fixed
applied one, so that dE/dt = -D also holds with an external field) and uniform
dx^dim cell weights, boundary cells included, exactly as the telescoping
estimate requires.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import NonpositiveConcentration, VoidCollapse
from .model import FieldSet, ModelParams, SpeciesSet, State


@dataclass
class DiagnosticsRecord:
    time: float
    energy: float
    dissipation: float
    masses: np.ndarray
    min_concentration: np.ndarray
    max_concentration: np.ndarray
    min_gamma: float
    mu_spread: np.ndarray
    events: list = field(default_factory=list)


def discrete_energy(
    state: State,
    fields: FieldSet,
    params: ModelParams,
    species: SpeciesSet,
    guard: str = "strict",
) -> float:
    """E = w * sum_ij C_ij (ln(C_ij / (C_i^B exp(-g_ij))) - 1) + w/(v0 eta) * sum_j (S_j - Gamma_j).

    Cells with C = 0 contribute 0 (x ln x -> 0).  With eta = 0 the void term
    is an infinite additive constant with zero variation and is dropped:
    eta = 0 energies are comparable only among themselves.
    """
    if guard == "strict" and params.eta > 0 and np.any(fields.gamma <= 0):
        cell = tuple(int(c) for c in np.argwhere(fields.gamma <= 0)[0])
        raise VoidCollapse(cell, float(fields.gamma.min()))
    conc = state.concentrations
    dim = state.grid.dim
    shape = (-1,) + (1,) * dim
    applied = params.external_field.values(state.grid)
    g = (
        species.valence.reshape(shape) * (0.5 * fields.phi + applied)
        - (species.volume / params.average_volume(species)).reshape(shape) * fields.steric
    )
    bulk = species.bulk.reshape(shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        entropy = np.where(conc > 0, conc * (np.log(conc / bulk) + g - 1.0), 0.0)
    w = state.grid.cell_weight
    total = w * entropy.sum()
    if params.eta > 0:
        total += w / (params.average_volume(species) * params.eta) * (
            fields.steric - fields.gamma
        ).sum()
    return float(total)


def _face_dissipation(conc, f, dval):
    """sum over faces along the last axis of exp(-f_face) D (du)(d ln u)."""
    cl, cr = conc[..., :-1], conc[..., 1:]
    if np.any(conc <= 0):
        raise NonpositiveConcentration("dissipation needs positive concentrations")
    fl, fr = f[..., :-1], f[..., 1:]
    s = np.maximum(fl, fr)
    el, er = np.exp(fl - s), np.exp(fr - s)
    du = 2.0 * (cr * er - cl * el) / (el + er)  # exp(-f_face) * (u_r - u_l)
    dlnu = np.log(cr) + fr - np.log(cl) - fl
    return dval * float((du * dlnu).sum())


def discrete_dissipation(state: State, fields: FieldSet, species: SpeciesSet) -> float:
    """D >= 0; equals the mean-value form with beta the logarithmic mean of
    the Slotboom variables, since (a - b)(ln a - ln b) = (a - b)^2 / logmean."""
    grid = state.grid
    scale = grid.cell_weight / grid.dx**2
    total = 0.0
    for i in range(species.n_species):
        conc, f, d = state.concentrations[i], fields.drift[i], species.diffusivity[i]
        total += scale * _face_dissipation(conc, f, d)
        if grid.dim == 2:
            total += scale * _face_dissipation(conc.T, f.T, d)
    return float(total)


def steady_state_residual(
    state: State, fields: FieldSet, conc_floor: float = 1e-14
) -> np.ndarray:
    """Per-species spread max_j mu_ij - min_j mu_ij over cells with C above
    the floor; zero spread characterizes the steady state."""
    out = np.empty(state.n_species)
    for i in range(state.n_species):
        mu = fields.chem[i][state.concentrations[i] > conc_floor]
        out[i] = float(mu.max() - mu.min()) if mu.size else 0.0
    return out


def record(
    state: State,
    fields: FieldSet,
    params: ModelParams,
    species: SpeciesSet,
    guard: str = "strict",
    extra_events=(),
) -> DiagnosticsRecord:
    conc = state.concentrations
    axes = tuple(range(1, 1 + state.grid.dim))
    try:
        diss = discrete_dissipation(state, fields, species)
    except NonpositiveConcentration:
        diss = float("nan")
    return DiagnosticsRecord(
        time=state.time,
        energy=discrete_energy(state, fields, params, species, guard=guard),
        dissipation=diss,
        masses=state.masses(),
        min_concentration=conc.min(axis=axes),
        max_concentration=conc.max(axis=axes),
        min_gamma=float(fields.gamma.min()),
        mu_spread=steady_state_residual(state, fields),
        events=list(fields.events) + list(extra_events),
    )


def trace_columns(n_species: int):
    return (
        ["time", "E", "D"]
        + [f"m_{i+1}" for i in range(n_species)]
        + ["minGamma"]
        + [f"muSpread_{i+1}" for i in range(n_species)]
        + ["events"]
    )


def write_trace(path, records, n_species: int) -> None:
    """Diagnostics trace CSV, one row per recorded time level."""
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(trace_columns(n_species))
        for rec in records:
            row = (
                [_fmt(rec.time), _fmt(rec.energy), _fmt(rec.dissipation)]
                + [_fmt(v) for v in rec.masses]
                + [_fmt(rec.min_gamma)]
                + [_fmt(v) for v in rec.mu_spread]
                + [";".join(ev[0] for ev in rec.events)]
            )
            writer.writerow(row)


def _fmt(value: float) -> str:
    return format(float(value), ".17g")
