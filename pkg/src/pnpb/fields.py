"""Derived cell fields: charge, potential, void fraction, steric potential,
drift exponents, Slotboom variables and chemical potentials."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonpositiveConcentration, VoidCollapse
from .kernels import KernelTable, convolve
from .model import FieldSet, ModelParams, SpeciesSet, State

#: floor used inside the logarithm in permissive mode; raw Gamma is kept
GAMMA_FLOOR = 1e-14


@dataclass
class SlotboomVars:
    """u_i = C_i / exp(-f_i); a uniform u_i means zero flux for species i."""

    u: np.ndarray


def compute_fields(
    state: State,
    table: KernelTable,
    params: ModelParams,
    species: SpeciesSet,
    guard: str = "strict",
) -> FieldSet:
    """Evaluate all derived fields of ``state``.

    guard selects what happens at cells with nonpositive void fraction:
    "strict" raises VoidCollapse, "permissive" clamps Gamma inside the log
    only and records an event (the raw Gamma is reported unchanged).
    """
    conc = state.concentrations
    k = species.count_charged
    events = []

    charge = np.tensordot(species.valence[:k], conc[:k], axes=1)
    phi = convolve(table, charge)

    gamma = 1.0 - params.eta * np.tensordot(species.volume, conc, axes=1)
    gamma_b = params.gamma_bulk(species)
    if params.eta == 0:
        steric = np.zeros_like(gamma)
    else:
        bad = gamma <= 0
        if np.any(bad):
            cell = tuple(int(c) for c in np.argwhere(bad)[0])
            if guard == "strict":
                raise VoidCollapse(cell, float(gamma[bad].min()))
            events.append(
                ("VoidCollapse", state.time, cell, float(gamma[bad].min()))
            )
        steric = np.log(np.maximum(gamma, GAMMA_FLOOR) / gamma_b)

    v0 = params.average_volume(species)
    applied = params.external_field.values(state.grid)
    total_pot = phi + applied
    drift = (
        species.valence.reshape((-1,) + (1,) * state.grid.dim) * total_pot
        - (species.volume / v0).reshape((-1,) + (1,) * state.grid.dim) * steric
    )

    with np.errstate(divide="ignore", invalid="ignore"):
        chem = np.where(
            conc > 0,
            np.log(conc / species.bulk.reshape((-1,) + (1,) * state.grid.dim)) + drift,
            np.nan,
        )
    if np.any(conc <= 0):
        events.append(("NonpositiveConcentration", state.time, int((conc <= 0).sum())))

    return FieldSet(
        gamma=gamma,
        steric=steric,
        charge=charge,
        phi=phi,
        drift=drift,
        chem=chem,
        events=events,
    )


def slotboom(state: State, fields: FieldSet) -> SlotboomVars:
    if not np.all(np.isfinite(fields.drift)):
        raise NonpositiveConcentration("drift exponents must be finite")
    return SlotboomVars(state.concentrations * np.exp(fields.drift))
