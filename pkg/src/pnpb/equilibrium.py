"""Direct steady-state solver: damped mass-projected Fermi fixed point.

At equilibrium every chemical potential is spatially constant and
C_i = C_i^B exp(-z_i (phi + V0) + (v_i/v0) S).  The iteration map evaluates
the right-hand side from the current state and rescales each species to its
target mass, which absorbs the unknown constant chemical potential.  The
converged state is verifiable a posteriori: constant mu, positive Gamma,
exact masses, vanishing dissipation.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .diagnostics import discrete_energy
from .errors import NoConvergence, ValidationError, VoidCollapse
from .fields import compute_fields
from .kernels import KernelTable
from .model import FieldSet, ModelParams, SpeciesSet, State

logger = logging.getLogger(__name__)


@dataclass
class EquilibriumReport:
    converged: bool
    iterations: int
    final_update: float
    state: State
    fields: FieldSet
    energy: float
    energy_increases: int  # warning counter, see solve_equilibrium


def fermi_map(
    state: State,
    table: KernelTable,
    params: ModelParams,
    species: SpeciesSet,
    masses: np.ndarray,
    fields: FieldSet | None = None,
) -> State:
    """One exact Fermi evaluation followed by per-species mass projection."""
    if fields is None:
        fields = compute_fields(state, table, params, species, guard="strict")
    if params.eta > 0 and np.any(fields.gamma <= 0):
        cell = tuple(int(c) for c in np.argwhere(fields.gamma <= 0)[0])
        raise VoidCollapse(cell, float(fields.gamma.min()))
    w = state.grid.cell_weight
    axes = tuple(range(state.grid.dim))
    new_conc = np.empty_like(state.concentrations)
    for i in range(species.n_species):
        arg = -fields.drift[i]
        shifted = np.exp(arg - arg.max())  # shift cancels in the projection
        new_conc[i] = masses[i] * shifted / (w * shifted.sum(axis=axes))
    return State(state.grid, new_conc, state.time)


def solve_equilibrium(
    initial: State,
    table: KernelTable,
    params: ModelParams,
    species: SpeciesSet,
    theta: float = 0.5,
    tol: float = 1e-10,
    max_iter: int = 2000,
) -> EquilibriumReport:
    """Iterate C <- (1-theta) C + theta fermi_map(C) to a fixed point.

    theta = 1 (pure Picard) diverges for strong fields; the default 0.5 is the
    usual stabilization for Boltzmann-type fixed points.  The discrete free
    energy is tracked along the iterates; increases are counted and logged as
    warnings (the damped map is not a certified descent method) but do not
    abort the iteration.
    """
    if not 0.0 < theta <= 1.0:
        raise ValidationError("damping theta must lie in (0, 1]")
    state = initial.copy()
    masses = state.masses()
    energy_prev = None
    increases = 0
    update = np.inf
    for it in range(1, max_iter + 1):
        fields = compute_fields(state, table, params, species, guard="strict")
        energy = discrete_energy(state, fields, params, species)
        proposed = fermi_map(state, table, params, species, masses, fields=fields)
        scale = max(float(np.abs(state.concentrations).max()), 1e-300)
        update = float(
            np.abs(proposed.concentrations - state.concentrations).max() / scale
        )
        if update < tol:
            # finish undamped: the returned state is then an exact Fermi state
            # of (nearly) its own fields, so mu is constant to the update size
            # even at cells with tiny concentrations
            state = proposed
            fields = compute_fields(state, table, params, species, guard="strict")
            return EquilibriumReport(
                converged=True,
                iterations=it,
                final_update=update,
                state=state,
                fields=fields,
                energy=discrete_energy(state, fields, params, species),
                energy_increases=increases,
            )
        state.concentrations = (
            (1.0 - theta) * state.concentrations + theta * proposed.concentrations
        )
        if energy_prev is not None and energy > energy_prev + 1e-12 and it > 5:
            increases += 1
            logger.warning(
                "free energy increased at iteration %d (%.3e -> %.3e)",
                it, energy_prev, energy,
            )
        energy_prev = energy
    raise NoConvergence(max_iter, update)
