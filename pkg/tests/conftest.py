"""Shared fixtures: small model setups and the reference 1D configuration."""

import numpy as np
import pytest

from pnpb.config import build_setup
from pnpb.kernels import build_tensor
from pnpb.model import Grid, ModelParams, SpeciesSet, State, uniform_state
from pnpb.presets import expand


@pytest.fixture(scope="session")
def reference_setup():
    """Grid/params/species/state for the standard 1D configuration."""
    label, cfg = expand("preset-1")[0]
    return build_setup(cfg)


@pytest.fixture(scope="session")
def reference_table(reference_setup):
    grid, params, species, state, spec = reference_setup
    return build_tensor(spec, grid)


@pytest.fixture(scope="session")
def small_setup():
    """A tiny symmetric binary electrolyte on 9 cells, cheap enough for
    property tests that rebuild matrices by hand."""
    grid = Grid(1, 4, half_extent=0.4)
    species = SpeciesSet(
        2,
        np.array([1.0, -1.0, 0.0]),
        np.array([0.01, 0.01, 0.01]),
        np.array([1.0, 1.0, 1.0]),
        np.array([0.5, 0.5, 0.5]),
    )
    params = ModelParams(eta=2.0, lam=1.0, nu=1.0, kernel="screened-1d-picard")
    state = uniform_state(grid, [0.5, 0.5, 0.5])
    return grid, params, species, state


@pytest.fixture(scope="session")
def small_table(small_setup):
    grid, params, species, state = small_setup
    from pnpb.kernels import KernelSpec

    return build_tensor(KernelSpec("screened-1d-picard", 1, params.lam, params.nu), grid)
