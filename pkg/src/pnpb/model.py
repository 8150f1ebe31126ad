"""Parameter and state containers for the dimensionless steric drift-diffusion model.

Species 1..K carry charge, species K+1 is neutral water.  All quantities are
dimensionless; the void fraction at a cell is Gamma = 1 - eta * sum_i v_i * C_i
and crowding enters through the steric potential S = ln(Gamma / Gamma_bulk).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NonPositiveBulkVoid,
    NonPositiveTotalVoid,
    ValidationError,
)


def _as_float_array(values, name):
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be a 1-D sequence")
    return arr


@dataclass(frozen=True)
class SpeciesSet:
    """Per-species valences, volumes, diffusivities and bulk concentrations.

    Arrays have length K+1; the last entry is water (valence forced to 0).
    """

    count_charged: int
    valence: np.ndarray
    volume: np.ndarray
    diffusivity: np.ndarray
    bulk: np.ndarray

    def __post_init__(self):
        k = self.count_charged
        if k < 1:
            raise ValidationError("need at least one charged species")
        for name in ("valence", "volume", "diffusivity", "bulk"):
            object.__setattr__(self, name, _as_float_array(getattr(self, name), name))
            if len(getattr(self, name)) != k + 1:
                raise DimensionMismatch(f"{name} must have length K+1 = {k + 1}")
        if self.valence[k] != 0.0:
            raise ValidationError("water (last species) must have valence 0")
        if np.any(self.volume <= 0):
            raise ValidationError("all volumes must be positive")
        if np.any(self.diffusivity <= 0):
            raise ValidationError("all diffusivities must be positive")
        if np.any(self.bulk <= 0):
            raise ValidationError("all bulk concentrations must be positive")

    @property
    def n_species(self) -> int:
        return self.count_charged + 1

    def with_bulk(self, bulk) -> "SpeciesSet":
        return replace(self, bulk=np.asarray(bulk, dtype=float))


@dataclass(frozen=True)
class ExternalField:
    """Static applied potential, consumed only through the drift exponents.

    ``kind`` is "none", "linear" (coefficients a per axis, potential a.x) or
    "table" (per-node values).
    """

    kind: str = "none"
    coefficients: tuple = ()
    table: Optional[np.ndarray] = None

    @staticmethod
    def none() -> "ExternalField":
        return ExternalField("none")

    @staticmethod
    def linear(*coefficients: float) -> "ExternalField":
        return ExternalField("linear", tuple(float(c) for c in coefficients))

    @staticmethod
    def tabulated(values) -> "ExternalField":
        return ExternalField("table", (), np.asarray(values, dtype=float))

    def values(self, grid: "Grid") -> np.ndarray:
        if self.kind == "none":
            return np.zeros(grid.shape)
        if self.kind == "linear":
            coeff = list(self.coefficients) + [0.0] * (grid.dim - len(self.coefficients))
            if grid.dim == 1:
                return coeff[0] * grid.nodes
            x, y = np.meshgrid(grid.nodes, grid.nodes, indexing="ij")
            return coeff[0] * x + coeff[1] * y
        if self.kind == "table":
            if self.table is None or self.table.shape != grid.shape:
                raise DimensionMismatch("tabulated field does not match the grid")
            return self.table
        raise ValidationError(f"unknown external field kind '{self.kind}'")


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless knobs: steric strength, correlation and Debye lengths."""

    eta: float
    lam: float
    nu: float
    kernel: str = "screened-1d-picard"
    v0: Optional[float] = None
    external_field: ExternalField = field(default_factory=ExternalField.none)

    def __post_init__(self):
        if self.eta < 0:
            raise ValidationError("eta must be nonnegative")
        if self.lam < 0:
            raise ValidationError("lambda must be nonnegative")
        if self.nu <= 0:
            raise ValidationError("nu must be positive")
        if self.v0 is not None and self.v0 <= 0:
            raise ValidationError("v0 must be positive")

    def average_volume(self, species: SpeciesSet) -> float:
        """v0; defaults to the arithmetic mean of the species volumes."""
        if self.v0 is not None:
            return self.v0
        return float(np.mean(species.volume))

    def gamma_bulk(self, species: SpeciesSet) -> float:
        """Reference void fraction 1 - eta * sum_i v_i * C_i^B."""
        return 1.0 - self.eta * float(np.dot(species.volume, species.bulk))


@dataclass(frozen=True)
class Grid:
    """Uniform cell-centered mesh on [-L, L]^dim with half-width boundary cells.

    Each axis has 2N+1 nodes x_j = j * dx for j = -N..N; interior cells have
    width dx, the two boundary cells width dx/2.  Discrete sums nevertheless
    use the uniform weight dx^dim, which is what makes the scheme's telescoping
    mass identity exact.
    """

    dim: int
    n: int
    half_extent: float = 1.0

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValidationError("dim must be 1 or 2")
        if self.n < 2:
            raise ValidationError("N must be at least 2")
        if self.half_extent <= 0:
            raise ValidationError("half_extent must be positive")

    @property
    def dx(self) -> float:
        return self.half_extent / self.n

    @property
    def n_cells_axis(self) -> int:
        return 2 * self.n + 1

    @property
    def shape(self) -> tuple:
        return (self.n_cells_axis,) * self.dim

    @property
    def nodes(self) -> np.ndarray:
        # j * dx (not -L + (j+N) dx): exact sign symmetry of the coordinates.
        return np.arange(-self.n, self.n + 1) * self.dx

    @property
    def cell_weight(self) -> float:
        return self.dx**self.dim


@dataclass
class State:
    """Cell-average concentrations of all K+1 species at one time level."""

    grid: Grid
    concentrations: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.concentrations = np.asarray(self.concentrations, dtype=float)
        expected = (self.concentrations.shape[0],) + self.grid.shape
        if self.concentrations.shape != expected:
            raise DimensionMismatch(
                f"concentration array has shape {self.concentrations.shape}, "
                f"expected {expected}"
            )
        if not np.all(np.isfinite(self.concentrations)):
            raise ValidationError("concentrations must be finite")

    @property
    def n_species(self) -> int:
        return self.concentrations.shape[0]

    def copy(self) -> "State":
        return State(self.grid, self.concentrations.copy(), self.time)

    def masses(self) -> np.ndarray:
        """Discrete masses dx^dim * sum_j C_ij, uniform weights."""
        axes = tuple(range(1, 1 + self.grid.dim))
        return self.grid.cell_weight * self.concentrations.sum(axis=axes)

    def masses_geometric(self) -> np.ndarray:
        """Reporting variant weighting the boundary half-cells by dx/2."""
        w = np.ones(self.grid.n_cells_axis)
        w[0] = w[-1] = 0.5
        weight = w
        if self.grid.dim == 2:
            weight = np.outer(w, w)
        axes = tuple(range(1, 1 + self.grid.dim))
        return self.grid.cell_weight * (self.concentrations * weight).sum(axis=axes)


def uniform_state(grid: Grid, values: Sequence[float]) -> State:
    values = np.asarray(values, dtype=float)
    conc = np.broadcast_to(
        values.reshape((-1,) + (1,) * grid.dim), (len(values),) + grid.shape
    ).copy()
    return State(grid, conc)


@dataclass
class FieldSet:
    """Derived cell fields of one state."""

    gamma: np.ndarray
    steric: np.ndarray
    charge: np.ndarray
    phi: np.ndarray
    drift: np.ndarray
    chem: np.ndarray
    events: list = field(default_factory=list)


def saturation_violations(state: State, params: ModelParams, species: SpeciesSet):
    """Cells where some concentration reaches the packing bound 1/(eta v_i).

    Returns a list of (species index, cell index) pairs; empty when eta = 0.
    Violations are flagged, never silently repaired.
    """
    out = []
    if params.eta <= 0:
        return out
    for i in range(species.n_species):
        cap = 1.0 / (params.eta * species.volume[i])
        bad = np.argwhere(
            (state.concentrations[i] < 0) | (state.concentrations[i] >= cap)
        )
        out.extend((i, tuple(int(c) for c in cell)) for cell in bad)
    return out


def validate(params: ModelParams, species: SpeciesSet, state: State):
    """Check the two admissibility inequalities; returns (params, species, state).

    Rejects configurations with nonpositive bulk void fraction or nonpositive
    total void budget 1 - eta * sum_i v_i * m_i.
    """
    if state.n_species != species.n_species:
        raise DimensionMismatch(
            f"state has {state.n_species} species, species set has {species.n_species}"
        )
    gamma_b = params.gamma_bulk(species)
    if not gamma_b > 0:
        raise NonPositiveBulkVoid(
            f"1 - eta*sum(v_i*C_i^B) = {gamma_b:.6g} must be positive"
        )
    masses = state.masses()
    total_void = 1.0 - params.eta * float(np.dot(species.volume, masses))
    if not total_void > 0:
        raise NonPositiveTotalVoid(
            f"1 - eta*sum(v_i*m_i) = {total_void:.6g} must be positive"
        )
    return params, species, state
