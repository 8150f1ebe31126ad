"""Energy-dissipative finite-volume solver for steric drift-diffusion of
ions, water and voids, with a nonlocal correlated electric field."""

from .model import (
    ExternalField,
    FieldSet,
    Grid,
    ModelParams,
    SpeciesSet,
    State,
    uniform_state,
    validate,
)
from .kernels import KernelSpec, KernelTable, build_tensor, convolve, eval_kernel
from .fields import compute_fields, slotboom
from .scheme import StepReport, face_flux, run_dynamics, step
from .equilibrium import EquilibriumReport, fermi_map, solve_equilibrium
from .diagnostics import (
    DiagnosticsRecord,
    discrete_dissipation,
    discrete_energy,
    steady_state_residual,
)
from .config import RunConfig, build_setup, parse_config

__all__ = [
    "DiagnosticsRecord",
    "EquilibriumReport",
    "ExternalField",
    "FieldSet",
    "Grid",
    "KernelSpec",
    "KernelTable",
    "ModelParams",
    "RunConfig",
    "SpeciesSet",
    "State",
    "StepReport",
    "build_setup",
    "build_tensor",
    "compute_fields",
    "convolve",
    "discrete_dissipation",
    "discrete_energy",
    "eval_kernel",
    "face_flux",
    "fermi_map",
    "parse_config",
    "run_dynamics",
    "slotboom",
    "solve_equilibrium",
    "steady_state_residual",
    "step",
    "uniform_state",
    "validate",
]

__version__ = "0.1.0"
