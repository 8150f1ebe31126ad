"""Finite-volume stepping: harmonic-mean Slotboom fluxes, linearly implicit
backward Euler in time, no-flux boundaries, 1D tridiagonal / 2D five-point.

The update for each species solves
    (C^{n+1} - C^n)/dt = -div F^{n+1}
where the flux uses the frozen drift exponents f^n and the unknown C^{n+1}:
    F_{j+1/2} = -(D/dx) * exp(-f_{j+1/2}) * (u_{j+1} - u_j),  u = C * exp(f),
    exp(-f_{j+1/2}) = 2 / (exp(f_j) + exp(f_{j+1})).
All exponentials are evaluated through the differences f_j - f_{j+1}, so the
assembly never exponentiates a large positive number.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.linalg import solve_banded
from scipy.sparse.linalg import splu

from .errors import LinearSolveFailure, PnpbError
from .fields import compute_fields
from .kernels import KernelTable
from .model import FieldSet, ModelParams, SpeciesSet, State

#: forward-residual tolerance of the per-species linear solves
SOLVE_TOL_1D = 1e-12
SOLVE_TOL_2D = 1e-10


@dataclass
class StepReport:
    state: State
    residuals: np.ndarray
    min_concentration: float
    min_gamma: float
    events: list = field(default_factory=list)


def _face_weights(f):
    """Per-face coefficients along the last axis of f.

    Returns (w_left, w_right) with
      w_left  = exp(-f_{j+1/2}) * exp(f_j)     = 2 / (1 + exp(f_{j+1} - f_j))
      w_right = exp(-f_{j+1/2}) * exp(f_{j+1}) = 2 / (1 + exp(f_j - f_{j+1}))
    both of which lie in (0, 2) for any f.
    """
    df = np.diff(f, axis=-1)
    w_left = 2.0 / (1.0 + np.exp(np.minimum(df, 700.0)))
    w_right = 2.0 / (1.0 + np.exp(np.minimum(-df, 700.0)))
    return w_left, w_right


def face_flux(state: State, fields: FieldSet, species: SpeciesSet, i: int, face: int) -> float:
    """Semi-discrete flux of species i through 1-D face ``face`` (between cells
    face and face+1, 0-based); boundary faces -1 and 2N are identically zero."""
    n_faces = state.grid.n_cells_axis - 1
    if face < 0 or face >= n_faces:
        return 0.0
    f = fields.drift[i]
    c = state.concentrations[i]
    fl, fr = f[face], f[face + 1]
    s = max(fl, fr)
    el, er = np.exp(fl - s), np.exp(fr - s)
    # exp(-f_face) * (u_{r} - u_l) with the shift cancelled
    du = 2.0 * (c[face + 1] * er - c[face] * el) / (el + er)
    return -species.diffusivity[i] / state.grid.dx * du


def _assert_m_matrix(diag, lower, upper):
    # column sums are exactly 1 by construction; check the qualitative shape
    if np.any(diag <= 0) or np.any(lower > 0) or np.any(upper > 0):
        raise PnpbError("implicit matrix lost its M-matrix structure")


def _step_species_1d(c_old, f, d, dt, dx):
    m = len(c_old)
    s = d * dt / dx**2
    w_left, w_right = _face_weights(f)
    diag = np.ones(m)
    diag[:-1] += s * w_left
    diag[1:] += s * w_right
    upper = -s * w_right
    lower = -s * w_left
    _assert_m_matrix(diag, lower, upper)
    ab = np.zeros((3, m))
    ab[0, 1:] = upper
    ab[1] = diag
    ab[2, :-1] = lower
    c_new = solve_banded((1, 1), ab, c_old)
    resid = np.empty(m)
    resid[:] = diag * c_new
    resid[:-1] += upper * c_new[1:]
    resid[1:] += lower * c_new[:-1]
    resid -= c_old
    rel = np.abs(resid).max() / max(np.abs(c_old).max(), 1e-300)
    return c_new, rel


def _step_species_2d(c_old, f, d, dt, dx):
    mx, my = c_old.shape
    n = mx * my
    s = d * dt / dx**2
    wlx, wrx = _face_weights(np.swapaxes(f, 0, 1))  # faces along x
    wlx, wrx = wlx.T, wrx.T  # shape (mx-1, my)
    wly, wry = _face_weights(f)  # faces along y, shape (mx, my-1)

    diag = np.ones((mx, my))
    diag[:-1, :] += s * wlx
    diag[1:, :] += s * wrx
    diag[:, :-1] += s * wly
    diag[:, 1:] += s * wry

    up_x = -s * wrx.reshape(-1)  # A[n, n+my]
    lo_x = -s * wlx.reshape(-1)
    up_y = -s * np.pad(wry, ((0, 0), (0, 1))).reshape(-1)[:-1]  # A[n, n+1]
    lo_y = -s * np.pad(wly, ((0, 0), (0, 1))).reshape(-1)[:-1]
    _assert_m_matrix(diag, np.concatenate([lo_x, lo_y]), np.concatenate([up_x, up_y]))

    mat = sparse.diags(
        [diag.reshape(-1), up_x, lo_x, up_y, lo_y],
        [0, my, -my, 1, -1],
        shape=(n, n),
        format="csc",
    )
    rhs = c_old.reshape(-1)
    c_new = splu(mat).solve(rhs)
    resid = mat @ c_new - rhs
    rel = np.abs(resid).max() / max(np.abs(rhs).max(), 1e-300)
    return c_new.reshape(mx, my), rel


def step(
    state: State,
    table: KernelTable,
    params: ModelParams,
    species: SpeciesSet,
    dt: float,
    guard: str = "strict",
    fields: Optional[FieldSet] = None,
) -> StepReport:
    """One linearly implicit step of size dt; per-species independent solves."""
    if dt <= 0:
        raise PnpbError("dt must be positive")
    if fields is None:
        fields = compute_fields(state, table, params, species, guard=guard)
    events = list(fields.events)
    dx = state.grid.dx
    new_conc = np.empty_like(state.concentrations)
    residuals = np.empty(species.n_species)
    for i in range(species.n_species):
        if state.grid.dim == 1:
            new_conc[i], residuals[i] = _step_species_1d(
                state.concentrations[i], fields.drift[i], species.diffusivity[i], dt, dx
            )
            tol = SOLVE_TOL_1D
        else:
            new_conc[i], residuals[i] = _step_species_2d(
                state.concentrations[i], fields.drift[i], species.diffusivity[i], dt, dx
            )
            tol = SOLVE_TOL_2D
        if residuals[i] > tol:
            raise LinearSolveFailure(
                f"species {i}: relative residual {residuals[i]:.3e} > {tol:.0e}"
            )
    new_state = State(state.grid, new_conc, state.time + dt)
    min_c = float(new_conc.min())
    if min_c < 0:
        events.append(("NegativeConcentration", new_state.time, min_c))
    new_gamma = 1.0 - params.eta * np.tensordot(species.volume, new_conc, axes=1)
    min_gamma = float(new_gamma.min())
    if params.eta > 0 and min_gamma <= 0:
        cell = tuple(int(c) for c in np.argwhere(new_gamma <= 0)[0])
        events.append(("VoidCollapse", new_state.time, cell, min_gamma))
    return StepReport(new_state, residuals, min_c, min_gamma, events)


@dataclass
class RunResult:
    final_state: State
    final_fields: FieldSet
    times: np.ndarray
    events: list
    saved_states: dict  # requested output time -> State
    trace: list  # filled by hooks (e.g. diagnostics records)


def run_dynamics(
    initial: State,
    table: KernelTable,
    params: ModelParams,
    species: SpeciesSet,
    dt: float,
    t_end: float,
    guard: str = "strict",
    save_times: Sequence[float] = (),
    hooks: Sequence[Callable] = (),
) -> RunResult:
    """Advance from t=0 to t_end in steps of dt (final partial step allowed).

    Hooks are called as hook(step_index, state, fields, trace) at every time
    level, including the initial and final ones.  In strict mode a void
    collapse aborts the run by raising; in permissive mode it is recorded and
    the run continues.
    """
    state = initial.copy()
    state.time = 0.0
    pending = sorted(float(t) for t in save_times)
    saved = {}
    times = [0.0]
    events = []
    trace = []
    n_steps = int(np.ceil(t_end / dt - 1e-12))
    fields = compute_fields(state, table, params, species, guard=guard)
    for hook in hooks:
        hook(0, state, fields, trace)
    for n in range(n_steps):
        this_dt = min(dt, t_end - n * dt)
        report = step(state, table, params, species, this_dt, guard=guard, fields=fields)
        state = report.state
        state.time = min((n + 1) * dt, t_end)  # avoid accumulation drift
        events.extend(report.events)
        times.append(state.time)
        fields = compute_fields(state, table, params, species, guard=guard)
        for hook in hooks:
            hook(n + 1, state, fields, trace)
        while pending and state.time >= pending[0] - 1e-12:
            saved[pending.pop(0)] = state.copy()
    return RunResult(state, fields, np.asarray(times), events, saved, trace)
