"""Named experiment presets mirroring the 1D and 2D parameter studies.

Every preset expands to a sweep of fully explicit run configurations; the
registry maps each name to the figure-level study it reproduces (steric
strength, void-collapse threshold, Debye/correlation lengths, valence,
volume, and the 2D study).
"""
from __future__ import annotations

from .errors import ValidationError

PRESET_NAMES = (
    "preset-1",
    "test1-eta",
    "test2-gamma",
    "test3-nu",
    "test4-lambda",
    "test5-z1",
    "test6-v1",
    "test-2d",
    "test-2d-eta",
)


def _base_1d():
    # shared 1D setup: [-1,1], dx = 0.01, dt = 0.005, symmetric 1:1 salt in
    # water, uniform initial data 0.5, applied potential 10 x
    return dict(
        dim=1,
        n=100,
        half_extent=1.0,
        eta=1.0,
        lam=1.0,
        nu=1.0,
        kernel="screened-1d-picard",
        valence=(1.0, -1.0, 0.0),
        volume=(0.01, 0.01, 0.01),
        diffusivity=(1.0, 1.0, 1.0),
        bulk=(0.5, 0.5, 0.5),
        initial="uniform",
        initial_values=(0.5, 0.5, 0.5),
        external_field=("linear", 10.0),
        dt=0.005,
        t_end=1.0,
        mode="dynamics",
        gamma_guard="strict",
        output_times=(1.0,),
    )


def _base_2d():
    return dict(
        dim=2,
        n=25,
        half_extent=1.0,
        eta=3.0,
        lam=1.0,
        nu=1.0,
        kernel="log-2d",
        valence=(1.0, -1.0, 0.0),
        volume=(0.01, 0.01, 0.01),
        diffusivity=(1.0, 1.0, 1.0),
        bulk=None,  # defaults to domain-average initial concentrations
        initial="gaussians-2d",
        initial_values=(),
        external_field=("linear", 10.0, 0.0),
        dt=0.001,
        t_end=3.0,
        mode="dynamics",
        gamma_guard="strict",
        output_times=(3.0,),
    )


def expand(name: str):
    """Return a list of (label, config dict) sweep points for a preset name."""
    if name == "preset-1":
        return [("eta=1", _base_1d())]
    if name == "test1-eta":
        return [
            (f"eta={eta:g}", {**_base_1d(), "eta": float(eta)})
            for eta in (0, 1, 3, 5)
        ]
    if name == "test2-gamma":
        return [
            (f"eta={eta:g}", {**_base_1d(), "eta": float(eta), "gamma_guard": "permissive"})
            for eta in (8, 8.1, 8.21)
        ]
    if name == "test3-nu":
        return [
            (f"nu={nu:g}", {**_base_1d(), "nu": float(nu)})
            for nu in (1.0 / 3.0, 1.0, 3.0)
        ]
    if name == "test4-lambda":
        return [
            (f"lambda={lam:g}", {**_base_1d(), "lam": float(lam)})
            for lam in (0.1, 1.0, 10.0)
        ]
    if name == "test5-z1":
        points = []
        for eta in (2.0, 0.0):
            for z1 in (1.0, 2.0, 4.0):
                cfg = {**_base_1d(), "eta": eta, "valence": (z1, -1.0, 0.0)}
                points.append((f"z1={z1:g}_eta={eta:g}", cfg))
        return points
    if name == "test6-v1":
        points = []
        for eta in (1.0, 0.0):
            for v1 in (0.01, 0.03, 0.05):
                cfg = {**_base_1d(), "eta": eta, "volume": (v1, 0.01, 0.01)}
                points.append((f"v1={v1:g}_eta={eta:g}", cfg))
        return points
    if name == "test-2d":
        return [("eta=3", _base_2d())]
    if name == "test-2d-eta":
        return [
            (f"eta={eta:g}", {**_base_2d(), "eta": float(eta)})
            for eta in (0, 1, 3)
        ]
    raise ValidationError(f"unknown preset '{name}'")
