"""Fixtures that produce real solver CSVs by driving the `pnpb` CLI as a
subprocess — the only coupling to the solver is its public interface."""

import subprocess
import sys

import pytest

CONFIG_1D = """\
dim = 1
N = 10
L = 1
eta = 2
z = 1,-1,0
v = 0.01,0.01,0.01
D = 1,1,1
C_init = 0.5,0.5,0.5
external_field = linear:10
dt = 0.01
t_end = 0.05
output_times = 0.05
"""

CONFIG_2D = """\
dim = 2
N = 5
L = 1
eta = 1
z = 1,-1,0
v = 0.01,0.01,0.01
D = 1,1,1
initial = gaussians-2d
dt = 0.01
t_end = 0.02
output_times = 0.02
"""


def run_solver(tmp_path, text, name):
    cfg = tmp_path / f"{name}.cfg"
    cfg.write_text(text)
    out = tmp_path / f"{name}-out"
    proc = subprocess.run(
        [sys.executable, "-m", "pnpb.cli", "run", str(cfg)],
        env={"PNPB_OUTPUT_ROOT": str(out), "PATH": "/usr/bin:/bin"},
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return out / "run"


@pytest.fixture(scope="session")
def solver_out_1d(tmp_path_factory):
    return run_solver(tmp_path_factory.mktemp("csv1d"), CONFIG_1D, "cfg1d")


@pytest.fixture(scope="session")
def solver_out_2d(tmp_path_factory):
    return run_solver(tmp_path_factory.mktemp("csv2d"), CONFIG_2D, "cfg2d")
