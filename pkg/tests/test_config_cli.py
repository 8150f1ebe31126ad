"""Configuration parsing, preset expansion, and the command-line front end."""

import numpy as np
import pytest

from pnpb import cli
from pnpb.config import build_setup, parse_config
from pnpb.errors import ParseError, ValidationError
from pnpb.presets import PRESET_NAMES, expand

GOOD = """\
# minimal explicit 1-D run
dim = 1
N = 10
L = 1
eta = 2
z = 1,-1,0            # cation, anion, water
v = 0.01,0.01,0.01
D = 1,1,1
C_init = 0.5,0.5,0.5
external_field = linear:10
dt = 0.01
t_end = 0.05
output_times = 0.05
"""


class TestParse:
    def test_comments_and_arrays(self):
        cfg = parse_config(GOOD)
        label, c = cfg.points()[0]
        assert c["n"] == 10
        assert c["valence"] == (1.0, -1.0, 0.0)
        assert c["external_field"] == ("linear", 10.0)
        assert c["kernel"] == "screened-1d-picard"  # 1-D default

    def test_unknown_key_reports_line(self):
        with pytest.raises(ParseError) as exc:
            parse_config("dim = 1\nbogus = 3\n")
        assert "bogus" in str(exc.value)
        assert exc.value.line_no == 2

    def test_duplicate_key(self):
        with pytest.raises(ParseError):
            parse_config("eta = 1\neta = 2\n")

    def test_bad_scalar(self):
        with pytest.raises(ParseError):
            parse_config("N = three\n")

    def test_missing_equals(self):
        with pytest.raises(ParseError):
            parse_config("just a line\n")

    def test_unknown_preset(self):
        with pytest.raises(ValidationError):
            parse_config("preset = no-such-preset\n")

    def test_negative_eta_rejected(self):
        with pytest.raises(ValidationError):
            parse_config("eta = -1\n")

    def test_bad_mode_and_guard(self):
        with pytest.raises(ValidationError):
            parse_config("mode = sideways\n")
        with pytest.raises(ValidationError):
            parse_config("gamma_guard = never\n")

    def test_missing_species_arrays(self):
        cfg = parse_config("dim = 1\nN = 10\nC_init = 0.5,0.5\n")
        with pytest.raises(ValidationError):
            cfg.points()


class TestPresets:
    def test_registry_names(self):
        assert "preset-1" in PRESET_NAMES
        assert "test-2d" in PRESET_NAMES

    def test_eta_sweep_labels(self):
        labels = [label for label, _ in expand("test1-eta")]
        assert labels == ["eta=0", "eta=1", "eta=3", "eta=5"]

    def test_preset_overrides_apply_to_all_points(self):
        cfg = parse_config("preset = test1-eta\ndt = 0.001\n")
        for _, c in cfg.points():
            assert c["dt"] == 0.001

    def test_unknown_preset_name(self):
        with pytest.raises(ValidationError):
            expand("nope")


class TestBuildSetup:
    def test_bulk_defaults_to_domain_average(self):
        text = GOOD.replace("C_init = 0.5,0.5,0.5", "C_init = 0.2,0.4,0.8")
        _, c = parse_config(text).points()[0]
        grid, params, species, state, spec = build_setup(c)
        assert np.allclose(species.bulk, [0.2, 0.4, 0.8])

    def test_explicit_bulk_wins(self):
        _, c = parse_config(GOOD + "C_bulk = 0.3,0.3,0.3\n").points()[0]
        _, _, species, _, _ = build_setup(c)
        assert np.allclose(species.bulk, 0.3)

    def test_gaussian_initial_needs_2d(self):
        _, c = parse_config(GOOD + "initial = gaussians-2d\n").points()[0]
        with pytest.raises(ValidationError):
            build_setup(c)

    def test_2d_gaussian_amplitude(self):
        cfg = parse_config(
            "dim = 2\nN = 10\nL = 1\neta = 1\nz = 1,-1,0\nv = 0.01,0.01,0.01\n"
            "D = 1,1,1\ninitial = gaussians-2d\n"
        )
        _, c = cfg.points()[0]
        grid, params, species, state, spec = build_setup(c)
        assert state.concentrations.max() == pytest.approx(40.0 / np.pi, rel=1e-6)
        assert spec.family == "log-2d"


@pytest.fixture()
def out_root(tmp_path, monkeypatch):
    root = tmp_path / "out"
    monkeypatch.setenv("PNPB_OUTPUT_ROOT", str(root))
    return root


class TestCli:
    def write(self, tmp_path, text, name="run.cfg"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    def test_run_produces_outputs(self, tmp_path, out_root, capsys):
        rc = cli.main(["run", self.write(tmp_path, GOOD)])
        assert rc == 0
        out_dir = out_root / "run"
        assert (out_dir / "trace.csv").exists()
        assert (out_dir / "profile_t0.05.csv").exists()
        header = (out_dir / "profile_t0.05.csv").read_text().splitlines()[0]
        assert header.startswith("x,C_1,C_2,C_3,rho,theta,Gamma,phi,S,mu_1")

    def test_rerun_is_byte_identical(self, tmp_path, out_root):
        cfg = self.write(tmp_path, GOOD)
        assert cli.main(["run", cfg]) == 0
        first = {p.name: p.read_bytes() for p in (out_root / "run").iterdir()}
        assert cli.main(["run", cfg]) == 0
        second = {p.name: p.read_bytes() for p in (out_root / "run").iterdir()}
        assert first == second

    def test_parse_error_exits_1(self, tmp_path, out_root):
        assert cli.main(["run", self.write(tmp_path, "bogus = 1\n")]) == 1

    def test_missing_file_exits_1(self, out_root):
        assert cli.main(["run", "/no/such/file.cfg"]) == 1

    def test_validation_error_exits_1(self, tmp_path, out_root):
        # bulk void fraction 1 - eta sum v C^B <= 0
        bad = GOOD.replace("eta = 2", "eta = 100")
        assert cli.main(["run", self.write(tmp_path, bad)]) == 1

    def test_strict_void_collapse_exits_2(self, tmp_path, out_root):
        bad = GOOD.replace("eta = 2", "eta = 12").replace(
            "external_field = linear:10", "external_field = linear:30"
        ).replace("t_end = 0.05", "t_end = 1")
        assert cli.main(["run", self.write(tmp_path, bad)]) == 2

    def test_verify_ok(self, tmp_path, out_root, capsys):
        assert cli.main(["verify", self.write(tmp_path, GOOD)]) == 0
        assert "valid" in capsys.readouterr().out

    def test_presets_lists_registry(self, capsys):
        assert cli.main(["presets"]) == 0
        out = capsys.readouterr().out
        for name in PRESET_NAMES:
            assert name in out

    def test_equilibrium_mode_writes_profile(self, tmp_path, out_root):
        cfg = self.write(tmp_path, GOOD + "mode = equilibrium\ntol = 1e-10\n")
        assert cli.main(["run", cfg]) == 0
        assert (out_root / "run" / "profile_equilibrium.csv").exists()
