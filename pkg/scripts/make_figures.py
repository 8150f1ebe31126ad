#!/usr/bin/env python3
"""Reproduce the study figures: run the preset sweeps, then render them with
pnpb-plot (which must be installed from plotsuite/).

Usage: python scripts/make_figures.py [--out DIR] [--skip-2d]
"""
import argparse
import os
import subprocess
import sys
import tempfile
from pathlib import Path

from pnpb import cli
from pnpb.presets import expand


def run_preset(name: str, root: Path) -> None:
    with tempfile.NamedTemporaryFile("w", suffix=".cfg", delete=False) as fh:
        fh.write(f"preset = {name}\n")
        path = fh.name
    rc = cli.main(["run", path])
    os.unlink(path)
    if rc != 0:
        raise SystemExit(f"{name}: solver exit {rc}")


def plot(job_text: str, root: Path, name: str) -> None:
    spec = root / f"{name}.job"
    spec.write_text(job_text)
    subprocess.run(["pnpb-plot", str(spec)], check=True)


def profile_job(preset: str, root: Path, image: Path, stem="profile_t1.csv",
                labels=None) -> str:
    lines = ["kind = profiles"]
    for label, _ in expand(preset):
        if labels is not None and label not in labels:
            continue
        lines.append(f"curve = {label} : {root / preset / label / stem}")
    lines.append(f"output = {image}")
    lines.append(f"title = {preset}")
    return "\n".join(lines) + "\n"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="pnpb-out")
    parser.add_argument("--skip-2d", action="store_true")
    args = parser.parse_args()
    root = Path(args.out)
    os.environ["PNPB_OUTPUT_ROOT"] = str(root)
    figs = root / "figures"
    figs.mkdir(parents=True, exist_ok=True)

    for preset in ("preset-1", "test1-eta", "test3-nu", "test4-lambda",
                   "test5-z1", "test6-v1"):
        run_preset(preset, root)
        plot(profile_job(preset, root, figs / f"{preset}.png"), root, preset)

    plot(
        "kind = trace\n"
        f"curve = preset-1 : {root / 'preset-1' / 'eta=1' / 'trace.csv'}\n"
        f"output = {figs / 'preset-1-trace.png'}\n"
        "title = free energy and dissipation\n",
        root, "preset-1-trace",
    )

    if not args.skip_2d:
        run_preset("test-2d-eta", root)
        lines = ["kind = marginals"]
        for label, _ in expand("test-2d-eta"):
            lines.append(
                f"curve = {label} : {root / 'test-2d-eta' / label / 'marginal_x_t3.csv'}"
            )
        lines += [f"output = {figs / 'test-2d-marginals.png'}",
                  "species = 1", "title = 2D x-marginals of C_1"]
        plot("\n".join(lines) + "\n", root, "test-2d-marginals")
        plot(
            "kind = heatmap\n"
            f"curve = eta=3 : {root / 'test-2d-eta' / 'eta=3' / 'profile_t3.csv'}\n"
            f"output = {figs / 'test-2d-heatmap.png'}\n"
            "species = 1\n",
            root, "test-2d-heatmap",
        )

    print(f"figures written to {figs}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
