"""Job spec parsing: the same line-oriented "key = value" format the solver
CLI uses, with a repeatable ``curve`` key for labelled input files.

    kind = profiles            # profiles | trace | heatmap | marginals
    curve = eta=0 : out/eta=0/profile_t1.csv
    curve = eta=1 : out/eta=1/profile_t1.csv
    output = figure.png
    title = steric sweep       # optional
    species = 1                # heatmap only: which C_i to show
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import JobSpecError

KINDS = ("profiles", "trace", "heatmap", "marginals")


@dataclass
class PlotJob:
    kind: str
    curves: list  # ordered (label, path) pairs; legend follows this order
    output: str
    title: str = ""
    species: int = 1
    extras: dict = field(default_factory=dict)


def parse_job(text: str) -> PlotJob:
    kind = None
    curves = []
    output = None
    title = ""
    species = 1
    for line_no, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise JobSpecError(line_no, f"expected 'key = value', got '{body}'")
        key, _, value = body.partition("=")
        key, value = key.strip(), value.strip()
        if key == "kind":
            if value not in KINDS:
                raise JobSpecError(line_no, f"unknown kind '{value}'")
            kind = value
        elif key == "curve":
            label, sep, path = value.partition(":")
            if not sep or not path.strip():
                raise JobSpecError(line_no, "curve needs 'label : path'")
            curves.append((label.strip(), path.strip()))
        elif key == "output":
            output = value
        elif key == "title":
            title = value
        elif key == "species":
            try:
                species = int(value)
            except ValueError:
                raise JobSpecError(line_no, f"bad species index '{value}'") from None
        else:
            raise JobSpecError(line_no, f"unknown key '{key}'")
    if kind is None:
        raise JobSpecError(0, "missing 'kind'")
    if not curves:
        raise JobSpecError(0, "no 'curve' inputs given")
    if output is None:
        raise JobSpecError(0, "missing 'output'")
    return PlotJob(kind=kind, curves=curves, output=output, title=title,
                   species=species)
