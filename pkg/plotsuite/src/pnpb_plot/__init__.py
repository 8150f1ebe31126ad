"""Figure rendering for pnpb CSV outputs."""

from .errors import EmptyInput, JobSpecError, MissingColumn, PlotError
from .io import Table
from .jobs import PlotJob, parse_job
from .render import render

__version__ = "0.1.0"

__all__ = [
    "EmptyInput",
    "JobSpecError",
    "MissingColumn",
    "PlotError",
    "PlotJob",
    "Table",
    "parse_job",
    "render",
]
