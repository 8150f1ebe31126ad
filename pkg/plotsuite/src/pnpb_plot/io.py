"""CSV ingestion against the solver's public output contract."""
from __future__ import annotations

import csv

import numpy as np

from .errors import EmptyInput, MissingColumn


def _to_float(value):
    try:
        return float(value)
    except ValueError:
        return np.nan


class Table:
    """Columns of one CSV file, accessed by header name."""

    def __init__(self, path):
        self.path = str(path)
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows:
            raise EmptyInput(f"{path} is empty")
        self.header = rows[0]
        data = rows[1:]
        if not data:
            raise EmptyInput(f"{path} has a header but no data rows")
        arr = np.empty((len(data), len(self.header)))
        for i, row in enumerate(data):
            # non-numeric cells (e.g. the trace's event strings) become NaN
            arr[i] = [_to_float(v) for v in row[: len(self.header)]]
        self._columns = {name: arr[:, j] for j, name in enumerate(self.header)}

    def __contains__(self, name):
        return name in self._columns

    def col(self, name) -> np.ndarray:
        if name not in self._columns:
            raise MissingColumn(
                f"{self.path}: no column '{name}' (header: {', '.join(self.header)})"
            )
        return self._columns[name]

    def species_count(self, prefix="C_") -> int:
        n = 0
        while f"{prefix}{n + 1}" in self._columns:
            n += 1
        return n
