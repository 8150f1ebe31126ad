"""Error types of the plotting pipeline."""


class PlotError(Exception):
    """Base class for all plotting failures."""


class JobSpecError(PlotError):
    """The job spec file is malformed."""

    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class MissingColumn(PlotError):
    """A referenced column is absent from the CSV header."""


class EmptyInput(PlotError):
    """A CSV has a header but no data rows (or is empty altogether)."""
