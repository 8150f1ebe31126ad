"""`pnpb-plot <job spec file>`: render one figure from solver CSV outputs."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import PlotError
from .jobs import parse_job
from .render import render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="pnpb-plot", description=__doc__)
    parser.add_argument("job", help="job spec file (key = value lines)")
    args = parser.parse_args(argv)
    try:
        job = parse_job(Path(args.job).read_text())
        render(job)
    except (OSError, PlotError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {job.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
