"""Post-processing scripts that regenerate figures from exported run
directories (snapshot CSVs + diagnostics + manifest).  Read-only over the
run data; each figure type is a subcommand of ``reswave-figure``."""

__version__ = "0.1.0"

from .loader import RunDirectory, RunDataError
from .render import FigureSpec, render

__all__ = ["RunDirectory", "RunDataError", "FigureSpec", "render", "__version__"]
