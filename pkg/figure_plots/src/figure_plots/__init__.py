"""Figure scripts for flat gap-lab run records.

The package reads comma-separated record files produced by the gap-lab
command line tool and renders publication-style figures: gap-versus-
damping sweeps, finite-size scaling panels, sorted orbit-weight
scatters, and eigenmode weight histograms.  Analytic overlay lines are
computed here from closed-form expressions, never re-derived from the
plotted data, and the record files are the only coupling to the
simulation code.
"""

from .overlays import (
    classify_pattern,
    dense_upper_bound,
    fully_doped_gap,
    overlay_for,
    staggered_gap,
    undoped_gap,
)
from .records import (
    REQUIRED_COLUMNS,
    SchemaError,
    SelectionError,
    apply_selection,
    load_records,
    numeric,
)
from .render import KINDS, PlotJob, plot

__all__ = [
    "KINDS",
    "PlotJob",
    "REQUIRED_COLUMNS",
    "SchemaError",
    "SelectionError",
    "apply_selection",
    "classify_pattern",
    "dense_upper_bound",
    "fully_doped_gap",
    "load_records",
    "numeric",
    "overlay_for",
    "plot",
    "staggered_gap",
    "undoped_gap",
]
