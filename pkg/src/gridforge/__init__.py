"""Knot concordance invariants from grid diagrams."""

__version__ = "0.1.0"

from .griddata import CapacityError, GridDiagram, GridError, InternalError, parse_grid
from .invariants import KnotHints, compute_g0, report_from_g0
from .regions import Region

__all__ = ["CapacityError", "GridDiagram", "GridError", "InternalError", "KnotHints", "Region",
           "compute_g0", "parse_grid", "report_from_g0"]
