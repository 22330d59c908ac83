"""sectorix: sector matrices, their means and the inequalities between them."""

from .checks import CheckResult, concave_catalogue, evaluate
from .counterexamples import counterexample_det, counterexample_sv
from .errors import SectorixError
from .instances import Instance
from .sweep import Report, sweep

__version__ = "0.1.0"

__all__ = [
    "CheckResult",
    "Instance",
    "Report",
    "SectorixError",
    "concave_catalogue",
    "counterexample_det",
    "counterexample_sv",
    "evaluate",
    "sweep",
]
