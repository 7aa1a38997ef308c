"""Per-topology SINR-target feasibility solvers."""
from . import miso, simo, siso
from .outcome import FeasibilityOutcome

__all__ = ["FeasibilityOutcome", "check_feasible", "siso", "simo", "miso"]

_SOLVERS = {"siso": siso.check_feasible, "simo": simo.check_feasible, "miso": miso.check_feasible}


def check_feasible(ch, gbar):
    """Dispatch to the feasibility test matching ``ch.topology``."""
    return _SOLVERS[ch.topology](ch, gbar)
