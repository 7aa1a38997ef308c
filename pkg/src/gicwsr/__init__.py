"""Global weighted sum-rate maximization for Gaussian interference channels.

The solver is a polyblock outer approximation driven by a rate-profile
boundary oracle. The oracle bisects along rays in rate space with an exact
SINR-target feasibility test per topology: spectral radius for SISO, SINR
balancing with MMSE receivers for SIMO, and a second-order cone program for
MISO. Interference-pricing heuristics and brute-force references are included
for comparison.
"""
from ._accel import backend
from .channel import (
    MinRateConstraint,
    MisoChannel,
    SimoChannel,
    SisoChannel,
    rate_of,
    rates_of_witness,
    sinr_miso,
    sinr_simo,
    sinr_simo_mmse,
    sinr_siso,
    weighted_sum,
)
from .config import load_bundled, load_config
from .feasibility import FeasibilityOutcome, check_feasible
from .oracle import BoundaryOracle, RateProfile, intersect
from .polyblock import PolyblockConfig, SolveResult, solve, solve_channel, solve_supports

__version__ = "0.1.0"

__all__ = [
    "backend",
    "SisoChannel",
    "SimoChannel",
    "MisoChannel",
    "MinRateConstraint",
    "sinr_siso",
    "sinr_simo",
    "sinr_simo_mmse",
    "sinr_miso",
    "rate_of",
    "weighted_sum",
    "rates_of_witness",
    "load_config",
    "load_bundled",
    "check_feasible",
    "FeasibilityOutcome",
    "RateProfile",
    "BoundaryOracle",
    "intersect",
    "PolyblockConfig",
    "SolveResult",
    "solve",
    "solve_channel",
    "solve_supports",
    "__version__",
]
