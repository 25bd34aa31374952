"""Numerical laboratory for pseudo-relativistic Hartree ground states.

Computes constrained minimizers of the boson-star energy on a periodic box,
the universal blow-up profile and critical coupling on a radial grid, and the
near-critical scaling laws for trapping, periodic, and ring-shaped external
potentials.
"""

from .grid import Field3, Grid3, make_grid, mass, normalize
from .energy import EnergyBreakdown, ProblemSpec, energy, gradient, lagrange_multiplier
from .energy import hhalf_distance, weinstein_quotient
from .potentials import (
    PeriodicPotential,
    RingPotential,
    TrapPotential,
    Well,
    ZeroPotential,
)
from .qstar import QProfile, ScalingFit, cross_validate_astar, lambda_predicted, solve_q
from .radial import RadialGrid, RadialProfile, lift_to_3d, newton_potential
from .solver import GroundState, SolverOptions, collapse_probe, continuation_sweep, minimize
from .solver import solve_rescaled
from .sweeps import SweepResult, gap_ladder, run_sweep

__all__ = [
    "EnergyBreakdown",
    "Field3",
    "GroundState",
    "Grid3",
    "PeriodicPotential",
    "ProblemSpec",
    "QProfile",
    "RadialGrid",
    "RadialProfile",
    "RingPotential",
    "ScalingFit",
    "SolverOptions",
    "SweepResult",
    "TrapPotential",
    "Well",
    "ZeroPotential",
    "collapse_probe",
    "continuation_sweep",
    "cross_validate_astar",
    "energy",
    "gap_ladder",
    "gradient",
    "hhalf_distance",
    "lagrange_multiplier",
    "lambda_predicted",
    "lift_to_3d",
    "make_grid",
    "mass",
    "minimize",
    "newton_potential",
    "normalize",
    "run_sweep",
    "solve_q",
    "solve_rescaled",
    "weinstein_quotient",
]

__version__ = "0.1.0"
