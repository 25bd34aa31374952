"""The constrained Hartree energy: value, gradient, multiplier, quotient.

For a unit-mass field u the energy is

    E_a(u) = ||(-Lap + m^2)^(1/4) u||^2 + int V u^2 - (a/2) D(u),

with D the Coulomb self-interaction of the density u^2.  The gradient here is
the unconstrained first variation; mass-constraint handling (projection,
normalization) lives entirely in the solver so the gradient can be checked by
finite differences off the constraint sphere.
"""

from __future__ import annotations

from dataclasses import dataclass
import warnings

import numpy as np

from . import potentials
from .coulomb import coulomb_convolve_raw
from .errors import ConfigurationError, DegenerateInputError
from .grid import Field3, Grid3, mass, require_same_grid
from .potentials import PotentialSpec, ZeroPotential
from .radial import RadialProfile, quarter_form, radial_interaction, radial_mass
from .symbols import multiplier_apply, quadratic_form_raw, sobolev_half_form


@dataclass(frozen=True)
class ProblemSpec:
    """One instance of the constrained minimization problem."""

    a: float
    m: float
    V: PotentialSpec
    grid: Grid3

    def __post_init__(self) -> None:
        if self.a < 0:
            raise ConfigurationError("interaction strength a must be nonnegative")
        if self.m < 0:
            raise ConfigurationError("mass parameter must be nonnegative")
        if self.m == 0 and not isinstance(self.V, ZeroPotential):
            raise ConfigurationError("m = 0 is admitted only for the free (V = 0) problem")
        validate_potential_fits(self.V, self.grid)


def validate_potential_fits(V: PotentialSpec, grid: Grid3) -> None:
    half = grid.L / 2.0
    if isinstance(V, potentials.RingPotential) and half <= 1.0:
        raise ConfigurationError(f"ring of unit radius does not fit in a box of side {grid.L}")
    if isinstance(V, potentials.TrapPotential):
        for w in V.wells:
            if max(abs(c) for c in w.location) >= half:
                raise ConfigurationError(f"trap well at {w.location} lies outside the box")


def potential_on_grid(V: PotentialSpec, grid: Grid3) -> np.ndarray:
    return potentials.evaluate(V, grid.X, grid.Y, grid.Z)


@dataclass(frozen=True)
class EnergyBreakdown:
    """Energy components; total = kinetic_rel + potential - (a/2) interaction."""

    kinetic_rel: float
    potential: float
    interaction: float
    a: float

    @property
    def total(self) -> float:
        return self.kinetic_rel + self.potential - 0.5 * self.a * self.interaction

    def scaled(self, factor: float, a: float | None = None) -> "EnergyBreakdown":
        return EnergyBreakdown(
            self.kinetic_rel * factor,
            self.potential * factor,
            self.interaction * factor,
            self.a if a is None else a,
        )

    def as_dict(self) -> dict:
        return {
            "kinetic_rel": self.kinetic_rel,
            "potential": self.potential,
            "interaction": self.interaction,
            "a": self.a,
            "total": self.total,
        }


def energy(u: Field3, spec: ProblemSpec, warn_mass: bool = True) -> EnergyBreakdown:
    """All components of E_a at u (mass constraint not enforced here)."""
    g = u.grid
    if g != spec.grid:
        raise ConfigurationError("field grid does not match problem grid")
    if warn_mass and abs(mass(u) - 1.0) > 1e-6:
        warnings.warn(f"energy evaluated at mass {mass(u):.6f} != 1", stacklevel=2)
    rel = np.sqrt(g.xi_sq + spec.m**2)
    K = quadratic_form_raw(u.values, rel, g)
    Vx = potential_on_grid(spec.V, g)
    P = float(np.sum(Vx * u.values**2) * g.h**3)
    rho = u.values**2
    phi = coulomb_convolve_raw(rho, g)
    D = float(np.sum(rho * phi) * g.h**3)
    return EnergyBreakdown(K, P, D, spec.a)


def gradient(u: Field3, spec: ProblemSpec) -> Field3:
    """Unconstrained first variation 2[sqrt(-Lap+m^2) u + V u - a (1/|x| * u^2) u]."""
    g = u.grid
    if g != spec.grid:
        raise ConfigurationError("field grid does not match problem grid")
    rel = np.sqrt(g.xi_sq + spec.m**2)
    Vx = potential_on_grid(spec.V, g)
    phi = coulomb_convolve_raw(u.values**2, g)
    vals = 2.0 * (multiplier_apply(u.values, rel) + Vx * u.values - spec.a * phi * u.values)
    return Field3(g, vals)


def interaction(u: Field3) -> float:
    rho = u.values**2
    phi = coulomb_convolve_raw(rho, u.grid)
    return float(np.sum(rho * phi) * u.grid.h**3)


def lagrange_multiplier(u: Field3, a: float, energy_value: float) -> float:
    """mu = I - (a/2) D(u), the multiplier of the constrained critical point."""
    return energy_value - 0.5 * a * interaction(u)


def weinstein_quotient(u) -> float:
    """J(u) = 2 ||(-Lap)^(1/4) u||^2 ||u||^2 / D(u); its infimum is the
    critical coupling, attained at the universal profile."""
    if isinstance(u, RadialProfile):
        D = radial_interaction(u)
        if D <= 0:
            raise DegenerateInputError("Weinstein quotient of a field with no interaction")
        return 2.0 * quarter_form(u) * radial_mass(u) / D
    g = u.grid
    D = interaction(u)
    if D <= 0:
        raise DegenerateInputError("Weinstein quotient of a field with no interaction")
    K = quadratic_form_raw(u.values, np.sqrt(g.xi_sq), g)
    return 2.0 * K * mass(u) / D


def hhalf_distance(u: Field3, v: Field3) -> float:
    """H^(1/2) distance via the sqrt(1+|xi|^2) quadratic form."""
    g = require_same_grid(u, v)
    s = sobolev_half_form().on_grid(g)
    return float(np.sqrt(quadratic_form_raw(u.values - v.values, s, g)))
