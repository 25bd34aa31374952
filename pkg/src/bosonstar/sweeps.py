"""Blow-up sweeps: continuation toward the critical coupling plus row-level
extraction, profile comparison, and the scaling fit.

A scenario is a potential family with a mass parameter.  The sweep solves the
rescaled problems along an ascending ladder of couplings, rescales each
minimizer into blow-up coordinates, compares it to the dilated universal
profile, and fits the energy scaling law.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import potentials
from .energy import ProblemSpec
from .errors import ConfigurationError
from .grid import Field3, Grid3, normalize
from .potentials import (
    PeriodicPotential,
    PotentialSpec,
    RingPotential,
    TrapPotential,
    ZeroPotential,
)
from .qstar import (
    QProfile,
    ScalingFit,
    SweepRow,
    anisotropy_of,
    extract_blowup_profile,
    fit_scaling,
    lambda_predicted,
    profile_error,
)
from .radial import lift_to_3d
from .grid import density_peak
from .solver import GroundState, SolverOptions, continuation_sweep
from .symbols import quadratic_form_raw


def family_of(V: PotentialSpec) -> str:
    if isinstance(V, TrapPotential):
        return "trap"
    if isinstance(V, PeriodicPotential):
        return "periodic"
    if isinstance(V, RingPotential):
        return "ring"
    if isinstance(V, ZeroPotential):
        return "zero"
    raise ConfigurationError(f"unknown potential {V!r}")


@dataclass
class SweepResult:
    fit: ScalingFit
    states: List[GroundState]
    rows: List[SweepRow]
    lam_pred: float
    q: float
    center: Tuple[float, float, float]


def gap_ladder(a_star: float, lo_frac: float = 1e-3, hi_frac: float = 1e-1, count: int = 8):
    """Ascending couplings with a* - a log-spaced in [lo, hi] a*."""
    fracs = np.logspace(np.log10(hi_frac), np.log10(lo_frac), count)
    return [a_star * (1.0 - f) for f in fracs]


def run_sweep(
    qp: QProfile,
    V: PotentialSpec,
    m: float,
    grid: Grid3,
    a_values: Optional[Sequence[float]] = None,
    opts: Optional[SolverOptions] = None,
    center: Optional[Tuple[float, float, float]] = None,
    rescaled: bool = True,
) -> SweepResult:
    """Run one scenario sweep and fit the scaling law.

    The first solve starts from the universal profile dilated by the
    predicted limit parameter; later solves warm-start from the previous
    rescaled minimizer.
    """
    family = family_of(V)
    if family == "zero":
        raise ConfigurationError("blow-up sweeps need a confining potential family")
    p, kappa, zeros = potentials.local_parameters(V)
    q = min(p, 1.0)
    lam_pred = lambda_predicted(qp, family, p, kappa, m)
    if center is None:
        center = tuple(zeros[0])
    if a_values is None:
        a_values = gap_ladder(qp.a_star)
    if qp.profile is None:
        raise ConfigurationError("sweeps need the radial profile in memory")
    init = normalize(lift_to_3d(qp.profile, grid, scale=lam_pred))

    def spec_of(a: float) -> ProblemSpec:
        return ProblemSpec(a=a, m=m, V=V, grid=grid)

    states = continuation_sweep(
        spec_of, list(a_values), qp.a_star, q, opts=opts, center=center, init=init,
        rescaled=rescaled,
    )
    rows: List[SweepRow] = []
    half = np.sqrt(grid.xi_sq)
    for a, gs in zip(a_values, states):
        w, eps, _ = extract_blowup_profile(gs, a, qp.a_star, q)
        lam_fit = quadratic_form_raw(w.values, half, grid)
        l2, hh = profile_error(w, qp, lam_pred)
        rows.append(
            SweepRow(
                a=a,
                energy=gs.breakdown.total,
                kinetic_rel=gs.breakdown.kinetic_rel,
                potential=gs.breakdown.potential,
                interaction=gs.breakdown.interaction,
                mu=gs.mu,
                lambda_fit=lam_fit,
                center=tuple(float(c) for c in gs.center),
                l2_profile_err=l2,
                hhalf_profile_err=hh,
                anisotropy=anisotropy_of(gs.u, density_peak(gs.u)),
                residual=gs.residual,
                converged=gs.converged,
            )
        )
    fit = fit_scaling(rows, qp.a_star, q, lambda_pred=lam_pred)
    return SweepResult(fit=fit, states=states, rows=rows, lam_pred=lam_pred, q=q, center=center)
