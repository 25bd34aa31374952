"""The universal profile, the critical coupling, and blow-up asymptotics.

``solve_q`` computes the optimizer Q of the kinetic-Coulomb interpolation
inequality on the radial grid by a preconditioned fixed-point iteration on
the Weinstein quotient

    J(f) = 2 ||(-Lap)^(1/4) f||^2 ||f||^2 / D(f):

each step applies the resolvent of sqrt(-Lap) + 1 to J(f) Phi_f f, takes the
positive part and renormalizes the mass; during the opening phase the profile
is also re-dilated so the kinetic and mass norms agree, which removes the
near-neutral dilation direction from the iteration.  The fixed point solves
the massless Euler-Lagrange equation with multiplier -1, and the critical
coupling is a* = J(Q) = 2/D(Q) after the final normalization to
``||Q|| = ||(-Lap)^(1/4) Q|| = 1``.

The remaining functions evaluate the dilation parameter of the limiting
profile for each potential family, rescale computed minimizers into blow-up
coordinates, and fit the energy scaling law along a sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import potentials
from .energy import hhalf_distance
from .errors import (
    ConfigurationError,
    DomainTruncationError,
    InsufficientRangeError,
    NonconvergenceError,
    RequiresMomentError,
    ResolutionError,
    SolverInconsistencyError,
)
from .grid import Field3, Grid3, density_peak, mass, normalize
from .potentials import PotentialSpec, PeriodicPotential, RingPotential, TrapPotential
from .radial import (
    RadialGrid,
    RadialProfile,
    apply_radial_multiplier,
    dilate_profile,
    half_laplacian_radial,
    inverse_quarter_form,
    lift_to_3d,
    monotonicity_violation,
    normalize_radial,
    poisson_potential,
    quarter_form,
    radial_mass,
    radial_moment,
    tail_mass_fraction,
)
from .solver import GroundState, rescale_field
from .symbols import multiplier_apply, quadratic_form_raw
from .coulomb import coulomb_convolve_raw


@dataclass
class QProfile:
    """Universal profile with its normalization constants and moments."""

    profile: Optional[RadialProfile]
    a_star: float
    neg_quarter_sq: float
    moments: Dict[float, float]
    decay_coeff: float
    decay_oscillation: float
    el_residual: float
    iterations: int
    n_r: int
    r_max: float

    def moment(self, p: float) -> float:
        """Weighted moment int |x|^p Q^2; computed on demand when the profile
        is in memory, otherwise only the stored table is available."""
        key = float(p)
        if key in self.moments:
            return self.moments[key]
        if self.profile is None:
            raise RequiresMomentError(
                f"moment p={p} not stored and no profile available to compute it"
            )
        val = radial_moment(self.profile, key)
        self.moments[key] = val
        return val


def _q_observables(f: RadialProfile):
    phi = poisson_potential(RadialProfile(f.grid, f.values**2))
    g = f.grid
    D = float(4.0 * np.pi * g.dr * np.sum(g.r**2 * f.values**2 * phi.values))
    K = quarter_form(f)
    M = radial_mass(f)
    J = 2.0 * K * M / D
    return phi, K, M, D, J


def _el_residual(f: RadialProfile, coeff: float, phi: RadialProfile) -> float:
    g = f.grid
    R = half_laplacian_radial(f, 0.5).values + f.values - coeff * phi.values * f.values
    return float(np.sqrt(4.0 * np.pi * g.dr * np.sum(g.r**2 * R * R)))


#: fraction of r_max inside which the computed tail is free of the
#: sine-basis mirror image of the algebraic decay (see module notes)
TRUSTED_TAIL_FRACTION = 0.5


def solve_q(
    n_r: int = 4096,
    r_max: float = 200.0,
    tol: float = 1e-8,
    max_iters: int = 2000,
    pin_release: float = 1e-4,
    tail_threshold: float = 1e-8,
    moment_orders: Sequence[float] = (0.5, 1.0, 2.0),
) -> QProfile:
    """Compute Q and the critical coupling on an (n_r, r_max) radial grid.

    The reported residual is that of the massless Euler-Lagrange equation
    with multiplier -1 and coefficient a* = 2/D(Q).  The iteration stops at
    ``tol`` or at its round-off floor, whichever comes first; a floor above
    1e-6 raises NonconvergenceError.
    """
    grid = RadialGrid(n_r, r_max)
    k = grid.k
    f = normalize_radial(RadialProfile(grid, np.exp(-grid.r**2 / 4.0)))
    pinned = True
    best = np.inf
    stall = 0
    it = 0
    for it in range(max_iters):
        phi, K, M, D, J = _q_observables(f)
        res = _el_residual(f, J, phi)
        if res < tol:
            break
        if res < best * 0.999:
            best = res
            stall = 0
        else:
            stall += 1
            if stall > 60 and res < 1e-6:
                break  # converged to the discretization floor
        if pinned and res < pin_release:
            pinned = False
        g = apply_radial_multiplier(
            RadialProfile(grid, J * phi.values * f.values), 1.0 / (k + 1.0)
        )
        g = normalize_radial(RadialProfile(grid, np.abs(g.values)))
        if pinned:
            Kg, Mg = quarter_form(g), radial_mass(g)
            beta = Mg / Kg
            if abs(beta - 1.0) > 1e-13:
                g = normalize_radial(dilate_profile(g, beta))
        f = g
    # final normalization: tiny dilations enforce equal kinetic and mass norms
    for _ in range(12):
        K, M = quarter_form(f), radial_mass(f)
        if abs(K / M - 1.0) < 5e-14:
            break
        f = normalize_radial(dilate_profile(f, M / K))
    f = normalize_radial(f)
    phi, K, M, D, J = _q_observables(f)
    a_star = 2.0 / D
    res = _el_residual(f, a_star, phi)
    if res > 1e-6:
        raise NonconvergenceError(f"Q solve stalled at residual {res:.2e}")
    tail = tail_mass_fraction(f)
    if tail > tail_threshold:
        raise DomainTruncationError(
            f"domain-truncation: tail mass fraction {tail:.2e} exceeds {tail_threshold:.0e}; "
            "increase r_max"
        )
    r = grid.r
    w = (1.0 + r) ** 4 * f.values
    lo, hi = r_max * TRUSTED_TAIL_FRACTION / 2.0, r_max * TRUSTED_TAIL_FRACTION
    win = (r >= lo) & (r <= hi)
    decay_coeff = float(np.max(w[win]))
    decay_osc = float((np.max(w[win]) - np.min(w[win])) / np.median(w[win]))
    moments = {float(p): radial_moment(f, p) for p in moment_orders}
    return QProfile(
        profile=f,
        a_star=a_star,
        neg_quarter_sq=inverse_quarter_form(f),
        moments=moments,
        decay_coeff=decay_coeff,
        decay_oscillation=decay_osc,
        el_residual=res,
        iterations=it + 1,
        n_r=n_r,
        r_max=r_max,
    )


def cross_validate_astar(
    qp: QProfile, grid: Grid3, iters: int = 30, mismatch_limit: float = 0.05
) -> float:
    """Independent 3D estimate of the critical coupling.

    Minimizes the Weinstein quotient over 3D torus fields starting from the
    lifted profile, with the analogous resolvent fixed point.  Raises
    SolverInconsistencyError when the routes disagree beyond
    ``mismatch_limit`` (callers typically require 1%).
    """
    if qp.profile is None:
        raise ConfigurationError("cross validation needs the radial profile in memory")
    u = normalize(lift_to_3d(qp.profile, grid))
    half = np.sqrt(grid.xi_sq)
    h3 = grid.h**3
    J3 = math.inf
    for _ in range(iters):
        rho = u.values**2
        phi = coulomb_convolve_raw(rho, grid)
        D = float(np.sum(rho * phi) * h3)
        K = quadratic_form_raw(u.values, half, grid)
        J3 = 2.0 * K * mass(u) / D
        step = multiplier_apply(J3 * phi * u.values, 1.0 / (half + 1.0))
        u = normalize(Field3(grid, np.abs(step)))
    if abs(J3 - qp.a_star) > mismatch_limit * qp.a_star:
        raise SolverInconsistencyError(
            f"3D estimate {J3:.6f} deviates from radial {qp.a_star:.6f} beyond "
            f"{mismatch_limit:.0%}"
        )
    return J3


# ---------------------------------------------------------------------------
# dilation-parameter formulas
# ---------------------------------------------------------------------------


def lambda_predicted(qp: QProfile, family: str, p: float, kappa: float = 1.0, m: float = 1.0):
    """Dilation parameter of the limiting profile for one potential family.

    Branches: for p < 1 the potential moment alone sets the scale; at p = 1
    the mass term enters on equal footing; for p > 1 the potential drops out
    entirely.  The ring family replaces the full moment by its angular
    reduction int |x0.x|^p Q^2 = M_p / (p + 1).
    """
    if p <= 0:
        raise ConfigurationError("power must be positive")
    if kappa <= 0:
        raise ConfigurationError("strength must be positive")
    a = qp.a_star
    if family not in ("trap", "periodic", "ring"):
        raise ConfigurationError(f"unknown scenario family {family!r}")
    if p > 1:
        return m * math.sqrt(a / 2.0) * math.sqrt(qp.neg_quarter_sq)
    if family == "ring":
        kappa_eff = 1.0
        moment = qp.moment(p) / (p + 1.0)
    else:
        kappa_eff = kappa
        moment = qp.moment(p)
    if p < 1:
        return (a * p * kappa_eff * moment) ** (1.0 / (p + 1.0))
    return math.sqrt(0.5 * m * m * a * qp.neg_quarter_sq + a * kappa_eff * moment)


def blowup_exponent(q: float) -> float:
    return q / (q + 1.0)


def energy_prefactor(qp: QProfile, lam: float, q: float) -> float:
    """Limit of I(a) / (a* - a)^(q/(q+1))."""
    return (q + 1.0) / q * lam / qp.a_star


# ---------------------------------------------------------------------------
# blow-up coordinates, profile comparison, concentration diagnostics
# ---------------------------------------------------------------------------


def extract_blowup_profile(
    gs: GroundState, a: float, a_star: float, q: float
) -> Tuple[Field3, float, np.ndarray]:
    """Rescale a converged minimizer into blow-up coordinates.

    Returns (w, eps, center) with w(x) = eps^(3/2) u(eps x + center) on the
    same logical grid, peak-centered by an exact Fourier shift, and
    eps = (a* - a)^(1/(q+1)).
    """
    if not gs.converged:
        raise ConfigurationError("blow-up extraction needs a converged state")
    eps = (a_star - a) ** (1.0 / (q + 1.0))
    g = gs.u.grid
    if abs(eps - gs.eps_used) / eps > 1e-12:
        ratio = eps / gs.eps_used
        if ratio < 1.0 and gs.eps_used == 1.0:
            # physical-coordinate state: check the profile is resolvable
            width = 1.0 / max(quadratic_form_raw(gs.u.values, np.sqrt(g.xi_sq), g), 1e-300)
            if width < 4.0 * g.h:
                raise ResolutionError(
                    "profile narrower than four grid spacings; solve in rescaled coordinates"
                )
        w = rescale_field(gs.u, density_peak(gs.u), ratio)
    else:
        w = gs.u.copy()
    peak = density_peak(w)
    shift = np.exp(
        -1j
        * (
            np.fft.fftfreq(g.n, d=g.h)[:, None, None] * 2 * np.pi * peak[0]
            + np.fft.fftfreq(g.n, d=g.h)[None, :, None] * 2 * np.pi * peak[1]
            + np.fft.rfftfreq(g.n, d=g.h)[None, None, :] * 2 * np.pi * peak[2]
        )
    )
    vals = np.fft.irfftn(shift * np.fft.rfftn(w.values), s=w.values.shape, axes=(0, 1, 2))
    w = normalize(Field3(g, vals))
    center = gs.center if gs.eps_used != 1.0 else density_peak(gs.u)
    return w, eps, np.asarray(center)


def profile_error(w: Field3, qp: QProfile, lam: float) -> Tuple[float, float]:
    """L2 and H^(1/2) distances between w and the lifted profile
    lam^(3/2) Q(lam x)."""
    if lam <= 0:
        raise ConfigurationError("profile scale must be positive")
    if qp.profile is None:
        raise ConfigurationError("profile comparison needs the radial profile in memory")
    ref = normalize(lift_to_3d(qp.profile, w.grid, scale=lam))
    l2 = float(np.sqrt(np.sum((w.values - ref.values) ** 2) * w.grid.h**3))
    return l2, hhalf_distance(w, ref)


def _minimal_image(delta: np.ndarray, L: float) -> np.ndarray:
    return (delta + L / 2.0) % L - L / 2.0


def second_moment_tensor(u: Field3, center) -> np.ndarray:
    """Second moments of u^2 about center with minimal-image displacements."""
    g = u.grid
    rho = u.values**2
    total = float(np.sum(rho))
    d = [
        _minimal_image(g.X - center[0], g.L),
        _minimal_image(g.Y - center[1], g.L),
        _minimal_image(g.Z - center[2], g.L),
    ]
    T = np.empty((3, 3))
    for i in range(3):
        for j in range(i, 3):
            T[i, j] = T[j, i] = float(np.sum(d[i] * d[j] * rho) / total)
    return T


def anisotropy_of(u: Field3, center) -> float:
    """Normalized deviation of the second-moment tensor from isotropy:
    1 - t_min / t_max of its eigenvalues, in [0, 1]."""
    T = second_moment_tensor(u, center)
    ev = np.linalg.eigvalsh(T)
    if ev[-1] <= 0:
        return 0.0
    return float(1.0 - ev[0] / ev[-1])


def concentration_diagnostics(gs: GroundState, V: PotentialSpec, tol_h: float = 3.0) -> dict:
    """Where the mass sits: physical center, nearest flattest zero of V
    within ``tol_h`` grid spacings (when the family has isolated zeros), and
    the density anisotropy about the peak."""
    g = gs.u.grid
    peak_w = density_peak(gs.u)
    center = np.asarray(gs.center, dtype=np.float64)
    h_phys = g.h * gs.eps_used
    well_id = None
    if isinstance(V, TrapPotential):
        _, _, zees = potentials.flattest_minima(V)
        dists = [np.linalg.norm(center - np.asarray(z)) for z in zees]
        best = int(np.argmin(dists))
        if dists[best] <= tol_h * max(h_phys, g.h):
            well_id = best
    elif isinstance(V, PeriodicPotential):
        x0 = np.asarray(V.offset)
        z = np.round(center - x0)
        if np.linalg.norm(center - x0 - z) <= tol_h * max(h_phys, g.h):
            well_id = tuple(int(c) for c in z)
    return {
        "center": center,
        "radius": float(np.linalg.norm(center)),
        "well_id": well_id,
        "anisotropy": anisotropy_of(gs.u, peak_w),
    }


# ---------------------------------------------------------------------------
# sweep rows and the scaling fit
# ---------------------------------------------------------------------------


@dataclass
class SweepRow:
    a: float
    energy: float
    kinetic_rel: float
    potential: float
    interaction: float
    mu: float
    lambda_fit: float
    center: Tuple[float, float, float]
    l2_profile_err: float
    hhalf_profile_err: float
    anisotropy: float
    residual: float
    converged: bool
    resolved: bool = True

    def eps(self, a_star: float, q: float) -> float:
        return (a_star - self.a) ** (1.0 / (q + 1.0))


@dataclass
class ScalingFit:
    """Fitted blow-up scaling against the theorem values."""

    q: float
    a_star: float
    exponent_fit: float
    prefactor_fit: float
    lambda_pred: float
    lambda_fit: float
    rows: List[SweepRow] = dc_field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "q": self.q,
            "a_star": self.a_star,
            "exponent_fit": self.exponent_fit,
            "exponent_target": blowup_exponent(self.q),
            "prefactor_fit": self.prefactor_fit,
            "lambda_pred": self.lambda_pred,
            "lambda_fit": self.lambda_fit,
        }


def fit_scaling(
    rows: Sequence[SweepRow], a_star: float, q: float, lambda_pred: float = float("nan")
) -> ScalingFit:
    """Least squares of log I(a) against log (a* - a).

    Rows that failed to converge or were under-resolved are excluded; at
    least five clean rows spanning two decades of a* - a are required.
    """
    clean = [r for r in rows if r.converged and r.resolved]
    if len(clean) < 5:
        raise InsufficientRangeError(f"need >= 5 clean rows, have {len(clean)}")
    gaps = np.array([a_star - r.a for r in clean])
    if np.min(gaps) <= 0:
        raise ConfigurationError("rows must lie strictly below the critical coupling")
    if np.max(gaps) / np.min(gaps) < 99.0:
        raise InsufficientRangeError(
            f"gap range {np.max(gaps)/np.min(gaps):.1f} spans less than two decades"
        )
    energies = np.array([r.energy for r in clean])
    if np.any(energies <= 0):
        raise ConfigurationError("scaling fit expects positive energies below a*")
    slope, intercept = np.polyfit(np.log(gaps), np.log(energies), 1)
    order = np.argsort(gaps)
    smallest = clean[int(order[0])]
    return ScalingFit(
        q=q,
        a_star=a_star,
        exponent_fit=float(slope),
        prefactor_fit=float(np.exp(intercept)),
        lambda_pred=float(lambda_pred),
        lambda_fit=smallest.lambda_fit,
        rows=list(rows),
    )
