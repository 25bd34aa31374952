"""Fourier multipliers for the relativistic operators, and their application.

A :class:`SpectralSymbol` is a scalar function of the frequency vector,
evaluated mode-by-mode on a grid's frequency lattice.  The named instances
cover the kinetic operators of the energy functional and the auxiliary
multipliers used in diagnostics:

==========  =============================================
``REL``     sqrt(|xi|^2 + m^2)
``HALF``    |xi|
``NEGQ``    |xi|^(-1/2), zero mode dropped (see below)
``GAP``     (sqrt(|xi|^2 + m^2) + |xi|)^(-1/2)
``SOB``     (1 + |xi|^2)^(1/4)
``SOB2``    sqrt(1 + |xi|^2)
==========  =============================================

NEGQ zero-mode policy: on the torus the inverse-quarter multiplier is
undefined at xi = 0.  The 3D evaluation drops that mode (sets it to zero),
which biases the norm low; authoritative values of the inverse-quarter norm
come from the radial module, where the mode does not exist in the sine basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError
from .grid import Field3, Grid3


@dataclass(frozen=True)
class SpectralSymbol:
    """Scalar multiplier s(xi), evaluated from |xi|^2.

    ``zero_mode`` supplies an explicit value where the formula is singular at
    xi = 0; without it, a non-finite evaluation raises ConfigurationError.
    """

    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    zero_mode: Optional[float] = None

    def evaluate(self, xi_sq: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.asarray(self.fn(xi_sq), dtype=np.float64)
        if self.zero_mode is not None:
            vals = np.where(xi_sq == 0.0, self.zero_mode, vals)
        if not np.all(np.isfinite(vals)):
            raise ConfigurationError(
                f"symbol {self.name} undefined at a grid mode and no zero-mode policy set"
            )
        return vals

    def on_grid(self, grid: Grid3) -> np.ndarray:
        return self.evaluate(grid.xi_sq)


def relativistic(m: float) -> SpectralSymbol:
    """REL: multiplier of sqrt(-Laplacian + m^2)."""
    m2 = float(m) ** 2
    return SpectralSymbol(f"REL(m={m})", lambda s: np.sqrt(s + m2))


def half_laplacian() -> SpectralSymbol:
    """HALF: multiplier of sqrt(-Laplacian)."""
    return SpectralSymbol("HALF", np.sqrt)


def inverse_quarter() -> SpectralSymbol:
    """NEGQ: |xi|^(-1/2) with the zero mode dropped (documented bias)."""
    return SpectralSymbol("NEGQ", lambda s: s ** (-0.25), zero_mode=0.0)


def kinetic_gap(m: float) -> SpectralSymbol:
    """GAP: (sqrt(|xi|^2+m^2) + |xi|)^(-1/2); needs m > 0 to cover the zero mode."""
    m2 = float(m) ** 2
    return SpectralSymbol(f"GAP(m={m})", lambda s: (np.sqrt(s + m2) + np.sqrt(s)) ** (-0.5))


def sobolev_quarter() -> SpectralSymbol:
    """SOB: (1+|xi|^2)^(1/4)."""
    return SpectralSymbol("SOB", lambda s: (1.0 + s) ** 0.25)


def sobolev_half_form() -> SpectralSymbol:
    """SOB2: sqrt(1+|xi|^2), the quadratic-form weight of the H^(1/2) norm."""
    return SpectralSymbol("SOB2", lambda s: np.sqrt(1.0 + s))


def identity_symbol() -> SpectralSymbol:
    return SpectralSymbol("ONE", np.ones_like)


def apply_symbol(u: Field3, s: SpectralSymbol) -> Field3:
    """Inverse-transform(s(xi) * transform(u)); linear in u."""
    g = u.grid
    sv = s.on_grid(g)
    out = np.fft.irfftn(sv * np.fft.rfftn(u.values), s=u.values.shape, axes=(0, 1, 2))
    return Field3(g, out)


def quadratic_form(u: Field3, s: SpectralSymbol) -> float:
    """Mode sum s(xi) |u_hat(xi)|^2, Parseval-normalized.

    Equals ``inner(u, apply_symbol(u, s))`` exactly, and ``mass(u)`` for the
    identity symbol.
    """
    g = u.grid
    sv = s.on_grid(g)
    uh = np.fft.rfftn(u.values)
    acc = np.sum(g.mode_weight * sv * (uh.real**2 + uh.imag**2))
    return float(acc * g.h**3 / g.n**3)


def multiplier_apply(values: np.ndarray, multiplier: np.ndarray) -> np.ndarray:
    """Raw array version of apply_symbol for solver hot loops."""
    return np.fft.irfftn(multiplier * np.fft.rfftn(values), s=values.shape, axes=(0, 1, 2))


def quadratic_form_raw(values: np.ndarray, multiplier: np.ndarray, grid: Grid3) -> float:
    uh = np.fft.rfftn(values)
    acc = np.sum(grid.mode_weight * multiplier * (uh.real**2 + uh.imag**2))
    return float(acc * grid.h**3 / grid.n**3)
