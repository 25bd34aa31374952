"""Periodic 3D computational box and real scalar fields living on it.

Conventions (fixed once, used everywhere):

- coordinates are cell centers ``x_i = (i - n/2) h`` per axis, so the box is
  ``[-L/2, L/2)`` and the origin is a grid point;
- frequencies ``xi = 2 pi k / L`` in standard DFT order, last axis stored in
  the half-spectrum (rfft) layout;
- forward DFT unscaled, inverse scaled by ``1/n^3``;
- every physical quantity carries the quadrature weight ``h^3`` explicitly,
  so ``mass(u) = sum(u^2) h^3``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DegenerateInputError, GridMismatchError


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid3:
    """Cubic periodic grid with precomputed coordinate and frequency arrays.

    Parameters
    ----------
    n : int
        Points per axis, power of two, at least 8.
    L : float
        Physical side length.
    """

    n: int
    L: float

    def __post_init__(self) -> None:
        if not _is_power_of_two(self.n) or self.n < 8:
            raise ConfigurationError(f"grid size must be a power of two >= 8, got {self.n}")
        if not self.L > 0:
            raise ConfigurationError(f"box length must be positive, got {self.L}")
        h = self.L / self.n
        object.__setattr__(self, "h", h)
        axis = (np.arange(self.n) - self.n // 2) * h
        object.__setattr__(self, "axis", axis)
        X, Y, Z = np.meshgrid(axis, axis, axis, indexing="ij")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "Z", Z)
        xi1 = 2.0 * np.pi * np.fft.fftfreq(self.n, d=h)
        xi1r = 2.0 * np.pi * np.fft.rfftfreq(self.n, d=h)
        object.__setattr__(self, "xi_axis", xi1)
        XI0, XI1, XI2 = np.meshgrid(xi1, xi1, xi1r, indexing="ij")
        object.__setattr__(self, "xi_sq", XI0**2 + XI1**2 + XI2**2)
        # rfft stores only half of the last axis; interior planes count twice
        # in Parseval sums, the kz=0 and Nyquist planes once.
        w = np.full(self.n // 2 + 1, 2.0)
        w[0] = 1.0
        w[-1] = 1.0
        object.__setattr__(self, "mode_weight", w[np.newaxis, np.newaxis, :])

    def radii(self, center=(0.0, 0.0, 0.0)) -> np.ndarray:
        """Distance of every grid point from ``center``."""
        return np.sqrt(
            (self.X - center[0]) ** 2 + (self.Y - center[1]) ** 2 + (self.Z - center[2]) ** 2
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Grid3) and self.n == other.n and self.L == other.L

    def __hash__(self) -> int:
        return hash((self.n, self.L))


def make_grid(n: int, L: float) -> Grid3:
    """Build a :class:`Grid3`, rejecting non-power-of-two sizes and bad lengths."""
    return Grid3(int(n), float(L))


@dataclass
class Field3:
    """Real scalar field sampled on a :class:`Grid3`."""

    grid: Grid3
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (self.grid.n,) * 3:
            raise ConfigurationError(
                f"field shape {self.values.shape} does not match grid n={self.grid.n}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ConfigurationError("field contains non-finite values")

    def copy(self) -> "Field3":
        return Field3(self.grid, self.values.copy())


def require_same_grid(u: Field3, v: Field3) -> Grid3:
    if u.grid != v.grid:
        raise GridMismatchError(
            f"fields on different grids: ({u.grid.n},{u.grid.L}) vs ({v.grid.n},{v.grid.L})"
        )
    return u.grid


def mass(u: Field3) -> float:
    """Squared L2 norm with the h^3 quadrature weight."""
    return float(np.sum(u.values * u.values) * u.grid.h**3)


def inner(u: Field3, v: Field3) -> float:
    require_same_grid(u, v)
    return float(np.sum(u.values * v.values) * u.grid.h**3)


def normalize(u: Field3, target: float = 1.0) -> Field3:
    """Rescale so that ``mass == target``; rejects the zero field."""
    m = mass(u)
    if m <= 0.0 or not np.isfinite(m):
        raise DegenerateInputError("cannot normalize a zero or non-finite field")
    return Field3(u.grid, u.values * np.sqrt(target / m))


def density_peak(u: Field3) -> np.ndarray:
    """Location of the maximum of u^2, refined by per-axis quadratic interpolation.

    The parabola through the peak cell and its two periodic neighbours gives
    sub-grid accuracy whenever the density is resolved.
    """
    g = u.grid
    rho = u.values * u.values
    idx = np.unravel_index(np.argmax(rho), rho.shape)
    out = np.empty(3)
    for ax in range(3):
        i = idx[ax]
        sel = list(idx)
        sel[ax] = (i - 1) % g.n
        fm = rho[tuple(sel)]
        sel[ax] = (i + 1) % g.n
        fp = rho[tuple(sel)]
        f0 = rho[idx]
        denom = fm - 2.0 * f0 + fp
        shift = 0.0 if denom == 0.0 else 0.5 * (fm - fp) / denom
        shift = float(np.clip(shift, -0.5, 0.5))
        out[ax] = g.axis[i] + shift * g.h
    return out
