"""External potential families with exact local-behavior metadata.

Three families plus the zero potential:

- ``Trap``: pointwise minimum of single-well power laws
  ``min_i kappa_i |x - x_i|^{p_i}``, so each declared well carries exactly its
  declared local power and strength and the whole potential still grows at
  infinity;
- ``Periodic``: ``kappa (sum_j sin^2(pi (x_j - x0_j)))^{p/2}``, continuous,
  nonnegative, unit-periodic, vanishing exactly on ``x0 + Z^3``; the local
  strength at a zero is ``kappa pi^p`` (measured, not assumed);
- ``Ring``: ``||x| - 1|^p``, rotation invariant, vanishing on the unit sphere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import ConfigurationError, ModelMismatchError


@dataclass(frozen=True)
class Well:
    location: Tuple[float, float, float]
    power: float
    strength: float

    def __post_init__(self) -> None:
        if self.power <= 0 or self.strength <= 0:
            raise ConfigurationError("well power and strength must be positive")


@dataclass(frozen=True)
class ZeroPotential:
    kind: str = "zero"


@dataclass(frozen=True)
class TrapPotential:
    wells: Tuple[Well, ...]
    kind: str = "trap"

    def __post_init__(self) -> None:
        if not self.wells:
            raise ConfigurationError("trap needs at least one well")
        locs = [w.location for w in self.wells]
        if len(set(locs)) != len(locs):
            raise ConfigurationError("trap well locations must be pairwise distinct")


@dataclass(frozen=True)
class PeriodicPotential:
    offset: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    power: float = 2.0
    strength: float = 1.0
    kind: str = "periodic"

    def __post_init__(self) -> None:
        if self.power <= 0 or self.strength <= 0:
            raise ConfigurationError("periodic power and strength must be positive")
        if not all(0.0 <= c <= 1.0 for c in self.offset):
            raise ConfigurationError("periodic offset must lie in the unit cell")


@dataclass(frozen=True)
class RingPotential:
    power: float = 0.5
    kind: str = "ring"

    def __post_init__(self) -> None:
        if self.power <= 0:
            raise ConfigurationError("ring power must be positive")


PotentialSpec = ZeroPotential | TrapPotential | PeriodicPotential | RingPotential


def evaluate(V: PotentialSpec, x, y=None, z=None) -> np.ndarray:
    """V at points; accepts an (..., 3) array or three coordinate arrays."""
    if y is None:
        pts = np.asarray(x, dtype=np.float64)
        x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if isinstance(V, ZeroPotential):
        return np.zeros(np.broadcast(x, y, z).shape)
    if isinstance(V, TrapPotential):
        out = None
        for w in V.wells:
            d2 = (x - w.location[0]) ** 2 + (y - w.location[1]) ** 2 + (z - w.location[2]) ** 2
            val = w.strength * d2 ** (w.power / 2.0)
            out = val if out is None else np.minimum(out, val)
        return out
    if isinstance(V, PeriodicPotential):
        s = (
            np.sin(np.pi * (x - V.offset[0])) ** 2
            + np.sin(np.pi * (y - V.offset[1])) ** 2
            + np.sin(np.pi * (z - V.offset[2])) ** 2
        )
        return V.strength * s ** (V.power / 2.0)
    if isinstance(V, RingPotential):
        return np.abs(np.sqrt(x * x + y * y + z * z) - 1.0) ** V.power
    raise ConfigurationError(f"unknown potential {V!r}")


def zero_set(V: PotentialSpec) -> Sequence[Tuple[float, float, float]]:
    """Declared zeros inside one representative cell (a single point for Ring
    stands in for the whole unit sphere)."""
    if isinstance(V, ZeroPotential):
        return [(0.0, 0.0, 0.0)]
    if isinstance(V, TrapPotential):
        return [w.location for w in V.wells]
    if isinstance(V, PeriodicPotential):
        return [V.offset]
    if isinstance(V, RingPotential):
        return [(1.0, 0.0, 0.0)]
    raise ConfigurationError(f"unknown potential {V!r}")


def flattest_minima(V: TrapPotential):
    """Flattest-well selection: p = max p_i, kappa = min over those, ties kept.

    Returns (p, kappa, locations).
    """
    if not isinstance(V, TrapPotential):
        raise TypeError("flattest_minima is defined for trap potentials only")
    p = max(w.power for w in V.wells)
    flat = [w for w in V.wells if w.power == p]
    kappa = min(w.strength for w in flat)
    locs = [w.location for w in flat if w.strength == kappa]
    return p, kappa, locs


def local_parameters(V: PotentialSpec):
    """(p, kappa, zeros) describing V near its flattest zeros.

    For the periodic family kappa is the local strength ``kappa pi^p`` of the
    sin^2 realization; for the ring it is 1 by construction.
    """
    if isinstance(V, TrapPotential):
        return flattest_minima(V)
    if isinstance(V, PeriodicPotential):
        return V.power, V.strength * np.pi**V.power, [V.offset]
    if isinstance(V, RingPotential):
        return V.power, 1.0, list(zero_set(V))
    raise ConfigurationError(f"potential {V!r} has no local power-law data")


def local_expansion_check(
    V: PotentialSpec, zero, p: float, length_scale: float = 1.0, rtol: float = 0.05
) -> float:
    """Empirical local strength: extrapolate V / |x - zero|^p toward the zero.

    Samples shells at radii 1e-1, 1e-2, 1e-3 of the length scale and requires
    the shell-averaged ratios to converge (Cauchy within rtol of the trend).
    """
    zero = np.asarray(zero, dtype=np.float64)
    rng = np.random.default_rng(7)
    dirs = rng.normal(size=(64, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    ratios = []
    for scale in (1e-1, 1e-2, 1e-3):
        pts = zero + scale * length_scale * dirs
        vals = evaluate(V, pts)
        ratios.append(float(np.mean(vals) / (scale * length_scale) ** p))
    r1, r2, r3 = ratios
    if abs(r3 - r2) > rtol * abs(r3) + 1e-300:
        raise ModelMismatchError(
            f"V/|x-z|^{p} does not converge near {tuple(zero)}: ratios {ratios}"
        )
    # Richardson-style: the ratio sequence converges linearly in the radius
    return r3 + (r3 - r2) / 9.0


def to_dict(V: PotentialSpec) -> dict:
    if isinstance(V, ZeroPotential):
        return {"type": "zero"}
    if isinstance(V, TrapPotential):
        return {
            "type": "trap",
            "wells": [
                {"x": list(w.location), "p": w.power, "kappa": w.strength} for w in V.wells
            ],
        }
    if isinstance(V, PeriodicPotential):
        return {"type": "periodic", "x0": list(V.offset), "p": V.power, "kappa": V.strength}
    if isinstance(V, RingPotential):
        return {"type": "ring", "p": V.power}
    raise ConfigurationError(f"unknown potential {V!r}")


def from_dict(doc: dict) -> PotentialSpec:
    if not isinstance(doc, dict) or "type" not in doc:
        raise ConfigurationError("potential descriptor needs a 'type' key")
    kind = doc["type"]
    keys = set(doc)
    if kind == "zero":
        _require_keys(keys, {"type"})
        return ZeroPotential()
    if kind == "trap":
        _require_keys(keys, {"type", "wells"})
        wells = tuple(
            Well(tuple(float(c) for c in w["x"]), float(w["p"]), float(w["kappa"]))
            for w in doc["wells"]
        )
        return TrapPotential(wells)
    if kind == "periodic":
        _require_keys(keys, {"type", "x0", "p", "kappa"})
        return PeriodicPotential(
            tuple(float(c) for c in doc["x0"]), float(doc["p"]), float(doc["kappa"])
        )
    if kind == "ring":
        _require_keys(keys, {"type", "p"})
        return RingPotential(float(doc["p"]))
    raise ConfigurationError(f"unknown potential type {kind!r}")


def _require_keys(found: set, allowed: set) -> None:
    extra = found - allowed
    if extra:
        raise ConfigurationError(f"unknown keys in potential descriptor: {sorted(extra)}")
    missing = allowed - found
    if missing:
        raise ConfigurationError(f"missing keys in potential descriptor: {sorted(missing)}")
