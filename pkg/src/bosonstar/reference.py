"""Packaged reference constants for the critical coupling.

The critical coupling has no closed form; it is produced by ``solve_q``,
cross-validated against the 3D route, and pinned here as a versioned
artifact so downstream sweeps and the supercritical guard have a stable
reference without re-running the expensive solve.  Regenerate with

    bosonstar solve-q --out <dir>

and copy the emitted ``qstar.json`` / ``q_profile.bsr`` over the packaged
copies if the defaults change.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Optional

from .qstar import QProfile


def _data_path(name: str) -> Path:
    return Path(resources.files("bosonstar").joinpath("data", name))


def reference_qstar(with_profile: bool = False) -> Optional[QProfile]:
    """Load the packaged reference, or None if the package has none yet."""
    from .io import read_qstar, read_radial

    meta = _data_path("qstar_reference.json")
    if not meta.exists():
        return None
    profile = None
    if with_profile:
        prof_path = _data_path("q_profile.bsr")
        if prof_path.exists():
            profile = read_radial(prof_path)
    return read_qstar(meta, profile=profile)


def reference_astar() -> Optional[float]:
    qp = reference_qstar()
    return None if qp is None else qp.a_star
