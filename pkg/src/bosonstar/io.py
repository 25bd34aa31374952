"""File formats and persistence.

``BSF1``: one UTF-8 JSON header line
``{"format":"BSF1","n":int,"L":float,"kind":"field3"}`` terminated by a
newline, followed by n^3 little-endian binary64 values in row-major order
(z fastest).  ``BSR1`` is the radial analogue with header keys n_r, r_max.
Readers reject mismatched payload lengths.

All writes are atomic: content goes to a temporary file in the target
directory and is renamed into place, so partial files never parse.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Union

import numpy as np

from .errors import ConfigurationError
from .grid import Field3, Grid3
from .qstar import QProfile
from .radial import RadialGrid, RadialProfile

PathLike = Union[str, Path]


def _atomic_write(path: PathLike, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: PathLike, doc: dict) -> None:
    _atomic_write(path, (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode())


def read_json(path: PathLike) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def write_field(path: PathLike, u: Field3) -> None:
    header = {"format": "BSF1", "n": u.grid.n, "L": u.grid.L, "kind": "field3"}
    payload = json.dumps(header).encode() + b"\n"
    payload += np.ascontiguousarray(u.values, dtype="<f8").tobytes()
    _atomic_write(path, payload)


def read_field(path: PathLike) -> Field3:
    with open(path, "rb") as fh:
        header_line = fh.readline()
        blob = fh.read()
    try:
        header = json.loads(header_line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"not a BSF1 file: {path}") from exc
    if header.get("format") != "BSF1":
        raise ConfigurationError(f"unexpected format {header.get('format')!r} in {path}")
    n = int(header["n"])
    expected = n**3 * 8
    if len(blob) != expected:
        raise ConfigurationError(
            f"BSF1 payload length {len(blob)} does not match n^3 doubles ({expected})"
        )
    values = np.frombuffer(blob, dtype="<f8").reshape(n, n, n)
    return Field3(Grid3(n, float(header["L"])), values.copy())


def write_radial(path: PathLike, f: RadialProfile) -> None:
    header = {"format": "BSR1", "n_r": f.grid.n_r, "r_max": f.grid.r_max}
    payload = json.dumps(header).encode() + b"\n"
    payload += np.ascontiguousarray(f.values, dtype="<f8").tobytes()
    _atomic_write(path, payload)


def read_radial(path: PathLike) -> RadialProfile:
    with open(path, "rb") as fh:
        header_line = fh.readline()
        blob = fh.read()
    try:
        header = json.loads(header_line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"not a BSR1 file: {path}") from exc
    if header.get("format") != "BSR1":
        raise ConfigurationError(f"unexpected format {header.get('format')!r} in {path}")
    n_r = int(header["n_r"])
    if len(blob) != n_r * 8:
        raise ConfigurationError(
            f"BSR1 payload length {len(blob)} does not match n_r doubles ({n_r * 8})"
        )
    values = np.frombuffer(blob, dtype="<f8")
    return RadialProfile(RadialGrid(n_r, float(header["r_max"])), values.copy())


def write_qstar(path: PathLike, qp: QProfile) -> None:
    doc = {
        "a_star": qp.a_star,
        "neg_quarter_sq": qp.neg_quarter_sq,
        "moments": {f"{p:g}": v for p, v in sorted(qp.moments.items())},
        "n_r": qp.n_r,
        "r_max": qp.r_max,
        "decay_coeff": qp.decay_coeff,
        "decay_oscillation": qp.decay_oscillation,
        "el_residual": qp.el_residual,
        "iterations": qp.iterations,
    }
    write_json(path, doc)


def read_qstar(path: PathLike, profile: RadialProfile | None = None) -> QProfile:
    doc = read_json(path)
    return QProfile(
        profile=profile,
        a_star=float(doc["a_star"]),
        neg_quarter_sq=float(doc["neg_quarter_sq"]),
        moments={float(k): float(v) for k, v in doc["moments"].items()},
        decay_coeff=float(doc.get("decay_coeff", float("nan"))),
        decay_oscillation=float(doc.get("decay_oscillation", float("nan"))),
        el_residual=float(doc.get("el_residual", float("nan"))),
        iterations=int(doc.get("iterations", 0)),
        n_r=int(doc["n_r"]),
        r_max=float(doc["r_max"]),
    )


SWEEP_CSV_COLUMNS = [
    "a",
    "eps",
    "energy",
    "kinetic_rel",
    "potential",
    "interaction",
    "mu",
    "lambda_fit",
    "center_x",
    "center_y",
    "center_z",
    "l2_profile_err",
    "hhalf_profile_err",
    "anisotropy",
    "residual",
    "converged",
]


def write_sweep_csv(path: PathLike, rows, a_star: float, q: float) -> None:
    lines = [",".join(SWEEP_CSV_COLUMNS)]
    for r in rows:
        eps = r.eps(a_star, q)
        vals = [
            repr(r.a),
            repr(eps),
            repr(r.energy),
            repr(r.kinetic_rel),
            repr(r.potential),
            repr(r.interaction),
            repr(r.mu),
            repr(r.lambda_fit),
            repr(r.center[0]),
            repr(r.center[1]),
            repr(r.center[2]),
            repr(r.l2_profile_err),
            repr(r.hhalf_profile_err),
            repr(r.anisotropy),
            repr(r.residual),
            "1" if r.converged else "0",
        ]
        lines.append(",".join(vals))
    _atomic_write(path, ("\n".join(lines) + "\n").encode())


def validate_config(doc: dict, allowed: set, required: set, context: str) -> None:
    """Schema gate: unknown keys rejected, required keys demanded."""
    keys = set(doc)
    extra = keys - allowed
    if extra:
        raise ConfigurationError(f"unknown keys in {context}: {sorted(extra)}")
    missing = required - keys
    if missing:
        raise ConfigurationError(f"missing keys in {context}: {sorted(missing)}")
