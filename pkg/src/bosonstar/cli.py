"""Command-line entry points.

Subcommands: solve-q, astar-check, solve, sweep, profile, check.  All take a
JSON config (--config) and write machine-readable artifacts under --out.
Exit codes: 0 ok, 1 usage/config error, 2 profile-solver failure,
3 unconverged solve, 4 refused supercritical run, 5 fit-range failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import potentials
from .energy import ProblemSpec
from .errors import (
    BosonStarError,
    ConfigurationError,
    DomainTruncationError,
    InsufficientRangeError,
    NonconvergenceError,
)
from .grid import Grid3, mass, normalize
from .io import (
    read_field,
    read_json,
    read_qstar,
    read_radial,
    write_field,
    write_json,
    write_qstar,
    write_radial,
    write_sweep_csv,
    validate_config,
)
from .qstar import cross_validate_astar, extract_blowup_profile, profile_error, solve_q
from .reference import reference_qstar
from .solver import GroundState, SolverOptions, collapse_probe, minimize, solve_rescaled
from .sweeps import gap_ladder, run_sweep

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_QSOLVER = 2
EXIT_UNCONVERGED = 3
EXIT_SUPERCRITICAL = 4
EXIT_FIT_RANGE = 5


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    doc = read_json(path)
    if not isinstance(doc, dict):
        raise ConfigurationError("config root must be a JSON object")
    return doc


def _grid_from(doc: dict) -> Grid3:
    validate_config(doc, {"n", "L"}, {"n", "L"}, "grid")
    return Grid3(int(doc["n"]), float(doc["L"]))


def _solver_from(doc: dict) -> SolverOptions:
    validate_config(
        doc,
        {"tau0", "c", "tol", "max_iters", "backtrack", "tail_threshold", "mass",
         "dilation_every", "momentum"},
        set(),
        "solver",
    )
    kw = {}
    if "tau0" in doc:
        kw["tau0"] = float(doc["tau0"])
    if "c" in doc:
        kw["precond_shift"] = float(doc["c"])
    if "tol" in doc:
        kw["tol"] = float(doc["tol"])
    if "max_iters" in doc:
        kw["max_iters"] = int(doc["max_iters"])
    if "backtrack" in doc:
        kw["backtrack"] = float(doc["backtrack"])
    if "tail_threshold" in doc:
        kw["tail_threshold"] = float(doc["tail_threshold"])
    if "mass" in doc:
        kw["mass_target"] = float(doc["mass"])
    if "dilation_every" in doc:
        kw["dilation_every"] = int(doc["dilation_every"])
    if "momentum" in doc:
        kw["momentum"] = bool(doc["momentum"])
    return SolverOptions(**kw)


def _qstar_from(cfg: dict, out: Path):
    """Reference constants: explicit path, artifact next to --out, or packaged."""
    path = cfg.get("qstar")
    if path:
        prof_path = Path(path).with_suffix(".bsr")
        profile = read_radial(prof_path) if prof_path.exists() else None
        qp = read_qstar(path, profile=profile)
        if qp.profile is None:
            local = Path(path).parent / "q_profile.bsr"
            if local.exists():
                qp.profile = read_radial(local)
        return qp
    local = out / "qstar.json"
    if local.exists():
        prof = out / "q_profile.bsr"
        return read_qstar(local, profile=read_radial(prof) if prof.exists() else None)
    qp = reference_qstar(with_profile=True)
    if qp is None:
        raise ConfigurationError("no qstar reference found; run solve-q first")
    return qp


def _sidecar(gs: GroundState, extra: dict | None = None) -> dict:
    doc = {
        "breakdown": gs.breakdown.as_dict(),
        "mu": gs.mu,
        "residual": gs.residual,
        "iterations": gs.iterations,
        "converged": gs.converged,
        "collapsed": gs.collapsed,
        "center": [float(c) for c in gs.center],
        "eps_used": gs.eps_used,
        "metadata": gs.metadata,
    }
    if extra:
        doc.update(extra)
    return doc


def cmd_solve_q(cfg: dict, out: Path, args) -> int:
    validate_config(
        cfg, {"n_r", "r_max", "tol", "max_iters", "moments", "tail_threshold"}, set(), "solve-q"
    )
    kw = {}
    if "n_r" in cfg:
        kw["n_r"] = int(cfg["n_r"])
    if "r_max" in cfg:
        kw["r_max"] = float(cfg["r_max"])
    if "tol" in cfg:
        kw["tol"] = float(cfg["tol"])
    if "max_iters" in cfg:
        kw["max_iters"] = int(cfg["max_iters"])
    if "moments" in cfg:
        kw["moment_orders"] = [float(p) for p in cfg["moments"]]
    if "tail_threshold" in cfg:
        kw["tail_threshold"] = float(cfg["tail_threshold"])
    try:
        qp = solve_q(**kw)
    except (NonconvergenceError, DomainTruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QSOLVER
    write_qstar(out / "qstar.json", qp)
    write_radial(out / "q_profile.bsr", qp.profile)
    print(f"a_star = {qp.a_star:.12f}")
    print(f"neg_quarter_sq = {qp.neg_quarter_sq:.10f}")
    for p, v in sorted(qp.moments.items()):
        print(f"moment[{p:g}] = {v:.10f}")
    print(f"el_residual = {qp.el_residual:.3e}  iterations = {qp.iterations}")
    print(f"decay_coeff = {qp.decay_coeff:.6f}  oscillation = {qp.decay_oscillation:.4f}")
    return EXIT_OK


def cmd_astar_check(cfg: dict, out: Path, args) -> int:
    validate_config(cfg, {"grid", "iters", "qstar"}, set(), "astar-check")
    qp = _qstar_from(cfg, out)
    if qp.profile is None:
        print("error: astar-check needs the radial profile (q_profile.bsr)", file=sys.stderr)
        return EXIT_USAGE
    grid = _grid_from(cfg.get("grid", {"n": 64, "L": 40.0}))
    try:
        est = cross_validate_astar(qp, grid, iters=int(cfg.get("iters", 30)))
    except BosonStarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QSOLVER
    rel = abs(est - qp.a_star) / qp.a_star
    print(f"radial a_star = {qp.a_star:.8f}")
    print(f"3d a_star     = {est:.8f}")
    print(f"relative dev  = {rel:.3e}")
    write_json(out / "astar_check.json", {"radial": qp.a_star, "grid3d": est, "rel_dev": rel})
    return EXIT_OK


def _potential_from(cfg: dict):
    if "potential" not in cfg:
        raise ConfigurationError("config needs a 'potential' descriptor")
    return potentials.from_dict(cfg["potential"])


def cmd_solve(cfg: dict, out: Path, args) -> int:
    validate_config(
        cfg,
        {"a", "m", "grid", "potential", "solver", "eps", "center", "qstar", "init_noise"},
        {"a", "m", "grid", "potential"},
        "solve",
    )
    grid = _grid_from(cfg["grid"])
    V = _potential_from(cfg)
    spec = ProblemSpec(a=float(cfg["a"]), m=float(cfg["m"]), V=V, grid=grid)
    opts = _solver_from(cfg.get("solver", {}))
    try:
        qp = _qstar_from(cfg, out)
        a_ref = qp.a_star
    except ConfigurationError:
        a_ref = None
    if a_ref is not None and spec.a >= a_ref:
        if not args.allow_supercritical:
            print(
                f"refusing: a = {spec.a:.6f} >= critical coupling {a_ref:.6f}; the "
                "constrained energy is unbounded below (pass --allow-supercritical "
                "to run the collapse probe)",
                file=sys.stderr,
            )
            return EXIT_SUPERCRITICAL
        trace = collapse_probe(spec, opts)
        write_field(out / "collapse_state.bsf", trace.final.u)
        write_json(
            out / "collapse_trace.json",
            {
                "energies": trace.energies,
                "kinetic_half": trace.kinetic_half,
                "collapsed": trace.collapsed,
                "sidecar": _sidecar(trace.final),
            },
        )
        print(f"collapse probe: collapsed={trace.collapsed} final E={trace.final.energy:.4f}")
        return EXIT_OK
    init = None
    if "init_noise" in cfg:
        from .grid import Field3
        from .solver import default_init

        rng = np.random.default_rng(args.seed)
        base = default_init(spec)
        vals = base.values * (
            1.0 + float(cfg["init_noise"]) * rng.standard_normal(base.values.shape)
        )
        init = normalize(Field3(grid, np.abs(vals)))
    if "eps" in cfg:
        center = tuple(cfg.get("center", (0.0, 0.0, 0.0)))
        gs = solve_rescaled(spec, float(cfg["eps"]), center=center, opts=opts, init=init)
    else:
        gs = minimize(spec, init=init, opts=opts)
    write_field(out / "state.bsf", gs.u)
    write_json(out / "state.json", _sidecar(gs, {"a": spec.a, "m": spec.m,
                                                 "potential": potentials.to_dict(V)}))
    b = gs.breakdown
    print(f"energy = {b.total:.10f}")
    print(f"  kinetic_rel = {b.kinetic_rel:.10f}")
    print(f"  potential   = {b.potential:.10f}")
    print(f"  interaction = {b.interaction:.10f}")
    print(f"mu = {gs.mu:.10f}  residual = {gs.residual:.3e}  iterations = {gs.iterations}")
    if not gs.converged:
        print("solve did not converge", file=sys.stderr)
        return EXIT_UNCONVERGED
    return EXIT_OK


def cmd_sweep(cfg: dict, out: Path, args) -> int:
    validate_config(
        cfg,
        {"m", "grid", "potential", "solver", "qstar", "gap_fractions", "count", "center",
         "label"},
        {"m", "grid", "potential"},
        "sweep",
    )
    qp = _qstar_from(cfg, out)
    if qp.profile is None:
        print("error: sweep needs the radial profile (q_profile.bsr)", file=sys.stderr)
        return EXIT_USAGE
    grid = _grid_from(cfg["grid"])
    V = _potential_from(cfg)
    opts = _solver_from(cfg.get("solver", {}))
    fr = cfg.get("gap_fractions", [1e-1, 1e-3])
    if len(fr) != 2 or not (0 < fr[1] < fr[0] < 1):
        print("gap_fractions must be [high, low] with 0 < low < high < 1", file=sys.stderr)
        return EXIT_USAGE
    count = int(cfg.get("count", 8))
    if count < 1:
        print("count must be positive", file=sys.stderr)
        return EXIT_USAGE
    a_values = gap_ladder(qp.a_star, lo_frac=fr[1], hi_frac=fr[0], count=count)
    center = tuple(cfg["center"]) if "center" in cfg else None
    try:
        res = run_sweep(qp, V, m=float(cfg["m"]), grid=grid, a_values=a_values, opts=opts,
                        center=center)
    except InsufficientRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FIT_RANGE
    label = cfg.get("label", "sweep")
    write_sweep_csv(out / f"{label}.csv", res.rows, qp.a_star, res.q)
    write_json(out / f"{label}_fit.json", res.fit.as_dict())
    f = res.fit
    print(f"q = {f.q:g}  exponent_fit = {f.exponent_fit:.5f} (target {f.q/(f.q+1):.5f})")
    print(f"prefactor_fit = {f.prefactor_fit:.5f}")
    print(f"lambda_pred = {f.lambda_pred:.5f}  lambda_fit = {f.lambda_fit:.5f}")
    if not all(r.converged for r in res.rows):
        print("sweep contains unconverged rows", file=sys.stderr)
        return EXIT_UNCONVERGED
    return EXIT_OK


def cmd_profile(cfg: dict, out: Path, args) -> int:
    validate_config(cfg, {"state", "sidecar", "qstar", "q"}, {"state", "sidecar"}, "profile")
    qp = _qstar_from(cfg, out)
    if qp.profile is None:
        print("error: profile comparison needs q_profile.bsr", file=sys.stderr)
        return EXIT_USAGE
    u = read_field(cfg["state"])
    side = read_json(cfg["sidecar"])
    a = float(side["a"]) if "a" in side else float(side["breakdown"]["a"])
    gs = GroundState(
        u=u,
        breakdown=None,  # type: ignore[arg-type]
        mu=float(side["mu"]),
        residual=float(side["residual"]),
        iterations=int(side["iterations"]),
        converged=bool(side["converged"]),
        collapsed=bool(side["collapsed"]),
        center=np.asarray(side["center"]),
        eps_used=float(side["eps_used"]),
        metadata=side.get("metadata", {}),
    )
    q = float(cfg.get("q", 1.0))
    w, eps, center = extract_blowup_profile(gs, a, qp.a_star, q)
    lam_fit = float(
        np.sum(w.grid.mode_weight * np.sqrt(w.grid.xi_sq) * np.abs(np.fft.rfftn(w.values)) ** 2)
        * w.grid.h**3
        / w.grid.n**3
    )
    l2, hh = profile_error(w, qp, lam_fit)
    write_field(out / "blowup_profile.bsf", w)
    doc = {
        "eps": eps,
        "center": [float(c) for c in center],
        "lambda_fit": lam_fit,
        "l2_profile_err": l2,
        "hhalf_profile_err": hh,
    }
    write_json(out / "blowup_profile.json", doc)
    for k, v in doc.items():
        print(f"{k} = {v}")
    return EXIT_OK


def cmd_check(cfg: dict, out: Path, args) -> int:
    validate_config(cfg, {"fast"}, set(), "check")
    from .checks import run_checks

    report = run_checks(fast=bool(cfg.get("fast", False)))
    write_json(out / "check_report.json", report)
    failed = [c["name"] for c in report["checks"] if c["status"] == "failed"]
    for c in report["checks"]:
        print(f"[{c['status']:>7}] {c['name']}: {c['detail']}")
    if failed:
        print(f"failed: {', '.join(failed)}", file=sys.stderr)
        return 6
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="bosonstar", description=__doc__)
    parser.add_argument("command", choices=["solve-q", "astar-check", "solve", "sweep",
                                            "profile", "check"])
    parser.add_argument("--config", help="JSON config path")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--seed", type=int, default=0, help="seed for initialization noise")
    parser.add_argument("--threads", type=int, default=1,
                        help="transform-level threads (results unchanged)")
    parser.add_argument("--allow-supercritical", action="store_true",
                        help="run the collapse probe instead of refusing a >= a*")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.threads and args.threads > 1:
        os.environ.setdefault("OMP_NUM_THREADS", str(args.threads))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    handlers = {
        "solve-q": cmd_solve_q,
        "astar-check": cmd_astar_check,
        "solve": cmd_solve,
        "sweep": cmd_sweep,
        "profile": cmd_profile,
        "check": cmd_check,
    }
    try:
        cfg = _load_config(args.config)
        return handlers[args.command](cfg, out, args)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BosonStarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QSOLVER


if __name__ == "__main__":
    sys.exit(main())
