"""Command-line entry point: ``biwhitham {branch,solve,kernel-check,cusp-fit}``.

Failures exit with status 1 (2 for usage errors) and print a single line
``error: <kind>: <message>`` on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from . import __version__
from .continuation import ConfigurationError, local_profile, local_seed, refine_branch_end, run_branch
from .diagnostics import check_nodal, cusp_fit, default_window
from .io import (
    OUTPUT_DIR_ENV,
    parse_config,
    read_profile_json,
    write_branch_csv,
    write_branch_metadata,
    write_profile_json,
)
from .kernel import KernelSpec, certify_complete_monotonicity, l1_norm_K, l1_norm_Kp
from .profile import NewtonFailure, gamma, newton_solve, pack
from .spectral import build_grid
from .svg import emit_svg, select_by_waveheight

log = logging.getLogger("biwhitham")


class CLIError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


def _cmd_branch(args) -> int:
    overrides = {"n_modes": args.n_modes, "k": args.k, "epsilon0": args.epsilon0, "output_dir": args.out}
    config = parse_config(args.config, overrides)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid = build_grid(config.n_modes)
    bconf = config.branch_config()
    branch = run_branch(bconf, grid)
    terminal = branch.terminal
    log.info("branch: %d points, termination %s", len(branch), branch.termination)

    extra = {"gap_threshold": config.gap_threshold_rel * gamma(terminal.c)}
    write_branch_csv(branch, out / "branch.csv")
    write_profile_json(
        terminal.c, terminal.values, grid, out / "terminal.json",
        {"termination": branch.termination, "gap": terminal.gap, "arclength": terminal.arclength, **extra},
    )
    if config.refine_terminal and branch.termination == "gap_below_threshold":
        fine_branch, fine = refine_branch_end(branch, grid, bconf)
        ft = fine_branch.terminal
        write_branch_csv(fine_branch, out / "branch_refined.csv")
        write_profile_json(
            ft.c, ft.values, fine, out / "terminal_refined.json",
            {"termination": fine_branch.termination, "gap": ft.gap,
             "gap_threshold": config.gap_threshold_rel * gamma(ft.c)},
        )
        extra["refined_termination"] = fine_branch.termination
    write_branch_metadata(branch, config, out / "branch.json", extra)
    if config.emit_svg:
        emit_svg(out / "branch.svg", "branch", c=branch.column("c"), waveheight=branch.column("waveheight"))
        idx = select_by_waveheight(branch.column("waveheight"))
        emit_svg(
            out / "profiles.svg", "profiles", nodes=grid.nodes,
            profiles=[branch[i].values for i in idx],
            labels=[f"c={branch[i].c:.4f}" for i in idx],
        )
    print(f"{len(branch)} points, termination={branch.termination}, c_end={terminal.c:.10g}, "
          f"gap={terminal.gap:.3e}, output={out}")
    return 0


def _cmd_solve(args) -> int:
    grid = build_grid(args.n_modes)
    if args.c is not None:
        s = local_seed(args.k)
        ratio = (args.c - s.c_k) / s.speed_curvature
        if ratio <= 0:
            raise CLIError("invalid-argument", f"no small-amplitude wave of mode {args.k} at c={args.c}")
        eps = math.sqrt(ratio)
    else:
        eps = args.epsilon
    c, phi = local_profile(eps, args.k, grid)
    if args.c is not None:
        c = args.c
    res = newton_solve(pack(c, phi), grid, tol=args.tol)
    meta = {"epsilon": eps, "k": args.k, "newton_iterations": res.iterations, "residual": res.residual_norm}
    if args.out:
        write_profile_json(res.y[0], res.y[1:], grid, args.out, meta)
        print(f"c={res.y[0]:.17g} iterations={res.iterations} residual={res.residual_norm:.3e} -> {args.out}")
    else:
        doc = {"n_modes": grid.n_modes, "c": res.y[0], "gamma": gamma(res.y[0]),
               "nodes": grid.nodes.tolist(), "values": res.y[1:].tolist(),
               "metadata": {"version": __version__, **meta}}
        print(json.dumps(doc))
    return 0


def _cmd_kernel_check(args) -> int:
    spec = KernelSpec(periodization_range=args.periods, tolerance=args.tol)
    report = certify_complete_monotonicity(spec, args.max_order, args.grid_size, k_range=(1e-3, 20.0))
    nk, nkp = l1_norm_K(), l1_norm_Kp(spec)
    ok_k, ok_kp = abs(nk - 1) < 1e-6, abs(nkp - 1) < 1e-6
    print("kernel certification report")
    print(f"periodization_range = {spec.periodization_range}, tolerance = {spec.tolerance:g}")
    print(f"L1 norm of K over R:        {nk:.15f}  {'PASS' if ok_k else 'FAIL'}")
    print(f"L1 norm of K_p over (-pi,pi): {nkp:.15f}  {'PASS' if ok_kp else 'FAIL'}")
    for line in report.lines():
        print(line)
    passed = report.passed and ok_k and ok_kp
    print("overall:", "PASS" if passed else "FAIL")
    return 0 if passed else 1


def _cmd_cusp_fit(args) -> int:
    c, values, doc = read_profile_json(args.profile)
    grid = build_grid(doc["n_modes"])
    window = tuple(float(s) for s in args.window.split(",")) if args.window else default_window(grid.n_modes)
    if len(window) != 2:
        raise CLIError("invalid-argument", "--window expects LO,HI")
    fit = cusp_fit(c, values, grid, window)
    nodal = check_nodal(c, values, grid)
    result = {"c": c, "gamma": gamma(c), "gap": gamma(c) - float(values[0]), **fit.as_dict(),
              "nodal_ok": nodal.passed}
    print(json.dumps(result))
    print(f"slope {fit.slope:.4f}  r^2 {fit.r_squared:.5f}  lower-bound min {fit.lower_bound_min:.4g}  "
          f"window [{fit.window[0]:.4g}, {fit.window[1]:.4g}] ({fit.n_points} nodes)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="biwhitham", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("branch", help="follow the primary branch to the highest wave")
    b.add_argument("--config", type=Path, help="flat key = value config file")
    b.add_argument("--n-modes", type=int)
    b.add_argument("--k", type=int)
    b.add_argument("--epsilon0", type=float)
    b.add_argument("--out", help=f"output directory (default: config, then ${OUTPUT_DIR_ENV}, then ./out)")
    b.set_defaults(func=_cmd_branch)

    s = sub.add_parser("solve", help="solve for one small-amplitude profile")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--c", type=float, help="wavespeed")
    g.add_argument("--epsilon", type=float, help="amplitude of the cos(kx) mode")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--n-modes", type=int, default=512)
    s.add_argument("--tol", type=float, default=1e-12)
    s.add_argument("--out", type=Path, help="write profile JSON here instead of stdout")
    s.set_defaults(func=_cmd_solve)

    k = sub.add_parser("kernel-check", help="certify kernel positivity/monotonicity and L1 norms")
    k.add_argument("--max-order", type=int, default=4)
    k.add_argument("--grid-size", type=int, default=64)
    k.add_argument("--periods", type=int, default=8)
    k.add_argument("--tol", type=float, default=1e-9)
    k.set_defaults(func=_cmd_kernel_check)

    c = sub.add_parser("cusp-fit", help="fit the crest singularity of a profile JSON")
    c.add_argument("--profile", type=Path, required=True)
    c.add_argument("--window", help="LO,HI (default 4pi/N,0.3)")
    c.set_defaults(func=_cmd_cusp_fit)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except CLIError as exc:
        kind, msg = exc.kind, str(exc)
    except NewtonFailure as exc:
        kind, msg = "no-convergence", str(exc)
    except ConfigurationError as exc:
        kind, msg = "configuration", str(exc)
    except OSError as exc:
        kind, msg = "io", str(exc)
    except ValueError as exc:
        kind, msg = "invalid-argument", str(exc)
    print(f"error: {kind}: {' '.join(msg.split())}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
