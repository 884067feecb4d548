"""Acceptance criteria for the toolkit, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line with the measured
quantities.  Run ``pytest tests/test_acceptance.py -v -s`` (or execute this
file directly) to see the report.
"""

import math
import time

import numpy as np
import pytest

from biwhitham.continuation import BranchConfig, local_profile, run_branch
from biwhitham.diagnostics import check_apriori_bounds, check_nodal, cusp_fit
from biwhitham.io import (
    RunConfig,
    format_config,
    parse_config,
    read_branch_csv,
    read_profile_json,
    write_branch_csv,
    write_profile_json,
)
from biwhitham.kernel import (
    KernelSpec,
    certify_complete_monotonicity,
    inverse_fourier_K,
    kernel_K,
    l1_norm_K,
    l1_norm_Kp,
)
from biwhitham.profile import jacobian, newton_solve, pack, residual, trivial_branch
from biwhitham.spectral import build_grid
from biwhitham.svg import branch_svg, profiles_svg


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number:2d}: {detail}")
        assert ok, detail

    return emit


def test_01_kernel_l1_norm(report):
    t0 = time.perf_counter()
    nk, nkp = l1_norm_K(cutoff=40.0), l1_norm_Kp()
    dt = time.perf_counter() - t0
    ok = abs(nk - 1) < 1e-6 and abs(nkp - 1) < 1e-6 and dt < 1.0
    report(1, ok, f"|K|_1 = {nk:.12f}, |K_p|_1 = {nkp:.12f}, {dt:.3f} s")


def test_02_inverse_fourier_oracle(report):
    x = np.linspace(0.1, 5.0, 50)
    t0 = time.perf_counter()
    err = max(abs(kernel_K(xi) - inverse_fourier_K(xi)) for xi in x)
    dt = time.perf_counter() - t0
    report(2, err < 1e-6 and dt < 10.0, f"max |K - IFT| = {err:.2e} on 50 points of [0.1, 5], {dt:.2f} s")


def test_03_complete_monotonicity(report):
    t0 = time.perf_counter()
    rep = certify_complete_monotonicity(KernelSpec(tolerance=1e-9), 4, 64, k_range=(1e-3, 20.0))
    dt = time.perf_counter() - t0
    worst = min(min(rep.K_worst), min(rep.Kp_worst))
    report(3, rep.passed and dt < 1.0, f"min (-1)^n D^n over n <= 4 = {worst:.3e}, {dt:.3f} s")


def test_04_trivial_solutions(report):
    g = build_grid(128)
    worst_nonzero, worst_zero = 0.0, 0.0
    for c in np.linspace(0.0, 1.5, 20):
        for sign in (1, -1):
            r = residual(pack(c, np.full(128, trivial_branch(c, sign))), g)
            worst_nonzero = max(worst_nonzero, float(np.max(np.abs(r))))
        worst_zero = max(worst_zero, float(np.max(np.abs(residual(pack(c, np.zeros(128)), g)))))
    ok = worst_nonzero < 1e-12 and worst_zero == 0.0
    report(4, ok, f"max residual on Gamma+- = {worst_nonzero:.2e}, on zero = {worst_zero}")


def test_05_local_branch_order(report):
    g = build_grid(256)
    # constrain the amplitude of cos(x) to eps so that c is an output
    row = pack(0.0, (2.0 / g.n_modes) * np.cos(g.nodes))
    dphi, dc = [], []
    for eps in (2e-3, 1e-3, 5e-4):
        c, phi = local_profile(eps, 1, g)
        res = newton_solve(pack(c, phi), g, constraint_row=(row, eps), tol=1e-15)
        dphi.append(np.max(np.abs(res.y[1:] - phi)))
        dc.append(abs(res.y[0] - c))
    rphi = [dphi[i] / dphi[i + 1] for i in range(2)]
    rc = [dc[i] / dc[i + 1] for i in range(2)]
    ok = all(6.0 <= r <= 10.0 for r in rphi) and all(12.0 <= r <= 20.0 for r in rc)
    report(5, ok, f"phi error ratios {rphi[0]:.3f}, {rphi[1]:.3f} (8 +- 25%); "
                  f"c error ratios {rc[0]:.2f}, {rc[1]:.2f} (16 for O(eps^4))")


@pytest.fixture(scope="module")
def timed_branch():
    t0 = time.perf_counter()
    branch = run_branch(BranchConfig(n_modes=512))
    return branch, time.perf_counter() - t0


def test_06_subcritical_with_turning_point(report, timed_branch):
    branch, dt = timed_branch
    c1 = math.sqrt(math.tanh(1.0))
    low = [p for p in branch if p.waveheight < 0.1]
    sub = all(p.c < c1 for p in low)
    turns = branch.turning_points()
    ok = sub and bool(low) and bool(turns) and dt < 600
    report(6, ok, f"{len(low)} points with waveheight < 0.1 all below c1 = {c1:.6f}; "
                  f"turning point at index {turns}; branch in {dt:.1f} s")


def test_07_wavespeed_confinement(report, timed_branch):
    c = timed_branch[0].column("c")
    ok = bool(np.all((c > 0.01) & (c < 0.999)))
    report(7, ok, f"c in [{c.min():.6f}, {c.max():.6f}] over {c.size} points")


def test_08_nodal_pattern(report, timed_branch, grid512):
    branch = timed_branch[0]
    bad = []
    for i, p in enumerate(branch):
        r = check_nodal(p.c, p.values, grid512)
        if not r.passed:
            bad.append(f"#{i} gap {p.gap:.1e} proxy {r.curvature_crest:+.0f} series {r.spectral_crest:+.0f}")
    detail = f"{len(branch) - len(bad)}/{len(branch)} points pass check_nodal"
    if bad:
        detail += "; crest proxy fails at " + ", ".join(bad)
    report(8, not bad, detail)


def test_09_apriori_bound(report, timed_branch):
    reps = [check_apriori_bounds(p.c, p.values) for p in timed_branch[0]]
    margin = min(r.margin for r in reps)
    report(9, all(r.amplitude_ok for r in reps), f"min margin (bound - max|phi|) = {margin:.4f}")


def test_10_cusp_law(report, timed_branch, grid512, refined_end):
    branch = timed_branch[0]
    coarse = branch.terminal
    fine_branch, fine = refined_end
    t = fine_branch.terminal
    fit = cusp_fit(t.c, t.values, fine)
    fit_coarse = cusp_fit(coarse.c, coarse.values, grid512)
    ratio = fit.lower_bound_min / fit_coarse.lower_bound_min
    gap_ok = t.gap <= 1e-3 * (t.c * (1 - 1 / math.sqrt(3)))
    ok = (gap_ok and 0.9 <= fit.slope <= 1.1 and fit.r_squared >= 0.98
          and fit.lower_bound_min > 0 and 0.5 <= ratio <= 2.0)
    report(10, ok, f"N=1024 slope {fit.slope:.4f}, r^2 {fit.r_squared:.5f}, lower bound "
                   f"{fit.lower_bound_min:.4f} (N=512: {fit_coarse.lower_bound_min:.4f}, ratio {ratio:.3f})")


def test_11_jacobian(report, branch64, rng):
    branch, g = branch64
    worst = 0.0
    for i in rng.choice(len(branch), size=5, replace=False):
        y = branch[int(i)].y
        J = jacobian(y, g)
        fd = np.empty_like(J)
        for j in range(y.size):
            h = 1e-6 * max(1.0, abs(y[j]))
            e = np.zeros_like(y)
            e[j] = h
            fd[:, j] = (residual(y + e, g) - residual(y - e, g)) / (2 * h)
        worst = max(worst, float(np.max(np.abs(J - fd)) / np.max(np.abs(J))))
    report(11, worst < 1e-6, f"max relative Jacobian error over 5 points = {worst:.2e}")


def test_12_sign_symmetry(report, timed_branch, grid512):
    worst = 0.0
    for p in timed_branch[0]:
        worst = max(worst, float(np.max(np.abs(residual(-p.y, grid512)))))
    report(12, worst < 1e-12, f"max residual of (-phi, -c) = {worst:.2e}")


def test_13_serialization(report, tmp_path, branch64):
    branch, g = branch64
    cfg = RunConfig(n_modes=777, h0=1 / 3, h_max=0.5, newton_tol=math.pi * 1e-13, emit_svg=False)
    cfg_ok = parse_config(text=format_config(cfg)) == cfg

    write_branch_csv(branch, tmp_path / "b.csv")
    cols = read_branch_csv(tmp_path / "b.csv")
    csv_ok = all(np.array_equal(cols[n], branch.column(n)) for n in ("arclength", "c", "waveheight", "gap"))

    p = branch.terminal
    write_profile_json(p.c, p.values, g, tmp_path / "p.json")
    c, v, _ = read_profile_json(tmp_path / "p.json")
    json_ok = c == p.c and np.array_equal(v, p.values)

    svg_ok = (branch_svg(branch.column("c"), branch.column("waveheight"))
              == branch_svg(branch.column("c"), branch.column("waveheight"))
              and profiles_svg(g.nodes, [p.values]) == profiles_svg(g.nodes, [p.values]))
    ok = cfg_ok and csv_ok and json_ok and svg_ok
    report(13, ok, f"config {cfg_ok}, CSV {csv_ok}, JSON {json_ok}, SVG deterministic {svg_ok}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
