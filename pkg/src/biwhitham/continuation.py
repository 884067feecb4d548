"""Pseudo-arclength continuation of the primary branch of periodic waves.

The branch is seeded from the small-amplitude expansion around the
bifurcation point ``c_k = sqrt(tanh(k)/k)`` and followed with a
predictor / orthogonal corrector / tangent update cycle until the crest
value ``phi(x_1)`` comes within a threshold of ``gamma(c)``.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .kernel import symbol
from .profile import (
    NewtonFailure,
    gamma,
    jacobian,
    newton_solve,
    pack,
    solve_dense,
)
from .spectral import CollocationGrid, build_grid, interpolate

__all__ = [
    "LocalSeed",
    "BranchPoint",
    "Branch",
    "BranchConfig",
    "StepFailure",
    "ConfigurationError",
    "local_seed",
    "local_profile",
    "local_wavespeed_derivative",
    "seed_tangent",
    "tangent_at",
    "make_point",
    "arclength_step",
    "run_branch",
    "follow",
    "transfer_point",
    "refine_branch_end",
]

log = logging.getLogger(__name__)

GAP_BELOW_THRESHOLD = "gap_below_threshold"
MAX_STEPS = "max_steps"
STEP_UNDERFLOW = "step_underflow"


class StepFailure(RuntimeError):
    """A single continuation step could not be completed."""


class ConfigurationError(RuntimeError):
    """The branch could not even be seeded."""


@dataclass(frozen=True)
class LocalSeed:
    k: int
    epsilon0: float
    c_k: float
    c_2k: float

    @property
    def zero_mode(self) -> float:
        # coefficient of the constant term in the second-order profile
        return 1.0 / (self.c_k**2 - 1.0)

    @property
    def second_mode(self) -> float:
        return 1.0 / (self.c_k**2 - self.c_2k**2)

    @property
    def speed_curvature(self) -> float:
        """``c''(0) / 2``: the coefficient of ``eps^2`` in ``c(eps)``."""
        ck = self.c_k
        return 0.375 * (-0.5 / ck + 3.0 * ck * (self.zero_mode + 0.5 * self.second_mode))


def local_seed(k: int, epsilon0: float = 1e-2) -> LocalSeed:
    if int(k) != k or k < 1:
        raise ValueError(f"wave number must be a positive integer, got {k}")
    k = int(k)
    return LocalSeed(k, float(epsilon0), math.sqrt(symbol(k)), math.sqrt(symbol(2 * k)))


def local_profile(epsilon: float, k: int, grid: CollocationGrid) -> tuple[float, np.ndarray]:
    """Second-order bifurcation expansion sampled at the collocation nodes."""
    s = local_seed(k, epsilon)
    if abs(epsilon) > 0.1:
        warnings.warn(f"epsilon={epsilon} is outside the small-amplitude regime", stacklevel=2)
    x = grid.nodes
    phi = epsilon * np.cos(k * x) + 0.75 * s.c_k * epsilon**2 * (
        s.zero_mode + s.second_mode * np.cos(2 * k * x)
    )
    c = s.c_k + s.speed_curvature * epsilon**2
    return c, phi


def local_wavespeed_derivative(epsilon: float, k: int) -> float:
    """``d c / d eps`` of the second-order expansion."""
    return 2.0 * local_seed(k, epsilon).speed_curvature * epsilon


def seed_tangent(epsilon0: float, k: int, grid: CollocationGrid) -> np.ndarray:
    """Unit tangent ``(c'(eps0), cos(k x_1), ..., cos(k x_N))`` normalised."""
    z = pack(local_wavespeed_derivative(epsilon0, k), np.cos(k * grid.nodes))
    norm = np.linalg.norm(z)
    if not norm > 0:
        raise RuntimeError("seed tangent vanished")
    return z / norm


def tangent_at(y, previous: np.ndarray, grid: CollocationGrid) -> np.ndarray:
    """Unit tangent at ``y`` oriented along ``previous``.

    Solves ``Df(y) z = 0, previous . z = 1`` and normalises.
    """
    A = np.vstack([jacobian(y, grid), previous])
    rhs = np.zeros(grid.n_modes + 1)
    rhs[-1] = 1.0
    z = solve_dense(A, rhs)
    if z is None:
        raise StepFailure("singular bordered matrix in tangent solve")
    return z / np.linalg.norm(z)


@dataclass
class BranchPoint:
    y: np.ndarray
    tangent: np.ndarray
    arclength: float
    waveheight: float
    gap: float
    step_used: float
    newton_iters: int = 0

    @property
    def c(self) -> float:
        return float(self.y[0])

    @property
    def values(self) -> np.ndarray:
        return self.y[1:]

    @property
    def crest(self) -> float:
        return float(self.y[1])


def make_point(y, tangent, arclength=0.0, step_used=0.0, newton_iters=0) -> BranchPoint:
    y = np.asarray(y, dtype=float)
    return BranchPoint(
        y=y,
        tangent=np.asarray(tangent, dtype=float),
        arclength=float(arclength),
        waveheight=float(y[1] - y[-1]),
        gap=float(gamma(y[0]) - y[1]),
        step_used=float(step_used),
        newton_iters=int(newton_iters),
    )


@dataclass
class Branch:
    points: list[BranchPoint] = field(default_factory=list)
    termination: str | None = None
    n_modes: int = 0

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    @property
    def terminal(self) -> BranchPoint:
        return self.points[-1]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(p, name) for p in self.points])

    def turning_points(self) -> list[int]:
        """Indices ``i`` where the c-component of the tangent changes sign between ``i`` and ``i+1``."""
        tc = np.array([p.tangent[0] for p in self.points])
        return [i for i in range(len(tc) - 1) if tc[i] * tc[i + 1] < 0]


def arclength_step(
    point: BranchPoint,
    h: float,
    grid: CollocationGrid,
    tol: float = 1e-12,
    max_iter: int = 25,
) -> BranchPoint:
    """One predictor-corrector-tangent cycle of length ``h`` from ``point``."""
    z0 = point.tangent
    yp = point.y + h * z0
    try:
        res = newton_solve(yp, grid, constraint_row=(z0, float(z0 @ yp)), tol=tol, max_iter=max_iter)
    except NewtonFailure as exc:
        raise StepFailure(f"corrector failed: {exc}") from exc
    z1 = tangent_at(res.y, z0, grid)
    return make_point(res.y, z1, point.arclength + h, h, res.iterations)


@dataclass(frozen=True)
class BranchConfig:
    n_modes: int = 512
    k: int = 1
    epsilon0: float = 1e-2
    h0: float = 1e-2
    h_min: float = 1e-8
    h_max: float = 0.1
    gap_threshold_rel: float = 1e-3
    max_steps: int = 5000
    newton_tol: float = 1e-12
    newton_max_iter: int = 25
    grow_factor: float = 1.3
    fast_iterations: int = 3

    def __post_init__(self):
        if self.n_modes < 8:
            raise ValueError("n_modes must be >= 8")
        if not 0 < self.h_min <= self.h0 <= self.h_max:
            raise ValueError("need 0 < h_min <= h0 <= h_max")
        if not 0 < self.gap_threshold_rel < 1:
            raise ValueError("gap_threshold_rel must lie in (0, 1)")


def _admissible(point: BranchPoint) -> bool:
    v = point.values
    return bool(v.max() < gamma(point.c) and np.all(np.diff(v) < 0))


def follow(branch: Branch, grid: CollocationGrid, config: BranchConfig, h: float | None = None, callback=None) -> Branch:
    """Extend ``branch`` by adaptive arclength steps until a stopping rule fires.

    Steps producing any nodal value at or above ``gamma(c)`` are rejected
    like Newton failures.  Besides making the terminal point approach the
    limiting height from below, this keeps the iteration off the spurious
    discrete solutions in which single nodes jump to the upper root of N.
    """
    point = branch.points[-1]
    h = config.h0 if h is None else h
    for _ in range(config.max_steps):
        try:
            new = arclength_step(point, h, grid, config.newton_tol, config.newton_max_iter)
            excess = float(new.values.max() - gamma(new.c))
            if excess >= 0:
                raise StepFailure(f"profile exceeds gamma by {excess:.3e}")
        except StepFailure as exc:
            h *= 0.5
            log.debug("step rejected (%s); h -> %.3e", exc, h)
            if h < config.h_min:
                branch.termination = STEP_UNDERFLOW
                return branch
            continue
        branch.points.append(new)
        point = new
        if callback:
            callback(new)
        if new.gap <= config.gap_threshold_rel * gamma(new.c):
            branch.termination = GAP_BELOW_THRESHOLD
            return branch
        if new.newton_iters <= config.fast_iterations:
            h = min(h * config.grow_factor, config.h_max)
    branch.termination = MAX_STEPS
    return branch


def run_branch(config: BranchConfig | None = None, grid: CollocationGrid | None = None, callback=None) -> Branch:
    """Follow the branch from the bifurcation point towards the highest wave.

    Seeds with the local expansion (Newton at fixed wavespeed) and then
    calls :func:`follow`.  ``callback(point)`` is invoked on every accepted
    point, the seed included.
    """
    config = config or BranchConfig()
    grid = grid or build_grid(config.n_modes)
    if grid.n_modes != config.n_modes:
        raise ValueError("grid does not match config.n_modes")

    c0, phi0 = local_profile(config.epsilon0, config.k, grid)
    try:
        seed = newton_solve(pack(c0, phi0), grid, tol=config.newton_tol, max_iter=config.newton_max_iter)
    except NewtonFailure as exc:
        raise ConfigurationError(f"seed Newton solve failed: {exc}") from exc
    z0 = seed_tangent(config.epsilon0, config.k, grid)
    point = make_point(seed.y, z0, newton_iters=seed.iterations)
    branch = Branch([point], n_modes=grid.n_modes)
    if callback:
        callback(point)
    return follow(branch, grid, config, callback=callback)


def transfer_point(
    point: BranchPoint,
    grid: CollocationGrid,
    fine: CollocationGrid,
    tol: float = 1e-12,
    max_iter: int = 25,
) -> BranchPoint:
    """Re-converge a branch point on another grid.

    The profile and tangent are cosine-interpolated and Newton is run with
    the interpolated tangent hyperplane as the extra equation (a zero-length
    arclength step), which stays well posed through folds in ``c``.
    """
    guess = pack(point.c, interpolate(point.values, grid, fine))
    z = pack(point.tangent[0], interpolate(point.tangent[1:], grid, fine))
    z /= np.linalg.norm(z)
    res = newton_solve(guess, fine, constraint_row=(z, float(z @ guess)), tol=tol, max_iter=max_iter)
    return make_point(res.y, tangent_at(res.y, z, fine), point.arclength, point.step_used, res.iterations)


def refine_branch_end(
    branch: Branch,
    grid: CollocationGrid,
    config: BranchConfig,
    n_modes: int | None = None,
    callback=None,
) -> tuple[Branch, CollocationGrid]:
    """Recompute the end of ``branch`` on a finer grid (default ``2N``).

    Near the cusp the interpolated terminal profile rings above ``gamma``,
    so this walks back to the latest point whose transfer converges to an
    admissible (monotone, below-``gamma``) profile and continues from there
    on the fine grid with the same stopping rule.
    """
    fine = build_grid(n_modes or 2 * grid.n_modes)
    for idx in range(len(branch) - 1, -1, -1):
        try:
            start = transfer_point(branch[idx], grid, fine, config.newton_tol, config.newton_max_iter)
        except (NewtonFailure, StepFailure):
            continue
        if _admissible(start):
            break
    else:
        raise ConfigurationError("no branch point could be transferred to the fine grid")
    log.info("refinement restarts from coarse point %d", idx)
    fine_branch = Branch([start], n_modes=fine.n_modes)
    if callback:
        callback(start)
    cfg = BranchConfig(**{**config.__dict__, "n_modes": fine.n_modes})
    return follow(fine_branch, fine, cfg, h=branch[idx + 1].step_used if idx + 1 < len(branch) else None, callback=callback), fine
