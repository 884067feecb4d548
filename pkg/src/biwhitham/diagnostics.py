"""Checks of computed profiles against the qualitative theory.

Everything here is report-style: functions return dataclasses with the
measured quantities and boolean verdicts instead of raising, except where
the input makes the measurement meaningless (``cusp_fit`` on a profile
that already exceeds ``gamma``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .profile import apriori_bound, gamma
from .spectral import CollocationGrid, build_grid, dct_coefficients, interpolate

__all__ = [
    "InvalidStateError",
    "NodalReport",
    "AprioriReport",
    "CuspFit",
    "DistanceReport",
    "waveheight",
    "check_nodal",
    "check_apriori_bounds",
    "default_window",
    "cusp_fit",
    "compare_profiles",
    "holder_quotients",
]


class InvalidStateError(ValueError):
    """The profile is outside the regime the diagnostic is defined for."""


def waveheight(values) -> float:
    """Crest-to-trough height approximated at the extreme nodes."""
    v = np.asarray(values, dtype=float)
    return float(v[0] - v[-1])


@dataclass
class NodalReport:
    monotone_ok: bool
    below_gamma_ok: bool
    curvature_crest: float
    curvature_trough: float
    crest_sign_ok: bool
    trough_sign_ok: bool
    spectral_crest: float = math.nan
    spectral_trough: float = math.nan

    @property
    def passed(self) -> bool:
        return self.monotone_ok and self.below_gamma_ok and self.crest_sign_ok and self.trough_sign_ok


def check_nodal(c: float, values, grid: CollocationGrid) -> NodalReport:
    """Strict monotonicity, ``phi < gamma`` and curvature signs at crest/trough.

    The curvature proxies are one-sided three-point second differences on
    the first and last three nodes; the sign tests use these.  Close to the
    highest wave the concave cap at the crest becomes narrower than the
    stencil and the crest proxy turns positive, so the report also carries
    ``phi''(0)`` and ``phi''(pi)`` of the cosine interpolant
    (``spectral_crest``, ``spectral_trough``) for comparison.

    For ``c < 0`` all tests are mirrored, so ``(-phi, -c)`` yields the
    same verdicts as ``(phi, c)``.
    """
    v = np.asarray(values, dtype=float)
    s = -1.0 if c < 0 else 1.0
    dx2 = (np.pi / grid.n_modes) ** 2
    crest = (v[0] - 2.0 * v[1] + v[2]) / dx2
    trough = (v[-1] - 2.0 * v[-2] + v[-3]) / dx2
    n2a = np.arange(grid.n_modes) ** 2 * dct_coefficients(v, grid)
    return NodalReport(
        monotone_ok=bool(np.all(s * np.diff(v) < 0)),
        below_gamma_ok=bool(np.all(s * (gamma(c) - v) > 0)),
        curvature_crest=float(crest),
        curvature_trough=float(trough),
        crest_sign_ok=bool(s * crest < 0),
        trough_sign_ok=bool(s * trough > 0),
        spectral_crest=float(-np.sum(n2a)),
        spectral_trough=float(-np.sum(n2a[::2]) + np.sum(n2a[1::2])),
    )


@dataclass
class AprioriReport:
    c: float
    amplitude: float
    bound: float
    speed_ok: bool

    @property
    def margin(self) -> float:
        return self.bound - self.amplitude

    @property
    def amplitude_ok(self) -> bool:
        return self.amplitude <= self.bound

    @property
    def passed(self) -> bool:
        return self.amplitude_ok and self.speed_ok


def check_apriori_bounds(c: float, values) -> AprioriReport:
    """Sup-norm bound ``(3c + sqrt(8 + 17c^2))/2`` and ``0 < c < 1``."""
    amp = float(np.max(np.abs(values)))
    return AprioriReport(c=float(c), amplitude=amp, bound=float(apriori_bound(abs(c))), speed_ok=0.0 < c < 1.0)


@dataclass
class CuspFit:
    window: tuple[float, float]
    n_points: int
    slope: float
    intercept: float
    r_squared: float
    lower_bound_min: float
    model: str = "cusp"

    def as_dict(self) -> dict:
        return {
            "window": list(self.window),
            "n_points": self.n_points,
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "lower_bound_min": self.lower_bound_min,
            "model": self.model,
        }


def default_window(n_modes: int) -> tuple[float, float]:
    return 4.0 * np.pi / n_modes, 0.3


def cusp_fit(c: float, values, grid: CollocationGrid, window=None, model: str = "cusp") -> CuspFit:
    """Log-log regression of ``gamma - phi`` near the crest.

    ``model="cusp"`` regresses against ``x (1 + |log x|)`` and should give
    slope 1 for a logarithmic cusp; ``model="power"`` regresses against
    plain ``x`` and recovers power-law exponents.  The lower-bound
    certificate is ``min (gamma - phi)(1 + c) / |x log x|`` over the window.
    """
    lo, hi = window if window is not None else default_window(grid.n_modes)
    if not (lo < hi and lo >= grid.nodes[0] and hi <= np.pi / 4):
        raise ValueError(f"window ({lo}, {hi}) must satisfy x_1 <= lo < hi <= pi/4")
    x = grid.nodes
    sel = (x >= lo) & (x <= hi)
    if sel.sum() < 12:
        raise ValueError(f"window ({lo}, {hi}) holds only {sel.sum()} nodes, need >= 12")
    xs = x[sel]
    depth = gamma(c) - np.asarray(values, dtype=float)[sel]
    if np.any(depth <= 0):
        raise InvalidStateError("profile reaches gamma inside the fit window")
    if model == "cusp":
        X = np.log(xs * (1.0 + np.abs(np.log(xs))))
    elif model == "power":
        X = np.log(xs)
    else:
        raise ValueError(f"unknown model {model!r}")
    Y = np.log(depth)
    slope, intercept = np.polyfit(X, Y, 1)
    fitted = slope * X + intercept
    ss_tot = float(np.sum((Y - Y.mean()) ** 2))
    r2 = 1.0 - float(np.sum((Y - fitted) ** 2)) / ss_tot if ss_tot > 0 else 1.0
    lb = float(np.min(depth * (1.0 + c) / np.abs(xs * np.log(xs))))
    return CuspFit((float(lo), float(hi)), int(sel.sum()), float(slope), float(intercept), r2, lb, model)


@dataclass
class DistanceReport:
    sup: float
    l2: float
    speed: float


def compare_profiles(c_a: float, values_a, c_b: float, values_b) -> DistanceReport:
    """Distances between two nodal profiles, interpolating the coarser one.

    Grids must be nested (one size an integer multiple of the other).
    ``l2`` is the midpoint-rule L2 norm over the half-period.
    """
    a = np.asarray(values_a, dtype=float)
    b = np.asarray(values_b, dtype=float)
    na, nb = a.size, b.size
    if max(na, nb) % min(na, nb):
        raise ValueError(f"grids of size {na} and {nb} are not nested")
    if na < nb:
        a = interpolate(a, build_grid(na), build_grid(nb))
    elif nb < na:
        b = interpolate(b, build_grid(nb), build_grid(na))
    d = a - b
    return DistanceReport(
        sup=float(np.max(np.abs(d))),
        l2=float(math.sqrt(np.pi / d.size * np.sum(d * d))),
        speed=abs(float(c_a) - float(c_b)),
    )


def holder_quotients(values, grid: CollocationGrid, alphas=(0.5, 0.75, 0.9, 0.99)) -> dict[float, float]:
    """Discrete Hoelder seminorms ``max |phi_i - phi_j| / |x_i - x_j|^alpha`` over node pairs.

    Informational only; there is no target value.
    """
    v = np.asarray(values, dtype=float)
    x = grid.nodes
    i, j = np.triu_indices(v.size, 1)
    dv = np.abs(v[i] - v[j])
    dx = x[j] - x[i]
    return {float(a): float(np.max(dv / dx**a)) for a in alphas}
