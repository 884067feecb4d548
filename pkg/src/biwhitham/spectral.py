"""Midpoint cosine collocation for even 2*pi-periodic functions.

Nodes ``x_m = (2m - 1) pi / (2N)``, ``m = 1..N``, sit at the midpoints of
``N`` equal cells of ``[0, pi]``.  Midpoint quadrature of the Fourier
cosine integrals gives the coefficients

    phi_hat(n) = w(n) * sum_m phi(x_m) cos(n x_m),   w(0) = 1/N, w(n) = 2/N,

and the multiplier acts by scaling ``phi_hat(n)`` with ``tanh(n)/n``.
With 0-based node index this is exactly a DCT-II / DCT-III pair, which is
what the fast path uses.  The dense matrix is kept for Jacobians.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import fft

from .kernel import symbol

__all__ = [
    "CollocationGrid",
    "build_grid",
    "dct_coefficients",
    "synthesize",
    "apply_K",
    "evaluate_series",
    "interpolate",
]


@dataclass(frozen=True, eq=False)
class CollocationGrid:
    n_modes: int
    nodes: np.ndarray
    weights: np.ndarray
    multipliers: np.ndarray
    cos_matrix: np.ndarray
    multiplier_matrix: np.ndarray

    def __len__(self) -> int:
        return self.n_modes


def build_grid(n_modes: int) -> CollocationGrid:
    """Collocation grid with weights and the dense multiplier matrix ``K_N``."""
    n_modes = int(n_modes)
    if n_modes < 2:
        raise ValueError(f"n_modes must be >= 2, got {n_modes}")
    m = np.arange(1, n_modes + 1)
    nodes = (2 * m - 1) * np.pi / (2 * n_modes)
    n = np.arange(n_modes)
    weights = np.full(n_modes, 2.0 / n_modes)
    weights[0] = 1.0 / n_modes
    mult = symbol(n.astype(float))
    C = np.cos(np.outer(n, nodes))  # C[n, m] = cos(n x_m)
    # K_N[i, j] = sum_n symbol(n) w(n) cos(n x_j) cos(n x_i)
    KN = C.T @ ((mult * weights)[:, None] * C)
    for arr in (nodes, weights, mult, C, KN):
        arr.setflags(write=False)
    return CollocationGrid(n_modes, nodes, weights, mult, C, KN)


def _check(values, grid: CollocationGrid) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.shape != (grid.n_modes,):
        raise ValueError(f"expected {grid.n_modes} values, got shape {v.shape}")
    return v


def dct_coefficients(values, grid: CollocationGrid) -> np.ndarray:
    """Discrete cosine coefficients ``phi_hat_N(n)``, ``n = 0..N-1``."""
    v = _check(values, grid)
    # scipy's DCT-II carries a factor 2
    return 0.5 * grid.weights * fft.dct(v, type=2)


def synthesize(coefficients, grid: CollocationGrid) -> np.ndarray:
    """Evaluate ``sum_n a_n cos(n x_m)`` at the nodes."""
    a = _check(coefficients, grid).copy()
    # DCT-III computes a_0 + 2 sum_{n>=1} a_n cos(...)
    a[1:] *= 0.5
    return fft.dct(a, type=3)


def apply_K(values, grid: CollocationGrid, *, method: str = "fft") -> np.ndarray:
    """``K_N phi`` at the nodes, by transform (default) or dense matrix."""
    v = _check(values, grid)
    if method == "matrix":
        return grid.multiplier_matrix @ v
    if method != "fft":
        raise ValueError(f"unknown method {method!r}")
    return synthesize(grid.multipliers * dct_coefficients(v, grid), grid)


def evaluate_series(coefficients, x) -> np.ndarray:
    """Evaluate a cosine series at arbitrary points ``x``."""
    a = np.asarray(coefficients, dtype=float)
    x = np.asarray(x, dtype=float)
    return np.cos(np.multiply.outer(x, np.arange(a.size))) @ a


def interpolate(values, grid: CollocationGrid, target: CollocationGrid) -> np.ndarray:
    """Cosine-interpolate nodal values from ``grid`` onto ``target`` nodes.

    Coefficients are zero-padded (or truncated) so this is spectrally exact
    for band-limited data.
    """
    a = dct_coefficients(values, grid)
    b = np.zeros(target.n_modes)
    k = min(a.size, b.size)
    b[:k] = a[:k]
    return synthesize(b, target)
