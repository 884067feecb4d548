"""The discretised profile equation ``K phi = N(phi; c)`` and its Newton solver.

Unknowns are packed as ``y = (c, phi(x_1), ..., phi(x_N))``; the residual
``f(y) = N(phi; c) - K_N phi`` has ``N`` components, so solutions form
one-parameter families.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .spectral import CollocationGrid, apply_K

__all__ = [
    "SQRT3",
    "gamma",
    "nonlinearity_N",
    "nonlinearity_dN",
    "double_root_form",
    "trivial_branch",
    "apriori_bound",
    "pack",
    "unpack",
    "residual",
    "jacobian",
    "NewtonFailure",
    "SingularJacobianError",
    "NoConvergenceError",
    "NewtonResult",
    "newton_solve",
    "solve_dense",
]

SQRT3 = math.sqrt(3.0)


def gamma(c):
    """Crest height of the highest wave, the first critical point of N."""
    return c * (1.0 - 1.0 / SQRT3)


def nonlinearity_N(phi, c):
    """``phi (c - phi/2)(c - phi) = c^2 phi - 3c phi^2/2 + phi^3/2``."""
    return phi * (c - 0.5 * phi) * (c - phi)


def nonlinearity_dN(phi, c):
    """Derivative of N with respect to phi."""
    return c * c - 3.0 * c * phi + 1.5 * phi * phi


def double_root_form(phi, c):
    """N written around its critical point: ``N(g) + (phi - g - sqrt3 c)(phi - g)^2 / 2``."""
    g = gamma(c)
    return nonlinearity_N(g, c) + 0.5 * (phi - g - SQRT3 * c) * (phi - g) ** 2


def trivial_branch(c, sign: int):
    """Constant solutions ``Gamma_pm(c) = (3c +- sqrt(8 + c^2)) / 2``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return 0.5 * (3.0 * c + sign * np.sqrt(8.0 + c * c))


def apriori_bound(c):
    """Explicit sup-norm bound ``(3c + sqrt(8 + 17 c^2)) / 2`` valid for all solutions."""
    return 0.5 * (3.0 * c + np.sqrt(8.0 + 17.0 * c * c))


def pack(c: float, values) -> np.ndarray:
    return np.concatenate(([float(c)], np.asarray(values, dtype=float)))


def unpack(y) -> tuple[float, np.ndarray]:
    y = np.asarray(y, dtype=float)
    return float(y[0]), y[1:]


def _split(y, grid: CollocationGrid) -> tuple[float, np.ndarray]:
    c, phi = unpack(y)
    if phi.shape != (grid.n_modes,):
        raise ValueError(f"expected {grid.n_modes + 1} unknowns, got {phi.size + 1}")
    return c, phi


def residual(y, grid: CollocationGrid) -> np.ndarray:
    c, phi = _split(y, grid)
    return nonlinearity_N(phi, c) - apply_K(phi, grid)


def jacobian(y, grid: CollocationGrid) -> np.ndarray:
    """``N x (N+1)`` derivative of the residual; column 0 is d/dc."""
    c, phi = _split(y, grid)
    J = np.empty((grid.n_modes, grid.n_modes + 1))
    J[:, 0] = phi * (2.0 * c - 1.5 * phi)
    J[:, 1:] = -grid.multiplier_matrix
    J[:, 1:][np.diag_indices(grid.n_modes)] += nonlinearity_dN(phi, c)
    return J


def solve_dense(A, b):
    """LU solve with partial pivoting; ``None`` if ``A`` is numerically singular."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", linalg.LinAlgWarning)
        try:
            lu, piv = linalg.lu_factor(A, check_finite=False)
        except linalg.LinAlgError:
            return None
        d = np.abs(np.diag(lu))
        if d.min() <= np.finfo(float).eps * d.max():
            return None
        x = linalg.lu_solve((lu, piv), b, check_finite=False)
    return x if np.all(np.isfinite(x)) else None


class NewtonFailure(RuntimeError):
    """Newton's method did not produce a root.

    ``y`` is the last iterate and ``residual_norm`` its sup-norm residual.
    """

    def __init__(self, message: str, y=None, residual_norm: float = math.inf, iterations: int = 0):
        super().__init__(message)
        self.y = y
        self.residual_norm = residual_norm
        self.iterations = iterations


class SingularJacobianError(NewtonFailure):
    pass


class NoConvergenceError(NewtonFailure):
    pass


@dataclass
class NewtonResult:
    y: np.ndarray
    iterations: int
    residual_norm: float
    history: list[float]


def newton_solve(
    y0,
    grid: CollocationGrid,
    constraint_row=None,
    tol: float = 1e-12,
    max_iter: int = 25,
) -> NewtonResult:
    """Plain Newton iteration on the profile residual.

    Without ``constraint_row`` the wavespeed ``y0[0]`` is frozen and the
    square ``phi``-block is solved.  With ``constraint_row = (a, b)`` the
    linear condition ``a . y = b`` is appended, giving a square bordered
    system in all ``N + 1`` unknowns.  Dense LU with partial pivoting in
    both cases.
    """
    y = np.array(y0, dtype=float)
    if y.shape != (grid.n_modes + 1,):
        raise ValueError(f"y0 must have length {grid.n_modes + 1}")
    if constraint_row is not None:
        a, b = np.asarray(constraint_row[0], dtype=float), float(constraint_row[1])

    def defects(y):
        f = residual(y, grid)
        if constraint_row is None:
            return f, float(np.max(np.abs(f)))
        g = float(a @ y - b)
        return np.append(f, g), max(float(np.max(np.abs(f))), abs(g))

    F, rnorm = defects(y)
    history = [rnorm]
    for it in range(max_iter + 1):
        if not np.isfinite(rnorm):
            raise NoConvergenceError("residual is not finite", y, rnorm, it)
        if rnorm <= tol:
            return NewtonResult(y, it, rnorm, history)
        if it == max_iter:
            break
        J = jacobian(y, grid)
        if constraint_row is None:
            A = J[:, 1:]
        else:
            A = np.vstack([J, a])
        dy = solve_dense(A, -F)
        if dy is None:
            raise SingularJacobianError("singular Newton matrix", y, rnorm, it)
        if constraint_row is None:
            y[1:] += dy
        else:
            y += dy
        F, rnorm = defects(y)
        history.append(rnorm)
    raise NoConvergenceError(
        f"no convergence after {max_iter} iterations (residual {rnorm:.3e})", y, rnorm, max_iter
    )
