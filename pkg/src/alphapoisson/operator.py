"""Finite-difference realization of the weighted divergence-form operator

    L_alpha u = div((1-|x|^2)^(-alpha) grad u) + alpha (n-2-alpha) (1-|x|^2)^(-alpha-1) u

on the unit ball, used to check that solver output is annihilated.
"""

from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.stats import qmc

from .errors import DomainError
from .solver import BoundaryFunction, SolverConfig, solve

__all__ = ["weight", "apply", "apply_nested", "residual_sup", "interior_grid"]

ScalarField = Callable[[np.ndarray], float]


def weight(x, alpha: float) -> float:
    """Standard weight ``(1 - |x|^2)^alpha``."""
    x = np.asarray(x, dtype=float)
    s = 1.0 - x @ x
    if s <= 0 and (alpha < 0 or s < 0):
        raise DomainError(f"weight undefined at |x| = {np.sqrt(x @ x)}")
    return s ** alpha


def _check_stencil(x: np.ndarray, h: float, reach: float) -> None:
    if not 1e-5 <= h <= 1e-2:
        raise DomainError(f"fd step must lie in [1e-5, 1e-2], got {h}")
    if np.linalg.norm(x) + reach * h >= 1.0:
        raise DomainError("finite-difference stencil leaves the unit ball")


def apply(u: ScalarField, x, alpha: float, h: float = 1e-3) -> float:
    """Operator applied to ``u`` at ``x`` in expanded (product-rule) form.

    ``s^-alpha Lap u + 2 alpha s^(-alpha-1) x.grad u + alpha(n-2-alpha) s^(-alpha-1) u``
    with ``s = 1 - |x|^2``; ``Lap u`` and ``grad u`` by second-order central
    differences of step ``h``.
    """
    x = np.asarray(x, dtype=float)
    _check_stencil(x, h, 2.0)
    n = x.size
    u0 = u(x)
    lap = 0.0
    grad = np.empty(n)
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        up, um = u(x + e), u(x - e)
        lap += (up - 2.0 * u0 + um) / h**2
        grad[i] = (up - um) / (2.0 * h)
    s = 1.0 - x @ x
    return (s ** (-alpha) * lap + 2.0 * alpha * (x @ grad) * s ** (-alpha - 1)
            + alpha * (n - 2 - alpha) * s ** (-alpha - 1) * u0)


def apply_nested(u: ScalarField, x, alpha: float, h: float = 1e-3) -> float:
    """Same operator with the divergence taken by finite differences of the flux.

    Independent check of :func:`apply`: the flux ``s^-alpha du/dx_i`` is formed
    at ``x +- h e_i`` from central differences there, then differenced again.
    """
    x = np.asarray(x, dtype=float)
    _check_stencil(x, h, 2.0)
    n = x.size
    div = 0.0
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        flux = []
        for y in (x + e, x - e):
            flux.append(weight(y, -alpha) * (u(y + e) - u(y - e)) / (2.0 * h))
        div += (flux[0] - flux[1]) / (2.0 * h)
    s = 1.0 - x @ x
    return div + alpha * (n - 2 - alpha) * s ** (-alpha - 1) * u(x)


def interior_grid(n: int, radius: float, count: int) -> np.ndarray:
    """Deterministic low-discrepancy points in the closed ball of ``radius``."""
    sampler = qmc.Halton(d=n, scramble=False)
    pts = []
    while len(pts) < count:
        cand = (2.0 * sampler.random(max(4 * count, 16)) - 1.0) * radius
        pts.extend(cand[np.linalg.norm(cand, axis=1) <= radius])
    return np.asarray(pts[:count])


def residual_sup(phi: BoundaryFunction, cfg: SolverConfig, grid_radius: float,
                 grid_count: int, h: float | None = None) -> float:
    """``max |L_alpha u_j(x)|`` over an interior grid and all components of the solution."""
    if grid_radius > 0.9:
        raise DomainError("residual grids stay within |x| <= 0.9")
    h = cfg.fd_step if h is None else h
    u = solve(phi, cfg)
    worst = 0.0
    for x in interior_grid(cfg.n, grid_radius, grid_count):
        for j in range(phi.m):
            worst = max(worst, abs(apply(u.component(j), x, cfg.alpha, h)))
    return worst
