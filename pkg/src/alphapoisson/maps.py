"""Named catalog of boundary data used by the experiments."""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .solver import BoundaryFunction

__all__ = ["boundary_map", "MAP_NAMES", "rotation_matrix"]

TWIST = 0.5
ROTATION_ANGLE = 0.7


def rotation_matrix(n: int, angle: float = ROTATION_ANGLE) -> np.ndarray:
    """Fixed rotation: about ``(1,1,1)/sqrt(3)`` for ``n = 3``, in the ``e1 e2`` plane otherwise."""
    if n == 3:
        k = np.ones(3) / np.sqrt(3.0)
        kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
        return np.eye(3) + np.sin(angle) * kx + (1 - np.cos(angle)) * kx @ kx
    R = np.eye(n)
    c, s = np.cos(angle), np.sin(angle)
    R[:2, :2] = [[c, -s], [s, c]]
    return R


def _twisted(z):
    theta = np.arctan2(z[:, 1], z[:, 0])
    psi = theta + TWIST * np.sin(theta)
    return np.column_stack([np.cos(psi), np.sin(psi)])


def boundary_map(name: str, n: int, beta: float = 0.5) -> BoundaryFunction:
    """Look up a boundary datum by name.

    ========== ==== ===============================================
    name       m    datum
    ========== ==== ===============================================
    one        1    constant 1
    cos        1    first coordinate (``cos theta`` on the circle)
    identity   n    ``zeta -> zeta``
    twisted    2    ``theta -> theta + 0.5 sin theta`` (n = 2 only)
    rotated    n    ``zeta -> R zeta`` for a fixed rotation ``R``
    holder     1    ``(|zeta - e1| / 2)^beta``, Hoelder of order beta
    ========== ==== ===============================================
    """
    if name == "one":
        return BoundaryFunction(n, 1, lambda z: np.ones((len(z), 1)), unit_norm=True, name=name)
    if name == "cos":
        return BoundaryFunction(n, 1, lambda z: z[:, :1], name=name)
    if name == "identity":
        return BoundaryFunction(n, n, lambda z: z, unit_norm=True, name=name)
    if name == "twisted":
        if n != 2:
            raise ConfigError("the twisted identity is defined on the circle only")
        return BoundaryFunction(2, 2, _twisted, unit_norm=True, name=name)
    if name == "rotated":
        R = rotation_matrix(n)
        return BoundaryFunction(n, n, lambda z: z @ R.T, unit_norm=True, name=name)
    if name == "holder":
        if not 0 < beta <= 1:
            raise ConfigError(f"holder exponent must lie in (0, 1], got {beta}")
        e1 = np.eye(n)[0]
        return BoundaryFunction(
            n, 1, lambda z: (0.5 * np.linalg.norm(z - e1, axis=1, keepdims=True)) ** beta,
            name=f"holder{beta:g}",
        )
    raise ConfigError(f"unknown boundary map {name!r}; choose from {MAP_NAMES}")


MAP_NAMES = ("one", "cos", "identity", "twisted", "rotated", "holder")
