"""Node/weight rules for the normalized surface measure on the unit sphere.

All rules integrate against the rotation-invariant probability measure, so
the weights of every rule sum to one. Integrands are vectorized callables
taking an ``(M, n)`` array of unit vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError

__all__ = [
    "QuadratureRule",
    "as_unit_vector",
    "circle_rule",
    "product_rule",
    "monte_carlo_rule",
    "graded_rule",
    "householder_from_e1",
    "integrate",
    "cap_measure",
    "sphere_area",
]

UNIT_TOL = 1e-12


def as_unit_vector(coords, tol: float = UNIT_TOL) -> np.ndarray:
    """Return ``coords`` as a float array, checking that it lies on the sphere."""
    v = np.asarray(coords, dtype=float)
    norms = np.linalg.norm(v, axis=-1)
    if np.any(np.abs(norms - 1.0) > tol):
        raise DomainError(f"not a unit vector (|v| = {norms})")
    return v


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere in R^(d+1), i.e. of S^d."""
    return 2.0 * math.pi ** ((d + 1) / 2) / math.gamma((d + 1) / 2)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes on the sphere in R^n with positive weights summing to one."""

    n: int
    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != self.n:
            raise DomainError(f"nodes must have shape (M, {self.n})")
        if weights.shape != (nodes.shape[0],):
            raise DomainError("nodes and weights differ in length")
        if np.any(weights <= 0):
            raise DomainError("quadrature weights must be positive")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise DomainError(f"weights sum to {weights.sum()!r}, not 1")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return self.weights.size


def _normalized(w: np.ndarray) -> np.ndarray:
    return w / math.fsum(w)


@lru_cache(maxsize=64)
def circle_rule(m: int) -> QuadratureRule:
    """``m`` equally spaced points on the unit circle with weights ``1/m``.

    Exact for trigonometric polynomials of degree below ``m``.
    """
    if m < 4:
        raise DomainError(f"circle_rule needs m >= 4, got {m}")
    theta = 2.0 * np.pi * np.arange(m) / m
    nodes = np.column_stack([np.cos(theta), np.sin(theta)])
    return QuadratureRule(2, nodes, np.full(m, 1.0 / m), "circle-uniform")


def _gauss_legendre(k: int, a: float = -1.0, b: float = 1.0):
    t, w = np.polynomial.legendre.leggauss(k)
    half = 0.5 * (b - a)
    return half * t + 0.5 * (a + b), half * w


def _chebyshev_u(k: int):
    # Gauss rule for the weight sqrt(1 - t^2) on [-1, 1]
    i = np.arange(1, k + 1)
    ang = i * np.pi / (k + 1)
    return np.cos(ang), np.pi / (k + 1) * np.sin(ang) ** 2


@lru_cache(maxsize=32)
def product_rule(n: int, k: int) -> QuadratureRule:
    """Tensor rule in spherical coordinates for ``n`` in ``{3, 4}``.

    The polar axis is ``e1``. With ``t_j = cos(theta_j)``, the surface
    Jacobian ``sin^(n-1-j)(theta_j)`` turns into a polynomial weight in
    ``t_j`` (constant for ``n = 3``; ``sqrt(1-t^2)`` for the first angle when
    ``n = 4``), handled by Gauss-Legendre and Gauss-Chebyshev (second kind)
    nodes respectively. The last angle uses ``2k`` uniform nodes.
    """
    if n not in (3, 4):
        raise DomainError(f"product_rule supports n in {{3, 4}}, got {n}")
    if k < 8:
        raise DomainError(f"product_rule needs k >= 8, got {k}")
    m_az = 2 * k
    phi = 2.0 * np.pi * (np.arange(m_az) + 0.5) / m_az
    if n == 3:
        t, wt = _gauss_legendre(k)
        T, P = np.meshgrid(t, phi, indexing="ij")
        S = np.sqrt(1.0 - T * T)
        nodes = np.column_stack([T.ravel(), (S * np.cos(P)).ravel(), (S * np.sin(P)).ravel()])
        w = np.repeat(wt, m_az) / m_az
    else:
        t1, w1 = _chebyshev_u(k)
        t2, w2 = _gauss_legendre(k)
        T1, T2, P = np.meshgrid(t1, t2, phi, indexing="ij")
        S1 = np.sqrt(1.0 - T1 * T1)
        S2 = np.sqrt(1.0 - T2 * T2)
        nodes = np.column_stack([
            T1.ravel(),
            (S1 * T2).ravel(),
            (S1 * S2 * np.cos(P)).ravel(),
            (S1 * S2 * np.sin(P)).ravel(),
        ])
        w = (w1[:, None, None] * w2[None, :, None] * np.ones(m_az)[None, None, :]).ravel()
    return QuadratureRule(n, nodes, _normalized(w), "product-gauss", meta={"k": k})


def monte_carlo_rule(n: int, m: int, seed: int) -> QuadratureRule:
    """``m`` i.i.d. uniform points (normalized Gaussian vectors), weights ``1/m``."""
    if n < 2:
        raise DomainError(f"dimension must be >= 2, got {n}")
    if m < 100:
        raise DomainError(f"monte_carlo_rule needs m >= 100, got {m}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((m, n))
    nodes = g / np.linalg.norm(g, axis=1, keepdims=True)
    return QuadratureRule(n, nodes, np.full(m, 1.0 / m), "monte-carlo", seed=seed)


def householder_from_e1(xi: np.ndarray) -> np.ndarray:
    """Orthogonal (symmetric) matrix ``H`` with ``H e1 = xi``."""
    xi = np.asarray(xi, dtype=float)
    n = xi.size
    v = -xi.copy()
    v[0] += 1.0
    vv = v @ v
    if vv < 1e-30:
        return np.eye(n)
    return np.eye(n) - 2.0 * np.outer(v, v) / vv


def _graded_edges(width: float, max_panel: float) -> np.ndarray:
    edges = [0.0]
    step = width
    while edges[-1] + step < math.pi:
        edges.append(edges[-1] + step)
        step = min(2.0 * step, max_panel)
    edges.append(math.pi)
    return np.asarray(edges)


@lru_cache(maxsize=128)
def _graded_polar(n: int, width: float, per_panel: int, max_panel: float):
    edges = _graded_edges(width, max_panel)
    ts, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        t, w = _gauss_legendre(per_panel, a, b)
        ts.append(t)
        ws.append(w)
    theta = np.concatenate(ts)
    w = np.concatenate(ws) * np.sin(theta) ** (n - 2)
    return theta, w


@lru_cache(maxsize=16)
def _subsphere(n: int, azimuth: int):
    # rule on S^(n-2), the directions orthogonal to the polar axis
    if n == 2:
        return np.array([[1.0], [-1.0]]), np.array([0.5, 0.5])
    if n == 3:
        r = circle_rule(azimuth)
    elif n == 4:
        r = product_rule(3, max(8, azimuth // 2))
    else:
        raise DomainError(f"graded_rule supports n in {{2, 3, 4}}, got {n}")
    return r.nodes, r.weights


def graded_rule(n: int, xi, width: float, *, per_panel: int = 16,
                azimuth: int = 32, max_panel: float = math.pi / 8) -> QuadratureRule:
    """Rule whose polar axis is ``xi``, graded towards ``xi`` at scale ``width``.

    The polar angle from ``xi`` is split into panels ``[0, w], [w, 2w],
    [2w, 4w], ...`` (capped at ``max_panel``), each carrying a
    ``per_panel``-point Gauss-Legendre rule. Integrands concentrated in a cap
    of angular size ``width`` around ``xi``, like the weighted Poisson kernel
    at ``x = (1 - width) xi``, are then resolved with a node count growing only
    logarithmically in ``1/width``.
    """
    xi = as_unit_vector(xi, tol=1e-10)
    if xi.shape != (n,):
        raise DomainError(f"xi must have shape ({n},)")
    width = float(min(max(width, 1e-12), max_panel))
    theta, wt = _graded_polar(n, width, per_panel, max_panel)
    eta, we = _subsphere(n, azimuth)
    c = np.cos(theta)[:, None, None]
    s = np.sin(theta)[:, None, None]
    local = np.concatenate(
        [np.broadcast_to(c, (theta.size, eta.shape[0], 1)), s * eta[None, :, :]], axis=2
    ).reshape(-1, n)
    w = (wt[:, None] * we[None, :]).ravel()
    nodes = local @ householder_from_e1(xi).T
    return QuadratureRule(n, nodes, _normalized(w), "graded", meta={"width": width})


def integrate(rule: QuadratureRule, f) -> float | np.ndarray:
    """``sum_i w_i f(zeta_i)``.

    ``f`` receives the ``(M, n)`` node array and returns ``(M,)`` or ``(M, m)``
    values. Sums are exactly rounded (``math.fsum``) so the result does not
    depend on summation order.
    """
    vals = np.asarray(f(rule.nodes), dtype=float)
    if vals.shape[0] != len(rule):
        raise DomainError("integrand returned the wrong number of values")
    prod = rule.weights.reshape((-1,) + (1,) * (vals.ndim - 1)) * vals
    if vals.ndim == 1:
        return math.fsum(prod)
    flat = prod.reshape(prod.shape[0], -1)
    out = np.array([math.fsum(col) for col in flat.T])
    return out.reshape(vals.shape[1:])


def cap_measure(rule: QuadratureRule, xi, t: float) -> float:
    """Measure of the cap ``{zeta : |zeta - xi| <= t}`` by indicator quadrature."""
    if not 0 < t <= 2:
        raise DomainError(f"cap radius must lie in (0, 2], got {t}")
    xi = as_unit_vector(xi)
    return integrate(rule, lambda z: (np.linalg.norm(z - xi, axis=1) <= t * (1 + 1e-14)).astype(float))
