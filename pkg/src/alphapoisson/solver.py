"""Dirichlet solutions of the weighted operator on the unit ball.

The solution with boundary datum ``phi`` is the integral of ``phi`` against
the Poisson-type kernel

    K_alpha(x, zeta) = C_alpha (1 - |x|^2)^(1+alpha) / |x - zeta|^(n+alpha)

over the normalized sphere measure. This module evaluates the kernel, its
gradient, the closed form of the solution for ``phi = 1`` and the quadrature
solution for general data.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import AccuracyError, DomainError
from .quadrature import (
    QuadratureRule,
    as_unit_vector,
    circle_rule,
    graded_rule,
    monte_carlo_rule,
    product_rule,
)
from .special import HypergeometricParams, c_alpha, hyp2f1, log_c_alpha

__all__ = [
    "BoundaryFunction",
    "SolverConfig",
    "Solution",
    "kernel",
    "kernel_gradient",
    "p_alpha_one",
    "p_alpha_one_radial",
    "p_alpha_one_radial_derivative",
    "boundary_slope",
    "solve",
    "gradient",
    "difference_quotient",
    "perturbed_kernel_constant",
]

LOG_SPACE_ALPHA = 10.0
LINEAR_AXIS_CAP = 2048

# Debug hook for the self-test mutation check; 0 in normal operation.
_KERNEL_CONSTANT_PERTURBATION = 0.0


@contextlib.contextmanager
def perturbed_kernel_constant(rel: float):
    """Temporarily scale the kernel constant by ``1 + rel`` (self-test hook)."""
    global _KERNEL_CONSTANT_PERTURBATION
    old = _KERNEL_CONSTANT_PERTURBATION
    _KERNEL_CONSTANT_PERTURBATION = rel
    try:
        yield
    finally:
        _KERNEL_CONSTANT_PERTURBATION = old


def _ball_point(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DomainError("a ball point is a 1-d coordinate array")
    if not x @ x < 1.0:
        raise DomainError(f"|x| = {np.linalg.norm(x)} is not inside the unit ball")
    return x


def _kernel_values(s, d2, n: int, alpha: float):
    # s = 1 - |x|^2 and d2 = |x - zeta|^2, broadcast against each other
    scale = 1.0 + _KERNEL_CONSTANT_PERTURBATION
    if alpha > LOG_SPACE_ALPHA:
        # (1 - |x|^2)^(1+alpha) underflows near the boundary for large alpha
        logk = log_c_alpha(n, alpha) + (1.0 + alpha) * np.log(s) - 0.5 * (n + alpha) * np.log(d2)
        return scale * np.exp(logk)
    return scale * c_alpha(n, alpha) * s ** (1.0 + alpha) / d2 ** (0.5 * (n + alpha))


def kernel(x, zeta, alpha: float) -> np.ndarray | float:
    """Poisson-type kernel ``K_alpha(x, zeta)``; ``zeta`` may be ``(n,)`` or ``(M, n)``."""
    x = _ball_point(x)
    z = np.asarray(zeta, dtype=float)
    d2 = np.sum((z - x) ** 2, axis=-1)
    return _kernel_values(1.0 - x @ x, d2, x.size, alpha)


def kernel_gradient(x, zeta, alpha: float) -> np.ndarray:
    """Gradient of the kernel in ``x``.

    Component ``j`` is
    ``-2 (1+alpha) x_j K / (1-|x|^2) - (n+alpha) (x_j - zeta_j) K / |x-zeta|^2``.
    Returns shape ``(n,)`` or ``(M, n)`` following ``zeta``.
    """
    x = _ball_point(x)
    n = x.size
    z = np.asarray(zeta, dtype=float)
    k = np.asarray(kernel(x, z, alpha))
    diff = x - z
    d2 = np.sum(diff ** 2, axis=-1)
    s = 1.0 - x @ x
    return k[..., None] * (-2.0 * (1.0 + alpha) * x / s
                           - (n + alpha) * diff / np.asarray(d2)[..., None])


def _radial_params(n: int, alpha: float) -> HypergeometricParams:
    return HypergeometricParams(-alpha / 2, n / 2 - 1 - alpha / 2, n / 2)


def p_alpha_one_radial(r, n: int, alpha: float):
    """Solution for boundary datum 1 at radius ``r`` (scalar or array)."""
    r = np.asarray(r, dtype=float)
    if np.any(np.abs(r) >= 1.0):
        raise DomainError("radius must lie in [0, 1)")
    val = c_alpha(n, alpha) * hyp2f1(_radial_params(n, alpha), r * r)
    return float(val) if np.ndim(val) == 0 else val


def p_alpha_one(x, alpha: float) -> float:
    """``C_alpha F(-alpha/2, n/2-1-alpha/2; n/2; |x|^2)``, the solution for datum 1."""
    x = _ball_point(x)
    return p_alpha_one_radial(float(np.linalg.norm(x)), x.size, alpha)


def p_alpha_one_radial_derivative(r, n: int, alpha: float):
    """``d/dr`` of the datum-1 solution along a ray.

    Equals ``2 C_alpha (a b / c) r F(a+1, b+1; c+1; r^2)`` with
    ``(a, b, c) = (-alpha/2, n/2-1-alpha/2, n/2)``.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r >= 1.0):
        raise DomainError("radius must lie in [0, 1)")
    p = _radial_params(n, alpha)
    coef = 2.0 * c_alpha(n, alpha) * p.a * p.b / p.c
    if coef == 0.0:
        val = np.zeros_like(r)
    else:
        val = coef * r * hyp2f1(HypergeometricParams(p.a + 1, p.b + 1, p.c + 1), r * r)
    return float(val) if np.ndim(val) == 0 else val


def boundary_slope(n: int, alpha: float) -> float:
    """Limit of ``(1 - P_alpha[1](r zeta)) / (1 - r)`` as ``r -> 1``, for ``alpha > 0``.

    Closed form ``(4/n)(-alpha/2)(n/2-1-alpha/2) * n/(2 alpha) = alpha/2 + 1 - n/2``.
    """
    if not alpha > 0:
        raise DomainError("the boundary slope formula needs alpha > 0")
    p = _radial_params(n, alpha)
    m = c_alpha(n, alpha) * hyp2f1(HypergeometricParams(p.a + 1, p.b + 1, p.c + 1), 1.0)
    return (4.0 / n) * p.a * p.b * m


@dataclass(frozen=True)
class BoundaryFunction:
    """Vector-valued boundary datum on the sphere in R^n.

    ``func`` maps an ``(M, n)`` array of unit vectors to ``(M, m)`` values.
    """

    n: int
    m: int
    func: Callable[[np.ndarray], np.ndarray]
    unit_norm: bool = False
    name: str = "custom"

    def __call__(self, zeta) -> np.ndarray:
        z = np.asarray(zeta, dtype=float)
        single = z.ndim == 1
        out = np.asarray(self.func(np.atleast_2d(z)), dtype=float).reshape(-1, self.m)
        return out[0] if single else out

    def check_unit_norm(self, nodes: np.ndarray, tol: float = 1e-9) -> bool:
        return bool(np.all(np.abs(np.linalg.norm(self(nodes), axis=1) - 1.0) <= tol))

    def __add__(self, other: "BoundaryFunction") -> "BoundaryFunction":
        return BoundaryFunction(self.n, self.m, lambda z: self.func(z) + other.func(z),
                                name=f"({self.name}+{other.name})")

    def scaled(self, c: float) -> "BoundaryFunction":
        return BoundaryFunction(self.n, self.m, lambda z: c * self.func(z),
                                name=f"{c}*{self.name}")


@dataclass(frozen=True)
class SolverConfig:
    """Numerical policy of the quadrature solver.

    node_growth:
        ``"graded"`` builds, for every evaluation point ``x``, a rule whose
        polar axis is ``x/|x|`` and which is graded at scale ``1 - |x|``.
        ``"linear"`` uses ``base_nodes * ceil(1/(1-|x|))`` nodes (circle for
        ``n = 2``; per polar axis of the product rule for ``n = 3``, capped
        at 2048). ``"fixed"`` uses one rule with ``base_nodes`` (per axis for
        ``n`` in ``{3, 4}``) for every point. Dimensions above 4 always use a
        Monte Carlo rule of ``base_nodes`` points.

    A graded rule changes with ``x``, so its (tiny, for smooth data)
    quadrature error is not a smooth function of ``x``; finite differences of
    the output of rough data should use a fixed rule, whose output is a
    finite sum of kernels and hence exactly annihilated by the operator.
    """

    n: int
    alpha: float
    base_nodes: int = 64
    boundary_cap_epsilon: float = 1e-3
    node_growth: str = "graded"
    fd_step: float = 1e-3
    seed: int = 0
    per_panel: int = 16
    azimuth: int = 32

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n}")
        if not self.alpha > -1:
            raise DomainError(f"alpha must exceed -1, got {self.alpha}")
        if not 0 < self.boundary_cap_epsilon < 0.5:
            raise DomainError("boundary_cap_epsilon must lie in (0, 0.5)")
        if self.node_growth not in ("graded", "linear", "fixed"):
            raise DomainError(f"unknown node_growth {self.node_growth!r}")
        if self.base_nodes < 4:
            raise DomainError("base_nodes must be at least 4")

    def with_(self, **kw) -> "SolverConfig":
        return replace(self, **kw)


class Solution:
    """Quadrature evaluator of the Dirichlet solution for one datum and config.

    Calling it on a point of shape ``(n,)`` returns ``(m,)`` values; on
    ``(N, n)`` points it returns ``(N, m)``.
    """

    def __init__(self, phi: BoundaryFunction, cfg: SolverConfig):
        if phi.n != cfg.n:
            raise DomainError(f"datum lives on S^{phi.n - 1} but config has n = {cfg.n}")
        self.phi = phi
        self.cfg = cfg
        self._cache: dict = {}

    # rule selection -----------------------------------------------------
    def _rule_key(self, x: np.ndarray):
        cfg = self.cfg
        r = float(np.linalg.norm(x))
        if r > 1.0 - cfg.boundary_cap_epsilon + 1e-12:
            raise AccuracyError(
                f"|x| = {r} exceeds 1 - boundary_cap_epsilon = {1 - cfg.boundary_cap_epsilon}"
            )
        if cfg.n > 4:
            return ("mc", max(cfg.base_nodes, 100))
        if cfg.node_growth == "fixed":
            return ("fixed", cfg.base_nodes)
        if cfg.node_growth == "linear":
            count = cfg.base_nodes * math.ceil(1.0 / (1.0 - r))
            if cfg.n == 2:
                return ("circle", count)
            if count > LINEAR_AXIS_CAP:
                raise AccuracyError(
                    f"linear policy needs {count} nodes per axis at |x| = {r}, "
                    f"above the cap of {LINEAR_AXIS_CAP}"
                )
            return ("product", count)
        return None

    def _fixed_rule(self, key) -> tuple[QuadratureRule, np.ndarray]:
        if key not in self._cache:
            cfg = self.cfg
            tag, count = key
            if tag == "mc":
                rule = monte_carlo_rule(cfg.n, count, cfg.seed)
            elif cfg.n == 2:
                rule = circle_rule(max(count, 4))
            else:
                rule = product_rule(cfg.n, max(count, 8))
            self._cache[key] = (rule, self.phi(rule.nodes))
        return self._cache[key]

    def rule_for(self, x) -> tuple[QuadratureRule, np.ndarray]:
        """Quadrature rule used at ``x`` together with the datum on its nodes."""
        x = _ball_point(x)
        key = self._rule_key(x)
        if key is not None:
            return self._fixed_rule(key)
        r = float(np.linalg.norm(x))
        xi = x / r if r > 0 else np.eye(self.cfg.n)[0]
        rule = graded_rule(self.cfg.n, xi, max(1.0 - r, 1e-12),
                           per_panel=self.cfg.per_panel, azimuth=self.cfg.azimuth)
        return rule, self.phi(rule.nodes)

    # evaluation ---------------------------------------------------------
    def _value_at(self, x: np.ndarray) -> np.ndarray:
        rule, vals = self.rule_for(x)
        return (rule.weights * kernel(x, rule.nodes, self.cfg.alpha)) @ vals

    def _gradient_at(self, x: np.ndarray) -> np.ndarray:
        rule, vals = self.rule_for(x)
        g = kernel_gradient(x, rule.nodes, self.cfg.alpha) * rule.weights[:, None]
        return vals.T @ g

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            return self._value_at(x)
        fixed = [self._rule_key(_ball_point(p)) for p in x]
        if all(k is not None and k == fixed[0] for k in fixed) and len(x):
            return self._batch(x, fixed[0])
        return np.array([self._value_at(p) for p in x])

    def _batch(self, x: np.ndarray, key, chunk: int = 1 << 22) -> np.ndarray:
        rule, vals = self._fixed_rule(key)
        out = np.empty((x.shape[0], self.phi.m))
        rows = max(1, chunk // (len(rule) * self.cfg.n))
        wv = rule.weights[:, None] * vals
        for i in range(0, x.shape[0], rows):
            xs = x[i:i + rows]
            s = 1.0 - np.sum(xs * xs, axis=1)
            d2 = np.sum((xs[:, None, :] - rule.nodes[None, :, :]) ** 2, axis=2)
            out[i:i + rows] = _kernel_values(s[:, None], d2, self.cfg.n, self.cfg.alpha) @ wv
        return out

    def gradient(self, x) -> np.ndarray:
        """Jacobian ``(m, n)`` at ``x`` by quadrature of the kernel gradient."""
        return self._gradient_at(_ball_point(x))

    def component(self, j: int = 0) -> Callable[[np.ndarray], float]:
        """Scalar field ``x -> u_j(x)``."""
        return lambda x: float(self(np.asarray(x, dtype=float))[j])


def solve(phi: BoundaryFunction, cfg: SolverConfig) -> Solution:
    """Quadrature evaluator of the Dirichlet solution with datum ``phi``."""
    return Solution(phi, cfg)


def gradient(phi: BoundaryFunction, cfg: SolverConfig, x) -> np.ndarray:
    """Jacobian matrix ``(m, n)`` of the solution at ``x``."""
    return solve(phi, cfg).gradient(x)


def difference_quotient(phi: BoundaryFunction, cfg: SolverConfig, zeta, r: float,
                        solution: Solution | None = None) -> float:
    """``|phi(zeta) - u(r zeta)| / (1 - r)`` with ``u`` the Dirichlet solution.

    The boundary value is the datum itself, the solution being continuous up
    to the sphere.
    """
    zeta = as_unit_vector(zeta, tol=1e-10)
    if not 0 < r <= 1.0 - cfg.boundary_cap_epsilon + 1e-12:
        raise DomainError(f"r must lie in (0, 1 - eps], got {r}")
    u = solution if solution is not None else solve(phi, cfg)
    return float(np.linalg.norm(phi(zeta) - u(r * zeta)) / (1.0 - r))
