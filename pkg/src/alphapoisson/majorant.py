"""Majorants, their fast/slow constants, and sampled Lipschitz-type seminorms.

A majorant is a continuous increasing ``w`` with ``w(0) = 0`` and ``w(t)/t``
non-increasing. It is *fast* when ``int_0^lam w(t)/t dt <= M w(lam)`` and
*slow* when ``lam int_lam^inf w(t)/t^2 dt <= M w(lam)`` for small ``lam``;
the functions here report the smallest such ``M`` seen on a grid of
``lam`` values, or ``inf`` when the integral does not settle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError

__all__ = [
    "Majorant",
    "SeminormEstimate",
    "power",
    "log_majorant",
    "eval_majorant",
    "check_admissible",
    "fast_constant",
    "slow_constant",
    "default_lambda_grid",
    "boundary_seminorm",
    "interior_seminorm",
]

INFINITE_RATIO = 1e6
BLOCK = 256


@dataclass(frozen=True)
class Majorant:
    kind: str
    beta: float | None = None
    func: Callable[[np.ndarray], np.ndarray] | None = None
    label: str = ""

    def __call__(self, t):
        return eval_majorant(self, t)


def power(beta: float) -> Majorant:
    """``w(t) = t^beta`` for ``beta`` in ``(0, 1]``."""
    if not 0 < beta <= 1:
        raise DomainError(f"power majorant needs beta in (0, 1], got {beta}")
    return Majorant("power", beta=float(beta), label=f"t^{beta:g}")


def log_majorant() -> Majorant:
    """``w(t) = 1 / log(e + 1/t)``: a majorant that is not fast."""

    def f(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(t > 0, 1.0 / np.log(np.e + 1.0 / np.where(t > 0, t, 1.0)), 0.0)

    return Majorant("custom", func=f, label="1/log(e+1/t)")


def eval_majorant(w: Majorant, t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("majorants are evaluated at t >= 0")
    if w.kind == "power":
        out = t ** w.beta
    else:
        out = np.asarray(w.func(t), dtype=float)
    return float(out) if out.ndim == 0 else out


def check_admissible(w: Majorant, grid=None, rtol: float = 1e-12) -> bool:
    """Sampled check: ``w(0) = 0``, ``w`` increasing, ``w(t)/t`` non-increasing."""
    t = np.logspace(-8, 1, 400) if grid is None else np.asarray(grid, dtype=float)
    v = eval_majorant(w, t)
    q = v / t
    return (eval_majorant(w, 0.0) == 0.0
            and bool(np.all(np.diff(v) > 0))
            and bool(np.all(np.diff(q) <= rtol * q[:-1])))


def default_lambda_grid(count: int = 25) -> np.ndarray:
    return np.logspace(-6, 0, count)


_GL_T, _GL_W = np.polynomial.legendre.leggauss(16)


def _panel_integral(g, a: float, b: float, panel: float = 1.0) -> float:
    """Composite 16-point Gauss-Legendre integral of ``g`` over ``[a, b]``."""
    if b <= a:
        return 0.0
    edges = np.linspace(a, b, max(1, math.ceil((b - a) / panel)) + 1)
    lo, hi = edges[:-1, None], edges[1:, None]
    s = 0.5 * (hi - lo) * _GL_T[None, :] + 0.5 * (hi + lo)
    return float(np.sum(0.5 * (hi - lo) * _GL_W[None, :] * g(s)))


def _settle(integral, w_lam: float, s0: float, s_max: float) -> float:
    # doubles the log-range until increments drop below 1e-10 w(lam)
    s = s0
    prev = integral(s)
    while 2 * s <= s_max:
        cur = integral(2 * s)
        if abs(cur - prev) <= 1e-10 * w_lam:
            return cur
        prev, s = cur, 2 * s
    return math.inf


def fast_constant(w: Majorant, lambda_grid=None) -> float:
    """``sup_lam (int_0^lam w(t)/t dt) / w(lam)`` over the grid.

    With ``t = lam e^(-s)`` the integral becomes ``int_0^inf w(lam e^-s) ds``,
    integrated by composite Gauss panels. Power majorants get the exact tail
    ``w(delta)/beta``; other majorants extend the range until the tail is below
    ``1e-10 w(lam)``. Returns ``inf`` if that never happens or the ratio
    exceeds ``1e6``.
    """
    grid = default_lambda_grid() if lambda_grid is None else np.asarray(lambda_grid, float)
    worst = 0.0
    for lam in grid:
        w_lam = eval_majorant(w, lam)
        g = lambda s, lam=lam: eval_majorant(w, lam * np.exp(-s))
        if w.kind == "power":
            s_cut = 40.0 / w.beta
            val = _panel_integral(g, 0.0, s_cut) + eval_majorant(w, lam * math.exp(-s_cut)) / w.beta
        else:
            s_max = math.log(lam / 1e-300)
            val = _settle(lambda S: _panel_integral(g, 0.0, S), w_lam, 20.0, s_max)
        worst = max(worst, val / w_lam)
        if worst > INFINITE_RATIO:
            return math.inf
    return worst


def slow_constant(w: Majorant, lambda_grid=None, t_max: float | None = None) -> float:
    """``sup_lam lam (int_lam^inf w(t)/t^2 dt) / w(lam)`` over the grid.

    The part up to ``t_max`` is integrated in ``s = log(t/lam)``; beyond it a
    power majorant contributes ``t_max^(beta-1)/(1-beta)`` (``inf`` at
    ``beta = 1``), and other majorants are extended until the increments
    settle.
    """
    grid = default_lambda_grid() if lambda_grid is None else np.asarray(lambda_grid, float)
    t_max = 1e3 * float(np.max(grid)) if t_max is None else float(t_max)
    if t_max < 1e3 * float(np.max(grid)) * (1 - 1e-12):
        raise DomainError("t_max must be at least 1e3 * max(lambda_grid)")
    if w.kind == "power" and w.beta == 1.0:
        return math.inf
    worst = 0.0
    for lam in grid:
        w_lam = eval_majorant(w, lam)
        g = lambda s, lam=lam: eval_majorant(w, lam * np.exp(s)) * np.exp(-s)
        s_top = math.log(t_max / lam)
        if w.kind == "power":
            tail = t_max ** (w.beta - 1.0) / (1.0 - w.beta)
            val = _panel_integral(g, 0.0, s_top) + lam * tail
        else:
            val = _settle(lambda S: _panel_integral(g, 0.0, S), w_lam, s_top, 700.0)
        worst = max(worst, val / w_lam)
        if worst > INFINITE_RATIO:
            return math.inf
    return worst


@dataclass(frozen=True)
class SeminormEstimate:
    value: float
    pair_count: int
    argmax_pair: tuple
    seed: int


def _sphere_points(rng, count: int, n: int) -> np.ndarray:
    g = rng.standard_normal((count, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _ratios(f, w: Majorant, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    d = np.linalg.norm(x - y, axis=1)
    fx = np.asarray(f(x), dtype=float).reshape(len(x), -1)
    fy = np.asarray(f(y), dtype=float).reshape(len(y), -1)
    num = np.linalg.norm(fx - fy, axis=1)
    out = np.zeros_like(d)
    ok = d > 0
    out[ok] = num[ok] / eval_majorant(w, d[ok])
    return out


def _estimate(f, w, draw_block, project, pairs: int, seed: int, refine_rounds: int,
              refine_size: int) -> SeminormEstimate:
    rng = np.random.default_rng(seed)
    best, best_pair = 0.0, None
    done = 0
    while done < pairs:
        # every block consumes the same random stream whatever the pair budget
        x, y = draw_block(rng)
        take = min(BLOCK, pairs - done)
        x, y = x[:take], y[:take]
        r = _ratios(f, w, x, y)
        i = int(np.argmax(r))
        if r[i] > best:
            best, best_pair = float(r[i]), (x[i].copy(), y[i].copy())
        done += take
    evaluated = done
    if best_pair is not None and refine_rounds:
        rrng = np.random.default_rng([seed, 1])
        d0 = float(np.linalg.norm(best_pair[0] - best_pair[1]))
        for k in range(1, refine_rounds + 1):
            scale = d0 * 0.5**k
            n = best_pair[0].size
            which = rrng.integers(0, 3, refine_size)
            gx = rrng.standard_normal((refine_size, n)) * scale * (which != 1)[:, None]
            gy = rrng.standard_normal((refine_size, n)) * scale * (which != 0)[:, None]
            x = project(best_pair[0] + gx)
            y = project(best_pair[1] + gy)
            r = _ratios(f, w, x, y)
            evaluated += refine_size
            i = int(np.argmax(r))
            if r[i] > best:
                best, best_pair = float(r[i]), (x[i].copy(), y[i].copy())
    pair = best_pair if best_pair is not None else (None, None)
    return SeminormEstimate(best, evaluated, pair, seed)


def boundary_seminorm(phi, w: Majorant, pairs: int = 4000, seed: int = 0, *,
                      refine_rounds: int = 8, refine_size: int = 64) -> SeminormEstimate:
    """Sampled ``sup |phi(x) - phi(y)| / w(|x - y|)`` over pairs on the sphere.

    Half of each block pairs independent uniform points; the other half
    pairs a uniform point with a neighbour at log-uniform distance in
    ``[1e-4, 1]``. The best pair is then perturbed at scales halving over
    ``refine_rounds`` rounds. With ``refine_rounds=0`` the estimate is a
    maximum over a prefix of a fixed stream, hence non-decreasing in ``pairs``.
    """
    if pairs < 1000:
        raise DomainError("boundary_seminorm needs at least 1000 pairs")
    n = phi.n

    def project(p):
        return p / np.linalg.norm(p, axis=1, keepdims=True)

    def draw(rng):
        x = _sphere_points(rng, BLOCK, n)
        far = _sphere_points(rng, BLOCK, n)
        step = rng.standard_normal((BLOCK, n)) * 10.0 ** rng.uniform(-4, 0, (BLOCK, 1))
        near = project(x + step)
        y = np.where((np.arange(BLOCK) % 2 == 0)[:, None], far, near)
        return x, y

    return _estimate(phi, w, draw, project, pairs, seed, refine_rounds, refine_size)


def interior_seminorm(u, w: Majorant, r_max: float, pairs: int = 4000, seed: int = 0, *,
                      n: int, refine_rounds: int = 8, refine_size: int = 64) -> SeminormEstimate:
    """Sampled seminorm of ``u`` over the closed ball of radius ``r_max``.

    ``u`` maps ``(N, n)`` points to ``(N,)`` or ``(N, m)`` values. Half of the
    pairs have both points in the shell ``0.9 r_max <= |x| <= r_max``; within
    each half, pairs alternate between independent points and near neighbours.
    """
    if not 0 < r_max < 1:
        raise DomainError("r_max must lie in (0, 1)")

    def project(p):
        norms = np.linalg.norm(p, axis=1, keepdims=True)
        return np.where(norms > r_max, p * (r_max / np.maximum(norms, 1e-300)), p)

    def ball(rng, count, lo):
        d = _sphere_points(rng, count, n)
        frac = rng.uniform(0, 1, (count, 1))
        r = r_max * (lo**n + (1 - lo**n) * frac) ** (1.0 / n)
        return d * r

    def draw(rng):
        half = BLOCK // 2
        x = np.vstack([ball(rng, half, 0.0), ball(rng, half, 0.9)])
        far = np.vstack([ball(rng, half, 0.0), ball(rng, half, 0.9)])
        step = rng.standard_normal((BLOCK, n)) * (r_max * 10.0 ** rng.uniform(-4, 0, (BLOCK, 1)))
        near = project(x + step)
        y = np.where((np.arange(BLOCK) % 2 == 0)[:, None], far, near)
        return x, y

    return _estimate(u, w, draw, project, pairs, seed, refine_rounds, refine_size)
