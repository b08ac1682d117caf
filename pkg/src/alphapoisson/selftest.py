"""Quick invariant checks run by ``alphapoisson selftest``.

Every check is deterministic and takes well under a second; together they
touch every module. Each returns ``(error, tolerance)`` and passes when
``error <= tolerance``.
"""

from __future__ import annotations

import math

import numpy as np

from .experiments import ExperimentReport, kalaj_constant
from .majorant import boundary_seminorm, fast_constant, power, slow_constant
from .maps import boundary_map
from .operator import residual_sup
from .quadrature import circle_rule, graded_rule, integrate, product_rule
from .solver import (
    SolverConfig,
    boundary_slope,
    kernel,
    kernel_gradient,
    p_alpha_one_radial,
    solve,
)
from .special import c_alpha, gamma, gauss_sum, hyp2f1, pochhammer

__all__ = ["CHECKS", "run_selftest"]


def _gamma_recurrence():
    x = np.random.default_rng(11).uniform(0.1, 20.0, 200)
    return max(abs(gamma(v + 1) / (v * gamma(v)) - 1.0) for v in x), 1e-13


def _gamma_values():
    err = max(abs(gamma(0.5) - math.sqrt(math.pi)), abs(gamma(5) - 24) / 24,
              abs(gamma(-0.5) + 2 * math.sqrt(math.pi)))
    return err, 1e-13


def _pochhammer():
    rng = np.random.default_rng(12)
    errs = [abs(pochhammer(a, k) * gamma(a) / gamma(a + k) - 1.0)
            for a, k in zip(rng.uniform(0.2, 5.0, 50), rng.integers(0, 12, 50))]
    return max(errs), 1e-12


def _gauss_summation():
    # Chu-Vandermonde: F(-m, b; c; 1) = (c-b)_m / (c)_m, against Gauss's formula
    rng = np.random.default_rng(13)
    errs = []
    for m in range(1, 8):
        b, c = rng.uniform(0.1, 3.0), rng.uniform(m + 0.5, m + 4.0)
        ref = pochhammer(c - b, m) / pochhammer(c, m)
        errs.append(abs(gauss_sum((-m, b, c)) - ref) / max(1.0, abs(ref)))
        errs.append(abs(hyp2f1((-m, b, c), 1.0) - ref) / max(1.0, abs(ref)))
    return max(errs), 1e-12


def _series_euler():
    x = np.linspace(0.55, 0.95, 9)
    p = (0.3, 1.2, 2.9)
    return float(np.max(np.abs(hyp2f1(p, x, method="series") - hyp2f1(p, x, method="euler")))), 1e-12


def _c_alpha_identities():
    err = max(abs(c_alpha(2, 0.0) - 1.0), abs(c_alpha(2, 2.0) - 0.5),
              abs(c_alpha(3, 1.0) - 1.0))
    return err, 1e-13


def _rule_normalization():
    rules = [circle_rule(16), product_rule(3, 16), product_rule(4, 8),
             graded_rule(3, np.array([0.0, 0.6, 0.8]), 1e-3)]
    return max(abs(math.fsum(r.weights) - 1.0) for r in rules), 1e-13


def _rule_moments():
    r3 = product_rule(3, 16)
    err = max(abs(integrate(r3, lambda z: z[:, 0] ** 2) - 1 / 3),
              abs(integrate(r3, lambda z: z[:, 0] ** 4) - 1 / 5),
              abs(integrate(circle_rule(16), lambda z: z[:, 0] ** 2) - 0.5))
    return err, 1e-13


def _kernel_normalization():
    errs = []
    for n, alpha in ((2, 1.0), (3, 0.5), (3, 2.0)):
        for r in (0.0, 0.5, 0.99):
            x = np.zeros(n)
            x[1] = r
            u = solve(boundary_map("one", n), SolverConfig(n, alpha))
            errs.append(abs(u(x)[0] - p_alpha_one_radial(r, n, alpha)))
    return max(errs), 1e-10


def _p_one_bounds():
    worst = 0.0
    for n, alpha in ((2, 0.5), (3, 1.0), (4, 2.0)):
        r = np.linspace(0.0, 0.999, 50)
        worst = max(worst, float(np.max(p_alpha_one_radial(r, n, alpha))) - 1.0)
    return max(worst, 0.0), 1e-12


def _boundary_slope():
    r = 1 - 1e-6
    err = max(abs((1 - p_alpha_one_radial(r, n, a)) / (1 - r) - boundary_slope(n, a))
              for n, a in ((2, 1.0), (2, 2.0), (3, 2.0)))
    return err, 1e-4


def _kernel_gradient_fd():
    x = np.array([0.3, -0.2, 0.4])
    z = np.array([[0.0, 0.6, 0.8]])
    g = kernel_gradient(x, z, 1.5)[0]
    h = 1e-6
    fd = np.array([(kernel(x + h * e, z, 1.5)[0] - kernel(x - h * e, z, 1.5)[0]) / (2 * h)
                   for e in np.eye(3)])
    return float(np.max(np.abs(g - fd)) / np.max(np.abs(g))), 1e-7


def _linearity():
    cfg = SolverConfig(2, 1.0)
    a, b = boundary_map("cos", 2), boundary_map("one", 2)
    x = np.array([0.3, 0.5])
    lhs = solve(a + b.scaled(2.0), cfg)(x)
    rhs = solve(a, cfg)(x) + 2.0 * solve(b, cfg)(x)
    return float(np.max(np.abs(lhs - rhs))), 1e-12


def _operator_residual():
    return residual_sup(boundary_map("one", 2), SolverConfig(2, 1.0), 0.8, 10, 1e-3), 1e-4


def _majorant_constants():
    w = power(0.5)
    return max(abs(fast_constant(w) - 2.0), abs(slow_constant(w) - 2.0)), 1e-9


def _lipschitz_identity():
    est = boundary_seminorm(boundary_map("identity", 2), power(1.0), 1000, 0)
    return abs(est.value - 1.0), 1e-9


def _kalaj_planar():
    return abs(kalaj_constant(2) - 2 / math.pi), 1e-14


CHECKS = (
    ("gamma_recurrence", _gamma_recurrence),
    ("gamma_values", _gamma_values),
    ("pochhammer_ratio", _pochhammer),
    ("gauss_summation", _gauss_summation),
    ("series_euler_agree", _series_euler),
    ("c_alpha_identities", _c_alpha_identities),
    ("rule_normalization", _rule_normalization),
    ("rule_moments", _rule_moments),
    ("kernel_normalization", _kernel_normalization),
    ("p_one_at_most_one", _p_one_bounds),
    ("boundary_slope", _boundary_slope),
    ("kernel_gradient_fd", _kernel_gradient_fd),
    ("solver_linearity", _linearity),
    ("operator_residual", _operator_residual),
    ("majorant_constants", _majorant_constants),
    ("lipschitz_identity", _lipschitz_identity),
    ("kalaj_planar", _kalaj_planar),
)


def run_selftest() -> ExperimentReport:
    rep = ExperimentReport("selftest", ["check", "error", "tolerance", "passed"],
                           metadata=dict(checks=len(CHECKS)))
    ok = True
    for name, fn in CHECKS:
        err, tol = fn()
        passed = bool(err <= tol)
        ok &= passed
        rep.add(check=name, error=float(err), tolerance=tol, passed=passed)
    rep.summary = dict(failed=sum(not r["passed"] for r in rep.rows))
    rep.verdict = ok
    return rep
