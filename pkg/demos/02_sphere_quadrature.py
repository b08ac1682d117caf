"""
Quadrature on the sphere
========================

Rules for the normalized surface measure: uniform points on the circle,
tensor Gauss rules on S^2 and S^3, Monte Carlo above that, and a rule graded
towards one direction for integrands concentrated near the boundary.
"""

import math

import numpy as np

from alphapoisson.quadrature import (
    cap_measure,
    circle_rule,
    graded_rule,
    integrate,
    monte_carlo_rule,
    product_rule,
)

###############################################################################
# Moments: ``E[z_1^2] = 1/n`` on the sphere in R^n.

for rule in (circle_rule(64), product_rule(3, 16), product_rule(4, 12), monte_carlo_rule(6, 10**5, 1)):
    print(f"{rule.kind:15s} n={rule.n} nodes={len(rule):6d}  E[z1^2] = {integrate(rule, lambda z: z[:, 0] ** 2):.6f}")

###############################################################################
# The classical Poisson kernel at ``x = (1 - w) xi`` is a spike of width ``w``.
# A fixed tensor rule misses it; the graded rule resolves it with a few hundred nodes.

xi = np.array([0.0, 0.6, 0.8])
for w in (1e-1, 1e-2, 1e-3, 1e-4):
    x = (1 - w) * xi
    f = lambda z: (1 - x @ x) / np.linalg.norm(x - z, axis=1) ** 3  # noqa: E731
    fixed = integrate(product_rule(3, 64), f)
    graded = graded_rule(3, xi, w)
    print(f"w={w:.0e}: fixed {fixed:.10f}   graded {integrate(graded, f):.15f} ({len(graded)} nodes)")

###############################################################################
# Spherical caps ``{|z - xi| <= t}`` have measure ``t^2/4`` on S^2.

rule = product_rule(3, 64)
for t in (0.25, 0.5, 1.0, 1.5):
    print(f"t={t}: quadrature {cap_measure(rule, xi, t):.5f}  exact {t * t / 4:.5f}")
print("circle, t=1:", cap_measure(circle_rule(10**4), [1.0, 0.0], 1.0), "exact", 2 * math.asin(0.5) / math.pi)
