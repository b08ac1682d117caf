"""
Solving the weighted Dirichlet problem
======================================

``u = P_alpha[phi]`` is the integral of the datum against the kernel
``C (1 - |x|^2)^(1+alpha) / |x - zeta|^(n+alpha)``. For ``alpha > 0`` even
the constant datum has a non-constant solution, known in closed form.
"""

import numpy as np

from alphapoisson.maps import boundary_map
from alphapoisson.solver import SolverConfig, boundary_slope, p_alpha_one_radial, solve

###############################################################################
# Datum 1: quadrature against the closed form along a ray.

n, alpha = 3, 1.5
u = solve(boundary_map("one", n), SolverConfig(n, alpha))
xi = np.array([1.0, 2.0, 2.0]) / 3
for r in (0.0, 0.5, 0.9, 0.99, 0.999):
    print(f"r={r:<6} quadrature {u(r * xi)[0]:.15f}   closed form {p_alpha_one_radial(r, n, alpha):.15f}")

###############################################################################
# The solution dips below 1 inside and returns to 1 at the sphere with a
# linear slope ``alpha/2 + 1 - n/2``.

for n, alpha in ((2, 1.0), (2, 2.0), (3, 2.0)):
    r = 1 - 1e-5
    print(f"n={n} alpha={alpha}: (1 - P)/(1 - r) = {(1 - p_alpha_one_radial(r, n, alpha)) / (1 - r):.5f}"
          f"   limit {boundary_slope(n, alpha)}")

###############################################################################
# Vector data: the identity map. For ``alpha = 0`` the extension is ``x``
# itself; for ``alpha > 0`` it shrinks towards the centre.

for alpha in (0.0, 1.0, 3.0):
    v = solve(boundary_map("identity", 2), SolverConfig(2, alpha))
    x = np.array([0.3, 0.4])
    print(f"alpha={alpha}: u(0.3, 0.4) = {v(x)},  Jacobian diag {np.diag(v.gradient(x))}")
