"""
Boundary difference quotients of unit-norm data
===============================================

For ``alpha > n - 2`` and a datum with ``|phi| = 1``, the radial quotient
``|phi(zeta) - u(r zeta)| / (1 - r)`` stays above ``alpha/2 + 1 - n/2`` as
``r -> 1``; for ``alpha = 0`` and ``u(0) = 0`` the sharp bound is a constant
given by a hypergeometric expression (``2/pi`` in the plane).
"""

import math

from alphapoisson.experiments import cmd_heinz, kalaj_constant

###############################################################################
# The harmonic constant in dimensions 2..7; ``n = 2`` gives ``2/pi``.

for n in range(2, 8):
    print(f"n={n}: {kalaj_constant(n):.12f}")
print("2/pi =", 2 / math.pi)

###############################################################################
# Quotients along radii, extrapolated to the sphere.

for n, alpha, name in ((2, 1.0, "identity"), (2, 1.0, "twisted"), (3, 2.0, "rotated"), (2, 0.0, "identity")):
    rep = cmd_heinz(n, alpha, name, zeta_count=8)
    s = rep.summary
    print(f"n={n} alpha={alpha} {name:9s} floor {s['floor']:.5f}  min limit {s['min_extrapolated']:.5f}"
          f"  margin {s['min_margin']:+.5f}  {'PASS' if rep.verdict else 'FAIL'}")
