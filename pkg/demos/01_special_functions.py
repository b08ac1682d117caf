"""
Gamma and the Gauss hypergeometric function
===========================================

The weighted Poisson integral of the constant function is a Gauss
hypergeometric function, so everything downstream rests on ``2F1``.
"""

import numpy as np
import scipy.special as sp

from alphapoisson.special import c_alpha, gamma, hyp2f1

###############################################################################
# Gamma by the Lanczos approximation agrees with scipy to near machine precision.

x = np.linspace(0.5, 30, 7)
for v in x:
    print(f"Gamma({v:5.2f}) = {gamma(v):.15e}   rel. err {abs(gamma(v) / sp.gamma(v) - 1):.1e}")

###############################################################################
# At ``x = 1`` the series is summed in closed form (Gauss), when ``c - a - b > 0``.

a, b, c = -0.5, 0.25, 1.5
print("F(a,b;c;1)  =", hyp2f1((a, b, c), 1.0))
print("Gamma ratio =", gamma(c) * gamma(c - a - b) / (gamma(c - a) * gamma(c - b)))

###############################################################################
# Near ``x = 1`` the raw series converges only algebraically; connection
# formulas keep the cost flat. Compare with scipy up to ``1 - 1e-12``.

p = (-0.5, -0.5, 1.0)  # the datum-1 solution in the plane with alpha = 1 is (pi/4) F(p; r^2)
for e in (1e-2, 1e-6, 1e-12):
    print(f"x = 1 - {e:.0e}: {hyp2f1(p, 1 - e):.16f}  scipy {sp.hyp2f1(*p, 1 - e):.16f}")

###############################################################################
# The kernel constant ``C_alpha`` is a Gamma ratio, equal to 1 at ``alpha = 0``.

for alpha in (0.0, 0.5, 1.0, 2.0, 10.0):
    print(f"C(n=3, alpha={alpha:4.1f}) = {c_alpha(3, alpha):.12f}")
