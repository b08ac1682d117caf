"""
Lipschitz-type regularity is inherited from the boundary
========================================================

For a fast majorant ``w`` (``alpha > 0``), or a slow one (``alpha = 0``),
the solution of a datum with bounded ``|phi(x) - phi(y)| / w(|x - y|)``
has the same kind of seminorm in the ball. We watch the interior seminorm
over balls of radius ``r_max -> 1`` for a Hoelder-1/2 datum, and the
scaled gradient ``|grad u| (1 - r) / w(1 - r)``.
"""

from alphapoisson.experiments import cmd_gradient_bound, cmd_hardy_littlewood
from alphapoisson.majorant import fast_constant, log_majorant, power, slow_constant

###############################################################################
# Fast and slow constants of a few majorants.

for w in (power(0.5), power(1.0), log_majorant()):
    print(f"{w.label:14s} fast {fast_constant(w):8.4f}   slow {slow_constant(w):8.4f}")

###############################################################################
# Seminorm ladder (a few seconds per value of alpha).

for alpha in (1.0, 0.0):
    rep = cmd_hardy_littlewood(2, alpha, 0.5, pairs=4000)
    print(rep.to_text(), "\n")

###############################################################################
# Gradient growth matches ``(1 - r)^(beta - 1)``.

for beta in (0.5, 1.0):
    print(cmd_gradient_bound(2, 1.0, beta).to_text(), "\n")
