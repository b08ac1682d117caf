"""
The solution is annihilated by the weighted operator
====================================================

``L u = div((1 - |x|^2)^(-alpha) grad u) + alpha (n - 2 - alpha)(1 - |x|^2)^(-alpha-1) u``.
Finite differences of the quadrature solution give a residual that falls
like ``h^2`` until rounding takes over.
"""

from alphapoisson.experiments import cmd_residual

for alpha, name in ((0.0, "cos"), (1.0, "one"), (1.0, "cos"), (2.0, "identity")):
    rep = cmd_residual(2, alpha, name, grid_radius=0.8, grid_count=25, h=1e-3)
    s = rep.summary
    print(f"alpha={alpha} phi={name:9s} residual(h)={s['residual']:.2e}  residual(h/2)={s['refined_residual']:.2e}"
          f"  ratio={s['ratio']:.3f}  {'PASS' if rep.verdict else 'FAIL'}")
