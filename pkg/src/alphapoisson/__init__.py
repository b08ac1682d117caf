"""Weighted Poisson integrals on the unit ball and boundary-behaviour experiments.

The solution of the Dirichlet problem for the operator
``div((1 - |x|^2)^(-alpha) grad u)`` on the unit ball ``B^n`` is the
integral of the boundary datum against the kernel

    K(x, zeta) = C (1 - |x|^2)^(1 + alpha) / |x - zeta|^(n + alpha).

This package evaluates that integral by quadrature, checks it against the
closed-form hypergeometric expression for constant data, and measures the
boundary quantities (difference quotients, Lipschitz-type seminorms,
gradient growth) that govern its regularity.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AccuracyError,
    AlphaPoissonError,
    ConfigError,
    DivergenceError,
    DomainError,
    NonConvergence,
    PoleError,
)
from .special import (  # noqa: E402
    HypergeometricParams,
    c_alpha,
    gamma,
    gauss_sum,
    hyp2f1,
    log_gamma,
    pochhammer,
)
from .quadrature import (  # noqa: E402
    QuadratureRule,
    cap_measure,
    circle_rule,
    graded_rule,
    integrate,
    monte_carlo_rule,
    product_rule,
)
from .solver import (  # noqa: E402
    BoundaryFunction,
    Solution,
    SolverConfig,
    boundary_slope,
    difference_quotient,
    gradient,
    kernel,
    kernel_gradient,
    p_alpha_one,
    p_alpha_one_radial,
    solve,
)
from .maps import boundary_map  # noqa: E402
from . import operator  # noqa: E402
from .majorant import (  # noqa: E402
    Majorant,
    boundary_seminorm,
    fast_constant,
    interior_seminorm,
    log_majorant,
    power,
    slow_constant,
)
from .experiments import ExperimentReport, kalaj_constant  # noqa: E402
