import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from alphapoisson.errors import DomainError
from alphapoisson.maps import boundary_map
from alphapoisson.operator import apply, apply_nested, interior_grid, residual_sup, weight
from alphapoisson.solver import SolverConfig, p_alpha_one, solve


def quadratic(x):
    return float(x @ x)


def quadratic_exact(x, alpha):
    # L |x|^2 = 2n s^-a + 4a |x|^2 s^(-a-1) + a(n-2-a) |x|^2 s^(-a-1),  s = 1 - |x|^2
    n, q = x.size, x @ x
    s = 1 - q
    return 2 * n * s**-alpha + 4 * alpha * q * s ** (-alpha - 1) + alpha * (n - 2 - alpha) * q * s ** (-alpha - 1)


def point(n, r, seed):
    v = np.random.default_rng(seed).standard_normal(n)
    return r * v / np.linalg.norm(v)


def test_weight():
    assert weight(np.array([0.6, 0.0]), 2.0) == pytest.approx(0.64**2)
    assert weight(np.zeros(3), -1.5) == 1.0
    with pytest.raises(DomainError):
        weight(np.array([1.0, 0.0]), -1.0)


def test_reduces_to_laplacian():
    u = lambda x: x[0] ** 2 + 2 * x[1] ** 2 - x[0] * x[1]  # noqa: E731
    assert apply(u, np.array([0.1, 0.2]), 0.0) == pytest.approx(6.0, abs=1e-8)
    harmonic = lambda x: x[0] ** 3 - 3 * x[0] * x[1] ** 2  # noqa: E731
    assert apply(harmonic, np.array([0.3, -0.4]), 0.0) == pytest.approx(0.0, abs=1e-8)


@given(st.integers(0, 10**6), st.floats(0.0, 4.0))
def test_expanded_form_on_quadratic(seed, alpha):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 5))
    x = point(n, rng.uniform(0, 0.8), seed)
    assert apply(quadratic, x, alpha) == pytest.approx(quadratic_exact(x, alpha), rel=1e-6)


@given(st.integers(0, 10**6), st.floats(0.0, 3.0))
def test_expanded_and_nested_forms_agree(seed, alpha):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    c = rng.standard_normal(n)
    u = lambda x: float(np.exp(c @ x) * np.cos(x[0]))  # noqa: E731
    x = point(n, rng.uniform(0, 0.7), seed)
    a, b = apply(u, x, alpha, 1e-3), apply_nested(u, x, alpha, 1e-3)
    assert a == pytest.approx(b, rel=1e-4, abs=1e-4)


@pytest.mark.parametrize("n, alpha", [(2, 0.5), (2, 1.0), (3, 2.0), (3, 1.0), (4, 1.5)])
def test_closed_form_solution_is_annihilated_at_second_order(n, alpha):
    u = lambda x: p_alpha_one(x, alpha)  # noqa: E731
    x = point(n, 0.6, n)
    r1 = abs(apply(u, x, alpha, 2e-3))
    r2 = abs(apply(u, x, alpha, 1e-3))
    assert r2 < 1e-5
    # (n, alpha) = (3, 2) gives a quadratic polynomial: differences are exact up to rounding
    if r1 > 1e-8:
        assert r2 / r1 == pytest.approx(0.25, abs=0.05)


@pytest.mark.parametrize("n, alpha, name", [(2, 1.0, "cos"), (2, 2.0, "identity"),
                                            (3, 1.5, "cos"), (3, 0.5, "rotated")])
def test_solver_output_is_annihilated(n, alpha, name):
    phi = boundary_map(name, n)
    res = residual_sup(phi, SolverConfig(n, alpha), 0.6, 6, 1e-3)
    assert res < 1e-4


def test_fixed_rule_output_is_annihilated_for_rough_data():
    # a fixed rule yields a finite sum of kernels, each annihilated, so the
    # residual is pure finite-difference error even for a Hoelder datum
    phi = boundary_map("holder", 2, beta=0.3)
    cfg = SolverConfig(2, 0.7, node_growth="fixed", base_nodes=2048, boundary_cap_epsilon=0.3)
    assert residual_sup(phi, cfg, 0.6, 6, 1e-3) < 1e-4


def test_solver_residual_converges_with_step():
    phi = boundary_map("one", 2)
    cfg = SolverConfig(2, 1.0)
    r1 = residual_sup(phi, cfg, 0.8, 10, 1e-3)
    r2 = residual_sup(phi, cfg.with_(per_panel=32, azimuth=64), 0.8, 10, 5e-4)
    assert r2 / r1 <= 0.5


def test_stencil_guards():
    with pytest.raises(DomainError):
        apply(quadratic, np.array([0.5, 0.0]), 1.0, h=1e-1)
    with pytest.raises(DomainError):
        apply(quadratic, np.array([0.5, 0.0]), 1.0, h=1e-6)
    with pytest.raises(DomainError):
        apply_nested(quadratic, np.array([0.999, 0.0]), 1.0, h=1e-3)
    with pytest.raises(DomainError):
        residual_sup(boundary_map("one", 2), SolverConfig(2, 1.0), 0.95, 5)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_interior_grid(n):
    g = interior_grid(n, 0.8, 40)
    assert g.shape == (40, n)
    assert np.all(np.linalg.norm(g, axis=1) <= 0.8 + 1e-15)
    np.testing.assert_array_equal(g, interior_grid(n, 0.8, 40))
    assert len(np.unique(g.round(12), axis=0)) == 40
