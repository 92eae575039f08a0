"""
古典 Nambu 力学（括弧・積分・保存量・縮約）のテスト
"""

import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from core.services.nambu_service import (
    bracket_expression,
    bracket_fd_convergence,
    bracket_properties_report,
    build_polynomial_system,
    convergence_order,
    harmonic_oscillator_system,
    integrate,
    jacobian_fd,
    nambu_bracket,
    nambu_bracket_exact,
    nambu_rhs,
    observed_order,
    oscillation_period,
    reduction_check,
    rigid_body_system,
    state_symbols,
)
from utils.errors import ArityError, DivergenceError, DomainError

COORDINATES = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False, allow_infinity=False)


class TestBracket:
    """有限差分と厳密な Nambu 括弧"""

    @settings(deadline=None, max_examples=25)
    @given(x=st.tuples(COORDINATES, COORDINATES, COORDINATES))
    def test_coordinate_bracket_is_one(self, x):
        coordinates = [lambda v, i=i: float(v[i]) for i in range(3)]
        assert nambu_bracket(coordinates, x) == pytest.approx(1.0, abs=1e-6)

    def test_fd_matches_exact_for_polynomials(self):
        x1, x2, x3 = state_symbols(3)
        exprs = [x1 ** 2 * x2, x2 + x3 ** 3, x1 * x3]
        funcs = [(lambda f: (lambda v: float(f(*v))))(sp.lambdify([x1, x2, x3], e)) for e in exprs]
        point = (0.4, -0.7, 1.1)
        exact = nambu_bracket_exact(exprs, [x1, x2, x3], point)
        assert nambu_bracket(funcs, point) == pytest.approx(exact, rel=1e-6)

    def test_bracket_expression_is_jacobian_determinant(self):
        x, y, z = state_symbols(3)
        assert sp.simplify(bracket_expression([x, y, z], [x, y, z]) - 1) == 0
        assert sp.simplify(bracket_expression([y, x, z], [x, y, z]) + 1) == 0

    def test_wrong_function_count(self):
        with pytest.raises(ArityError):
            nambu_bracket([lambda v: v[0]], (0.0, 0.0, 0.0))

    def test_jacobian_rejects_non_finite_values(self):
        from utils.errors import MatrixMechanicsError
        with pytest.raises(MatrixMechanicsError):
            jacobian_fd([lambda v: math.inf], (0.0, 1.0))

    def test_second_order_convergence(self):
        x1, x2, x3 = state_symbols(3)
        result = bracket_fd_convergence([x1 ** 3 + x2, x2 ** 3 + x3, x3 ** 3 + x1], (0.3, -0.4, 0.5),
                                        (1e-2, 5e-3, 2.5e-3))
        assert len(result["orders"]) == 2
        for order in result["orders"]:
            assert order == pytest.approx(2.0, abs=0.1)

    def test_bracket_properties(self, rng):
        report = bracket_properties_report(rng)
        assert set(report) == {"skew_symmetry", "linearity", "fundamental_identity", "derivation_rule"}
        for name, defect in report.items():
            assert defect < 1e-9, name


class TestSystems:
    """系の構築と右辺"""

    def test_rigid_body_rhs_is_cross_product(self):
        system = rigid_body_system()
        x = np.array([0.3, -1.2, 0.8])
        grad_h1 = x
        grad_h2 = x / np.array([1.0, 2.0, 3.0])
        assert np.allclose(nambu_rhs(system, x), np.cross(grad_h1, grad_h2))

    def test_two_dimensional_flow_is_hamiltonian(self):
        system = harmonic_oscillator_system()
        assert np.allclose(nambu_rhs(system, (0.2, 0.5)), (0.5, -0.2))

    def test_string_expressions(self):
        system = build_polynomial_system(["x1*x2", "x3**2"], 3, name="custom")
        assert system.name == "custom"
        assert system.invariants(np.array([2.0, 3.0, 4.0])).tolist() == [6.0, 16.0]

    def test_unknown_symbol(self):
        with pytest.raises(DomainError):
            build_polynomial_system(["x1*y", "x2"], 3)

    def test_finite_difference_gradients(self):
        exact = build_polynomial_system(["x1**2*x3", "x2*x3"], 3)
        approx = build_polynomial_system(["x1**2*x3", "x2*x3"], 3, exact_derivatives=False)
        x = (0.5, -0.3, 1.2)
        assert np.allclose(nambu_rhs(approx, x), nambu_rhs(exact, x), atol=1e-8)


class TestIntegration:
    """RK4 積分と保存量"""

    def test_rigid_body_conserves_invariants(self):
        trajectory = integrate(rigid_body_system(), (1.0, 0.5, 0.2), 5.0, 1e-3)
        assert trajectory.max_drift() < 1e-8
        assert len(trajectory.times) == 5001
        assert trajectory.times[-1] == pytest.approx(5.0)

    def test_observed_order_is_four(self):
        order = observed_order(rigid_body_system(), (1.0, 0.5, 0.2), 10.0, 0.05)
        assert order > 3.8

    def test_observed_order_of_stationary_system(self):
        # 終点差がすべて 0 なので次数は定まらない
        system = build_polynomial_system(["1"], 2, name="stationary")
        assert math.isnan(observed_order(system, (0.3, -0.2), 1.0, 0.25))

    @pytest.mark.parametrize("coarse, fine, ratio, expected", [
        (16.0, 1.0, 2.0, 4.0),
        (1e-2, 1e-4, 10.0, 2.0),
        (1e-3, 0.0, 2.0, math.inf),
    ])
    def test_convergence_order(self, coarse, fine, ratio, expected):
        assert convergence_order(coarse, fine, ratio) == pytest.approx(expected)

    @pytest.mark.parametrize("fine", [0.0, 1e-12])
    def test_convergence_order_without_coarse_error(self, fine):
        assert math.isnan(convergence_order(0.0, fine))

    def test_fd_convergence_of_linear_bracket(self):
        x1, x2, x3 = state_symbols(3)
        result = bracket_fd_convergence([x1, x2, x3], (0.3, -0.4, 0.5), (1e-2, 5e-3))
        assert len(result["orders"]) == 1
        assert max(result["errors"]) < 1e-10

    def test_harmonic_period(self):
        trajectory = integrate(harmonic_oscillator_system(), (1.0, 0.0), 15.0, 1e-3)
        assert oscillation_period(trajectory) == pytest.approx(2 * math.pi, abs=1e-4)

    def test_period_needs_two_crossings(self):
        trajectory = integrate(harmonic_oscillator_system(), (1.0, 0.0), 3.0, 1e-2)
        with pytest.raises(DomainError):
            oscillation_period(trajectory)

    def test_frame_columns(self):
        frame = integrate(rigid_body_system(), (1.0, 0.0, 0.0), 0.01, 1e-3).to_frame()
        assert list(frame.columns) == ["t", "x1", "x2", "x3", "H1", "H2"]
        assert len(frame) == 11

    def test_invalid_step_and_dimension(self):
        with pytest.raises(DomainError):
            integrate(rigid_body_system(), (1.0, 0.0, 0.0), 1.0, 0.0)
        with pytest.raises(ArityError):
            integrate(rigid_body_system(), (1.0, 0.0), 1.0, 1e-3)

    def test_divergence_keeps_partial_trajectory(self):
        system = build_polynomial_system(["x1**2*x2"], 2, name="blowup")
        with pytest.raises(DivergenceError) as excinfo:
            integrate(system, (1.0, 1.0), 2.0, 1e-3)
        partial = excinfo.value.partial
        assert 0 < len(partial.times) < 2001
        assert partial.times[-1] < 1.1
        assert np.all(np.isfinite(partial.points))

    def test_reduction_to_hamilton_equations(self):
        result = reduction_check("x1**2/2 + x1**4/4", (0.5, 0.0, 0.0), 2 * math.pi, 5e-3)
        assert result.max_deviation < 1e-6

    def test_reduction_potential_must_depend_on_x1_only(self):
        with pytest.raises(DomainError):
            reduction_check("x1*x2", (0.5, 0.0, 0.0), 1.0, 1e-2)
