import math

import numpy as np
import pytest

from naqlab.numerics import (
    IntegrationBlowUp,
    InvalidBracketError,
    OdeState,
    QuadratureBudgetError,
    StepControls,
    bisect,
    centered_derivative,
    quad_adaptive,
    rk_integrate,
)


class TestQuadAdaptive:
    def test_constant_integrand(self):
        res = quad_adaptive(lambda x: 1.0, 0.0, 1.0, 1e-10)
        assert res.value == pytest.approx(1.0, abs=1e-12)
        assert res.evaluations >= 1
        assert res.error_estimate >= 0

    def test_sech_squared(self):
        # antiderivative tanh u
        res = quad_adaptive(lambda u: 1.0 / math.cosh(u) ** 2, 0.0, 50.0, 1e-10)
        assert res.value == pytest.approx(math.tanh(50.0), abs=1e-10)

    def test_tanh_squared(self):
        # antiderivative u - tanh u (the self-energy divergence oracle)
        for cap in (1.0, 5.0, 20.0):
            res = quad_adaptive(lambda u: math.tanh(u) ** 2, 0.0, cap, 1e-12)
            assert res.value == pytest.approx(cap - math.tanh(cap), abs=1e-11)

    def test_polynomial_exactness(self):
        # Gauss-Kronrod 15 integrates low-degree polynomials to round-off.
        res = quad_adaptive(lambda x: 7 * x**6 - 3 * x**2 + 2, 0.0, 2.0, 1e-12)
        exact = 2.0**7 - 2.0**3 + 4.0
        assert res.value == pytest.approx(exact, rel=1e-14)
        assert res.evaluations == 15

    def test_semi_infinite_upper_limit(self):
        res = quad_adaptive(lambda r: 1.0 / r**2, 1.0, math.inf, 1e-10)
        assert res.value == pytest.approx(1.0, abs=1e-10)

    def test_semi_infinite_requires_positive_lower(self):
        with pytest.raises(ValueError):
            quad_adaptive(lambda r: 1.0, 0.0, math.inf, 1e-8)

    def test_budget_exceeded_carries_partial(self):
        # A needle the refinement cannot pin down inside the budget.
        needle = lambda x: 1.0 / (1e-12 + (x - 0.123456789) ** 2)
        with pytest.raises(QuadratureBudgetError) as err:
            quad_adaptive(needle, 0.0, 1.0, 1e-14, max_evaluations=300)
        partial = err.value.partial
        assert partial.evaluations <= 300
        assert math.isfinite(partial.value)


class TestRkIntegrate:
    def test_harmonic_oscillator_period(self):
        rhs = lambda r, y: np.array([y[1], -y[0]])
        sol = rk_integrate(rhs, OdeState(1.0, (0.0, 1.0)), 1.0 + 2 * math.pi)
        assert np.allclose(sol.y[-1], [0.0, 1.0], atol=1e-8)

    def test_zero_rhs_constant_trajectory(self):
        rhs = lambda r, y: np.zeros_like(y)
        sol = rk_integrate(rhs, OdeState(0.5, (3.0, -2.0)), 10.0)
        assert np.allclose(sol.y, [3.0, -2.0])

    def test_exponential_growth(self):
        sol = rk_integrate(lambda r, y: y, OdeState(1.0, (1.0,)), 2.0)
        assert sol.y[-1, 0] == pytest.approx(math.e, abs=1e-8)

    def test_fixed_step_rk4_order(self):
        # classic RK4: quartering the global error when halving the step
        errs = []
        for h in (0.01, 0.005):
            sol = rk_integrate(
                lambda r, y: y, OdeState(1.0, (1.0,)), 2.0, StepControls(step=h)
            )
            errs.append(abs(sol.y[-1, 0] - math.e))
        assert errs[0] / errs[1] > 10  # 4th order: expect ~16

    def test_blow_up_reports_last_state(self):
        # y' = y^2 from y(1) = 1 blows up at r = 2
        rhs = lambda r, y: y**2
        with pytest.raises(IntegrationBlowUp) as err:
            rk_integrate(rhs, OdeState(1.0, (1.0,)), 3.0)
        last = err.value.last_state
        assert last.r < 2.0001
        assert all(math.isfinite(v) for v in last.y)

    def test_positive_radius_enforced(self):
        with pytest.raises(ValueError):
            OdeState(0.0, (1.0,))


class TestBisect:
    def test_threshold_predicate(self):
        root = bisect(lambda x: "low" if x < 2 else "high", (0.0, 4.0), 1e-12)
        assert root == pytest.approx(2.0, abs=1e-12)

    def test_sqrt_two(self):
        pred = lambda x: x * x - 2 < 0
        root = bisect(pred, (1.0, 2.0), 1e-12)
        assert root == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_invalid_bracket(self):
        with pytest.raises(InvalidBracketError):
            bisect(lambda x: True, (0.0, 1.0), 1e-6)

    def test_iteration_count_is_logarithmic(self):
        calls = {"n": 0}

        def pred(x):
            calls["n"] += 1
            return x < math.pi

        bisect(pred, (0.0, 8.0), 1e-6)
        # 2 bracket-end calls plus one call per halving
        expected = math.ceil(math.log2(8.0 / 1e-6))
        assert calls["n"] == expected + 2


class TestCenteredDerivative:
    def test_quadratic_is_exact(self):
        x = np.array([0.0, 0.3, 0.55, 1.0, 1.2])
        f = 2 * x**2 - x + 1
        assert np.allclose(centered_derivative(x, f), 4 * x - 1, atol=1e-12)

    def test_second_order_convergence(self):
        errs = []
        for n in (51, 101):
            x = np.linspace(0.2, 1.2, n)
            d = centered_derivative(x, np.sin(x))
            errs.append(np.abs(d[1:-1] - np.cos(x[1:-1])).max())
        assert 3.5 < errs[0] / errs[1] < 4.5

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            centered_derivative([0.0, 2.0, 1.0], [1.0, 2.0, 3.0])
