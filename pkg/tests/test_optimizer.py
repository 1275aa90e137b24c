import numpy as np
import pytest

from wsvqe.errors import DomainError, NonFiniteObjectiveError
from wsvqe.optimizer import OptimizerConfig, minimize


def test_quadratic():
    res = minimize(lambda x: (x[0] - 1) ** 2 + (x[1] + 2) ** 2, [0.0, 0.0], OptimizerConfig(0.5, max_evals=200))
    np.testing.assert_allclose(res.best_params, [1, -2], atol=1e-3)


def test_constant():
    x0 = np.array([0.3, -0.2, 1.0])
    res = minimize(lambda x: 4.2, x0, OptimizerConfig(0.5, max_evals=50))
    assert res.best_value == 4.2
    assert np.max(np.abs(res.best_params - x0)) <= 0.5 + 1e-12


def test_sphere_18d():
    rng = np.random.default_rng(0)
    x0 = rng.uniform(-np.pi, np.pi, 18)
    res = minimize(lambda x: float(x @ x), x0, OptimizerConfig(3 * np.pi / 8, max_evals=1000))
    assert res.best_value <= 1e-2


def test_initial_simplex_uses_rhobeg():
    x0 = np.array([0.1, 0.2, 0.3])
    res = minimize(lambda x: float(np.sum(np.sin(x))), x0, OptimizerConfig(0.7, max_evals=10))
    pts = [p for p, _ in res.trace]
    np.testing.assert_array_equal(pts[0], x0)
    for k in range(3):
        np.testing.assert_allclose(pts[k + 1], x0 + 0.7 * np.eye(3)[k], atol=1e-15)


@pytest.mark.parametrize("budget", [1, 2, 3, 25])
def test_budget_is_a_hard_cap(budget):
    res = minimize(lambda x: float(np.sum(np.cos(3 * x))), np.zeros(6), OptimizerConfig(0.4, max_evals=budget))
    assert res.evaluations == len(res.trace) <= budget
    if budget <= 7:
        assert res.evaluations == budget


def test_best_is_minimum_of_trace():
    rng = np.random.default_rng(1)
    res = minimize(lambda x: float(x @ x + rng.normal(0, 0.1)), np.ones(4), OptimizerConfig(0.5, max_evals=60))
    assert res.best_value == min(v for _, v in res.trace)


def test_non_finite_aborts():
    def f(x):
        return float("nan") if x[0] > 0.5 else float(x @ x)

    with pytest.raises(NonFiniteObjectiveError) as err:
        minimize(f, np.zeros(2), OptimizerConfig(1.0, max_evals=20))
    assert err.value.params[0] > 0.5


def test_config_validation():
    with pytest.raises(DomainError):
        OptimizerConfig(0.1, rhoend=1.0)
    with pytest.raises(DomainError):
        OptimizerConfig(0.1, max_evals=-1)


def test_zero_budget_evaluates_x0_only():
    res = minimize(lambda x: float(x @ x), np.ones(3), OptimizerConfig(0.5, max_evals=0))
    assert res.evaluations == 1 and res.best_value == 3.0
