# standard library imports
import unittest
import json

# third party imports
import numpy as np

# local imports
from sentipulse.inference.var.model import VarFit
from sentipulse.inference.var.model import fit_var
from sentipulse.inference.var.model import forecast_var
from sentipulse.inference.var.model import select_var_lag
from sentipulse.inference.var.model import default_p_max
from sentipulse.inference.var.model import gaussian_loglik
from sentipulse.inference.var.model import lagged_regressors

A_TRUE = np.array([[0.5, 0.1], [0.0, 0.3]])
C_TRUE = np.array([1.0, 0.5])


def noiseless_path(n: int) -> np.ndarray:
    y = np.empty((n, 2))
    y[0] = [5.0, -3.0]
    for t in range(1, n):
        y[t] = C_TRUE + A_TRUE @ y[t - 1]
    return y


def noisy_path(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    y = np.zeros((n, 2))
    for t in range(1, n):
        y[t] = C_TRUE + A_TRUE @ y[t - 1] + rng.normal(size=2)
    return y


class TestProblem(unittest.TestCase):
    def test_lagged_regressors(self):
        data = np.arange(10, dtype=float).reshape(5, 2)
        Y, X = lagged_regressors(data, 2)
        np.testing.assert_allclose(Y, data[2:])
        np.testing.assert_allclose(X[0], [1, 2, 3, 0, 1])
        self.assertEqual(X.shape, (3, 5))

    def test_noiseless_recovery(self):
        data = noiseless_path(30)
        fit = fit_var(data, 1, ["price", "sentiment"])
        np.testing.assert_allclose(fit.A[0], A_TRUE, atol=1e-8)
        np.testing.assert_allclose(fit.c, C_TRUE, atol=1e-8)
        self.assertEqual((fit.k, fit.p, fit.n_obs, fit.n_params), (2, 1, 29, 6))
        continuation = noiseless_path(33)[30:]
        np.testing.assert_allclose(forecast_var(fit, 3), continuation, atol=1e-6)

    def test_noisy_fit(self):
        data = noisy_path(2000, seed=0)
        fit = fit_var(data, 1)
        self.assertEqual(fit.labels, ("y0", "y1"))
        np.testing.assert_allclose(fit.A[0], A_TRUE, atol=0.06)
        np.testing.assert_allclose(fit.sigma, np.eye(2), atol=0.1)
        self.assertTrue(np.isfinite(fit.loglik))
        self.assertAlmostEqual(fit.aic, -2 * fit.loglik + 12)
        p, selected = select_var_lag(data[:500], p_max=4, criterion="bic")
        self.assertEqual(p, 1)
        self.assertEqual(selected.n_obs, 499)

    def test_regression_properties(self):
        data = noisy_path(300, seed=4)
        fit = fit_var(data, 2)
        # the residuals are orthogonal to every regressor column
        Y, X = lagged_regressors(data, 2)
        coef = np.vstack([fit.c, fit.A[0].T, fit.A[1].T])
        residuals = Y - X @ coef
        self.assertLess(np.max(np.abs(X.T @ residuals)), 1e-8 * len(Y))
        # swapping the variables swaps the estimates alike
        swapped = fit_var(data[:, ::-1], 2)
        order = np.ix_([1, 0], [1, 0])
        np.testing.assert_allclose(swapped.c, fit.c[::-1], atol=1e-10)
        for i in range(2):
            np.testing.assert_allclose(swapped.A[i], fit.A[i][order], atol=1e-10)
        np.testing.assert_allclose(swapped.sigma, fit.sigma[order], atol=1e-10)
        self.assertAlmostEqual(swapped.loglik, fit.loglik)

    def test_forecast_properties(self):
        data = noisy_path(500, seed=5)
        fit = fit_var(data, 2)
        one_step = fit.c + fit.A[0] @ data[-1] + fit.A[1] @ data[-2]
        np.testing.assert_allclose(forecast_var(fit, 1)[0], one_step, rtol=1e-14)
        # forecasts of a stable system approach its mean (I - A_1 - A_2)^-1 c
        mean = np.linalg.solve(np.eye(2) - fit.A[0] - fit.A[1], fit.c)
        np.testing.assert_allclose(forecast_var(fit, 300)[-1], mean, atol=1e-8)
        # a univariate VAR(1) forecasts mu + phi^h (y_T - mu)
        univariate = fit_var(data[:, 1], 1)
        phi = univariate.A[0][0, 0]
        mu = univariate.c[0] / (1 - phi)
        expected = mu + phi ** np.arange(1, 6) * (data[-1, 1] - mu)
        np.testing.assert_allclose(forecast_var(univariate, 5)[:, 0], expected)
        # zero dynamics forecast zero
        zero = VarFit(
            ("a",), np.zeros(1), np.zeros((1, 1, 1)), np.eye(1), 0.0, 0.0, 0.0, 10,
            np.ones((1, 1)),
        )
        np.testing.assert_allclose(forecast_var(zero, 3), np.zeros((3, 1)))

    def test_lag_bounds(self):
        self.assertEqual(default_p_max(100, 2), 10)
        self.assertEqual(default_p_max(30, 2), 5)
        self.assertEqual(default_p_max(3, 2), 1)
        p, _ = select_var_lag(noisy_path(15, seed=1), p_max=4)
        self.assertLessEqual(p, 2)
        with self.assertRaises(ValueError):
            select_var_lag(noisy_path(50, seed=1), p_max=0)

    def test_gaussian_loglik(self):
        self.assertEqual(gaussian_loglik(np.zeros((2, 2)), 10), np.inf)
        expected = -0.5 * 10 * (2 * np.log(2 * np.pi) + 2)
        self.assertAlmostEqual(gaussian_loglik(np.eye(2), 10), expected)

    def test_errors(self):
        data = noisy_path(40, seed=2)
        with self.assertRaises(ValueError):
            fit_var(data, 0)
        with self.assertRaises(ValueError):
            fit_var(data[:11], 1)
        with self.assertRaises(ValueError):
            fit_var(data, 1, ["a", "a"])
        with self.assertRaises(ValueError):
            fit_var(np.column_stack([data[:, 0], np.ones(40)]), 1)
        with self.assertRaises(ValueError):
            fit_var(np.r_[data, [[np.nan, 0.0]]], 1)

    def test_serialization(self):
        fit = fit_var(noisy_path(60, seed=3), 2, ["a", "b"])
        restored = VarFit.from_dict(json.loads(json.dumps(fit.to_dict())))
        self.assertEqual(restored.labels, fit.labels)
        self.assertEqual(restored.p, 2)
        np.testing.assert_allclose(forecast_var(restored, 4), forecast_var(fit, 4))


if __name__ == "__main__":
    unittest.main()
