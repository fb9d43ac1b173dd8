"""
                           Estimation on simulated processes
----------------------------------------------------------------------------------------
Series with known coefficients are simulated and the estimators are checked to recover
them over many seeds: ARMA coefficients, linear covariate effects with ARMA errors, the
orders chosen by the grid search, VAR coefficient matrices and lag orders and the size
and power of the Granger causality test.
"""

# standard library imports
import unittest
from collections import Counter

# third party imports
import numpy as np

# local imports
from sentipulse.inference.arima.model import fit_arima
from sentipulse.inference.arima.selection import auto_select
from sentipulse.inference.var.model import fit_var, select_var_lag
from sentipulse.inference.var.analysis import granger_causality, impulse_response
from tests.integration_tests.subroutines import simulate_arma, simulate_var


class TestProblem(unittest.TestCase):
    def test_ar1(self):
        estimates = []
        for seed in range(100):
            y = 20.0 + simulate_arma([0.8], [], 2000, seed)
            fit = fit_arima(y, (1, 0, 0), quiet=True)
            estimates.append(fit.ar[0])
            self.assertAlmostEqual(fit.intercept, 20.0, delta=0.5)
        self.assertAlmostEqual(np.median(estimates), 0.8, delta=0.01)

    def test_arma11(self):
        y = simulate_arma([0.5], [0.3], 1500, seed=10)
        fit = fit_arima(y, (1, 0, 1))
        self.assertAlmostEqual(fit.ar[0], 0.5, delta=0.1)
        self.assertAlmostEqual(fit.ma[0], 0.3, delta=0.1)
        self.assertAlmostEqual(fit.sigma2, 1.0, delta=0.1)

    def test_covariate_effect(self):
        rng = np.random.default_rng(20)
        n = 600
        x = np.column_stack([rng.normal(size=n), rng.uniform(-1, 1, size=n)])
        y = 1.0 + x @ [2.0, -0.5] + simulate_arma([0.5], [], n, seed=21)
        fit = fit_arima(y, (1, 0, 0), x)
        np.testing.assert_allclose(fit.beta, [2.0, -0.5], atol=0.15)
        self.assertAlmostEqual(fit.ar[0], 0.5, delta=0.1)
        # the median effect over many seeds is close to the true one
        effects = []
        for seed in range(100):
            x = np.random.default_rng(seed).normal(size=(500, 1))
            y = 1.0 + 2.0 * x[:, 0] + simulate_arma([0.5], [], 500, seed + 1000)
            effects.append(fit_arima(y, (1, 0, 0), x, quiet=True).beta[0])
        self.assertAlmostEqual(np.median(effects), 2.0, delta=0.05)

    def test_order_selection(self):
        # BIC is consistent and nearly always recovers the true order at n = 2000
        orders = Counter()
        for seed in range(100):
            y = simulate_arma([0.8], [], 2000, seed)
            best = auto_select(y, p_max=1, d_max=1, q_max=3, criterion="bic")
            orders[best.order.as_tuple()] += 1
        self.assertGreaterEqual(orders[(1, 0, 0)], 70)
        self.assertFalse([order for order in orders if order[2] > 2])
        orders = Counter()
        for seed in range(100):
            y = simulate_arma([], [], 2000, seed + 500)
            best = auto_select(y, p_max=1, d_max=0, q_max=2, criterion="bic")
            orders[best.order.as_tuple()] += 1
        self.assertGreaterEqual(orders[(0, 0, 0)], 80)
        # AIC overfits by about one order in three, but the true order stays modal
        orders = Counter()
        for seed in range(50):
            y = simulate_arma([0.8], [], 2000, seed + 1000)
            best = auto_select(y, p_max=2, d_max=0, q_max=3, criterion="aic")
            orders[best.order.as_tuple()] += 1
        self.assertEqual(orders.most_common(1)[0][0], (1, 0, 0))
        self.assertGreaterEqual(orders[(1, 0, 0)], 25)
        self.assertLessEqual(sum(v for k, v in orders.items() if k[2] > 2), 8)

    def test_differencing_order(self):
        y = 100.0 + np.cumsum(simulate_arma([], [0.5], 400, seed=30))
        best = auto_select(y, p_max=1, d_max=1, q_max=1)
        self.assertEqual(best.order.d, 1)

    def test_var_recovery(self):
        c = np.array([1.0, 0.5])
        A = np.array([[0.5, 0.1], [0.0, 0.3]])
        for seed in range(20):
            fit = fit_var(simulate_var(c, A, 2000, seed=40 + seed), 1)
            self.assertLessEqual(np.max(np.abs(fit.A[0] - A)), 0.1)
        irf = impulse_response(fit, 3)
        np.testing.assert_allclose(
            irf.responses[3], np.linalg.matrix_power(fit.A[0], 3), atol=1e-12
        )

    def test_var_lag_selection(self):
        A = np.array([[[0.5, 0.1], [0.0, 0.3]], [[-0.3, 0.0], [0.0, 0.2]]])
        lags = Counter()
        for seed in range(50):
            data = simulate_var(np.zeros(2), A, 500, seed)
            lags[select_var_lag(data, p_max=6)[0]] += 1
        self.assertEqual(lags.most_common(1)[0][0], 2)
        self.assertEqual(lags[1], 0)

    def test_univariate_var(self):
        # a VAR of one variable is an AR model; least squares and exact maximum
        # likelihood agree up to terms of order 1/n
        y = 20.0 + simulate_arma([0.6], [], 10000, seed=60)
        var_fit = fit_var(y, 1)
        arima_fit = fit_arima(y, (1, 0, 0))
        self.assertAlmostEqual(var_fit.A[0][0, 0], arima_fit.ar[0], delta=1e-3)
        self.assertAlmostEqual(var_fit.sigma[0, 0], arima_fit.sigma2, delta=1e-3)
        mean = var_fit.c[0] / (1.0 - var_fit.A[0][0, 0])
        self.assertAlmostEqual(mean, arima_fit.intercept, delta=1e-2)

    def test_granger_size_and_power(self):
        labels = ["open", "companyS"]
        # companyS has no effect on open: rejections at the 5% level happen by chance
        independent = np.array([[0.3, 0.0], [0.0, 0.5]])
        n_size = 0
        for seed in range(500):
            data = simulate_var(np.zeros(2), independent, 1000, seed)
            n_size += granger_causality(data, labels, "companyS", "open", 1).rejects()
        self.assertLessEqual(abs(n_size / 500 - 0.05), 0.03)
        # open_t = 0.9 companyS_(t-1) + e_t
        causal = np.array([[0.0, 0.9], [0.0, 0.0]])
        n_power = 0
        for seed in range(100):
            data = simulate_var(np.zeros(2), causal, 1000, seed + 1000)
            n_power += granger_causality(data, labels, "companyS", "open", 1).rejects()
        self.assertGreaterEqual(n_power, 90)


if __name__ == "__main__":
    unittest.main()
