# standard library imports
import unittest

# third party imports
import numpy as np
from scipy.stats import f as f_distribution

# local imports
from sentipulse.inference.var.model import fit_var
from sentipulse.inference.var.analysis import granger_causality
from sentipulse.inference.var.analysis import granger_matrix
from sentipulse.inference.var.analysis import impulse_response


def simulate(n: int, seed: int) -> np.ndarray:
    # y1 drives y0, y0 does not drive y1
    A = np.array([[0.4, 0.5], [0.0, 0.3]])
    rng = np.random.default_rng(seed)
    y = np.zeros((n, 2))
    for t in range(1, n):
        y[t] = A @ y[t - 1] + rng.normal(size=2)
    return y


def rss(y: np.ndarray, X: np.ndarray) -> float:
    residuals = y - X @ np.linalg.lstsq(X, y, rcond=None)[0]
    return float(residuals @ residuals)


class TestProblem(unittest.TestCase):
    def test_granger_causality(self):
        data = simulate(400, seed=0)
        labels = ["open", "companyS"]
        result = granger_causality(data, labels, "companyS", "open", 1)
        self.assertTrue(result.rejects())
        self.assertEqual(result.df, (1, 400 - 1 - 3))
        # the F statistic from the two regressions computed directly
        y = data[1:, 0]
        ones = np.ones(399)
        rss_u = rss(y, np.column_stack([ones, data[:-1, 0], data[:-1, 1]]))
        rss_r = rss(y, np.column_stack([ones, data[:-1, 0]]))
        f_stat = (rss_r - rss_u) / (rss_u / 396)
        self.assertAlmostEqual(result.f_stat, f_stat, places=6)
        self.assertAlmostEqual(result.p_value, f_distribution.sf(f_stat, 1, 396))
        self.assertGreaterEqual(result.restricted_rss, result.unrestricted_rss)

    def test_granger_affine_invariance(self):
        data = simulate(300, seed=5)
        labels = ["open", "companyS"]
        result = granger_causality(data, labels, "companyS", "open", 2)
        for column, scale, shift in ((0, 3.0, -7.0), (1, -0.25, 100.0)):
            rescaled = data.copy()
            rescaled[:, column] = scale * rescaled[:, column] + shift
            other = granger_causality(rescaled, labels, "companyS", "open", 2)
            self.assertAlmostEqual(other.f_stat / result.f_stat, 1.0, places=8)
            self.assertAlmostEqual(other.p_value, result.p_value, places=10)

    def test_granger_matrix(self):
        noise = np.random.default_rng(2).normal(size=100)
        data = np.column_stack([simulate(100, seed=1), noise])
        results = granger_matrix(data, ["a", "b", "c"], 2)
        self.assertEqual(len(results), 6)
        self.assertEqual({(r.cause, r.effect) for r in results}, {
            ("b", "a"), ("c", "a"), ("a", "b"), ("c", "b"), ("a", "c"), ("b", "c")
        })
        for result in results:
            self.assertTrue(0.0 <= result.p_value <= 1.0)
            self.assertEqual(result.df, (2, 100 - 2 - 7))

    def test_granger_errors(self):
        data = simulate(30, seed=3)
        with self.assertRaises(ValueError):
            granger_causality(data, ["a", "b"], "a", "a", 1)
        with self.assertRaises(ValueError):
            granger_causality(data, ["a", "b"], "c", "a", 1)
        with self.assertRaises(ValueError):
            granger_causality(data, ["a", "b"], "b", "a", 0)
        with self.assertRaises(ValueError):
            granger_causality(data[:6], ["a", "b"], "b", "a", 2)

    def test_impulse_response(self):
        fit = fit_var(simulate(200, seed=4), 2, ["x", "y"])
        irf = impulse_response(fit, 5)
        self.assertEqual(irf.horizon, 5)
        np.testing.assert_allclose(irf.responses[0], np.eye(2))
        np.testing.assert_allclose(irf.responses[1], fit.A[0])
        np.testing.assert_allclose(
            irf.responses[2], fit.A[0] @ fit.A[0] + fit.A[1]
        )
        np.testing.assert_allclose(irf.response("x", "y"), irf.responses[:, 0, 1])
        self.assertEqual(impulse_response(fit, 0).horizon, 0)
        with self.assertRaises(ValueError):
            impulse_response(fit, -1)


if __name__ == "__main__":
    unittest.main()
