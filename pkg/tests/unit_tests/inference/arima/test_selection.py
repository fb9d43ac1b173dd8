# standard library imports
import unittest

# third party imports
import numpy as np

# local imports
from sentipulse.inference.arima.model import ArimaFitError, ArimaOrder
from sentipulse.inference.arima.selection import auto_select


class TestProblem(unittest.TestCase):
    def test_selects_ar1(self):
        rng = np.random.default_rng(11)
        y = np.zeros(300)
        for t in range(1, 300):
            y[t] = 0.8 * y[t - 1] + rng.normal()
        best = auto_select(y, p_max=1, d_max=0, q_max=0)
        self.assertEqual(best.order, ArimaOrder(1, 0, 0))
        best_bic = auto_select(y, p_max=1, d_max=0, q_max=0, criterion="BIC")
        self.assertEqual(best_bic.order, ArimaOrder(1, 0, 0))

    def test_selects_differencing(self):
        rng = np.random.default_rng(12)
        y = 100 + np.cumsum(rng.normal(size=200))
        best = auto_select(y, p_max=0, d_max=1, q_max=0)
        self.assertEqual(best.order, ArimaOrder(0, 1, 0))
        # both candidates are scored on the last 199 observations
        self.assertEqual(best.n_obs, 199)

    def test_errors(self):
        y = np.arange(20, dtype=float)
        with self.assertRaises(ValueError):
            auto_select(y, criterion="hqic")
        with self.assertRaises(ValueError):
            auto_select(y, p_max=-1)
        with self.assertRaises(ArimaFitError) as context:
            auto_select(y[:5], p_max=1, d_max=1, q_max=1)
        self.assertIsNone(context.exception.best)


if __name__ == "__main__":
    unittest.main()
