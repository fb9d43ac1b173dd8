# standard library imports
import unittest

# third party imports
import numpy as np
from scipy.optimize import OptimizeResult

# local imports
from sentipulse.inference.forecaster import ForecastResult
from sentipulse.inference.forecaster import aic, bic
from sentipulse.inference.forecaster import check_criterion
from sentipulse.inference.forecaster import check_horizon
from sentipulse.inference.forecaster import log_optimizer_results


class TestProblem(unittest.TestCase):
    def test_forecast_result(self):
        result = ForecastResult([1.0, 2.0, 3.0])
        self.assertEqual(result.horizon, 3)
        self.assertIsInstance(result.point, np.ndarray)
        self.assertIsNone(result.origin)
        with self.assertRaises(ValueError):
            ForecastResult([1.0, np.nan])

    def test_information_criteria(self):
        self.assertEqual(aic(-10.0, 3), 26.0)
        self.assertAlmostEqual(bic(-10.0, 3, 100), 20.0 + 3 * np.log(100))
        self.assertEqual(check_criterion("AIC"), "aic")
        self.assertEqual(check_criterion("bic"), "bic")
        with self.assertRaises(ValueError):
            check_criterion("hqic")

    def test_check_horizon(self):
        check_horizon(1)
        for horizon in (0, -1, 1.5):
            with self.assertRaises(ValueError):
                check_horizon(horizon)

    def test_log_optimizer_results(self):
        results = OptimizeResult(
            x=np.zeros(2), message="Optimization terminated.", nit=5, nfev=9, fun=0.1
        )
        for status in (0, 2):
            results.status = status
            log_optimizer_results(results, "CSS estimation of ARIMA(1, 0, 1)")
        log_optimizer_results(results, "quiet run", quiet=True)


if __name__ == "__main__":
    unittest.main()
