# standard library imports
import unittest
import datetime

# third party imports
import numpy as np
import pandas as pd

# local imports
from sentipulse.config import ArimaSettings, VarSettings
from sentipulse.definition.panel import Panel
from sentipulse.definition.split import SplitSpec
from sentipulse.evaluation.backtest import covariate_set
from sentipulse.evaluation.backtest import split_panel
from sentipulse.evaluation.backtest import mape
from sentipulse.evaluation.backtest import run_evaluation

SPLIT = SplitSpec(
    train_start=datetime.date(2023, 2, 13),
    train_end=datetime.date(2023, 2, 22),
    test_start=datetime.date(2023, 2, 23),
    test_end=datetime.date(2023, 2, 24),
    excluded_dates=[datetime.date(2023, 2, 20)],
)


def hourly_panel(company: str = "Pfizer", seed: int = 0) -> Panel:
    """Seven hourly rows on each weekday from 2023-02-13 to 2023-02-24."""
    days = pd.bdate_range("2023-02-13", "2023-02-24")
    instants = [
        pd.Timestamp(f"{day.date()} {hour}:30", tz="America/New_York")
        for day in days
        for hour in range(9, 16)
    ]
    n = len(instants)
    rng = np.random.default_rng(seed)
    company_sentiment = np.tanh(rng.normal(size=n))
    noise = 0.2 * rng.normal(size=n)
    open_ = 40.0 + np.cumsum(noise) + 0.5 * np.r_[0.0, company_sentiment[:-1]]
    frame = pd.DataFrame(
        {
            "open": open_,
            "companyS": company_sentiment,
            "ceoS": np.tanh(rng.normal(size=n)),
            "vaccineS": np.tanh(rng.normal(size=n)),
            "covidS": np.zeros(n),
            "competitorsS": np.tanh(rng.normal(size=n)),
        },
        index=pd.DatetimeIndex(instants),
    )
    return Panel(company, frame)


class TestProblem(unittest.TestCase):
    def test_mape(self):
        self.assertAlmostEqual(mape([100, 200], [110, 180]), 10.0)
        self.assertAlmostEqual(mape([50], [0]), 100.0)
        self.assertEqual(mape([3.0, 4.0], [3.0, 4.0]), 0.0)
        with self.assertRaises(ValueError):
            mape([0.0, 1.0], [1.0, 1.0])
        with self.assertRaises(ValueError):
            mape([1.0], [1.0, 2.0])
        with self.assertRaises(ValueError):
            mape([], [])

    def test_covariate_set(self):
        self.assertEqual(covariate_set("Company"), ("Companies", ("companyS",)))
        self.assertEqual(covariate_set("history"), ("Hist. record", ()))
        label, columns = covariate_set("all")
        self.assertEqual(label, "All")
        self.assertEqual(len(columns), 5)
        with self.assertRaises(ValueError):
            covariate_set("weather")

    def test_split_panel(self):
        panel = hourly_panel()
        train, test = split_panel(panel, SPLIT)
        self.assertEqual((len(train), len(test)), (49, 14))
        dates = {t.date() for t in train.instants}
        self.assertNotIn(datetime.date(2023, 2, 20), dates)
        self.assertLess(train.instants[-1], test.instants[0])
        late = SplitSpec(
            train_start=datetime.date(2023, 2, 13),
            train_end=datetime.date(2023, 2, 24),
            test_start=datetime.date(2023, 3, 1),
            test_end=datetime.date(2023, 3, 2),
        )
        with self.assertRaises(ValueError):
            split_panel(panel, late)
        with self.assertRaises(ValueError):
            split_panel(Panel.empty("Pfizer"), SPLIT)

    def test_arima_evaluation(self):
        report = run_evaluation(
            {"Pfizer": hourly_panel()},
            "arima",
            ["history", "company", "covid"],
            SPLIT,
            arima=ArimaSettings(p_max=1, d_max=1, q_max=0),
            companies=["Pfizer", "Merck"],
        )
        self.assertEqual(report.family, "ARIMA")
        self.assertEqual(report.columns, ("Hist. record", "Companies", "COVID"))
        for column in ("Hist. record", "Companies"):
            value = report.value("Pfizer", column)
            self.assertTrue(np.isfinite(value) and value >= 0.0)
        # a constant covariate cannot be estimated next to the intercept
        self.assertIsNone(report.value("Pfizer", "COVID"))
        self.assertIsNone(report.value("Merck", "Companies"))
        self.assertEqual(report.n_failed, 4)
        self.assertIn("no panel", report.failures[("Merck", "COVID")])
        forecast = report.forecasts[("Pfizer", "Hist. record")]
        self.assertEqual(list(forecast.columns), ["instant", "actual", "predicted"])
        self.assertEqual(len(forecast), 14)
        sizes = {"Pfizer": {"train": 49, "test": 14}}
        self.assertEqual(report.metadata["sizes"], sizes)
        self.assertEqual(report.metadata["granularity"], {"Pfizer": "hourly"})
        self.assertEqual(report.metadata["horizon"], "fixed-origin multi-step")
        self.assertIn("Pfizer | Companies", report.metadata["selected_orders"])

    def test_rolling_arima(self):
        report = run_evaluation(
            {"Pfizer": hourly_panel()},
            "ARIMA",
            ["history"],
            SPLIT,
            arima=ArimaSettings(p_max=0, d_max=1, q_max=0, rolling=True),
        )
        self.assertEqual(report.metadata["horizon"], "rolling one-step refits")
        forecast = report.forecasts[("Pfizer", "Hist. record")]
        self.assertEqual(len(forecast), 14)
        self.assertEqual(report.n_failed, 0)

    def test_var_evaluation(self):
        panels = {"Pfizer": hourly_panel(), "Merck": hourly_panel("Merck", seed=1)}
        for difference in (False, True):
            report = run_evaluation(
                panels,
                "VAR",
                ["company", "all", "covid"],
                SPLIT,
                var=VarSettings(p_max=2, difference=difference),
            )
            self.assertEqual(report.companies, ("Pfizer", "Merck"))
            self.assertTrue(np.isfinite(report.value("Merck", "Companies")))
            self.assertIsNone(report.value("Pfizer", "All"))
            self.assertIsNone(report.value("Pfizer", "COVID"))
            self.assertEqual(report.n_failed, 4)
            order = report.metadata["selected_orders"]["Merck | Companies"]
            self.assertIn(order, ("VAR(1)", "VAR(2)"))

    def test_invalid_arguments(self):
        with self.assertRaises(ValueError):
            run_evaluation({}, "LSTM", ["history"], SPLIT)
        with self.assertRaises(ValueError):
            run_evaluation({}, "VAR", [], SPLIT)


if __name__ == "__main__":
    unittest.main()
