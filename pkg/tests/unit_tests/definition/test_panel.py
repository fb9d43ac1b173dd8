# standard library imports
import unittest
import io

# third party imports
import numpy as np
import pandas as pd

# local imports
from sentipulse.definition.panel import SentimentSeries
from sentipulse.definition.panel import Panel
from sentipulse.definition.panel import CorrelationMatrix
from sentipulse.definition.panel import PANEL_COLUMNS
from sentipulse.definition.panel import read_panel
from sentipulse.definition.panel import panel_file_name


def make_frame(n: int = 4, start: str = "2023-02-15 09:30") -> pd.DataFrame:
    index = pd.date_range(start, periods=n, freq="1h", tz="America/New_York")
    data = {"open": 100.0 + np.arange(n)}
    for i, column in enumerate(PANEL_COLUMNS[1:]):
        data[column] = np.linspace(-0.5, 0.5, n) * (i + 1) / 5
    return pd.DataFrame(data, index=index)


class TestProblem(unittest.TestCase):
    def test_sentiment_series(self):
        t = pd.date_range("2023-02-15 08:30", periods=3, freq="1h", tz="UTC")
        series = SentimentSeries("Pfizer", tuple(t), (0.1, -0.2, 0.3), (1, 2, 3))
        self.assertEqual(len(series), 3)
        self.assertEqual(series.value_at(t[1]), -0.2)
        self.assertIsNone(series.value_at(t[0] - pd.Timedelta("1h")))
        self.assertEqual(list(series.to_series()), [0.1, -0.2, 0.3])
        # invariants
        with self.assertRaises(ValueError):
            SentimentSeries("x", tuple(t), (0.1, 0.2), (1, 1))
        with self.assertRaises(ValueError):
            SentimentSeries("x", (t[1], t[0]), (0.1, 0.2), (1, 1))
        with self.assertRaises(ValueError):
            SentimentSeries("x", (t[0],), (1.5,), (1,))
        with self.assertRaises(ValueError):
            SentimentSeries("x", (t[0],), (0.5,), (0,))
        self.assertEqual(len(SentimentSeries("empty")), 0)

    def test_panel(self):
        panel = Panel("Pfizer", make_frame())
        self.assertEqual(len(panel), 4)
        self.assertEqual(list(panel.frame.columns), list(PANEL_COLUMNS))
        self.assertEqual(panel.granularity, "hourly")
        self.assertEqual(panel.matrix(["open", "companyS"]).shape, (4, 2))
        selected = panel.select(panel.column("open") > 101.0)
        self.assertEqual(len(selected), 2)
        self.assertEqual(selected.company, "Pfizer")
        self.assertEqual(repr(panel), "Panel(company='Pfizer', n_rows=4)")
        empty = Panel.empty("Pfizer")
        self.assertEqual(len(empty), 0)
        self.assertEqual(empty.granularity, "unknown")

    def test_panel_invariants(self):
        frame = make_frame()
        with self.assertRaises(ValueError):
            Panel("x", frame.drop(columns=["ceoS"]))
        bad = frame.copy()
        bad.iloc[0, 0] = -1.0
        with self.assertRaises(ValueError):
            Panel("x", bad)
        bad = frame.copy()
        bad.iloc[0, 1] = 1.5
        with self.assertRaises(ValueError):
            Panel("x", bad)
        bad = frame.copy()
        bad.iloc[0, 2] = np.nan
        with self.assertRaises(ValueError):
            Panel("x", bad)
        with self.assertRaises(ValueError):
            Panel("x", frame.iloc[::-1])
        with self.assertRaises(ValueError):
            Panel("x", frame.tz_localize(None))

    def test_csv_round_trip(self):
        panel = Panel("Pfizer", make_frame())
        buffer = io.StringIO()
        panel.to_csv(buffer)
        text = buffer.getvalue()
        self.assertTrue(text.startswith("instant,open,companyS,ceoS,vaccineS"))
        self.assertIn("2023-02-15T09:30:00-05:00", text)
        loaded = read_panel(io.StringIO(text), "Pfizer")
        pd.testing.assert_frame_equal(
            loaded.frame, panel.frame, check_freq=False, check_index_type=False
        )
        empty = io.StringIO()
        Panel.empty("Pfizer").to_csv(empty)
        self.assertEqual(len(read_panel(io.StringIO(empty.getvalue()), "Pfizer")), 0)
        with self.assertRaises(ValueError):
            read_panel(io.StringIO("time,open\n"), "Pfizer")

    def test_panel_file_name(self):
        self.assertEqual(
            panel_file_name("Johnson & Johnson"), "panel_Johnson_Johnson.csv"
        )

    def test_correlation_matrix(self):
        matrix = CorrelationMatrix(("a", "b"), np.array([[1.0, 0.5], [0.5, 1.0]]))
        self.assertEqual(matrix.value("a", "b"), 0.5)
        self.assertEqual(list(matrix.to_frame().columns), ["a", "b"])
        self.assertEqual(matrix.failures, {})


if __name__ == "__main__":
    unittest.main()
