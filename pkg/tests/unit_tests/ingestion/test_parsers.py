# standard library imports
import unittest
import io

# third party imports
import pandas as pd

# local imports
from sentipulse.ingestion.parsers import RowError
from sentipulse.ingestion.parsers import parse_tweets
from sentipulse.ingestion.parsers import parse_stock_bars
from sentipulse.ingestion.parsers import write_tweets
from sentipulse.ingestion.parsers import write_bars

TWEETS = (
    "id,start,end,text\n"
    '1,2023-02-15T14:40:00Z,2023-02-15T14:41:00Z,"good, really good"\n'
    '2,2023-02-15T14:50:00+00:00,2023-02-15T14:51:00+00:00,"a ""quoted""\n'
    'line break"\n'
)

BARS = (
    "timestamp,open,high,low,close,adj_close,volume\n"
    "2023-02-15T15:30:00Z,42.5,43.0,42.0,42.8,42.8,1200\n"
    "2023-02-15T14:30:00Z,42.0,42.6,41.9,42.5,42.5,1000\n"
)


class TestProblem(unittest.TestCase):
    def test_parse_tweets(self):
        records = parse_tweets(io.StringIO(TWEETS), "Pfizer")
        self.assertEqual(len(records), 2)
        self.assertEqual(records[0].text, "good, really good")
        self.assertEqual(records[1].text, 'a "quoted"\nline break')
        self.assertEqual(records[0].query, "Pfizer")
        self.assertEqual(records[0].timestamp.hour, 9)
        self.assertEqual(str(records[0].timestamp.tz), "America/New_York")

    def test_parse_tweets_errors(self):
        bad = TWEETS + "3,2023-02-15T14:40:00,2023-02-15T14:41:00Z,zoneless\n"
        with self.assertRaises(RowError) as context:
            parse_tweets(io.StringIO(bad), "Pfizer")
        self.assertEqual(context.exception.line_number, 4)
        records = parse_tweets(io.StringIO(bad), "Pfizer", on_error="skip")
        self.assertEqual(len(records), 2)
        reversed_window = (
            "id,start,end,text\n1,2023-02-15T14:41:00Z,2023-02-15T14:40:00Z,x\n"
        )
        with self.assertRaises(RowError):
            parse_tweets(io.StringIO(reversed_window), "Pfizer")
        with self.assertRaises(ValueError):
            parse_tweets(io.StringIO("id,text\n1,x\n"), "Pfizer")
        with self.assertRaises(ValueError):
            parse_tweets(io.StringIO(TWEETS), "Pfizer", on_error="ignore")
        with self.assertRaises(ValueError):
            parse_tweets(io.StringIO(TWEETS), "Unknown", labels=["Pfizer"])
        self.assertEqual(parse_tweets(io.StringIO(""), "Pfizer"), [])

    def test_parse_stock_bars(self):
        bars = parse_stock_bars(io.StringIO(BARS), "Pfizer")
        # sorted by time
        self.assertEqual([b.open for b in bars], [42.0, 42.5])
        self.assertEqual(bars[0].timestamp.hour, 9)
        self.assertEqual(bars[0].volume, 1000.0)

    def test_parse_stock_bars_errors(self):
        duplicated = BARS + "2023-02-15T14:30:00Z,43.0,43.6,42.9,43.5,43.5,900\n"
        with self.assertRaises(RowError) as context:
            parse_stock_bars(io.StringIO(duplicated), "Pfizer")
        self.assertEqual(context.exception.line_number, 4)
        bars = parse_stock_bars(io.StringIO(duplicated), "Pfizer", on_error="skip")
        # the first occurrence survives
        self.assertEqual([b.open for b in bars], [42.0, 42.5])
        invalid = BARS + "2023-02-16T14:30:00Z,42.0,41.0,41.9,42.5,42.5,1000\n"
        with self.assertRaises(RowError):
            parse_stock_bars(io.StringIO(invalid), "Pfizer")
        not_a_number = BARS + "2023-02-16T14:30:00Z,n/a,41.0,41.9,42.5,42.5,1000\n"
        with self.assertRaises(RowError):
            parse_stock_bars(io.StringIO(not_a_number), "Pfizer")
        self.assertEqual(
            len(parse_stock_bars(io.StringIO(invalid), "Pfizer", on_error="skip")), 2
        )

    def test_write_and_parse(self):
        records = parse_tweets(io.StringIO(TWEETS), "Pfizer")
        buffer = io.StringIO()
        write_tweets(records, buffer)
        parsed = parse_tweets(io.StringIO(buffer.getvalue()), "Pfizer")
        self.assertEqual(parsed, records)
        bars = parse_stock_bars(io.StringIO(BARS), "Pfizer")
        buffer = io.StringIO()
        write_bars(bars, buffer)
        parsed = parse_stock_bars(io.StringIO(buffer.getvalue()), "Pfizer")
        self.assertEqual(parsed, bars)
        self.assertEqual(parsed[0].timestamp, pd.Timestamp("2023-02-15T14:30:00Z"))


if __name__ == "__main__":
    unittest.main()
