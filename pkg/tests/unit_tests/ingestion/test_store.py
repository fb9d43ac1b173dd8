# standard library imports
import unittest
import datetime
import tempfile
import os

# local imports
from sentipulse.definition.records import TradingCalendar
from sentipulse.ingestion.store import tweet_file_name
from sentipulse.ingestion.store import bar_file_name
from sentipulse.ingestion.store import raw_file_name
from sentipulse.ingestion.store import ingest_directories
from sentipulse.ingestion.store import read_store_tweets
from sentipulse.ingestion.store import read_store_bars

RAW_TWEETS = (
    "id,start,end,text\n"
    "1,2023-02-17T14:40:00Z,2023-02-17T14:41:00Z,good news\n"
    "2,2023-02-18T14:40:00Z,2023-02-18T14:41:00Z,weekend tweet\n"
    "3,2023-02-17T13:00:00Z,2023-02-17T13:01:00Z,too early\n"
)

RAW_BARS = (
    "timestamp,open,high,low,close,adj_close,volume\n"
    "2023-02-17T14:30:00Z,42.0,42.6,41.9,42.5,42.5,1000\n"
    "2023-02-17T21:30:00Z,42.5,43.0,42.0,42.8,42.8,1200\n"
)


class TestProblem(unittest.TestCase):
    def test_file_names(self):
        self.assertEqual(tweet_file_name("Albert Bourla"), "tweets_Albert_Bourla.csv")
        self.assertEqual(bar_file_name("Johnson & Johnson"), "bars_Johnson_Johnson.csv")
        self.assertEqual(raw_file_name("COVID"), "COVID.csv")

    def test_ingest_and_read(self):
        tweet_cal = TradingCalendar(
            session_start=datetime.time(8, 30), session_end=datetime.time(15, 30)
        )
        price_cal = TradingCalendar()
        with tempfile.TemporaryDirectory() as tmp_dir:
            tweets_dir = os.path.join(tmp_dir, "tweets")
            stocks_dir = os.path.join(tmp_dir, "stocks")
            store_dir = os.path.join(tmp_dir, "store")
            os.makedirs(tweets_dir)
            os.makedirs(stocks_dir)
            with open(os.path.join(tweets_dir, raw_file_name("Pfizer")), "w") as f:
                f.write(RAW_TWEETS)
            with open(os.path.join(stocks_dir, raw_file_name("Pfizer")), "w") as f:
                f.write(RAW_BARS)
            counts = ingest_directories(
                tweets_dir,
                stocks_dir,
                labels=["Pfizer", "Albert Bourla"],
                companies=["Pfizer"],
                tweet_calendar=tweet_cal,
                price_calendar=price_cal,
                store_dir=store_dir,
            )
            # the weekend tweet, the early tweet and the evening bar are dropped
            self.assertEqual(counts, {"tweets:Pfizer": 1, "bars:Pfizer": 1})
            tweets = read_store_tweets(store_dir, ["Pfizer", "Albert Bourla"])
            self.assertEqual([t.text for t in tweets["Pfizer"]], ["good news"])
            self.assertEqual(tweets["Albert Bourla"], [])
            bars = read_store_bars(store_dir, ["Pfizer", "Moderna"])
            self.assertEqual(len(bars["Pfizer"]), 1)
            self.assertEqual(bars["Pfizer"][0].open, 42.0)
            self.assertEqual(bars["Moderna"], [])


if __name__ == "__main__":
    unittest.main()
