# standard library imports
from dataclasses import dataclass, field
from typing import FrozenSet
import datetime

# third party imports
import pandas as pd

# local imports
from sentipulse.definition.lexicon import SentimentScore

MARKET_TIMEZONE = "America/New_York"


def _check_zone(t: pd.Timestamp, name: str):
    if t.tzinfo is None:
        raise ValueError(f"'{name}' must carry an explicit time zone, found '{t}'")


@dataclass(frozen=True)
class TweetRecord:
    """
    A single collected tweet. The collection delivers a window (start, end) instead of a
    post time; the window's start is used as the tweet's effective timestamp.

    Parameters
    ----------
    tweet_id
        Opaque identifier of the tweet.
    window_start
        Start of the collection window (zone-aware).
    window_end
        End of the collection window (zone-aware), not before window_start.
    text
        The tweet's text.
    query
        The entity label the tweet was collected for, e.g. a company, a CEO, 'COVID' or
        'Vaccine'.
    """

    tweet_id: str
    window_start: pd.Timestamp
    window_end: pd.Timestamp
    text: str
    query: str

    def __post_init__(self):
        _check_zone(self.window_start, "window_start")
        _check_zone(self.window_end, "window_end")
        if self.window_end < self.window_start:
            raise ValueError(
                f"Tweet '{self.tweet_id}': end ({self.window_end}) lies before start "
                f"({self.window_start})"
            )

    @property
    def timestamp(self) -> pd.Timestamp:
        return self.window_start


@dataclass(frozen=True)
class ScoredTweet:
    """A tweet together with its sentiment score."""

    record: TweetRecord
    score: SentimentScore

    @property
    def timestamp(self) -> pd.Timestamp:
        return self.record.timestamp

    @property
    def query(self) -> str:
        return self.record.query

    @property
    def compound(self) -> float:
        return self.score.compound


@dataclass(frozen=True)
class StockBar:
    """
    One OHLCV price bar of a company. Prices are in USD, the volume in shares.

    Parameters
    ----------
    company
        The company's label.
    timestamp
        Zone-aware instant of the bar (its opening time).
    open, high, low, close, adj_close
        Prices; all positive with low <= min(open, close) <= max(open, close) <= high.
    volume
        Number of traded shares, non-negative.
    """

    company: str
    timestamp: pd.Timestamp
    open: float
    high: float
    low: float
    close: float
    adj_close: float
    volume: float

    def __post_init__(self):
        _check_zone(self.timestamp, "timestamp")
        prices = {
            "open": self.open,
            "high": self.high,
            "low": self.low,
            "close": self.close,
            "adj_close": self.adj_close,
        }
        for name, value in prices.items():
            if not value > 0:
                raise ValueError(f"Price '{name}' must be positive, found {value}")
        if not (
            self.low
            <= min(self.open, self.close)
            <= max(self.open, self.close)
            <= self.high
        ):
            raise ValueError(
                f"Violated low <= open/close <= high (open={self.open}, "
                f"high={self.high}, low={self.low}, close={self.close})"
            )
        if not self.volume >= 0:
            raise ValueError(f"Volume must be non-negative, found {self.volume}")


@dataclass(frozen=True)
class TradingCalendar:
    """
    Defines the valid observation instants: weekdays (optionally), no holidays and a
    closed time-of-day session interval, all in the market's time zone.
    """

    session_start: datetime.time = datetime.time(9, 30)
    session_end: datetime.time = datetime.time(15, 30)
    holidays: FrozenSet[datetime.date] = field(default_factory=frozenset)
    weekdays_only: bool = True
    timezone: str = MARKET_TIMEZONE

    def __post_init__(self):
        if not self.session_start < self.session_end:
            raise ValueError(
                f"The session start ({self.session_start}) must lie before its end "
                f"({self.session_end})"
            )
        object.__setattr__(self, "holidays", frozenset(self.holidays))

    def is_trading_day(self, date: datetime.date) -> bool:
        if self.weekdays_only and date.weekday() >= 5:
            return False
        return date not in self.holidays

    def contains(self, instant: pd.Timestamp) -> bool:
        """
        Checks if a market-time instant is a valid observation instant.

        Parameters
        ----------
        instant
            A timestamp already expressed in the calendar's time zone.

        Returns
        -------
            True if the instant's date is a trading day and its time of day lies in
            [session_start, session_end].
        """
        if not self.is_trading_day(instant.date()):
            return False
        time_of_day = instant.time()
        return self.session_start <= time_of_day <= self.session_end
