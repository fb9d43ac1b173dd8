# standard library imports
from typing import Dict, List, Optional, Sequence
import os

# third party imports
from loguru import logger

# local imports
from sentipulse.definition.records import TweetRecord, StockBar, TradingCalendar
from sentipulse.ingestion.calendar import apply_calendar, MARKET_TIMEZONE
from sentipulse.ingestion.parsers import parse_tweets, parse_stock_bars
from sentipulse.ingestion.parsers import write_tweets, write_bars
from sentipulse.subroutines import safe_string


def tweet_file_name(entity: str) -> str:
    return f"tweets_{safe_string(entity)}.csv"


def bar_file_name(company: str) -> str:
    return f"bars_{safe_string(company)}.csv"


def raw_file_name(label: str) -> str:
    """File name of a raw (not yet ingested) tweet or price file of a label."""
    return f"{safe_string(label)}.csv"


def write_store(
    store_dir: str,
    tweets: Dict[str, Sequence[TweetRecord]],
    bars: Dict[str, Sequence[StockBar]],
):
    """
    Persists ingested data as one CSV file per (entity, kind) in a directory.

    Parameters
    ----------
    store_dir
        The store's directory; it is created if necessary.
    tweets
        Maps each query label to its tweets.
    bars
        Maps each company to its stock bars.
    """
    os.makedirs(store_dir, exist_ok=True)
    for entity, records in tweets.items():
        write_tweets(records, os.path.join(store_dir, tweet_file_name(entity)))
    for company, company_bars in bars.items():
        write_bars(company_bars, os.path.join(store_dir, bar_file_name(company)))
    logger.info(
        f"Wrote {len(tweets)} tweet files and {len(bars)} bar files to '{store_dir}'"
    )


def read_store_tweets(
    store_dir: str, labels: Sequence[str], timezone: str = MARKET_TIMEZONE
) -> Dict[str, List[TweetRecord]]:
    """
    Reads the tweets of the given labels from a store. Labels without a file get an
    empty list (and a warning).
    """
    tweets = {}
    for label in labels:
        path = os.path.join(store_dir, tweet_file_name(label))
        if not os.path.isfile(path):
            logger.warning(f"No tweet file for '{label}' in '{store_dir}'")
            tweets[label] = []
            continue
        tweets[label] = parse_tweets(path, label, timezone=timezone)
    return tweets


def read_store_bars(
    store_dir: str, companies: Sequence[str], timezone: str = MARKET_TIMEZONE
) -> Dict[str, List[StockBar]]:
    """
    Reads the stock bars of the given companies from a store. Companies without a file
    get an empty list (and a warning).
    """
    bars = {}
    for company in companies:
        path = os.path.join(store_dir, bar_file_name(company))
        if not os.path.isfile(path):
            logger.warning(f"No bar file for '{company}' in '{store_dir}'")
            bars[company] = []
            continue
        bars[company] = parse_stock_bars(path, company, timezone=timezone)
    return bars


def ingest_directories(
    tweets_dir: str,
    stocks_dir: str,
    labels: Sequence[str],
    companies: Sequence[str],
    tweet_calendar: TradingCalendar,
    price_calendar: TradingCalendar,
    on_error: str = "abort",
    store_dir: Optional[str] = None,
) -> Dict[str, int]:
    """
    Parses the raw files of all labels ('<label>.csv' in tweets_dir, '<company>.csv' in
    stocks_dir), converts them to market time, applies the calendars and (optionally)
    writes the result to a store.

    Parameters
    ----------
    tweets_dir
        Directory with one raw tweet file per query label.
    stocks_dir
        Directory with one raw bar file per company.
    labels
        All query labels (companies, CEOs and news categories).
    companies
        The companies whose prices are ingested.
    tweet_calendar
        Calendar applied to the tweets (collection session).
    price_calendar
        Calendar applied to the bars (price session).
    on_error
        Bad-row policy, 'abort' or 'skip'.
    store_dir
        When given, the ingested data is written to this directory.

    Returns
    -------
    counts
        Number of kept records per '<kind>:<label>'.
    """
    tweets, bars, counts = {}, {}, {}
    for label in labels:
        path = os.path.join(tweets_dir, raw_file_name(label))
        if not os.path.isfile(path):
            logger.warning(f"No raw tweet file for '{label}' ({path})")
            continue
        records = parse_tweets(
            path, label, on_error, tweet_calendar.timezone, labels=labels
        )
        tweets[label] = apply_calendar(records, tweet_calendar)
        counts[f"tweets:{label}"] = len(tweets[label])
    for company in companies:
        path = os.path.join(stocks_dir, raw_file_name(company))
        if not os.path.isfile(path):
            logger.warning(f"No raw price file for '{company}' ({path})")
            continue
        company_bars = parse_stock_bars(
            path, company, on_error, price_calendar.timezone
        )
        bars[company] = apply_calendar(company_bars, price_calendar)
        counts[f"bars:{company}"] = len(bars[company])
    if store_dir is not None:
        write_store(store_dir, tweets, bars)
    return counts
