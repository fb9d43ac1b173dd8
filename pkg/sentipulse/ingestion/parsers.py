"""
Readers and writers of the tweet and stock-bar files. Both are UTF-8 CSV files with a
header row and RFC-4180 quoting, so tweet texts may contain commas, quotes and line
breaks.
Timestamps are ISO-8601 strings with an explicit offset; after parsing they are held in
market time.
"""

# standard library imports
from typing import Callable, Dict, Iterable, List, Optional, Sequence, TextIO, Union

# third party imports
import pandas as pd
from loguru import logger

# local imports
from sentipulse.definition.records import TweetRecord, StockBar
from sentipulse.ingestion.calendar import to_market_time, MARKET_TIMEZONE

TWEET_COLUMNS = ("id", "start", "end", "text")
BAR_COLUMNS = ("timestamp", "open", "high", "low", "close", "adj_close", "volume")


class RowError(ValueError):
    """
    Raised when a single row of an ingested file is invalid.

    Parameters
    ----------
    line_number
        1-based record number in the file; the header is record 1.
    reason
        Short description of the problem.
    """

    def __init__(self, line_number: int, reason: str):
        self.line_number = line_number
        self.reason = reason
        super().__init__(f"Row {line_number}: {reason}")


def _read_frame(source: Union[str, TextIO], columns: Sequence[str]) -> pd.DataFrame:
    try:
        frame = pd.read_csv(source, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        return pd.DataFrame(columns=list(columns))
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise ValueError(
            f"Missing column(s) {missing}; expected the columns {list(columns)}"
        )
    return frame


def _handle_row_error(error: RowError, on_error: str):
    if on_error == "skip":
        logger.warning(f"Skipping invalid row: {error}")
    else:
        raise error


def _check_policy(on_error: str):
    if on_error not in ("abort", "skip"):
        raise ValueError(f"on_error must be 'abort' or 'skip', found '{on_error}'")


def _parse_instant(value: str, column: str, timezone: str) -> pd.Timestamp:
    try:
        t = pd.Timestamp(value.strip())
    except ValueError:
        raise ValueError(f"cannot parse {column} '{value}' as a timestamp") from None
    if t is pd.NaT:
        raise ValueError(f"empty {column} timestamp")
    if t.tzinfo is None:
        raise ValueError(f"{column} '{value}' has no explicit UTC offset")
    return to_market_time(t, timezone)


def _parse_price(value: str, column: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ValueError(f"cannot parse {column} '{value}' as a number") from None


def _parse_rows(
    frame: pd.DataFrame,
    make_record: Callable[[Dict[str, str]], object],
    on_error: str,
) -> List[tuple]:
    parsed = []
    for idx, row in enumerate(frame.to_dict(orient="records")):
        line_number = idx + 2
        try:
            parsed.append((line_number, make_record(row)))
        except ValueError as e:
            _handle_row_error(RowError(line_number, str(e)), on_error)
    return parsed


def parse_tweets(
    source: Union[str, TextIO],
    query: str,
    on_error: str = "abort",
    timezone: str = MARKET_TIMEZONE,
    labels: Optional[Sequence[str]] = None,
) -> List[TweetRecord]:
    """
    Parses a tweet file with the columns id, start, end and text.

    Parameters
    ----------
    source
        Path or readable text stream of the CSV file.
    query
        The entity label the tweets were collected for.
    on_error
        'abort' raises the first RowError, 'skip' logs a warning and drops the row.
    timezone
        The market time zone the timestamps are converted to.
    labels
        When given, the query must be one of these configured labels.

    Returns
    -------
    records
        One record per valid row, in file order.
    """
    _check_policy(on_error)
    if labels is not None and query not in labels:
        raise ValueError(f"'{query}' is not one of the configured query labels")
    frame = _read_frame(source, TWEET_COLUMNS)

    def make_record(row: Dict[str, str]) -> TweetRecord:
        return TweetRecord(
            tweet_id=row["id"],
            window_start=_parse_instant(row["start"], "start", timezone),
            window_end=_parse_instant(row["end"], "end", timezone),
            text=row["text"],
            query=query,
        )

    records = [record for _, record in _parse_rows(frame, make_record, on_error)]
    logger.debug(f"Parsed {len(records)} tweets for '{query}'")
    return records


def parse_stock_bars(
    source: Union[str, TextIO],
    company: str,
    on_error: str = "abort",
    timezone: str = MARKET_TIMEZONE,
) -> List[StockBar]:
    """
    Parses a stock-bar file with the columns timestamp, open, high, low, close,
    adj_close and volume. The returned bars are sorted by time.

    Parameters
    ----------
    source
        Path or readable text stream of the CSV file.
    company
        The company the bars belong to.
    on_error
        'abort' raises the first RowError, 'skip' logs a warning and drops the row. A
        duplicated timestamp is a row error of the later row in file order.
    timezone
        The market time zone the timestamps are converted to.

    Returns
    -------
    bars
        The valid bars with strictly increasing timestamps.
    """
    _check_policy(on_error)
    frame = _read_frame(source, BAR_COLUMNS)

    def make_record(row: Dict[str, str]) -> StockBar:
        return StockBar(
            company=company,
            timestamp=_parse_instant(row["timestamp"], "timestamp", timezone),
            open=_parse_price(row["open"], "open"),
            high=_parse_price(row["high"], "high"),
            low=_parse_price(row["low"], "low"),
            close=_parse_price(row["close"], "close"),
            adj_close=_parse_price(row["adj_close"], "adj_close"),
            volume=_parse_price(row["volume"], "volume"),
        )

    parsed = _parse_rows(frame, make_record, on_error)

    # duplicates are detected in file order, so that the first occurrence survives
    seen = set()
    unique = []
    for line_number, bar in parsed:
        if bar.timestamp in seen:
            _handle_row_error(
                RowError(line_number, f"duplicate timestamp {bar.timestamp}"), on_error
            )
            continue
        seen.add(bar.timestamp)
        unique.append(bar)
    bars = sorted(unique, key=lambda bar: bar.timestamp)
    logger.debug(f"Parsed {len(bars)} stock bars for '{company}'")
    return bars


def write_tweets(records: Iterable[TweetRecord], target: Union[str, TextIO]):
    """
    Writes tweets in the format read by parse_tweets (the query is not written; it is
    encoded in the file name of the store).

    Parameters
    ----------
    records
        The tweets to write.
    target
        Path or writable text stream.
    """
    frame = pd.DataFrame(
        [
            (r.tweet_id, r.window_start.isoformat(), r.window_end.isoformat(), r.text)
            for r in records
        ],
        columns=list(TWEET_COLUMNS),
    )
    frame.to_csv(target, index=False)


def write_bars(bars: Iterable[StockBar], target: Union[str, TextIO]):
    """
    Writes stock bars in the format read by parse_stock_bars.

    Parameters
    ----------
    bars
        The bars to write.
    target
        Path or writable text stream.
    """
    frame = pd.DataFrame(
        [
            (
                b.timestamp.isoformat(),
                repr(b.open),
                repr(b.high),
                repr(b.low),
                repr(b.close),
                repr(b.adj_close),
                repr(b.volume),
            )
            for b in bars
        ],
        columns=list(BAR_COLUMNS),
    )
    frame.to_csv(target, index=False)
