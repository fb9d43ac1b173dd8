"""
Deterministic synthetic dataset in the raw input format: tweet files for ten fictitious
companies, their CEOs and the two news categories, hourly price bars of the companies
and a matching configuration file. The sentiment of every label follows a bounded
autoregressive process; tweets are made of lexicon words whose polarity mix follows
that process, and the prices react to the lagged company and vaccine sentiment.
"""

# standard library imports
from typing import Dict, List, Optional, Sequence
import datetime
import os

# third party imports
import numpy as np
import pandas as pd
from loguru import logger

# local imports
from sentipulse.definition.records import MARKET_TIMEZONE
from sentipulse.ingestion.store import raw_file_name

SYNTHETIC_COMPANIES = (
    "Acme Pharma",
    "Borealis Bio",
    "Cobalt Therapeutics",
    "Delta Labs",
    "Evergreen Health",
    "Fjord Medical",
    "Granite Biotech",
    "Helios Pharma",
    "Iris Genomics",
    "Juniper Vaccines",
)
SYNTHETIC_CEOS = (
    "Ada Quill",
    "Bruno Vale",
    "Chiara Moss",
    "Dmitri Lark",
    "Elena Frost",
    "Farid Stone",
    "Greta Holm",
    "Hugo Brandt",
    "Ines Moreau",
    "Jonas Reed",
)
SYNTHETIC_NEWS = ("COVID", "Vaccine")
SYNTHETIC_HOLIDAYS = (datetime.date(2023, 2, 20),)

POSITIVE_WORDS = (
    "good",
    "great",
    "approved",
    "breakthrough",
    "effective",
    "promising",
    "strong",
    "success",
    "safe",
    "growth",
    "bullish",
    "hopeful",
)
NEGATIVE_WORDS = (
    "bad",
    "concern",
    "delay",
    "failed",
    "risk",
    "weak",
    "lawsuit",
    "recall",
    "worried",
    "decline",
    "bearish",
    "problem",
)
NEUTRAL_WORDS = ("the", "stock", "today", "news", "trial", "update", "shares", "report")

BUCKET_STARTS = tuple(datetime.time(h, 30) for h in range(8, 15))
BAR_TIMES = tuple(datetime.time(h, 30) for h in range(9, 16))
BAR_COLUMNS = ["timestamp", "open", "high", "low", "close", "adj_close", "volume"]


def trading_days(
    start: datetime.date,
    n_days: int,
    holidays: Sequence[datetime.date] = SYNTHETIC_HOLIDAYS,
) -> List[datetime.date]:
    """The first n_days weekdays from 'start' on that are not holidays."""
    days, day = [], start
    while len(days) < n_days:
        if day.weekday() < 5 and day not in holidays:
            days.append(day)
        day += datetime.timedelta(days=1)
    return days


def _sentiment_path(rng: np.random.Generator, n: int) -> np.ndarray:
    latent = np.empty(n)
    latent[0] = rng.normal(0.0, 0.5)
    for t in range(1, n):
        latent[t] = 0.8 * latent[t - 1] + 0.3 * rng.normal()
    return np.tanh(latent)


def _tweet_text(rng: np.random.Generator, label: str, mood: float) -> str:
    n_words = int(rng.integers(2, 5))
    p_positive = 0.5 * (1.0 + mood)
    words = [
        POSITIVE_WORDS[rng.integers(len(POSITIVE_WORDS))]
        if rng.random() < p_positive
        else NEGATIVE_WORDS[rng.integers(len(NEGATIVE_WORDS))]
        for _ in range(n_words)
    ]
    fillers = [NEUTRAL_WORDS[rng.integers(len(NEUTRAL_WORDS))] for _ in range(2)]
    return " ".join([label] + fillers[:1] + words + fillers[1:])


def _utc(day: datetime.date, time_of_day: datetime.time) -> pd.Timestamp:
    local = pd.Timestamp(datetime.datetime.combine(day, time_of_day))
    return local.tz_localize(MARKET_TIMEZONE).tz_convert("UTC")


def synthesize_dataset(
    out_dir: str,
    seed: int = 0,
    n_days: int = 30,
    start: datetime.date = datetime.date(2023, 2, 1),
    train_end: datetime.date = datetime.date(2023, 3, 7),
) -> Dict[str, str]:
    """
    Writes a synthetic dataset: '<out_dir>/tweets/<label>.csv' for all 22 labels,
    '<out_dir>/stocks/<company>.csv' for the 10 companies and the configuration
    '<out_dir>/sentipulse.cfg'.
    The same seed always produces byte-identical files.

    Parameters
    ----------
    out_dir
        The target directory (created if necessary).
    seed
        Seed of the random number generator.
    n_days
        Number of trading days.
    start
        The first calendar day considered.
    train_end
        Last day of the training period written to the configuration file.

    Returns
    -------
        The paths of the 'tweets' and 'stocks' directories and of the config file.
    """
    rng = np.random.default_rng(seed)
    days = trading_days(start, n_days)
    if not days[0] <= train_end < days[-1]:
        raise ValueError(
            f"train_end ({train_end}) must lie within the synthetic period "
            f"{days[0]} - {days[-1]} and leave at least one testing day"
        )
    slots = [(day, t) for day in days for t in BUCKET_STARTS]
    labels = list(SYNTHETIC_COMPANIES) + list(SYNTHETIC_CEOS) + list(SYNTHETIC_NEWS)
    moods = {label: _sentiment_path(rng, len(slots)) for label in labels}

    tweets_dir = os.path.join(out_dir, "tweets")
    stocks_dir = os.path.join(out_dir, "stocks")
    os.makedirs(tweets_dir, exist_ok=True)
    os.makedirs(stocks_dir, exist_ok=True)

    for label in labels:
        rows = []
        for i, (day, bucket) in enumerate(slots):
            for _ in range(int(rng.integers(1, 4))):
                begin = _utc(day, bucket) + pd.Timedelta(
                    minutes=int(rng.integers(0, 60))
                )
                rows.append(
                    (
                        f"{len(rows) + 1:06d}",
                        begin.isoformat(),
                        (begin + pd.Timedelta(minutes=1)).isoformat(),
                        _tweet_text(rng, label, moods[label][i]),
                    )
                )
        frame = pd.DataFrame(rows, columns=["id", "start", "end", "text"])
        frame.to_csv(
            os.path.join(tweets_dir, raw_file_name(label)),
            index=False,
            lineterminator="\n",
        )

    vaccine = moods["Vaccine"]
    slot_index = {slot: i for i, slot in enumerate(slots)}
    for company in SYNTHETIC_COMPANIES:
        price = float(rng.uniform(50.0, 150.0))
        rows = []
        for day in days:
            for bar_time in BAR_TIMES:
                # the bar at hh:30 reacts to the sentiment of the hour before it
                previous = datetime.time(bar_time.hour - 1, 30)
                i = slot_index[(day, previous)]
                drift = 0.004 * moods[company][i] + 0.002 * vaccine[i]
                price *= float(np.exp(drift + 0.003 * rng.normal()))
                open_ = round(price, 4)
                close = round(price * float(np.exp(0.002 * rng.normal())), 4)
                spread = round(0.0001 + 0.002 * price * float(rng.random()), 4)
                rows.append(
                    (
                        _utc(day, bar_time).isoformat(),
                        f"{open_:.4f}",
                        f"{max(open_, close) + spread:.4f}",
                        f"{min(open_, close) - spread:.4f}",
                        f"{close:.4f}",
                        f"{close:.4f}",
                        str(int(rng.integers(100_000, 1_000_000))),
                    )
                )
        frame = pd.DataFrame(
            rows,
            columns=BAR_COLUMNS,
        )
        frame.to_csv(
            os.path.join(stocks_dir, raw_file_name(company)),
            index=False,
            lineterminator="\n",
        )

    config_path = os.path.join(out_dir, "sentipulse.cfg")
    with open(config_path, "w", encoding="utf-8") as f:
        f.write(synthetic_config(days, train_end))
    logger.info(
        f"Synthesized {len(labels)} tweet files and {len(SYNTHETIC_COMPANIES)} price "
        f"files over {len(days)} trading days ({days[0]} - {days[-1]}) in '{out_dir}'"
    )
    return {"tweets": tweets_dir, "stocks": stocks_dir, "config": config_path}


def synthetic_config(
    days: Sequence[datetime.date],
    train_end: datetime.date,
    holidays: Optional[Sequence[datetime.date]] = None,
) -> str:
    """
    The configuration matching a synthetic dataset. The order grids are smaller than
    the defaults so that a full evaluation runs in a few minutes.
    """
    holidays = SYNTHETIC_HOLIDAYS if holidays is None else holidays
    test_start = min(day for day in days if day > train_end)
    return (
        "# configuration of a synthetic sentipulse dataset\n"
        "\n"
        "[entities]\n"
        f"companies = {', '.join(SYNTHETIC_COMPANIES)}\n"
        f"ceos = {', '.join(SYNTHETIC_CEOS)}\n"
        f"news = {', '.join(SYNTHETIC_NEWS)}\n"
        "\n"
        "[calendar]\n"
        f"holidays = {', '.join(d.isoformat() for d in holidays)}\n"
        "\n"
        "[split]\n"
        f"train_start = {days[0].isoformat()}\n"
        f"train_end = {train_end.isoformat()}\n"
        f"test_start = {test_start.isoformat()}\n"
        f"test_end = {days[-1].isoformat()}\n"
        f"excluded = {', '.join(d.isoformat() for d in holidays)}\n"
        "\n"
        "[arima]\n"
        "p_max = 2\n"
        "d_max = 1\n"
        "q_max = 2\n"
        "\n"
        "[var]\n"
        "p_max = 4\n"
    )
