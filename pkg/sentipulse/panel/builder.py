"""
Turns scored tweets into per-entity sentiment series and joins them with the stock bars
of a company into the company's panel.
"""

# standard library imports
from collections import defaultdict
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

# third party imports
import numpy as np
import pandas as pd
from loguru import logger

# local imports
from sentipulse.definition.panel import SentimentSeries, Panel
from sentipulse.definition.panel import SENTIMENT_CATEGORIES, SENTIMENT_COLUMNS
from sentipulse.definition.panel import PANEL_COLUMNS
from sentipulse.definition.records import ScoredTweet, StockBar

_EPOCH = pd.Timestamp("1970-01-01")


def bucket_start(
    t: pd.Timestamp,
    bucket: pd.Timedelta = pd.Timedelta("1h"),
    offset: pd.Timedelta = pd.Timedelta("30min"),
) -> pd.Timestamp:
    """
    Returns the start of the bucket a zone-aware instant falls into. Bucket boundaries
    are offset + k * bucket on the wall clock of the instant's time zone, so hourly
    buckets with a 30 minute offset start at 08:30, 09:30, ... local time.

    Parameters
    ----------
    t
        Zone-aware instant.
    bucket
        Bucket width; must be positive.
    offset
        Shift of the bucket boundaries relative to midnight.

    Returns
    -------
        The zone-aware bucket start.
    """
    if bucket <= pd.Timedelta(0):
        raise ValueError(f"The bucket width must be positive, found {bucket}")
    wall = t.tz_localize(None)
    n = (wall - offset - _EPOCH) // bucket
    start = _EPOCH + n * bucket + offset
    return start.tz_localize(
        t.tz, ambiguous=bool(t.dst()), nonexistent="shift_forward"
    )


def aggregate_entity_sentiment(
    scored: Iterable[ScoredTweet],
    entity: str,
    bucket: pd.Timedelta = pd.Timedelta("1h"),
    offset: pd.Timedelta = pd.Timedelta("30min"),
) -> SentimentSeries:
    """
    Averages the compound scores of an entity's tweets per time bucket. Buckets without
    tweets are left out of the series.

    Parameters
    ----------
    scored
        Scored tweets; only those collected for 'entity' are used.
    entity
        The entity label (company, CEO or news category).
    bucket
        Bucket width, one hour by default.
    offset
        Shift of the bucket boundaries relative to midnight.

    Returns
    -------
        The entity's sentiment series, labelled by bucket starts.
    """
    groups = defaultdict(list)  # type: Dict[pd.Timestamp, List[float]]
    for tweet in scored:
        if tweet.query != entity:
            continue
        groups[bucket_start(tweet.timestamp, bucket, offset)].append(tweet.compound)
    instants = sorted(groups)
    means = [float(np.clip(np.mean(groups[t]), -1.0, 1.0)) for t in instants]
    counts = [len(groups[t]) for t in instants]
    logger.debug(
        f"Aggregated {sum(counts)} tweets of '{entity}' into {len(instants)} buckets"
    )
    return SentimentSeries(entity, tuple(instants), tuple(means), tuple(counts))


def competitor_sentiment(
    company_series: Mapping[str, SentimentSeries],
    company: str,
    instant: pd.Timestamp,
) -> Optional[float]:
    """
    Leave-one-out mean: the average sentiment of all other companies at an instant.
    Companies without a value at that instant are left out of the mean.

    Parameters
    ----------
    company_series
        Maps each company to its sentiment series.
    company
        The company whose competitors are averaged.
    instant
        The bucket start.

    Returns
    -------
        The competitor sentiment or None if no other company has a value.
    """
    if company not in company_series:
        raise ValueError(f"'{company}' is not among the given companies")
    values = [
        series.value_at(instant)
        for other, series in company_series.items()
        if other != company
    ]
    values = [v for v in values if v is not None]
    if not values:
        return None
    return float(np.mean(values))


def competitor_series(
    company_series: Mapping[str, SentimentSeries], company: str
) -> SentimentSeries:
    """
    Materializes the competitor sentiment of a company at every instant at which at
    least one other company has a value. The counts are the numbers of contributing
    companies.
    """
    if company not in company_series:
        raise ValueError(f"'{company}' is not among the given companies")
    instants = sorted(
        {
            t
            for other, series in company_series.items()
            if other != company
            for t in series.instants
        }
    )
    means, counts = [], []
    for t in instants:
        values = [
            series.value_at(t)
            for other, series in company_series.items()
            if other != company and series.value_at(t) is not None
        ]
        means.append(float(np.clip(np.mean(values), -1.0, 1.0)))
        counts.append(len(values))
    return SentimentSeries(
        f"competitors of {company}", tuple(instants), tuple(means), tuple(counts)
    )


def build_panel(
    prices: Sequence[StockBar],
    series: Mapping[str, SentimentSeries],
    lag: pd.Timedelta = pd.Timedelta("1h"),
    company: Optional[str] = None,
    bucket: pd.Timedelta = pd.Timedelta("1h"),
    offset: pd.Timedelta = pd.Timedelta("30min"),
) -> Panel:
    """
    Joins a company's open prices with the sentiment of each category. For a price at
    instant t the sentiment of the bucket containing t - lag is attached, so with
    hourly buckets and the default lag the tweets of [t - 1h, t) explain the price at
    t. Prices off the bucket grid are snapped to the bucket containing t - lag (with a
    warning). Rows where any category lacks a value are dropped (inner join).

    Parameters
    ----------
    prices
        The company's stock bars in market time.
    series
        Maps each category ('company', 'ceo', 'vaccine', 'covid', 'competitors') to
        its sentiment series.
    lag
        Distance between a price instant and the instant whose bucket is attached.
    company
        The company's label; taken from the bars when not given.
    bucket, offset
        Bucket width and boundary offset the sentiment series were aggregated with.

    Returns
    -------
    panel
        The company's panel; it is empty (with a warning) if nothing overlaps.
    """
    missing = [c for c in SENTIMENT_CATEGORIES if c not in series]
    if missing:
        raise ValueError(f"Missing sentiment series for the categories {missing}")
    companies = {bar.company for bar in prices}
    if company is None:
        if len(companies) != 1:
            raise ValueError(
                f"Cannot infer the company from the bars (found {sorted(companies)})"
            )
        company = companies.pop()
    elif companies - {company}:
        raise ValueError(f"The bars contain companies other than '{company}'")

    rows, instants, n_unaligned = [], [], 0
    for bar in sorted(prices, key=lambda b: b.timestamp):
        key = bucket_start(bar.timestamp - lag, bucket, offset)
        n_unaligned += key != bar.timestamp - lag
        values = [series[category].value_at(key) for category in SENTIMENT_CATEGORIES]
        if any(v is None for v in values):
            continue
        rows.append([bar.open] + values)
        instants.append(bar.timestamp)
    if n_unaligned:
        logger.warning(
            f"{n_unaligned} price instant(s) of '{company}' are off the {bucket} "
            f"bucket grid; each was matched with the bucket containing its instant "
            f"minus {lag}"
        )

    if not rows:
        logger.warning(f"The panel of '{company}' is empty (no overlapping instants)")
        return Panel.empty(company)
    index = pd.DatetimeIndex(instants, name="instant")
    frame = pd.DataFrame(rows, index=index, columns=list(PANEL_COLUMNS))
    logger.debug(f"Built the panel of '{company}' with {len(frame)} rows")
    return Panel(company, frame)


def build_company_panels(
    scored: Sequence[ScoredTweet],
    bars: Mapping[str, Sequence[StockBar]],
    ceos: Mapping[str, str],
    covid_label: str,
    vaccine_label: str,
    bucket: pd.Timedelta = pd.Timedelta("1h"),
    offset: pd.Timedelta = pd.Timedelta("30min"),
    lag: pd.Timedelta = pd.Timedelta("1h"),
) -> Dict[str, Panel]:
    """
    Builds the panels of all companies from the scored tweets of all query labels.

    Parameters
    ----------
    scored
        Scored tweets of all labels.
    bars
        Maps each company to its stock bars.
    ceos
        Maps each company to its CEO's label.
    covid_label, vaccine_label
        The labels of the two news categories.
    bucket, offset
        Bucket width and boundary offset of the sentiment aggregation.
    lag
        Distance between a price instant and its sentiment bucket.

    Returns
    -------
        Maps each company to its panel.
    """

    def aggregate(entity: str) -> SentimentSeries:
        return aggregate_entity_sentiment(scored, entity, bucket, offset)

    company_series = {company: aggregate(company) for company in ceos}
    covid = aggregate(covid_label)
    vaccine = aggregate(vaccine_label)
    panels = {}
    for company, ceo in ceos.items():
        series = {
            "company": company_series[company],
            "ceo": aggregate(ceo),
            "vaccine": vaccine,
            "covid": covid,
            "competitors": competitor_series(company_series, company),
        }
        panels[company] = build_panel(
            bars.get(company, []), series, lag, company, bucket, offset
        )
    return panels


def resample_panel(panel: Panel, rule: str = "1D") -> Panel:
    """
    Coarsens a panel: per period the first open price and the mean of each sentiment
    column are kept. Each period is labelled by its first instant.

    Parameters
    ----------
    panel
        The (hourly) panel.
    rule
        A pandas frequency string; '1D' groups by market-time calendar day.

    Returns
    -------
        The resampled panel.
    """
    if len(panel) == 0:
        return panel
    frame = panel.frame
    keys = frame.index.tz_localize(None).floor(rule)
    grouped = frame.groupby(keys, sort=True)
    aggregations = {"open": "first"}
    aggregations.update({column: "mean" for column in SENTIMENT_COLUMNS})
    resampled = grouped.agg(aggregations)
    instants = pd.Series(frame.index, index=frame.index)
    first_instants = instants.groupby(keys, sort=True).first()
    resampled.index = pd.DatetimeIndex(list(first_instants), name="instant")
    return Panel(panel.company, resampled.loc[:, list(PANEL_COLUMNS)])
