# standard library imports
from typing import Sequence, List, TypeVar, Union
import datetime

# third party imports
import pandas as pd
from loguru import logger

# local imports
from sentipulse.definition.records import TradingCalendar, MARKET_TIMEZONE

R = TypeVar("R")


def to_market_time(
    t: Union[pd.Timestamp, datetime.datetime, str],
    timezone: str = MARKET_TIMEZONE,
    assume_utc: bool = False,
) -> pd.Timestamp:
    """
    Expresses an instant in the market's civil time (DST-aware). The instant itself is
    not changed, only its representation, so the conversion round-trips through UTC.

    Parameters
    ----------
    t
        A zone-aware timestamp (or ISO-8601 string with an explicit offset).
    timezone
        The market's IANA time zone.
    assume_utc
        When True, a zoneless input is declared to be UTC. Otherwise zoneless input is
        rejected since it is ambiguous.

    Returns
    -------
        The same instant in the market's time zone.
    """
    t = pd.Timestamp(t)
    if t.tzinfo is None:
        if not assume_utc:
            raise ValueError(
                f"The timestamp '{t}' carries no time zone; declare it as UTC or add "
                f"an explicit offset"
            )
        t = t.tz_localize("UTC")
    return t.tz_convert(timezone)


def apply_calendar(records: Sequence[R], cal: TradingCalendar) -> List[R]:
    """
    Keeps the records whose timestamp lies on a trading day and inside the calendar's
    session (both session bounds included). The order of the records is preserved.

    Parameters
    ----------
    records
        Objects with a zone-aware 'timestamp' attribute, e.g. tweets or stock bars.
    cal
        The trading calendar.

    Returns
    -------
    kept
        The records that satisfy the calendar's rules.
    """
    kept = [r for r in records if cal.contains(r.timestamp.tz_convert(cal.timezone))]
    n_dropped = len(records) - len(kept)
    if n_dropped:
        logger.debug(
            f"Calendar filter dropped {n_dropped} of {len(records)} records "
            f"(session {cal.session_start}-{cal.session_end})"
        )
    return kept
