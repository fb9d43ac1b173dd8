# standard library imports
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, TextIO, Tuple, Union

# third party imports
import numpy as np
import pandas as pd

# local imports
from sentipulse.definition.records import MARKET_TIMEZONE
from sentipulse.subroutines import safe_string

# the sentiment categories of a panel; the panel column of a category is '<category>S'
SENTIMENT_CATEGORIES = ("company", "ceo", "vaccine", "covid", "competitors")
SENTIMENT_COLUMNS = tuple(f"{category}S" for category in SENTIMENT_CATEGORIES)
PANEL_COLUMNS = ("open",) + SENTIMENT_COLUMNS


def _check_increasing(instants: Sequence[pd.Timestamp], name: str):
    for earlier, later in zip(instants[:-1], instants[1:]):
        if not earlier < later:
            raise ValueError(
                f"The instants of '{name}' must be strictly increasing; found {later} "
                f"after {earlier}"
            )


@dataclass(frozen=True)
class SentimentSeries:
    """
    Mean compound score of one entity per time bucket. Buckets without tweets are not
    part of the series. Instants are the (zone-aware) bucket starts.
    """

    entity: str
    instants: Tuple[pd.Timestamp, ...] = ()
    means: Tuple[float, ...] = ()
    counts: Tuple[int, ...] = ()
    _lookup: Dict[pd.Timestamp, float] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self):
        object.__setattr__(self, "instants", tuple(self.instants))
        object.__setattr__(self, "means", tuple(float(m) for m in self.means))
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if not len(self.instants) == len(self.means) == len(self.counts):
            raise ValueError(
                f"Series '{self.entity}': instants, means and counts differ in length"
            )
        _check_increasing(self.instants, self.entity)
        for mean, count in zip(self.means, self.counts):
            if not -1.0 <= mean <= 1.0:
                raise ValueError(f"Series '{self.entity}': mean {mean} not in [-1, 1]")
            if count < 1:
                raise ValueError(f"Series '{self.entity}': count {count} below one")
        object.__setattr__(self, "_lookup", dict(zip(self.instants, self.means)))

    def __len__(self) -> int:
        return len(self.instants)

    def value_at(self, instant: pd.Timestamp) -> Optional[float]:
        """The mean at the given bucket start or None if the bucket is empty."""
        return self._lookup.get(instant)

    def to_series(self) -> pd.Series:
        return pd.Series(
            self.means, index=pd.DatetimeIndex(self.instants), name=self.entity
        )


class Panel:
    """
    Per-company table of open prices and the five sentiment covariates, indexed by
    market-time instants. The underlying pandas DataFrame is available as 'frame'; it
    is copied on construction and should be treated as read-only.

    Parameters
    ----------
    company
        The company the panel belongs to.
    frame
        DataFrame with a zone-aware DatetimeIndex and (at least) the columns open,
        companyS, ceoS, vaccineS, covidS and competitorsS.
    """

    def __init__(self, company: str, frame: pd.DataFrame):
        missing = [c for c in PANEL_COLUMNS if c not in frame.columns]
        if missing:
            raise ValueError(f"Panel of '{company}' misses the column(s) {missing}")
        frame = frame.loc[:, list(PANEL_COLUMNS)].astype(float).copy()
        if len(frame) and not isinstance(frame.index, pd.DatetimeIndex):
            raise TypeError(f"Panel of '{company}' needs a DatetimeIndex")
        if len(frame) and frame.index.tz is None:
            raise ValueError(f"Panel of '{company}' needs a zone-aware index")
        if not frame.index.is_monotonic_increasing or not frame.index.is_unique:
            raise ValueError(f"The instants of the panel of '{company}' must increase")
        if frame.isna().any().any():
            raise ValueError(f"Panel of '{company}' contains missing values")
        if (frame["open"] <= 0).any():
            raise ValueError(f"Panel of '{company}' contains non-positive open prices")
        sentiments = frame.loc[:, list(SENTIMENT_COLUMNS)]
        if ((sentiments < -1.0) | (sentiments > 1.0)).any().any():
            raise ValueError(f"Panel of '{company}' has sentiments outside [-1, 1]")
        frame.index.name = "instant"
        self.company = company
        self.frame = frame

    def __len__(self) -> int:
        return len(self.frame)

    def __repr__(self) -> str:
        return f"Panel(company='{self.company}', n_rows={len(self)})"

    @property
    def instants(self) -> pd.DatetimeIndex:
        return self.frame.index

    def column(self, name: str) -> np.ndarray:
        return self.frame[name].to_numpy(dtype=float)

    def matrix(self, columns: Sequence[str]) -> np.ndarray:
        return self.frame.loc[:, list(columns)].to_numpy(dtype=float)

    def select(self, mask: Union[np.ndarray, pd.Series]) -> "Panel":
        """Returns a new panel made of the rows where the boolean mask is True."""
        return Panel(self.company, self.frame.loc[np.asarray(mask, dtype=bool)])

    @property
    def granularity(self) -> str:
        """Median spacing of the instants: 'hourly', 'daily' or the raw spacing."""
        if len(self) < 2:
            return "unknown"
        spacing = pd.Series(self.instants).diff().dropna().median()
        if spacing == pd.Timedelta("1h"):
            return "hourly"
        if spacing >= pd.Timedelta("1D"):
            return "daily"
        return str(spacing)

    @classmethod
    def empty(cls, company: str) -> "Panel":
        index = pd.DatetimeIndex([], tz=MARKET_TIMEZONE, name="instant")
        return cls(company, pd.DataFrame(columns=list(PANEL_COLUMNS), index=index))

    def to_csv(self, target: Union[str, TextIO]):
        """Writes the panel with the fixed column order instant, open, companyS, ..."""
        frame = self.frame.copy()
        frame.index = [t.isoformat() for t in frame.index]
        frame.index.name = "instant"
        frame.to_csv(target, index=True)


def panel_file_name(company: str) -> str:
    return f"panel_{safe_string(company)}.csv"


def read_panel(
    source: Union[str, TextIO], company: str, timezone: str = MARKET_TIMEZONE
) -> Panel:
    """
    Reads a panel written by Panel.to_csv.

    Parameters
    ----------
    source
        Path or readable text stream.
    company
        The company the panel belongs to.
    timezone
        The market time zone of the instants.

    Returns
    -------
        The panel.
    """
    frame = pd.read_csv(source, dtype={"instant": str})
    if "instant" not in frame.columns:
        raise ValueError("A panel file needs an 'instant' column")
    instants = [pd.Timestamp(s).tz_convert(timezone) for s in frame.pop("instant")]
    frame.index = pd.DatetimeIndex(instants, tz=timezone, name="instant")
    if len(frame) == 0:
        return Panel.empty(company)
    return Panel(company, frame)


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """
    Pairwise Pearson coefficients of labelled variables. Entries whose correlation is
    undefined (e.g. a constant variable) are NaN and listed in 'failures'.
    """

    labels: Tuple[str, ...]
    values: np.ndarray
    failures: Dict[Tuple[str, str], str] = field(default_factory=dict)

    def value(self, a: str, b: str) -> float:
        return float(self.values[self.labels.index(a), self.labels.index(b)])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.values, index=self.labels, columns=self.labels)
